#pragma once

// JSON instance files (schema_version 1). Complex numbers are [re, im] pairs
// and matrices are arrays of rows.
//
//   {
//     "schema_version": 1,
//     "h_dim": 2,
//     "label": "optional",
//     "blocks": [ {"dim": 1, "matrix": [[[1,0],[0,0]]]}, ... ],
//     "weights": [[1,0], [1,0]],            optional
//     "control": [[[2,0],[0,0]], ...],      optional
//     "companion": {"blocks": [...]},       optional, same h_dim
//     "payloads": {                         optional
//       "bijection": <matrix G>, "dual": {"blocks": [...]},
//       "coisometry": <matrix K>, "weights_alt": [...], "mu": 0.1
//     }
//   }

#include <cstdint>
#include <iomanip>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>

#include <json.hpp>

#include "gframe/gframe.hpp"
#include "gframe/weights.hpp"

namespace gframe {

using ordered_json = nlohmann::ordered_json;

inline constexpr int schema_version = 1;

struct Instance {
    GFrame frame;
    std::optional<WeightSequence> weights;
    std::optional<CMatrix> control;
    std::optional<GFrame> companion;
    // Proposition-specific payloads.
    std::optional<CMatrix> bijection;
    std::optional<GFrame> dual;
    std::optional<CMatrix> coisometry;
    std::optional<WeightSequence> weights_alt;
    std::optional<double> mu;
};

namespace detail {

[[noreturn]] inline void schema_error(const std::string& path, const std::string& message)
{
    throw Error(ErrorKind::SchemaError, path + ": " + message);
}

inline double read_number(const ordered_json& j, const std::string& path)
{
    if (!j.is_number()) {
        schema_error(path, "expected a number");
    }
    const double v = j.get<double>();
    if (!std::isfinite(v)) {
        throw Error(ErrorKind::NonFinite, path + ": non-finite value");
    }
    return v;
}

inline complex read_complex(const ordered_json& j, const std::string& path)
{
    if (!j.is_array() || j.size() != 2) {
        schema_error(path, "expected a [re, im] pair");
    }
    return {read_number(j[0], path + "[0]"), read_number(j[1], path + "[1]")};
}

inline CMatrix read_matrix(const ordered_json& j, const std::string& path)
{
    if (!j.is_array() || j.empty()) {
        schema_error(path, "expected a non-empty array of rows");
    }
    const auto rows = static_cast<Eigen::Index>(j.size());
    Eigen::Index cols = -1;
    CMatrix m;
    for (Eigen::Index r = 0; r < rows; ++r) {
        const std::string row_path = path + "[" + std::to_string(r) + "]";
        const auto& row = j[static_cast<std::size_t>(r)];
        if (!row.is_array() || row.empty()) {
            schema_error(row_path, "expected a non-empty row");
        }
        if (cols < 0) {
            cols = static_cast<Eigen::Index>(row.size());
            m.resize(rows, cols);
        } else if (static_cast<Eigen::Index>(row.size()) != cols) {
            schema_error(row_path, "ragged row: expected " + std::to_string(cols) + " entries");
        }
        for (Eigen::Index c = 0; c < cols; ++c) {
            m(r, c) = read_complex(row[static_cast<std::size_t>(c)], row_path + "[" + std::to_string(c) + "]");
        }
    }
    return m;
}

inline void reject_unknown(const ordered_json& j, const std::string& path, const std::set<std::string>& allowed)
{
    for (const auto& [key, value] : j.items()) {
        if (!allowed.count(key)) {
            schema_error(path + "." + key, "unknown field");
        }
    }
}

inline WeightSequence read_weights(const ordered_json& j, const std::string& path, std::size_t expected)
{
    if (!j.is_array()) {
        schema_error(path, "expected an array of [re, im] pairs");
    }
    if (j.size() != expected) {
        schema_error(path, "expected " + std::to_string(expected) + " weights, got " + std::to_string(j.size()));
    }
    std::vector<complex> values;
    for (std::size_t i = 0; i < j.size(); ++i) {
        values.push_back(read_complex(j[i], path + "[" + std::to_string(i) + "]"));
    }
    return WeightSequence(std::move(values));
}

inline std::vector<CMatrix> read_blocks(const ordered_json& j, const std::string& path, Eigen::Index h_dim)
{
    if (!j.is_array() || j.empty()) {
        schema_error(path, "expected a non-empty array of blocks");
    }
    std::vector<CMatrix> blocks;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string bp = path + "[" + std::to_string(i) + "]";
        const auto& b = j[i];
        if (!b.is_object() || !b.contains("dim") || !b.contains("matrix")) {
            schema_error(bp, "block needs \"dim\" and \"matrix\"");
        }
        reject_unknown(b, bp, {"dim", "matrix"});
        if (!b["dim"].is_number_integer() || b["dim"].get<long long>() < 1) {
            schema_error(bp + ".dim", "expected a positive integer");
        }
        const auto dim = static_cast<Eigen::Index>(b["dim"].get<long long>());
        CMatrix m = read_matrix(b["matrix"], bp + ".matrix");
        if (m.rows() != dim) {
            schema_error(bp, "block " + std::to_string(i) + " has " + std::to_string(m.rows()) +
                                 " rows but dim = " + std::to_string(dim));
        }
        if (m.cols() != h_dim) {
            schema_error(bp, "block " + std::to_string(i) + " has " + std::to_string(m.cols()) +
                                 " columns but h_dim = " + std::to_string(h_dim));
        }
        blocks.push_back(std::move(m));
    }
    return blocks;
}

inline GFrame read_frame_object(const ordered_json& j, const std::string& path, Eigen::Index h_dim)
{
    if (!j.is_object() || !j.contains("blocks")) {
        schema_error(path, "expected an object with \"blocks\"");
    }
    reject_unknown(j, path, {"blocks", "h_dim"});
    if (j.contains("h_dim") && (!j["h_dim"].is_number_integer() || j["h_dim"].get<long long>() != h_dim)) {
        schema_error(path + ".h_dim", "must equal the instance h_dim");
    }
    return GFrame(h_dim, read_blocks(j["blocks"], path + ".blocks", h_dim));
}

inline CMatrix read_square(const ordered_json& j, const std::string& path, Eigen::Index n)
{
    CMatrix m = read_matrix(j, path);
    if (m.rows() != n || m.cols() != n) {
        schema_error(path, "expected a " + std::to_string(n) + "x" + std::to_string(n) + " matrix");
    }
    return m;
}

inline ordered_json complex_json(complex z)
{
    return ordered_json::array({z.real(), z.imag()});
}

inline ordered_json matrix_json(const CMatrix& m)
{
    ordered_json rows = ordered_json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        ordered_json row = ordered_json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            row.push_back(complex_json(m(r, c)));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

inline ordered_json weights_json(const WeightSequence& w)
{
    ordered_json out = ordered_json::array();
    for (const complex& v : w.values()) {
        out.push_back(complex_json(v));
    }
    return out;
}

inline ordered_json blocks_json(const GFrame& f)
{
    ordered_json out = ordered_json::array();
    for (const auto& b : f.blocks()) {
        ordered_json block;
        block["dim"] = b.rows();
        block["matrix"] = matrix_json(b);
        out.push_back(std::move(block));
    }
    return out;
}

}  // namespace detail

[[nodiscard]] inline Instance instance_from_json(const ordered_json& j)
{
    using namespace detail;
    if (!j.is_object()) {
        schema_error("$", "expected a JSON object");
    }
    reject_unknown(j, "$",
                   {"schema_version", "h_dim", "label", "blocks", "weights", "control", "companion", "payloads"});
    if (!j.contains("schema_version") || !j["schema_version"].is_number_integer() ||
        j["schema_version"].get<long long>() != schema_version) {
        schema_error("$.schema_version", "must be the integer 1");
    }
    if (!j.contains("h_dim") || !j["h_dim"].is_number_integer() || j["h_dim"].get<long long>() < 1) {
        schema_error("$.h_dim", "must be a positive integer");
    }
    const auto h_dim = static_cast<Eigen::Index>(j["h_dim"].get<long long>());
    if (!j.contains("blocks")) {
        schema_error("$.blocks", "missing");
    }
    std::optional<std::string> label;
    if (j.contains("label")) {
        if (!j["label"].is_string()) {
            schema_error("$.label", "expected a string");
        }
        label = j["label"].get<std::string>();
    }
    Instance inst{GFrame(h_dim, read_blocks(j["blocks"], "$.blocks", h_dim), label)};
    const std::size_t n = inst.frame.size();
    if (j.contains("weights")) {
        inst.weights = read_weights(j["weights"], "$.weights", n);
    }
    if (j.contains("control")) {
        inst.control = read_square(j["control"], "$.control", h_dim);
    }
    if (j.contains("companion")) {
        inst.companion = read_frame_object(j["companion"], "$.companion", h_dim);
    }
    if (j.contains("payloads")) {
        const auto& p = j["payloads"];
        if (!p.is_object()) {
            schema_error("$.payloads", "expected an object");
        }
        reject_unknown(p, "$.payloads", {"bijection", "dual", "coisometry", "weights_alt", "mu"});
        if (p.contains("bijection")) {
            inst.bijection = read_square(p["bijection"], "$.payloads.bijection", h_dim);
        }
        if (p.contains("dual")) {
            inst.dual = read_frame_object(p["dual"], "$.payloads.dual", h_dim);
        }
        if (p.contains("coisometry")) {
            inst.coisometry = read_matrix(p["coisometry"], "$.payloads.coisometry");
            if (inst.coisometry->cols() != h_dim) {
                schema_error("$.payloads.coisometry", "expected h_dim columns");
            }
        }
        if (p.contains("weights_alt")) {
            inst.weights_alt = read_weights(p["weights_alt"], "$.payloads.weights_alt", n);
        }
        if (p.contains("mu")) {
            inst.mu = read_number(p["mu"], "$.payloads.mu");
        }
    }
    return inst;
}

/// Parses and validates an instance document; errors carry a JSON path.
[[nodiscard]] inline Instance parse_instance(std::string_view text)
{
    ordered_json j;
    try {
        j = ordered_json::parse(text.begin(), text.end());
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorKind::SchemaError, "$: malformed JSON at byte " + std::to_string(e.byte) + ": " + e.what());
    } catch (const nlohmann::json::out_of_range& e) {
        // Number literals beyond double range, e.g. 1e999.
        throw Error(ErrorKind::NonFinite, std::string("$: ") + e.what());
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::SchemaError, std::string("$: ") + e.what());
    }
    try {
        return instance_from_json(j);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::SchemaError, std::string("$: ") + e.what());
    }
}

[[nodiscard]] inline ordered_json instance_to_json(const Instance& inst)
{
    using namespace detail;
    ordered_json j;
    j["schema_version"] = schema_version;
    j["h_dim"] = inst.frame.h_dim();
    if (inst.frame.label()) {
        j["label"] = *inst.frame.label();
    }
    j["blocks"] = blocks_json(inst.frame);
    if (inst.weights) {
        j["weights"] = weights_json(*inst.weights);
    }
    if (inst.control) {
        j["control"] = matrix_json(*inst.control);
    }
    if (inst.companion) {
        j["companion"] = ordered_json{{"blocks", blocks_json(*inst.companion)}};
    }
    ordered_json p = ordered_json::object();
    if (inst.bijection) {
        p["bijection"] = matrix_json(*inst.bijection);
    }
    if (inst.dual) {
        p["dual"] = ordered_json{{"blocks", blocks_json(*inst.dual)}};
    }
    if (inst.coisometry) {
        p["coisometry"] = matrix_json(*inst.coisometry);
    }
    if (inst.weights_alt) {
        p["weights_alt"] = weights_json(*inst.weights_alt);
    }
    if (inst.mu) {
        p["mu"] = *inst.mu;
    }
    if (!p.empty()) {
        j["payloads"] = std::move(p);
    }
    return j;
}

[[nodiscard]] inline std::string serialize_instance(const Instance& inst, int indent = 2)
{
    return instance_to_json(inst).dump(indent);
}

/// 64-bit FNV-1a over the compact serialization, as "fnv1a64:<hex>".
[[nodiscard]] inline std::string instance_digest(const Instance& inst)
{
    const std::string canonical = instance_to_json(inst).dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : canonical) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    std::ostringstream os;
    os << "fnv1a64:" << std::hex << std::setw(16) << std::setfill('0') << h;
    return os.str();
}

}  // namespace gframe
