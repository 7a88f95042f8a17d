#pragma once

// Command-line front end. run_command executes one command and returns the
// process exit code:
//   0  verified
//   1  a verification that should hold numerically did not (e.g. selftest)
//   2  a mathematical hypothesis failed; the report names the inequality
//   3  input error (bad flags, unreadable or malformed instance)

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "gframe/controlled.hpp"
#include "gframe/corpus.hpp"
#include "gframe/decompositions.hpp"
#include "gframe/generate.hpp"
#include "gframe/io.hpp"
#include "gframe/multipliers.hpp"
#include "gframe/weighted.hpp"

namespace gframe::cli {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int verification_failed = 1;
inline constexpr int hypothesis_failed = 2;
inline constexpr int input_error = 3;
}  // namespace exit_code

struct Options {
    std::string command;
    std::string mode;  // decompose/invert/controlled/weighted variant
    std::string in;
    std::string out;
    double tol = 1e-8;
    std::uint64_t seed = 1;
    bool seed_given = false;
    bool json = false;
    std::string order = "lt";
    // generate
    std::string kind;
    Eigen::Index dim = 0;
    std::string partition;
};

namespace detail {

using gframe::detail::complex_json;
using gframe::detail::matrix_json;
using gframe::detail::weights_json;

/// Outcome of one operation on one instance.
struct Outcome {
    ordered_json report = ordered_json::object();
    int code = exit_code::ok;
};

[[noreturn]] inline void missing(const std::string& what)
{
    throw Error(ErrorKind::SchemaError, "instance lacks " + what + ", which this command requires");
}

inline ordered_json bounds_json(const FrameBounds& b)
{
    return {{"lower", b.lower}, {"upper", b.upper}, {"classification", std::string(to_string(b.classification))}};
}

inline std::string summary(const ClassificationReport& r)
{
    std::string s(to_string(r.bounds.classification));
    if (r.is_g_onb) {
        s += ", g-ONB";
    } else if (r.is_g_riesz) {
        s += ", g-Riesz";
    } else if (r.is_g_complete) {
        s += ", g-complete";
    }
    return s;
}

inline ordered_json inputs_json(const Instance& inst)
{
    ordered_json dims = ordered_json::array();
    for (Eigen::Index d : inst.frame.partition()) {
        dims.push_back(d);
    }
    ordered_json j = {{"h_dim", inst.frame.h_dim()}, {"block_dims", dims}};
    if (inst.frame.label()) {
        j["label"] = *inst.frame.label();
    }
    ordered_json present = ordered_json::array();
    if (inst.weights) present.push_back("weights");
    if (inst.control) present.push_back("control");
    if (inst.companion) present.push_back("companion");
    if (inst.bijection) present.push_back("bijection");
    if (inst.dual) present.push_back("dual");
    if (inst.coisometry) present.push_back("coisometry");
    if (inst.weights_alt) present.push_back("weights_alt");
    if (inst.mu) present.push_back("mu");
    j["payloads"] = present;
    return j;
}

inline Order parse_order(const std::string& s)
{
    return s == "tl" ? Order::ThetaLambda : Order::LambdaTheta;
}

inline const WeightSequence& need_weights(const Instance& inst)
{
    if (!inst.weights) {
        missing("weights");
    }
    return *inst.weights;
}

inline const GFrame& need_companion(const Instance& inst)
{
    if (!inst.companion) {
        missing("a companion frame");
    }
    return *inst.companion;
}

inline const GFrame& need_dual(const Instance& inst)
{
    if (!inst.dual) {
        missing("payloads.dual");
    }
    return *inst.dual;
}

inline ControlOperator need_control(const Instance& inst)
{
    if (!inst.control) {
        missing("a control matrix");
    }
    return ControlOperator(*inst.control);
}

inline void classify_op(const Instance& inst, Outcome& o)
{
    const ClassificationReport r = classify(inst.frame);
    o.report["verdicts"] = {{"summary", summary(r)},         {"g_bessel", r.is_g_bessel},
                            {"g_frame", r.is_g_frame},       {"tight", r.is_tight},
                            {"parseval", r.is_parseval},     {"g_complete", r.is_g_complete},
                            {"g_riesz", r.is_g_riesz},       {"g_onb", r.is_g_onb}};
    o.report["bounds"] = {{"frame", bounds_json(r.bounds)}};
    if (r.riesz_bounds) {
        o.report["bounds"]["riesz"] = {{"lower", r.riesz_bounds->lower}, {"upper", r.riesz_bounds->upper}};
    }
}

inline void dual_op(const Instance& inst, Outcome& o)
{
    const FrameBounds fb = frame_bounds(inst.frame);
    const GFrame d = canonical_dual(inst.frame);
    const FrameBounds db = frame_bounds(d);
    const double defect = duality_defect(inst.frame, d);
    o.report["bounds"] = {{"frame", bounds_json(fb)},
                          {"canonical_dual", bounds_json(db)},
                          {"expected_dual", {{"lower", 1.0 / fb.upper}, {"upper", 1.0 / fb.lower}}}};
    o.report["residuals"] = {{"canonical_duality_defect", defect}};
    bool ok = defect <= tol::dual;
    o.report["verdicts"] = {{"canonical_dual_verified", ok}};
    if (inst.dual) {
        const double given = duality_defect(inst.frame, *inst.dual);
        o.report["residuals"]["given_duality_defect"] = given;
        o.report["verdicts"]["given_dual_verified"] = given <= tol::dual;
        if (given > tol::dual) {
            o.report["hypothesis"] = {{"violated", "sum_i D_i^H L_i = I"}, {"defect", given}};
            o.code = exit_code::hypothesis_failed;
        }
    }
    o.report["result"] = {{"canonical_dual", instance_to_json(Instance{d})["blocks"]}};
    if (!ok) {
        o.code = std::max(o.code, exit_code::verification_failed);
    }
}

inline void decompose_op(const Instance& inst, const std::string& mode, Outcome& o)
{
    if (mode == "coisometry") {
        if (!inst.coisometry) {
            missing("payloads.coisometry");
        }
        const GFrame img = coisometry_image(inst.frame, *inst.coisometry);
        const ClassificationReport r = classify(img);
        o.report["bounds"] = {{"image", bounds_json(r.bounds)}};
        o.report["verdicts"] = {{"image_parseval", r.is_parseval}};
        o.report["result"] = {{"image", instance_to_json(Instance{img})["blocks"]}};
        o.code = r.is_parseval ? exit_code::ok : exit_code::verification_failed;
        return;
    }
    GFrameDecomposition dec;
    if (mode == "three-onb") {
        dec = decompose_three_gonb(inst.frame);
    } else if (mode == "two-onb") {
        dec = decompose_two_gonb_combo(inst.frame);
    } else if (mode == "two-parseval") {
        dec = decompose_two_parseval(inst.frame);
    } else {
        dec = decompose_gonb_plus_griesz(inst.frame);
    }
    const double residual = reconstruction_residual(inst.frame, dec.scalars, dec.components);
    const double limit = tol::recon * (1.0 + analysis_matrix(inst.frame).norm());
    ordered_json comps = ordered_json::array();
    bool all = residual <= limit;
    for (std::size_t j = 0; j < dec.components.size(); ++j) {
        const bool ok = matches_kind(classify(dec.components[j]), dec.component_kinds[j]);
        all = all && ok;
        comps.push_back({{"scalar", complex_json(dec.scalars[j])},
                         {"kind", std::string(to_string(dec.component_kinds[j]))},
                         {"certified", ok},
                         {"blocks", instance_to_json(Instance{dec.components[j]})["blocks"]}});
    }
    o.report["residuals"] = {{"reconstruction", residual}, {"limit", limit}};
    o.report["verdicts"] = {{"reconstructs", residual <= limit}, {"all_components_certified", all}};
    o.report["result"] = {{"components", comps}};
    o.code = all ? exit_code::ok : exit_code::verification_failed;
}

inline void multiply_op(const Instance& inst, const Options& opt, Outcome& o)
{
    const WeightSequence m = inst.weights ? *inst.weights : WeightSequence::ones(inst.frame.size());
    const GFrame& t = inst.companion ? *inst.companion : inst.frame;
    const CMatrix mult = gframe::detail::oriented_multiplier(m, inst.frame, t, parse_order(opt.order));
    const double n = operator_norm(mult);
    const double bound = multiplier_norm_bound(m, inst.frame, t);
    o.report["bounds"] = {{"operator_norm", n}, {"norm_bound", bound}};
    o.report["verdicts"] = {{"norm_bound_holds", n <= bound * (1.0 + 1e-12)},
                            {"invertible", smallest_singular_value(mult) > tol::rank * (1.0 + n)}};
    o.report["result"] = {{"multiplier", matrix_json(mult)}};
    if (n > bound * (1.0 + 1e-12)) {
        o.code = exit_code::verification_failed;
    }
}

inline void invert_op(const Instance& inst, const Options& opt, Outcome& o)
{
    const Order order = parse_order(opt.order);
    const WeightSequence& m = need_weights(inst);
    const std::string& mode = opt.mode;
    MultiplierInverse inv;
    CMatrix mult;
    if (mode == "bijection") {
        if (!inst.bijection) {
            missing("payloads.bijection");
        }
        inv = invert_via_bijection(m, inst.frame, *inst.bijection);
        mult = multiplier(m, inst.frame, composed(inst.frame, *inst.bijection));
    } else if (mode == "dual-neumann") {
        inv = invert_dual_neumann(m, inst.frame, need_dual(inst), opt.tol, order);
        mult = gframe::detail::oriented_multiplier(m, inst.frame, need_dual(inst), order);
    } else if (mode == "canonical") {
        inv = invert_canonical_dual(m, inst.frame, opt.tol, order);
        mult = gframe::detail::oriented_multiplier(m, inst.frame, canonical_dual(inst.frame), order);
    } else if (mode == "bessel-perturb") {
        inv = invert_bessel_perturb(m, inst.frame, need_companion(inst), opt.tol, order);
        mult = gframe::detail::oriented_multiplier(m, inst.frame, need_companion(inst), order);
    } else if (mode == "mu-perturb") {
        inv = invert_mu_perturb(m, inst.frame, need_companion(inst), opt.tol, order, inst.mu);
        mult = gframe::detail::oriented_multiplier(m, inst.frame, need_companion(inst), order);
    } else {
        inv = invert_dual_mu_perturb(m, inst.frame, need_dual(inst), need_companion(inst), opt.tol, order, inst.mu);
        mult = gframe::detail::oriented_multiplier(m, inst.frame, need_companion(inst), order);
    }
    const auto& c = inv.certificate;
    ordered_json hyp = ordered_json::object();
    for (const auto& [k, v] : c.hypothesis_values) {
        hyp[k] = v;
    }
    const double actual = 1.0 / smallest_singular_value(mult);
    const bool in_bracket =
        actual >= c.inverse_norm_lower * (1.0 - 1e-9) && actual <= c.inverse_norm_upper * (1.0 + 1e-9);
    // A truncation error of at most tol in operator norm bounds the residual
    // by sqrt(d) |M| tol in Frobenius norm; the rest is rounding.
    const double d = static_cast<double>(mult.rows());
    const double residual_limit = std::sqrt(d) * operator_norm(mult) * opt.tol + 1e-9 * (1.0 + mult.norm());
    o.report["hypothesis"] = hyp;
    o.report["bounds"] = {{"inverse_norm_lower", c.inverse_norm_lower},
                          {"inverse_norm_upper", c.inverse_norm_upper},
                          {"inverse_norm_actual", actual}};
    o.report["certificate"] = {{"rule", std::string(to_string(c.rule))},
                               {"order", c.order == Order::LambdaTheta ? "lt" : "tl"},
                               {"series_terms", c.series_terms},
                               {"contraction", c.contraction},
                               {"tail_scale", c.tail_scale}};
    if (c.series_terms > 0) {
        o.report["certificate"]["predicted_tail"] = c.predicted_tail(c.series_terms - 1);
    }
    o.report["residuals"] = {{"inverse", c.residual}, {"limit", residual_limit}};
    o.report["verdicts"] = {{"bracket_contains_norm", in_bracket}, {"residual_ok", c.residual <= residual_limit}};
    o.report["result"] = {{"inverse", matrix_json(inv.inverse)}};
    if (!in_bracket || c.residual > residual_limit) {
        o.code = exit_code::verification_failed;
    }
}

inline void controlled_op(const Instance& inst, const std::string& mode, Outcome& o)
{
    const ControlOperator c = need_control(inst);
    if (mode == "bounds") {
        const ControlledBounds b = controlled_bounds(inst.frame, c);
        o.report["bounds"] = {{"m_CL", b.m_cl}, {"M_CL", b.big_m_cl}};
        o.report["verdicts"] = {{"controlled_frame", b.is_controlled_frame},
                                {"non_self_adjoint_form", b.non_self_adjoint_form}};
        if (!b.is_controlled_frame) {
            o.report["hypothesis"] = {
                {"violated", b.non_self_adjoint_form ? "S C^H = (S C^H)^H" : "m_CL > 0"}, {"m_CL", b.m_cl}};
            o.code = exit_code::hypothesis_failed;
        }
    } else if (mode == "commute") {
        const CommutationCheck k = verify_commutation(inst.frame, c);
        o.report["residuals"] = {{"commutation_defect", k.defect}};
        o.report["verdicts"] = {{"commutes", k.holds}};
        if (!k.holds) {
            o.report["hypothesis"] = {{"violated", "S C^H = C S"}, {"defect", k.defect}};
            o.code = exit_code::hypothesis_failed;
        }
    } else if (mode == "equiv") {
        const ControlledEquivalence e = controlled_equivalence(inst.frame, c);
        o.report["verdicts"] = {{"controlled_frame", e.lhs},
                                {"frame_positive_commuting", e.rhs},
                                {"agree", e.lhs == e.rhs}};
        o.code = e.lhs == e.rhs ? exit_code::ok : exit_code::verification_failed;
    } else {
        const ControlledBounds b = controlled_bounds(inst.frame, c);
        if (!c.is_positive()) {
            gframe::detail::hypothesis_failed("C > 0", "the control operator is not positive definite");
        }
        if (!b.is_controlled_frame) {
            gframe::detail::hypothesis_failed("m_CL > 0", "the family is not controlled by C");
        }
        const FrameBounds fb = frame_bounds(inst.frame);
        const SpectralRange cr = *c.bounds();
        const ControlledBoundArithmetic a =
            controlled_bound_arithmetic(b.m_cl, b.big_m_cl, fb.lower, fb.upper, cr.lambda_min, cr.lambda_max);
        const SpectralRange sr{fb.lower, fb.upper};
        const SpectralRange scr{b.m_cl, b.big_m_cl};
        auto pair = [](const BoundPair& p) { return ordered_json{{"lower", p.lower}, {"upper", p.upper}}; };
        o.report["bounds"] = {{"S", pair(a.for_s)}, {"C", pair(a.for_c)}, {"S_C", pair(a.for_sc)}};
        o.report["verdicts"] = {{"S_contained", a.for_s.contains(sr)},
                                {"C_contained", a.for_c.contains(cr)},
                                {"S_C_contained", a.for_sc.contains(scr)}};
        if (!(a.for_s.contains(sr) && a.for_c.contains(cr) && a.for_sc.contains(scr))) {
            o.code = exit_code::verification_failed;
        }
    }
}

inline void weighted_op(const Instance& inst, const std::string& mode, Outcome& o)
{
    if (mode == "from-control") {
        const WeightFromControl w = weight_from_control(inst.frame, need_control(inst));
        o.report["result"] = {{"weights", weights_json(w.weights)}};
        o.report["residuals"] = {{"multiplier_defect", w.multiplier_defect}};
        o.report["verdicts"] = {{"control_is_multiplier", w.is_multiplier}};
        o.code = w.is_multiplier ? exit_code::ok : exit_code::verification_failed;
        return;
    }
    const WeightSequence& w = need_weights(inst);
    if (mode == "bounds") {
        const FrameBounds a = weighted_bounds(inst.frame, w);
        const FrameBounds b = weighted_vector_frame_bounds(induced_weighted_frame(inst.frame, w));
        const double diff = std::max(std::abs(a.lower - b.lower), std::abs(a.upper - b.upper));
        o.report["bounds"] = {{"weighted_gframe", bounds_json(a)}, {"induced_vector_frame", bounds_json(b)}};
        o.report["residuals"] = {{"bound_difference", diff}};
        o.report["verdicts"] = {{"bounds_agree", diff <= 1e-12 * (1.0 + a.upper)}};
        o.code = diff <= 1e-12 * (1.0 + a.upper) ? exit_code::ok : exit_code::verification_failed;
    } else if (mode == "dual") {
        const GFrame wd = weighted_dual(inst.frame, w);
        const double defect = duality_defect(scaled_blocks(inst.frame, w.values()), wd);
        o.report["residuals"] = {{"duality_defect", defect}};
        o.report["verdicts"] = {{"dual_verified", defect <= tol::dual}};
        o.report["result"] = {{"weighted_dual", instance_to_json(Instance{wd})["blocks"]}};
        o.code = defect <= tol::dual ? exit_code::ok : exit_code::verification_failed;
    } else {
        const WeightSequence alt = inst.weights_alt ? *inst.weights_alt : WeightSequence::ones(inst.frame.size());
        const WeightedEquivalence e = weighted_equivalence_suite(inst.frame, w, alt);
        o.report["verdicts"] = {{"g_frame", e.g_frame},
                                {"multiplier_positive", e.multiplier_positive},
                                {"weighted_form_bounded", e.weighted_form_bounded},
                                {"sqrt_family_frame", e.sqrt_family_frame},
                                {"alt_multiplier_positive", e.alt_multiplier_positive},
                                {"weighted_family_frame", e.weighted_family_frame},
                                {"unanimous", e.unanimous()}};
        o.code = e.unanimous() ? exit_code::ok : exit_code::verification_failed;
    }
}

/// Runs an instance command, converting library errors to exit codes.
inline Outcome run_on_instance(const Options& opt, const std::string& source, const std::string& text)
{
    Outcome o;
    o.report["operation"] = opt.mode.empty() ? opt.command : opt.command + " " + opt.mode;
    o.report["source"] = source;
    const auto start = std::chrono::steady_clock::now();
    try {
        const Instance inst = parse_instance(text);
        o.report["digest"] = instance_digest(inst);
        o.report["inputs"] = inputs_json(inst);
        if (opt.command == "classify") {
            classify_op(inst, o);
        } else if (opt.command == "dual") {
            dual_op(inst, o);
        } else if (opt.command == "decompose") {
            decompose_op(inst, opt.mode, o);
        } else if (opt.command == "multiply") {
            multiply_op(inst, opt, o);
        } else if (opt.command == "invert") {
            invert_op(inst, opt, o);
        } else if (opt.command == "controlled") {
            controlled_op(inst, opt.mode, o);
        } else {
            weighted_op(inst, opt.mode, o);
        }
    } catch (const Error& e) {
        const bool hyp = is_hypothesis_failure(e.kind());
        o.code = hyp ? exit_code::hypothesis_failed : exit_code::input_error;
        o.report["error"] = {{"kind", std::string(to_string(e.kind()))}, {"message", e.what()}};
        if (hyp) {
            o.report["hypothesis"] = {{"violated", e.what()}};
        }
    } catch (const std::exception& e) {
        o.code = exit_code::input_error;
        o.report["error"] = {{"kind", "InputError"}, {"message", e.what()}};
    }
    o.report["status"] = o.code == exit_code::ok                    ? "verified"
                         : o.code == exit_code::verification_failed ? "verification_failed"
                         : o.code == exit_code::hypothesis_failed   ? "hypothesis_failed"
                                                                    : "input_error";
    o.report["timing_ms"] = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return o;
}

inline void render_text(const ordered_json& j, const std::string& prefix, std::ostream& os)
{
    for (const auto& [key, value] : j.items()) {
        const std::string name = prefix.empty() ? key : prefix + "." + key;
        if (value.is_object()) {
            render_text(value, name, os);
        } else if (value.is_string()) {
            os << name << ": " << value.get<std::string>() << '\n';
        } else {
            os << name << ": " << value.dump() << '\n';
        }
    }
}

inline std::string render(const ordered_json& report, bool json)
{
    if (json) {
        return report.dump(2) + "\n";
    }
    std::ostringstream os;
    const ordered_json items = report.contains("batch") ? report["batch"] : ordered_json::array({report});
    bool first = true;
    for (const auto& r : items) {
        if (!first) {
            os << '\n';
        }
        first = false;
        ordered_json copy = r;
        // Matrices and block lists are unreadable as text; --json has them.
        copy.erase("result");
        render_text(copy, "", os);
    }
    return os.str();
}

inline bool read_file(const std::filesystem::path& p, std::string& text)
{
    std::ifstream in(p, std::ios::binary);
    if (!in) {
        return false;
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
    return true;
}

inline int emit(const Options& opt, const std::string& body, std::ostream& out, std::ostream& err)
{
    if (opt.out.empty()) {
        out << body;
        return exit_code::ok;
    }
    std::ofstream f(opt.out, std::ios::binary);
    if (!f || !(f << body)) {
        err << "error: cannot write " << opt.out << '\n';
        return exit_code::input_error;
    }
    return exit_code::ok;
}

inline int run_instances(const Options& opt, std::ostream& out, std::ostream& err)
{
    namespace fs = std::filesystem;
    if (opt.in.empty()) {
        err << "error: --in is required for " << opt.command << '\n';
        return exit_code::input_error;
    }
    std::error_code ec;
    std::vector<fs::path> files;
    const bool batch = fs::is_directory(opt.in, ec);
    if (batch) {
        for (const auto& entry : fs::directory_iterator(opt.in, ec)) {
            if (entry.is_regular_file() && entry.path().extension() == ".json") {
                files.push_back(entry.path());
            }
        }
        std::sort(files.begin(), files.end());
        if (files.empty()) {
            err << "error: no .json instances in " << opt.in << '\n';
            return exit_code::input_error;
        }
    } else {
        files.emplace_back(opt.in);
    }

    int code = exit_code::ok;
    ordered_json reports = ordered_json::array();
    for (const auto& p : files) {
        std::string text;
        Outcome o;
        if (!read_file(p, text)) {
            o.code = exit_code::input_error;
            o.report = {{"operation", opt.command}, {"source", p.string()},
                        {"error", {{"kind", "InputError"}, {"message", "cannot read file"}}},
                        {"status", "input_error"}};
        } else {
            o = run_on_instance(opt, p.string(), text);
        }
        if (o.code != exit_code::ok && o.report.contains("error")) {
            err << p.string() << ": " << o.report["error"]["message"].get<std::string>() << '\n';
        }
        code = std::max(code, o.code);
        reports.push_back(std::move(o.report));
    }
    const ordered_json report = batch ? ordered_json{{"batch", reports}} : reports[0];
    return std::max(code, emit(opt, render(report, opt.json), out, err));
}

inline int run_generate(const Options& opt, std::ostream& out, std::ostream& err)
{
    const auto kind = parse_generate_kind(opt.kind);
    if (!kind) {
        err << "error: unknown --kind '" << opt.kind << "'\n";
        return exit_code::input_error;
    }
    std::vector<Eigen::Index> partition;
    std::stringstream ss(opt.partition);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            const long long v = std::stoll(item, &used);
            if (used != item.size()) {
                throw std::invalid_argument(item);
            }
            partition.push_back(static_cast<Eigen::Index>(v));
        } catch (const std::exception&) {
            err << "error: --partition must be a comma-separated list of integers\n";
            return exit_code::input_error;
        }
    }
    if (partition.empty()) {
        partition.assign(static_cast<std::size_t>(std::max<Eigen::Index>(opt.dim, 1)), 1);
    }
    try {
        return emit(opt, serialize_instance(generate(*kind, opt.dim, partition, opt.seed)) + "\n", out, err);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return is_hypothesis_failure(e.kind()) ? exit_code::hypothesis_failed : exit_code::input_error;
    }
}

inline int run_selftest(const Options& opt, std::ostream& out, std::ostream& err)
{
    corpus::Config cfg;
    cfg.max_dim = 6;
    if (opt.seed_given) {
        cfg.seed = opt.seed;
    }
    const auto start = std::chrono::steady_clock::now();
    ordered_json results = ordered_json::array();
    bool all = true;
    std::ostringstream text;
    for (const auto& runner : corpus::runners()) {
        const corpus::Result r = runner(cfg);
        all = all && r.passed();
        results.push_back({{"id", r.id},
                           {"title", r.title},
                           {"passed", r.passed()},
                           {"checks", r.checks},
                           {"failures", r.failures},
                           {"samples", r.samples},
                           {"seconds", r.seconds}});
        text << (r.passed() ? "PASS " : "FAIL ") << r.id << "  " << r.title << "  (" << r.checks << " checks, "
             << r.failures << " failures, " << r.seconds << " s)\n";
        for (const auto& s : r.samples) {
            text << "    " << s << '\n';
        }
    }
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    text << (all ? "selftest passed" : "selftest FAILED") << " in " << ms / 1000.0 << " s\n";
    const ordered_json report = {{"operation", "selftest"},
                                 {"max_dim", cfg.max_dim},
                                 {"seed", cfg.seed},
                                 {"results", results},
                                 {"status", all ? "verified" : "verification_failed"},
                                 {"timing_ms", ms}};
    const int code = emit(opt, opt.json ? report.dump(2) + "\n" : text.str(), out, err);
    return std::max(code, all ? exit_code::ok : exit_code::verification_failed);
}

}  // namespace detail

/// Parses argv-style arguments (without the program name) and executes one command.
inline int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    Options opt;
    CLI::App app{"Verify, decompose and invert finite-dimensional g-frames and their multipliers", "gframe"};
    app.require_subcommand(1);

    auto common = [&](CLI::App* sub, bool needs_in) {
        auto* in = sub->add_option("--in", opt.in, "instance file, or a directory of .json instances");
        if (needs_in) {
            in->required();
        }
        sub->add_option("--out", opt.out, "write the report here instead of stdout");
        sub->add_option("--tol", opt.tol, "series truncation tolerance")->check(CLI::PositiveNumber);
        sub->add_option("--seed", opt.seed, "random seed");
        auto* json = sub->add_flag("--json", opt.json, "machine-readable report");
        sub->add_flag("--text{false}", opt.json, "human-readable report (default)")->excludes(json);
        return sub;
    };
    auto mode = [&](CLI::App* sub, std::vector<std::string> modes) {
        sub->add_option("mode", opt.mode, "variant")->required()->check(CLI::IsMember(std::move(modes)));
    };

    common(app.add_subcommand("classify", "frame bounds and structural predicates"), true);
    common(app.add_subcommand("dual", "canonical dual and its bounds"), true);
    mode(common(app.add_subcommand("decompose", "certified decompositions"), true),
         {"three-onb", "two-onb", "two-parseval", "onb-plus-riesz", "coisometry"});
    auto* multiply = common(app.add_subcommand("multiply", "multiplier M_{m,L,T} and its norm bound"), true);
    multiply->add_option("--order", opt.order, "lt: M_{m,L,T}; tl: M_{m,T,L}")->check(CLI::IsMember({"lt", "tl"}));
    auto* invert = common(app.add_subcommand("invert", "certified multiplier inversion"), true);
    mode(invert, {"bijection", "dual-neumann", "canonical", "bessel-perturb", "mu-perturb", "dual-mu"});
    invert->add_option("--order", opt.order, "lt: M_{m,L,T}; tl: M_{m,T,L}")->check(CLI::IsMember({"lt", "tl"}));
    mode(common(app.add_subcommand("controlled", "controlled g-frames"), true),
         {"bounds", "commute", "equiv", "arith"});
    mode(common(app.add_subcommand("weighted", "weighted g-frames"), true),
         {"bounds", "dual", "equiv", "from-control"});
    auto* gen = common(app.add_subcommand("generate", "write a random instance"), false);
    gen->add_option("--kind", opt.kind, "random_gframe|g_riesz|g_onb|parseval|controlled_commuting|weighted")
        ->required();
    gen->add_option("--dim", opt.dim, "Hilbert space dimension")->required()->check(CLI::Range(1, 4096));
    gen->add_option("--partition", opt.partition, "block dimensions, e.g. 2,2 (default: all ones)");
    common(app.add_subcommand("selftest", "run the randomized property corpus"), false);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_code::ok : exit_code::input_error;
    }
    opt.command = app.get_subcommands().front()->get_name();
    opt.seed_given = app.get_subcommands().front()->count("--seed") > 0;

    try {
        if (opt.command == "generate") {
            return detail::run_generate(opt, out, err);
        }
        if (opt.command == "selftest") {
            return detail::run_selftest(opt, out, err);
        }
        return detail::run_instances(opt, out, err);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_code::input_error;
    }
}

}  // namespace gframe::cli
