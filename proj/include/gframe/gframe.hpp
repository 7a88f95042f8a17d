#pragma once

// The g-frame data model: a finite family of operators L_i : H -> H_i over a
// common space H = C^d, its frame operator, optimal bounds, classification,
// canonical dual, and the bridge to the induced vector frame
// psi_{i,k} = L_i^H e_{i,k}.

#include <cstddef>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "gframe/kernel.hpp"

namespace gframe {

class GFrame {
public:
    GFrame() = default;

    GFrame(Eigen::Index h_dim, std::vector<CMatrix> blocks, std::optional<std::string> label = std::nullopt)
        : h_dim_(h_dim), blocks_(std::move(blocks)), label_(std::move(label))
    {
        if (h_dim_ < 1) {
            throw Error(ErrorKind::ShapeMismatch, "h_dim must be positive");
        }
        if (blocks_.empty()) {
            throw Error(ErrorKind::ShapeMismatch, "a g-frame needs at least one block");
        }
        for (std::size_t i = 0; i < blocks_.size(); ++i) {
            const CMatrix& b = blocks_[i];
            if (b.cols() != h_dim_ || b.rows() < 1) {
                std::ostringstream os;
                os << "block " << i << " has shape " << b.rows() << "x" << b.cols() << ", expected dim x "
                   << h_dim_;
                throw Error(ErrorKind::ShapeMismatch, os.str());
            }
            require_finite(b, "block " + std::to_string(i));
        }
    }

    [[nodiscard]] Eigen::Index h_dim() const noexcept { return h_dim_; }
    [[nodiscard]] std::size_t size() const noexcept { return blocks_.size(); }
    [[nodiscard]] const std::vector<CMatrix>& blocks() const noexcept { return blocks_; }
    [[nodiscard]] const CMatrix& block(std::size_t i) const { return blocks_.at(i); }
    [[nodiscard]] const std::optional<std::string>& label() const noexcept { return label_; }

    [[nodiscard]] std::vector<Eigen::Index> partition() const
    {
        std::vector<Eigen::Index> p;
        p.reserve(blocks_.size());
        for (const auto& b : blocks_) {
            p.push_back(b.rows());
        }
        return p;
    }

    /// Sum of the block dimensions d_i.
    [[nodiscard]] Eigen::Index total_rows() const noexcept
    {
        Eigen::Index n = 0;
        for (const auto& b : blocks_) {
            n += b.rows();
        }
        return n;
    }

    [[nodiscard]] bool same_shape(const GFrame& other) const
    {
        return h_dim_ == other.h_dim_ && partition() == other.partition();
    }

private:
    Eigen::Index h_dim_ = 0;
    std::vector<CMatrix> blocks_;
    std::optional<std::string> label_;
};

enum class FrameClass { NotBessel, BesselOnly, GFrame, TightGFrame, ParsevalGFrame };

[[nodiscard]] constexpr std::string_view to_string(FrameClass c) noexcept
{
    switch (c) {
    case FrameClass::NotBessel: return "NotBessel";
    case FrameClass::BesselOnly: return "BesselOnly";
    case FrameClass::GFrame: return "GFrame";
    case FrameClass::TightGFrame: return "TightGFrame";
    case FrameClass::ParsevalGFrame: return "ParsevalGFrame";
    }
    return "Unknown";
}

struct FrameBounds {
    double lower = 0.0;
    double upper = 0.0;
    FrameClass classification = FrameClass::BesselOnly;
};

struct RieszBounds {
    double lower = 0.0;
    double upper = 0.0;
};

struct ClassificationReport {
    bool is_g_bessel = true;
    bool is_g_frame = false;
    bool is_tight = false;
    bool is_parseval = false;
    bool is_g_complete = false;
    bool is_g_riesz = false;
    bool is_g_onb = false;
    FrameBounds bounds;
    std::optional<RieszBounds> riesz_bounds;
};

/// Family of vectors psi_{i,k} indexed by (block, row) pairs.
struct VectorFrame {
    Eigen::Index h_dim = 0;
    std::vector<CVector> vectors;
    std::vector<std::pair<std::size_t, std::size_t>> indices;
};

// ---------------------------------------------------------------------------

/// Stacked analysis matrix T: the blocks on top of each other, (sum d_i) x d.
[[nodiscard]] inline CMatrix analysis_matrix(const GFrame& f)
{
    CMatrix t(f.total_rows(), f.h_dim());
    Eigen::Index row = 0;
    for (const auto& b : f.blocks()) {
        t.middleRows(row, b.rows()) = b;
        row += b.rows();
    }
    return t;
}

/// Splits a stacked (sum d_i) x d matrix back into blocks.
[[nodiscard]] inline GFrame from_stacked(const CMatrix& t, const std::vector<Eigen::Index>& partition,
                                         std::optional<std::string> label = std::nullopt)
{
    const Eigen::Index total = std::accumulate(partition.begin(), partition.end(), Eigen::Index{0});
    if (total != t.rows()) {
        throw Error(ErrorKind::BadPartition, "partition does not match the stacked matrix rows");
    }
    std::vector<CMatrix> blocks;
    blocks.reserve(partition.size());
    Eigen::Index row = 0;
    for (Eigen::Index di : partition) {
        if (di < 1) {
            throw Error(ErrorKind::BadPartition, "partition entries must be positive");
        }
        blocks.emplace_back(t.middleRows(row, di));
        row += di;
    }
    return GFrame(t.cols(), std::move(blocks), std::move(label));
}

/// S = sum_i L_i^H L_i.
[[nodiscard]] inline CMatrix frame_operator(const GFrame& f)
{
    CMatrix s = CMatrix::Zero(f.h_dim(), f.h_dim());
    for (const auto& b : f.blocks()) {
        s.noalias() += b.adjoint() * b;
    }
    return hermitian_part(s);
}

/// Optimal bounds of a positive semidefinite operator, with the tight /
/// Parseval classification.
[[nodiscard]] inline FrameBounds bounds_from_operator(const CMatrix& s)
{
    const SpectralRange r = spectral_range(s);
    FrameBounds fb;
    fb.lower = std::max(r.lambda_min, 0.0);
    fb.upper = std::max(r.lambda_max, fb.lower);
    if (fb.lower <= tol::rank) {
        fb.classification = FrameClass::BesselOnly;
    } else if (std::abs(fb.upper - fb.lower) <= tol::classify * fb.upper) {
        fb.classification = std::abs(fb.upper - 1.0) <= tol::classify ? FrameClass::ParsevalGFrame
                                                                       : FrameClass::TightGFrame;
    } else {
        fb.classification = FrameClass::GFrame;
    }
    return fb;
}

[[nodiscard]] inline FrameBounds frame_bounds(const GFrame& f)
{
    return bounds_from_operator(frame_operator(f));
}

namespace detail {

// Shared predicate logic, driven by the frame operator and the stacked
// analysis matrix only.
inline ClassificationReport classify_stacked(const CMatrix& s, const CMatrix& t)
{
    ClassificationReport rep;
    rep.bounds = bounds_from_operator(s);
    rep.is_g_bessel = true;
    rep.is_g_frame = rep.bounds.classification != FrameClass::BesselOnly;
    rep.is_tight = rep.bounds.classification == FrameClass::TightGFrame ||
                   rep.bounds.classification == FrameClass::ParsevalGFrame;
    rep.is_parseval = rep.bounds.classification == FrameClass::ParsevalGFrame;

    const RVector sv = singular_values(t);
    const Eigen::Index d = t.cols();
    const double smin = sv.size() >= d ? sv(d - 1) : 0.0;
    rep.is_g_complete = sv.size() >= d && smin * smin > tol::rank;

    if (t.rows() == d && rep.is_g_complete) {
        rep.is_g_riesz = true;
        rep.riesz_bounds = RieszBounds{smin * smin, sv(0) * sv(0)};
        rep.is_g_onb = unitarity_defect(t) <= tol::classify;
    }
    return rep;
}

}  // namespace detail

[[nodiscard]] inline ClassificationReport classify(const GFrame& f)
{
    return detail::classify_stacked(frame_operator(f), analysis_matrix(f));
}

/// Blocks L_i S^{-1}.
[[nodiscard]] inline GFrame canonical_dual(const GFrame& f)
{
    const CMatrix s = frame_operator(f);
    const SpectralRange r = spectral_range(s);
    if (r.lambda_min <= tol::rank) {
        std::ostringstream os;
        os << "lambda_min(S) = " << r.lambda_min << " <= " << tol::rank;
        throw Error(ErrorKind::NotAFrame, os.str());
    }
    const CMatrix s_inv = hermitian_part(s.llt().solve(identity(f.h_dim())));
    std::vector<CMatrix> blocks;
    blocks.reserve(f.size());
    for (const auto& b : f.blocks()) {
        blocks.emplace_back(b * s_inv);
    }
    return GFrame(f.h_dim(), std::move(blocks));
}

/// Frobenius norm of sum_i D_i^H L_i - I.
[[nodiscard]] inline double duality_defect(const GFrame& f, const GFrame& d)
{
    if (!f.same_shape(d)) {
        throw Error(ErrorKind::ShapeMismatch, "frames differ in h_dim or block shapes");
    }
    CMatrix acc = -identity(f.h_dim());
    for (std::size_t i = 0; i < f.size(); ++i) {
        acc.noalias() += d.block(i).adjoint() * f.block(i);
    }
    return acc.norm();
}

[[nodiscard]] inline bool verify_duality(const GFrame& f, const GFrame& d)
{
    return duality_defect(f, d) <= tol::dual;
}

/// psi_{i,k} is the conjugate transpose of row k of block i.
[[nodiscard]] inline VectorFrame induced_frame(const GFrame& f)
{
    VectorFrame v;
    v.h_dim = f.h_dim();
    for (std::size_t i = 0; i < f.size(); ++i) {
        const CMatrix& b = f.block(i);
        for (Eigen::Index k = 0; k < b.rows(); ++k) {
            v.vectors.emplace_back(b.row(k).adjoint());
            v.indices.emplace_back(i, static_cast<std::size_t>(k));
        }
    }
    return v;
}

/// Groups consecutive vectors into blocks; block i's rows are the conjugate
/// transposes of the vectors in group i.
[[nodiscard]] inline GFrame gframe_from_vector_frame(const VectorFrame& v, const std::vector<Eigen::Index>& partition)
{
    const Eigen::Index total = std::accumulate(partition.begin(), partition.end(), Eigen::Index{0});
    if (partition.empty() || total != static_cast<Eigen::Index>(v.vectors.size())) {
        throw Error(ErrorKind::BadPartition, "partition must sum to the number of vectors");
    }
    std::vector<CMatrix> blocks;
    std::size_t next = 0;
    for (Eigen::Index di : partition) {
        if (di < 1) {
            throw Error(ErrorKind::BadPartition, "partition entries must be positive");
        }
        CMatrix b(di, v.h_dim);
        for (Eigen::Index k = 0; k < di; ++k) {
            const CVector& psi = v.vectors[next++];
            if (psi.size() != v.h_dim) {
                throw Error(ErrorKind::ShapeMismatch, "vector length differs from h_dim");
            }
            b.row(k) = psi.adjoint();
        }
        blocks.push_back(std::move(b));
    }
    return GFrame(v.h_dim, std::move(blocks));
}

/// sum_{i,k} psi_{i,k} psi_{i,k}^H, accumulated vector by vector.
[[nodiscard]] inline CMatrix vector_frame_operator(const VectorFrame& v)
{
    CMatrix s = CMatrix::Zero(v.h_dim, v.h_dim);
    for (const auto& psi : v.vectors) {
        s.noalias() += psi * psi.adjoint();
    }
    return hermitian_part(s);
}

/// Frame / Bessel / tight / Riesz / orthonormal-basis predicates of an
/// ordinary vector family, computed from the vectors directly.
[[nodiscard]] inline ClassificationReport classify_vector_frame(const VectorFrame& v)
{
    CMatrix t(static_cast<Eigen::Index>(v.vectors.size()), v.h_dim);
    for (std::size_t j = 0; j < v.vectors.size(); ++j) {
        t.row(static_cast<Eigen::Index>(j)) = v.vectors[j].adjoint();
    }
    return detail::classify_stacked(vector_frame_operator(v), t);
}

// Small constructors used throughout.

/// Blocks e_i^T for i < d: the standard g-orthonormal basis of C^d.
[[nodiscard]] inline GFrame identity_gframe(Eigen::Index d)
{
    std::vector<CMatrix> blocks;
    for (Eigen::Index i = 0; i < d; ++i) {
        blocks.emplace_back(identity(d).row(i));
    }
    return GFrame(d, std::move(blocks));
}

[[nodiscard]] inline GFrame scaled(const GFrame& f, complex c)
{
    std::vector<CMatrix> blocks;
    for (const auto& b : f.blocks()) {
        blocks.emplace_back(c * b);
    }
    return GFrame(f.h_dim(), std::move(blocks), f.label());
}

/// Blocks c_i L_i.
[[nodiscard]] inline GFrame scaled_blocks(const GFrame& f, const std::vector<complex>& c)
{
    if (c.size() != f.size()) {
        throw Error(ErrorKind::ShapeMismatch, "one coefficient per block required");
    }
    std::vector<CMatrix> blocks;
    for (std::size_t i = 0; i < f.size(); ++i) {
        blocks.emplace_back(c[i] * f.block(i));
    }
    return GFrame(f.h_dim(), std::move(blocks));
}

/// Blockwise difference A_i - B_i.
[[nodiscard]] inline GFrame blockwise_difference(const GFrame& a, const GFrame& b)
{
    if (!a.same_shape(b)) {
        throw Error(ErrorKind::ShapeMismatch, "frames differ in h_dim or block shapes");
    }
    std::vector<CMatrix> blocks;
    for (std::size_t i = 0; i < a.size(); ++i) {
        blocks.emplace_back(a.block(i) - b.block(i));
    }
    return GFrame(a.h_dim(), std::move(blocks));
}

/// Blocks L_i G (right composition with an operator on H).
[[nodiscard]] inline GFrame composed(const GFrame& f, const CMatrix& g)
{
    if (g.rows() != f.h_dim()) {
        throw Error(ErrorKind::ShapeMismatch, "operator rows must equal h_dim");
    }
    std::vector<CMatrix> blocks;
    for (const auto& b : f.blocks()) {
        blocks.emplace_back(b * g);
    }
    return GFrame(g.cols(), std::move(blocks));
}

}  // namespace gframe
