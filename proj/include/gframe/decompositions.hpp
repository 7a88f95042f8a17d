#pragma once

// Constructive decompositions of a g-frame through its stacked analysis
// matrix T: sums of g-orthonormal bases, normalized tight g-frames and
// g-Riesz bases. Each result carries the scalars, the component frames, the
// kind each component is certified as, and the reconstruction residual.

#include <sstream>
#include <vector>

#include "gframe/gframe.hpp"

namespace gframe {

enum class ComponentKind { GOnb, NormalizedTight, GRiesz };

[[nodiscard]] constexpr std::string_view to_string(ComponentKind k) noexcept
{
    switch (k) {
    case ComponentKind::GOnb: return "GOnb";
    case ComponentKind::NormalizedTight: return "NormalizedTight";
    case ComponentKind::GRiesz: return "GRiesz";
    }
    return "Unknown";
}

struct GFrameDecomposition {
    std::vector<complex> scalars;
    std::vector<GFrame> components;
    std::vector<ComponentKind> component_kinds;
    double reconstruction_residual = 0.0;
};

/// Stacked-matrix residual |T - sum_j c_j T_j|_F.
[[nodiscard]] inline double reconstruction_residual(const GFrame& f, const std::vector<complex>& scalars,
                                                    const std::vector<GFrame>& components)
{
    CMatrix acc = analysis_matrix(f);
    for (std::size_t j = 0; j < components.size(); ++j) {
        acc -= scalars[j] * analysis_matrix(components[j]);
    }
    return acc.norm();
}

/// Whether a classification report satisfies the requirements of a kind.
[[nodiscard]] inline bool matches_kind(const ClassificationReport& rep, ComponentKind kind)
{
    switch (kind) {
    case ComponentKind::GOnb: return rep.is_g_onb;
    case ComponentKind::NormalizedTight: return rep.is_parseval;
    case ComponentKind::GRiesz: return rep.is_g_riesz;
    }
    return false;
}

namespace detail {

inline CMatrix require_frame_matrix(const GFrame& f)
{
    const FrameBounds fb = frame_bounds(f);
    if (fb.lower <= tol::rank) {
        std::ostringstream os;
        os << "input is not a g-frame (lower bound " << fb.lower << ")";
        throw Error(ErrorKind::NotAFrame, os.str());
    }
    return analysis_matrix(f);
}

inline void require_square_structure(const GFrame& f)
{
    if (f.total_rows() != f.h_dim()) {
        std::ostringstream os;
        os << "sum of block dimensions " << f.total_rows() << " differs from dim H = " << f.h_dim();
        throw Error(ErrorKind::DimensionMismatch, os.str());
    }
}

inline GFrameDecomposition assemble(const GFrame& f, std::vector<complex> scalars, std::vector<CMatrix> stacked,
                                    std::vector<ComponentKind> kinds)
{
    GFrameDecomposition out;
    out.scalars = std::move(scalars);
    out.component_kinds = std::move(kinds);
    const auto partition = f.partition();
    for (auto& m : stacked) {
        out.components.push_back(from_stacked(m, partition));
    }
    out.reconstruction_residual = reconstruction_residual(f, out.scalars, out.components);
    return out;
}

}  // namespace detail

/// L_i = a (U_i + G_i + P_i) with three g-orthonormal bases and a = |T|.
/// Requires sum d_i = dim H.
[[nodiscard]] inline GFrameDecomposition decompose_three_gonb(const GFrame& f)
{
    detail::require_square_structure(f);
    const CMatrix t = detail::require_frame_matrix(f);
    const double a = operator_norm(t);
    UnitaryTriple u = unitary_triple_from_small_norm(t / (3.0 * a));
    return detail::assemble(f, {a, a, a}, {std::move(u.first), std::move(u.second), std::move(u.third)},
                            {ComponentKind::GOnb, ComponentKind::GOnb, ComponentKind::GOnb});
}

/// L_i = a U_i + b G_i with two g-orthonormal bases, a = b = |T| / 2.
/// Only g-Riesz bases admit such a decomposition.
[[nodiscard]] inline GFrameDecomposition decompose_two_gonb_combo(const GFrame& f)
{
    if (!classify(f).is_g_riesz) {
        throw Error(ErrorKind::NotGRiesz, "input is not a g-Riesz basis");
    }
    const CMatrix t = analysis_matrix(f);
    const double norm = operator_norm(t);
    UnitaryPair u = unitary_pair_from_contraction(t / norm);
    const complex half(norm / 2.0);
    return detail::assemble(f, {half, half}, {std::move(u.first), std::move(u.second)},
                            {ComponentKind::GOnb, ComponentKind::GOnb});
}

/// Blocks Theta_i K^H for a g-orthonormal basis Theta and a co-isometry K
/// (K K^H = I); the result is a normalized tight g-frame on the range of K.
[[nodiscard]] inline GFrame coisometry_image(const GFrame& theta, const CMatrix& k)
{
    require_finite(k, "K");
    if (k.cols() != theta.h_dim() || k.rows() > k.cols() || k.rows() < 1) {
        throw Error(ErrorKind::ShapeMismatch, "K must be d0 x d with d0 <= d = h_dim");
    }
    if (!classify(theta).is_g_onb) {
        throw Error(ErrorKind::NotGOnb, "Theta is not a g-orthonormal basis");
    }
    const double defect = (k * k.adjoint() - identity(k.rows())).norm();
    if (defect > tol::norm) {
        std::ostringstream os;
        os << "|K K^H - I|_F = " << defect;
        throw Error(ErrorKind::NotCoisometry, os.str());
    }
    return composed(theta, k.adjoint());
}

/// L_i = a (F_i + P_i) with two normalized tight g-frames and a = |T| / 2.
/// With T = V P, B = P/(2a) + i (I - (P/(2a))^2)^{1/2} is unitary and the
/// components are V B and V B^H.
[[nodiscard]] inline GFrameDecomposition decompose_two_parseval(const GFrame& f)
{
    const CMatrix t = detail::require_frame_matrix(f);
    const PolarParts polar = polar_decompose(t);
    const double norm = operator_norm(t);
    const double a = norm / 2.0;
    const CMatrix p_hat = polar.positive / norm;
    Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(p_hat));
    const CMatrix& q = es.eigenvectors();
    CVector phases(q.cols());
    for (Eigen::Index j = 0; j < q.cols(); ++j) {
        const double p = std::clamp(es.eigenvalues()(j), 0.0, 1.0);
        phases(j) = complex(p, std::sqrt(1.0 - p * p));
    }
    const CMatrix b = q * phases.asDiagonal() * q.adjoint();
    return detail::assemble(f, {a, a}, {polar.isometry * b, polar.isometry * b.adjoint()},
                            {ComponentKind::NormalizedTight, ComponentKind::NormalizedTight});
}

/// L_i = U_i + G_i with U a g-orthonormal basis and G a g-Riesz basis:
/// U = -W and G = T + W = W (P + I) for the polar factorization T = W P.
/// Requires sum d_i = dim H.
[[nodiscard]] inline GFrameDecomposition decompose_gonb_plus_griesz(const GFrame& f)
{
    detail::require_square_structure(f);
    const CMatrix t = detail::require_frame_matrix(f);
    const PolarParts polar = polar_decompose(t);
    return detail::assemble(f, {1.0, 1.0}, {CMatrix(-polar.isometry), CMatrix(t + polar.isometry)},
                            {ComponentKind::GOnb, ComponentKind::GRiesz});
}

}  // namespace gframe
