#pragma once

// Weighted g-frames {w_i L_i} and the links between weights, control
// operators and multipliers.

#include <sstream>

#include "gframe/controlled.hpp"
#include "gframe/multipliers.hpp"

namespace gframe {

/// Optimal bounds of sum_i |w_i|^2 L_i^H L_i.
[[nodiscard]] inline FrameBounds weighted_bounds(const GFrame& f, const WeightSequence& w)
{
    if (w.size() != f.size()) {
        throw Error(ErrorKind::ShapeMismatch, "one weight per block required");
    }
    return frame_bounds(scaled_blocks(f, w.values()));
}

struct WeightedVectorFrame {
    VectorFrame frame;
    std::vector<complex> weights;
};

/// Induced vectors with w'_{i,k} = w_i.
[[nodiscard]] inline WeightedVectorFrame induced_weighted_frame(const GFrame& f, const WeightSequence& w)
{
    return {induced_frame(f), replicate_weights(w, f.partition())};
}

/// Bounds of f -> sum_j |w_j|^2 |<f, psi_j>|^2 from the vectors directly.
[[nodiscard]] inline FrameBounds weighted_vector_frame_bounds(const WeightedVectorFrame& v)
{
    CMatrix s = CMatrix::Zero(v.frame.h_dim, v.frame.h_dim);
    for (std::size_t j = 0; j < v.frame.vectors.size(); ++j) {
        s.noalias() += std::norm(v.weights[j]) * (v.frame.vectors[j] * v.frame.vectors[j].adjoint());
    }
    return bounds_from_operator(hermitian_part(s));
}

struct WeightFromControl {
    WeightSequence weights;
    bool is_multiplier = false;
    /// |C - M_{w,L,dual(L)}|_F.
    double multiplier_defect = 0.0;
};

/// Recovers w_i from C L_i^H = w_i L_i^H by per-block least squares.
[[nodiscard]] inline WeightFromControl weight_from_control(const GFrame& f, const ControlOperator& c)
{
    detail::require_control_shape(f, c);
    if (!c.is_self_adjoint()) {
        throw Error(ErrorKind::NotSelfAdjoint, "control operator must be self-adjoint");
    }
    const double c_norm = operator_norm(c.matrix());
    std::vector<complex> w;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const CMatrix adj = f.block(i).adjoint();
        const double n2 = adj.squaredNorm();
        if (n2 == 0.0) {
            throw Error(ErrorKind::ZeroBlock, "block " + std::to_string(i) + " is zero; its weight is undefined");
        }
        const CMatrix image = c.matrix() * adj;
        // argmin_w |C L^H - w L^H|_F = <L^H, C L^H>_F / |L^H|_F^2
        const complex wi = (adj.adjoint() * image).trace() / n2;
        const double residual = (image - wi * adj).norm();
        if (residual > tol::eigen_relation * c_norm * std::sqrt(n2)) {
            std::ostringstream os;
            os << "C L_" << i << "^H is not proportional to L_" << i << "^H (residual " << residual << ")";
            throw Error(ErrorKind::NotEigenRelation, os.str());
        }
        if (wi.real() <= 0.0 || std::abs(wi.imag()) > tol::eigen_relation * c_norm) {
            std::ostringstream os;
            os << "weight " << i << " = " << wi << " is not real positive; the family is not controlled by C";
            throw Error(ErrorKind::HypothesisFailed, os.str());
        }
        w.emplace_back(wi.real());
    }
    WeightFromControl out{WeightSequence(std::move(w)), false, 0.0};
    out.multiplier_defect = (c.matrix() - multiplier(out.weights, f, canonical_dual(f))).norm();
    out.is_multiplier = out.multiplier_defect <= tol::inverse * (1.0 + c_norm);
    return out;
}

/// {w_i^{-1} dual(L)_i}, a dual of {w_i L_i} for real non-zero weights.
[[nodiscard]] inline GFrame weighted_dual(const GFrame& f, const WeightSequence& w)
{
    if (w.size() != f.size()) {
        throw Error(ErrorKind::ShapeMismatch, "one weight per block required");
    }
    if (!w.is_real()) {
        throw Error(ErrorKind::ComplexWeight, "weights must be real");
    }
    if (!w.semi_norm_bounds()) {
        throw Error(ErrorKind::ZeroWeight, "weights must be non-zero");
    }
    std::vector<complex> inv;
    for (const complex& v : w.values()) {
        inv.push_back(1.0 / v);
    }
    return scaled_blocks(canonical_dual(f), inv);
}

struct WeightedMultiplierChecks {
    double frame_operator_defect = 0.0;  // |M - S_{sqrt(w) L}|_F
    bool equals_frame_operator = false;
    bool hermitian = false;
    bool positive_definite = false;
    double lambda_min = 0.0;
};

namespace detail {

inline void require_positive_weights(const WeightSequence& w, std::size_t n)
{
    if (w.size() != n) {
        throw Error(ErrorKind::ShapeMismatch, "one weight per block required");
    }
    if (!w.all_positive()) {
        throw Error(ErrorKind::NonPositiveWeight, "weights must be real and positive");
    }
}

inline std::vector<complex> sqrt_weights(const WeightSequence& w)
{
    std::vector<complex> out;
    for (const complex& v : w.values()) {
        out.emplace_back(std::sqrt(v.real()));
    }
    return out;
}

}  // namespace detail

/// M_{w,L} = sum_i w_i L_i^H L_i for positive weights, with the checks that
/// it is the frame operator of {sqrt(w_i) L_i}, Hermitian and positive.
[[nodiscard]] inline std::pair<CMatrix, WeightedMultiplierChecks>
weighted_multiplier_as_frame_operator(const GFrame& f, const WeightSequence& w)
{
    detail::require_positive_weights(w, f.size());
    const CMatrix m = multiplier(w, f, f);
    WeightedMultiplierChecks checks;
    checks.frame_operator_defect = (m - frame_operator(scaled_blocks(f, detail::sqrt_weights(w)))).norm();
    checks.equals_frame_operator = checks.frame_operator_defect <= 1e-12 * (1.0 + m.norm());
    checks.hermitian = hermitian_defect(m) <= tol::herm;
    if (checks.hermitian) {
        checks.lambda_min = spectral_range(m).lambda_min;
        checks.positive_definite = checks.lambda_min > tol::rank;
    }
    return {m, checks};
}

struct WeightedEquivalence {
    bool g_frame = false;               // L is a g-frame
    bool multiplier_positive = false;   // M_{w,L} positive, self-adjoint, invertible
    bool weighted_form_bounded = false; // sum w_i |L_i f|^2 two-sided bounded
    bool sqrt_family_frame = false;     // {sqrt(w_i) L_i} is a g-frame
    bool alt_multiplier_positive = false;  // M_{w',L} positive and invertible
    bool weighted_family_frame = false;    // {w_i L_i} is a g-frame

    [[nodiscard]] bool unanimous() const
    {
        return g_frame == multiplier_positive && g_frame == weighted_form_bounded &&
               g_frame == sqrt_family_frame && g_frame == alt_multiplier_positive &&
               g_frame == weighted_family_frame;
    }
};

/// Evaluates the six equivalent conditions for positive weights w and an
/// alternative positive weight sequence w_alt.
[[nodiscard]] inline WeightedEquivalence weighted_equivalence_suite(const GFrame& f, const WeightSequence& w,
                                                                    const WeightSequence& w_alt)
{
    detail::require_positive_weights(w, f.size());
    detail::require_positive_weights(w_alt, f.size());

    auto positive_invertible = [](const CMatrix& m) {
        return hermitian_defect(m) <= tol::herm && spectral_range(m).lambda_min > tol::rank;
    };

    WeightedEquivalence out;
    out.g_frame = classify(f).is_g_frame;
    out.multiplier_positive = positive_invertible(multiplier(w, f, f));

    CMatrix form = CMatrix::Zero(f.h_dim(), f.h_dim());
    for (std::size_t i = 0; i < f.size(); ++i) {
        form.noalias() += w[i].real() * (f.block(i).adjoint() * f.block(i));
    }
    out.weighted_form_bounded = spectral_range(hermitian_part(form)).lambda_min > tol::rank;

    out.sqrt_family_frame = classify(scaled_blocks(f, detail::sqrt_weights(w))).is_g_frame;
    out.alt_multiplier_positive = positive_invertible(multiplier(w_alt, f, f));
    out.weighted_family_frame = classify(scaled_blocks(f, w.values())).is_g_frame;
    return out;
}

}  // namespace gframe
