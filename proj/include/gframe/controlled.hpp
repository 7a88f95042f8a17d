#pragma once

// Controlled g-frames: the form f -> sum_i <L_i C^H f, L_i f> = <S C^H f, f>
// for an invertible control operator C.

#include <optional>
#include <random>
#include <sstream>

#include "gframe/gframe.hpp"

namespace gframe {

class ControlOperator {
public:
    explicit ControlOperator(CMatrix matrix) : matrix_(std::move(matrix))
    {
        require_finite(matrix_, "control operator");
        require_square(matrix_, "control operator");
        const double smin = smallest_singular_value(matrix_);
        if (smin <= tol::rank) {
            std::ostringstream os;
            os << "control operator is not invertible (sigma_min = " << smin << ")";
            throw Error(ErrorKind::Singular, os.str());
        }
        self_adjoint_ = hermitian_defect(matrix_) <= tol::herm;
        if (self_adjoint_) {
            bounds_ = spectral_range(matrix_);
            positive_ = bounds_->lambda_min > 0.0;
        }
    }

    [[nodiscard]] const CMatrix& matrix() const noexcept { return matrix_; }
    [[nodiscard]] Eigen::Index dim() const noexcept { return matrix_.rows(); }
    [[nodiscard]] bool is_self_adjoint() const noexcept { return self_adjoint_; }
    [[nodiscard]] bool is_positive() const noexcept { return positive_; }
    /// (m_C, M_C); present only for self-adjoint C.
    [[nodiscard]] const std::optional<SpectralRange>& bounds() const noexcept { return bounds_; }

private:
    CMatrix matrix_;
    bool self_adjoint_ = false;
    bool positive_ = false;
    std::optional<SpectralRange> bounds_;
};

struct ControlledBounds {
    double m_cl = 0.0;
    double big_m_cl = 0.0;
    bool is_controlled_frame = false;
    /// S C^H is not Hermitian, so the form takes non-real values.
    bool non_self_adjoint_form = false;
};

namespace detail {

inline void require_control_shape(const GFrame& f, const ControlOperator& c)
{
    if (c.dim() != f.h_dim()) {
        throw Error(ErrorKind::ShapeMismatch, "control operator dimension differs from h_dim");
    }
}

inline double commutation_threshold(const CMatrix& s, const CMatrix& c)
{
    return tol::commute * (1.0 + operator_norm(s) * operator_norm(c));
}

}  // namespace detail

/// S_C = S C^H.
[[nodiscard]] inline CMatrix controlled_frame_operator(const GFrame& f, const ControlOperator& c)
{
    detail::require_control_shape(f, c);
    return frame_operator(f) * c.matrix().adjoint();
}

[[nodiscard]] inline ControlledBounds controlled_bounds(const GFrame& f, const ControlOperator& c)
{
    detail::require_control_shape(f, c);
    const CMatrix s = frame_operator(f);
    const CMatrix sc = s * c.matrix().adjoint();
    ControlledBounds out;
    const SpectralRange r = spectral_range(hermitian_part(sc));
    out.m_cl = r.lambda_min;
    out.big_m_cl = r.lambda_max;
    out.non_self_adjoint_form = hermitian_defect(sc) > detail::commutation_threshold(s, c.matrix());
    out.is_controlled_frame = !out.non_self_adjoint_form && out.m_cl > tol::rank;
    return out;
}

struct CommutationCheck {
    bool holds = false;
    double defect = 0.0;
};

/// defect = |S C^H - C S|_F, compared against tol::commute (1 + |S| |C|).
[[nodiscard]] inline CommutationCheck verify_commutation(const GFrame& f, const ControlOperator& c)
{
    detail::require_control_shape(f, c);
    const CMatrix s = frame_operator(f);
    CommutationCheck out;
    out.defect = (s * c.matrix().adjoint() - c.matrix() * s).norm();
    out.holds = out.defect <= detail::commutation_threshold(s, c.matrix());
    return out;
}

struct ControlledEquivalence {
    bool lhs = false;  // controlled by C
    bool rhs = false;  // g-frame, C positive, C commutes with S
};

[[nodiscard]] inline ControlledEquivalence controlled_equivalence(const GFrame& f, const ControlOperator& c)
{
    if (!c.is_self_adjoint()) {
        throw Error(ErrorKind::NotSelfAdjoint, "control operator must be self-adjoint");
    }
    ControlledEquivalence out;
    out.lhs = controlled_bounds(f, c).is_controlled_frame;
    out.rhs = classify(f).is_g_frame && c.is_positive() && verify_commutation(f, c).holds;
    return out;
}

struct BoundPair {
    double lower = 0.0;
    double upper = 0.0;

    [[nodiscard]] bool contains(const SpectralRange& r, double rel_slack = 1e-9) const
    {
        return r.lambda_min >= lower * (1.0 - rel_slack) && r.lambda_max <= upper * (1.0 + rel_slack);
    }
};

struct ControlledBoundArithmetic {
    BoundPair for_s;
    BoundPair for_c;
    BoundPair for_sc;
};

/// Bounds for S, C and S_C derivable from bounds of the other two.
[[nodiscard]] inline ControlledBoundArithmetic controlled_bound_arithmetic(double m_cl, double big_m_cl, double m,
                                                                          double big_m, double m_c, double big_m_c)
{
    for (double v : {m_cl, big_m_cl, m, big_m, m_c, big_m_c}) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw Error(ErrorKind::NonPositiveInput, "all bounds must be positive and finite");
        }
    }
    return {{m_cl / big_m_c, big_m_cl / m_c}, {m_cl / big_m, big_m_cl / m}, {m * m_c, big_m * big_m_c}};
}

struct InducedControlledFrame {
    VectorFrame vectors;
    bool controlled_gram_identity = false;
    double max_defect = 0.0;
};

/// Induced vectors together with a check, on `samples` random f, that
/// sum_{i,k} <f, C psi_{i,k}> psi_{i,k} reproduces S_C f.
[[nodiscard]] inline InducedControlledFrame induced_controlled_frame(const GFrame& f, const ControlOperator& c,
                                                                     int samples = 100, std::uint64_t seed = 1)
{
    detail::require_control_shape(f, c);
    InducedControlledFrame out;
    out.vectors = induced_frame(f);
    const CMatrix sc = controlled_frame_operator(f, c);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    for (int s = 0; s < samples; ++s) {
        CVector x(f.h_dim());
        for (Eigen::Index j = 0; j < x.size(); ++j) {
            x(j) = complex(normal(rng), normal(rng));
        }
        CVector acc = CVector::Zero(f.h_dim());
        for (const CVector& psi : out.vectors.vectors) {
            const CVector c_psi = c.matrix() * psi;
            acc += c_psi.dot(x) * psi;  // <x, C psi> = (C psi)^H x
        }
        const double defect = (acc - sc * x).norm() / (1.0 + x.norm());
        out.max_defect = std::max(out.max_defect, defect);
    }
    out.controlled_gram_identity = out.max_defect <= 1e-10 * (1.0 + operator_norm(sc));
    return out;
}

}  // namespace gframe
