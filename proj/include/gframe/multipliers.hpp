#pragma once

// g-Bessel multipliers M_{m,L,T} = sum_i m_i L_i^H T_i, their norm bound, and
// certified inversion. Every invert_* routine checks the hypotheses of the
// construction it applies with optimal frame bounds, returns the inverse
// together with a bracket [lower, upper] on |M^{-1}|, and, where the inverse
// is a Neumann-type series, the contraction factor q that bounds its tail.

#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "gframe/gframe.hpp"
#include "gframe/weights.hpp"

namespace gframe {

enum class MultiplierRule {
    Bijection,           // T_i = L_i G, sign-definite weights
    DualPerturbation,    // weights near 1 against an arbitrary dual
    CanonicalDual,       // weights near 1 against the canonical dual
    BesselPerturbation,  // T - L small in Bessel bound
    MuPerturbation,      // m T - L small
    DualMuPerturbation,  // m T - D small for a dual D
    Direct,
};

[[nodiscard]] constexpr std::string_view to_string(MultiplierRule r) noexcept
{
    switch (r) {
    case MultiplierRule::Bijection: return "bijection";
    case MultiplierRule::DualPerturbation: return "dual-neumann";
    case MultiplierRule::CanonicalDual: return "canonical";
    case MultiplierRule::BesselPerturbation: return "bessel-perturb";
    case MultiplierRule::MuPerturbation: return "mu-perturb";
    case MultiplierRule::DualMuPerturbation: return "dual-mu";
    case MultiplierRule::Direct: return "direct";
    }
    return "unknown";
}

/// Which operand sits on the synthesis side: M_{m,L,T} or M_{m,T,L}.
enum class Order { LambdaTheta, ThetaLambda };

struct MultiplierCertificate {
    MultiplierRule rule = MultiplierRule::Direct;
    Order order = Order::LambdaTheta;
    std::vector<std::pair<std::string, double>> hypothesis_values;
    double inverse_norm_lower = 0.0;
    double inverse_norm_upper = std::numeric_limits<double>::infinity();
    /// Number of series terms summed (powers 0..K); zero for closed forms.
    int series_terms = 0;
    /// Norm bound on the series ratio operator; zero for closed forms.
    double contraction = 0.0;
    /// Bound on the norm of the series' right factor.
    double tail_scale = 0.0;
    /// |M M^{-1} - I|_F.
    double residual = 0.0;

    /// A-priori bound on |M^{-1} - (partial sum through power k)|.
    [[nodiscard]] double predicted_tail(int k) const
    {
        return tail_scale * std::pow(contraction, k + 1) / (1.0 - contraction);
    }

    [[nodiscard]] double hypothesis(std::string_view name) const
    {
        for (const auto& [key, value] : hypothesis_values) {
            if (key == name) {
                return value;
            }
        }
        throw std::out_of_range("no hypothesis value named " + std::string(name));
    }
};

struct MultiplierInverse {
    CMatrix inverse;
    MultiplierCertificate certificate;
};

/// Called with (k, partial sum through power k) after every series term.
using SeriesObserver = std::function<void(int, const CMatrix&)>;

inline constexpr double default_series_tol = 1e-12;

// ---------------------------------------------------------------------------

[[nodiscard]] inline CMatrix multiplier(const WeightSequence& m, const GFrame& synthesis, const GFrame& analysis)
{
    if (!synthesis.same_shape(analysis)) {
        throw Error(ErrorKind::ShapeMismatch, "multiplier operands differ in h_dim or block shapes");
    }
    if (m.size() != synthesis.size()) {
        throw Error(ErrorKind::ShapeMismatch, "one weight per block required");
    }
    CMatrix out = CMatrix::Zero(synthesis.h_dim(), synthesis.h_dim());
    for (std::size_t i = 0; i < synthesis.size(); ++i) {
        out.noalias() += m[i] * (synthesis.block(i).adjoint() * analysis.block(i));
    }
    return out;
}

/// sqrt(B_L B_T) |m|_inf with optimal upper bounds.
[[nodiscard]] inline double multiplier_norm_bound(const WeightSequence& m, const GFrame& l, const GFrame& t)
{
    if (!l.same_shape(t) || m.size() != l.size()) {
        throw Error(ErrorKind::ShapeMismatch, "multiplier operands differ in shape");
    }
    return std::sqrt(frame_bounds(l).upper * frame_bounds(t).upper) * m.norm_inf();
}

/// Per-vector weights m'_{i,k} = m_i.
[[nodiscard]] inline std::vector<complex> replicate_weights(const WeightSequence& m,
                                                            const std::vector<Eigen::Index>& partition)
{
    if (m.size() != partition.size()) {
        throw Error(ErrorKind::ShapeMismatch, "one weight per block required");
    }
    std::vector<complex> out;
    for (std::size_t i = 0; i < partition.size(); ++i) {
        out.insert(out.end(), static_cast<std::size_t>(partition[i]), m[i]);
    }
    return out;
}

/// Vector-frame multiplier f -> sum_j w_j <f, phi_j> psi_j.
[[nodiscard]] inline CMatrix vector_multiplier(const std::vector<complex>& w, const VectorFrame& psi,
                                               const VectorFrame& phi)
{
    if (psi.h_dim != phi.h_dim || psi.vectors.size() != phi.vectors.size() || w.size() != psi.vectors.size()) {
        throw Error(ErrorKind::ShapeMismatch, "vector multiplier operands differ in shape");
    }
    CMatrix out = CMatrix::Zero(psi.h_dim, psi.h_dim);
    for (std::size_t j = 0; j < w.size(); ++j) {
        out.noalias() += w[j] * (psi.vectors[j] * phi.vectors[j].adjoint());
    }
    return out;
}

namespace detail {

inline CMatrix oriented_multiplier(const WeightSequence& m, const GFrame& l, const GFrame& t, Order order)
{
    return order == Order::LambdaTheta ? multiplier(m, l, t) : multiplier(m, t, l);
}

[[noreturn]] inline void hypothesis_failed(const std::string& inequality, const std::string& detail)
{
    throw Error(ErrorKind::HypothesisFailed, "violated inequality " + inequality + " (" + detail + ")");
}

inline std::string fmt(std::initializer_list<std::pair<const char*, double>> items)
{
    std::ostringstream os;
    os.precision(10);
    bool first = true;
    for (const auto& [k, v] : items) {
        os << (first ? "" : ", ") << k << " = " << v;
        first = false;
    }
    return os.str();
}

inline void require_sign_definite(const WeightSequence& m)
{
    if (!m.is_real()) {
        throw Error(ErrorKind::ComplexWeight, "weights must be real for this construction");
    }
    if (!m.all_positive() && !m.all_negative()) {
        throw Error(ErrorKind::MixedSigns, "weights must be all positive or all negative");
    }
}

inline FrameBounds require_frame(const GFrame& f, std::string_view what)
{
    const FrameBounds fb = frame_bounds(f);
    if (fb.lower <= tol::rank) {
        std::ostringstream os;
        os << what << " is not a g-frame (lower bound " << fb.lower << ")";
        throw Error(ErrorKind::NotAFrame, os.str());
    }
    return fb;
}

inline CMatrix hermitian_inverse(const CMatrix& s)
{
    return hermitian_part(s.llt().solve(identity(s.rows())));
}

// Sums sum_{k=0}^{K} ratio^k * right with the smallest K whose a-priori tail
// tail_scale q^{K+1} / (1 - q) is at most tol.
inline CMatrix series_sum(const CMatrix& ratio, const CMatrix& right, MultiplierCertificate& cert, double tol,
                          const SeriesObserver& observer)
{
    CMatrix term = right;
    CMatrix sum = right;
    int k = 0;
    if (observer) {
        observer(k, sum);
    }
    while (cert.predicted_tail(k) > tol) {
        if (k + 1 >= tol::max_series_terms) {
            throw Error(ErrorKind::MaxIterations, "series did not reach the requested tolerance");
        }
        term = ratio * term;
        sum += term;
        ++k;
        if (observer) {
            observer(k, sum);
        }
    }
    cert.series_terms = k + 1;
    return sum;
}

inline void finish(MultiplierInverse& out, const CMatrix& m)
{
    out.certificate.residual = (m * out.inverse - identity(m.rows())).norm();
}

inline MultiplierInverse dual_series_inverse(const WeightSequence& m, const GFrame& l, const GFrame& d, Order order,
                                             double q, double tol, const SeriesObserver& observer,
                                             MultiplierCertificate cert)
{
    std::vector<complex> shifted;
    for (const complex& v : m.values()) {
        shifted.push_back(1.0 - v);
    }
    const WeightSequence m_shift(std::move(shifted));
    const CMatrix ratio = oriented_multiplier(m_shift, l, d, order);

    cert.order = order;
    cert.contraction = q;
    cert.tail_scale = 1.0;
    cert.inverse_norm_lower = 1.0 / (1.0 + q);
    cert.inverse_norm_upper = 1.0 / (1.0 - q);

    MultiplierInverse out;
    out.certificate = std::move(cert);
    out.inverse = series_sum(ratio, identity(l.h_dim()), out.certificate, tol, observer);
    finish(out, oriented_multiplier(m, l, d, order));
    return out;
}

inline double max_distance_from_one(const WeightSequence& m)
{
    double lambda = 0.0;
    for (const complex& v : m.values()) {
        lambda = std::max(lambda, std::abs(1.0 - v));
    }
    return lambda;
}

}  // namespace detail

/// Closed-form inverse when T_i = L_i G and m is sign-definite:
/// M^{-1} = +-G^{-1} S^{-1} with S the frame operator of {sqrt|m_i| L_i}.
[[nodiscard]] inline MultiplierInverse invert_via_bijection(const WeightSequence& m, const GFrame& l, const CMatrix& g)
{
    if (m.size() != l.size()) {
        throw Error(ErrorKind::ShapeMismatch, "one weight per block required");
    }
    require_finite(g, "G");
    if (g.rows() != l.h_dim() || g.cols() != l.h_dim()) {
        throw Error(ErrorKind::ShapeMismatch, "G must be h_dim x h_dim");
    }
    detail::require_sign_definite(m);
    const double g_min = smallest_singular_value(g);
    if (g_min <= tol::rank) {
        std::ostringstream os;
        os << "sigma_min(G) = " << g_min;
        throw Error(ErrorKind::SingularG, os.str());
    }
    const FrameBounds lb = detail::require_frame(l, "Lambda");
    const SemiNormBounds sn = *m.semi_norm_bounds();

    std::vector<complex> roots;
    for (double v : m.magnitudes()) {
        roots.emplace_back(std::sqrt(v));
    }
    const CMatrix s_m = frame_operator(scaled_blocks(l, roots));
    const double sign = m.all_positive() ? 1.0 : -1.0;

    MultiplierInverse out;
    out.inverse = sign * g.partialPivLu().solve(detail::hermitian_inverse(s_m));
    const double g_norm = operator_norm(g);
    auto& cert = out.certificate;
    cert.rule = MultiplierRule::Bijection;
    cert.hypothesis_values = {{"a", sn.a},          {"b", sn.b},          {"A_L", lb.lower},
                              {"B_L", lb.upper},    {"norm_G", g_norm}, {"norm_G_inv", 1.0 / g_min}};
    cert.inverse_norm_lower = 1.0 / (sn.b * lb.upper * g_norm);
    cert.inverse_norm_upper = 1.0 / (g_min * sn.a * lb.lower);
    detail::finish(out, multiplier(m, l, composed(l, g)));
    return out;
}

/// Neumann inverse sum_k (M_{1-m,L,D})^k for weights within lambda of 1,
/// where lambda sqrt(B_L B_D) < 1 and D is a dual of L.
[[nodiscard]] inline MultiplierInverse invert_dual_neumann(const WeightSequence& m, const GFrame& l, const GFrame& d,
                                                           double tol = default_series_tol,
                                                           Order order = Order::LambdaTheta,
                                                           const SeriesObserver& observer = {})
{
    if (!l.same_shape(d) || m.size() != l.size()) {
        throw Error(ErrorKind::ShapeMismatch, "weights, frame and dual differ in shape");
    }
    const double defect = duality_defect(l, d);
    if (defect > tol::dual) {
        std::ostringstream os;
        os << "|sum D_i^H L_i - I|_F = " << defect;
        throw Error(ErrorKind::NotDual, os.str());
    }
    const double lambda = detail::max_distance_from_one(m);
    const double b_l = frame_bounds(l).upper;
    const double b_d = frame_bounds(d).upper;
    const double q = lambda * std::sqrt(b_l * b_d);
    if (q >= 1.0) {
        detail::hypothesis_failed("lambda * sqrt(B_L * B_D) < 1",
                                  detail::fmt({{"lambda", lambda}, {"B_L", b_l}, {"B_D", b_d}, {"product", q}}));
    }
    MultiplierCertificate cert;
    cert.rule = MultiplierRule::DualPerturbation;
    cert.hypothesis_values = {{"lambda", lambda}, {"B_L", b_l}, {"B_D", b_d}};
    return detail::dual_series_inverse(m, l, d, order, q, tol, observer, std::move(cert));
}

/// Neumann inverse against the canonical dual, valid for lambda < sqrt(A_L / B_L).
[[nodiscard]] inline MultiplierInverse invert_canonical_dual(const WeightSequence& m, const GFrame& l,
                                                             double tol = default_series_tol,
                                                             Order order = Order::LambdaTheta,
                                                             const SeriesObserver& observer = {})
{
    if (m.size() != l.size()) {
        throw Error(ErrorKind::ShapeMismatch, "one weight per block required");
    }
    const FrameBounds lb = detail::require_frame(l, "Lambda");
    const double lambda = detail::max_distance_from_one(m);
    const double limit = std::sqrt(lb.lower / lb.upper);
    if (lambda >= limit) {
        detail::hypothesis_failed("lambda < sqrt(A_L / B_L)",
                                  detail::fmt({{"lambda", lambda}, {"A_L", lb.lower}, {"B_L", lb.upper},
                                               {"sqrt(A_L/B_L)", limit}}));
    }
    const double q = lambda * std::sqrt(lb.upper / lb.lower);
    MultiplierCertificate cert;
    cert.rule = MultiplierRule::CanonicalDual;
    cert.hypothesis_values = {{"lambda", lambda}, {"A_L", lb.lower}, {"B_L", lb.upper}};
    return detail::dual_series_inverse(m, l, canonical_dual(l), order, q, tol, observer, std::move(cert));
}

/// Series inverse when T - L has a small Bessel bound and m is
/// sign-definite with a <= |m_i| <= b:
/// requires B_{T-L} < A_L^2 / B_L and b / a < A_L / sqrt(B_{T-L} B_L).
[[nodiscard]] inline MultiplierInverse invert_bessel_perturb(const WeightSequence& m, const GFrame& l, const GFrame& t,
                                                             double tol = default_series_tol,
                                                             Order order = Order::LambdaTheta,
                                                             const SeriesObserver& observer = {})
{
    if (!l.same_shape(t) || m.size() != l.size()) {
        throw Error(ErrorKind::ShapeMismatch, "weights and frames differ in shape");
    }
    detail::require_sign_definite(m);
    const FrameBounds lb = detail::require_frame(l, "Lambda");
    const SemiNormBounds sn = *m.semi_norm_bounds();
    const double a_l = lb.lower;
    const double b_l = lb.upper;
    const double b_diff = frame_bounds(blockwise_difference(t, l)).upper;

    if (b_diff >= a_l * a_l / b_l) {
        detail::hypothesis_failed("B_{T-L} < A_L^2 / B_L",
                                  detail::fmt({{"B_{T-L}", b_diff}, {"A_L^2/B_L", a_l * a_l / b_l}}));
    }
    const double cross = std::sqrt(b_l * b_diff);
    if (sn.b * cross >= sn.a * a_l) {
        detail::hypothesis_failed("b / a < A_L / sqrt(B_{T-L} B_L)",
                                  detail::fmt({{"b/a", sn.b / sn.a},
                                               {"A_L/sqrt(B_{T-L} B_L)",
                                                cross > 0 ? a_l / cross : std::numeric_limits<double>::infinity()}}));
    }

    std::vector<complex> roots;
    for (double v : m.magnitudes()) {
        roots.emplace_back(std::sqrt(v));
    }
    const CMatrix s_m = frame_operator(scaled_blocks(l, roots));
    const CMatrix s_m_inv = detail::hermitian_inverse(s_m);
    const CMatrix mult = detail::oriented_multiplier(m, l, t, order);
    const bool positive = m.all_positive();

    MultiplierInverse out;
    auto& cert = out.certificate;
    cert.rule = MultiplierRule::BesselPerturbation;
    cert.order = order;
    cert.hypothesis_values = {{"a", sn.a},
                              {"b", sn.b},
                              {"A_L", a_l},
                              {"B_L", b_l},
                              {"B_{T-L}", b_diff},
                              {"A_T", frame_bounds(t).lower}};
    cert.contraction = sn.b * cross / (sn.a * a_l);
    cert.tail_scale = 1.0 / (sn.a * a_l);
    cert.inverse_norm_lower = 1.0 / (sn.b * b_l + sn.b * cross);
    cert.inverse_norm_upper = 1.0 / (sn.a * a_l - sn.b * cross);

    const CMatrix ratio = positive ? CMatrix(s_m_inv * (s_m - mult)) : CMatrix(s_m_inv * (s_m + mult));
    const CMatrix right = positive ? s_m_inv : CMatrix(-s_m_inv);
    out.inverse = detail::series_sum(ratio, right, cert, tol, observer);
    detail::finish(out, mult);
    return out;
}

namespace detail {

// mu = lambda_max of sum_i (w_i T_i - R_i)^H (w_i T_i - R_i), optionally
// replaced by a caller-supplied upper bound.
inline double perturbation_mu(const WeightSequence& w, const GFrame& t, const GFrame& reference,
                              std::optional<double> claimed)
{
    const double mu = frame_bounds(blockwise_difference(scaled_blocks(t, w.values()), reference)).upper;
    if (!claimed) {
        return mu;
    }
    if (!std::isfinite(*claimed) || *claimed < 0.0 || *claimed < mu - 1e-12 * (1.0 + mu)) {
        hypothesis_failed("sum |(m_i T_i - R_i) f|^2 <= mu |f|^2",
                          fmt({{"claimed mu", *claimed}, {"actual mu", mu}}));
    }
    return *claimed;
}

}  // namespace detail

/// Series inverse when sum |(m_i T_i - L_i) f|^2 <= mu |f|^2 with
/// mu < A_L^2 / B_L. For the reversed order the conjugate weights enter the
/// perturbation, so complex weights remain covered.
[[nodiscard]] inline MultiplierInverse invert_mu_perturb(const WeightSequence& m, const GFrame& l, const GFrame& t,
                                                         double tol = default_series_tol,
                                                         Order order = Order::LambdaTheta,
                                                         std::optional<double> mu_claim = std::nullopt,
                                                         const SeriesObserver& observer = {})
{
    if (!l.same_shape(t) || m.size() != l.size()) {
        throw Error(ErrorKind::ShapeMismatch, "weights and frames differ in shape");
    }
    const FrameBounds lb = detail::require_frame(l, "Lambda");
    const double a_l = lb.lower;
    const double b_l = lb.upper;
    const WeightSequence w = order == Order::LambdaTheta ? m : m.conjugated();
    const double mu = detail::perturbation_mu(w, t, l, mu_claim);
    if (mu >= a_l * a_l / b_l) {
        detail::hypothesis_failed("mu < A_L^2 / B_L", detail::fmt({{"mu", mu}, {"A_L^2/B_L", a_l * a_l / b_l}}));
    }

    const CMatrix s = frame_operator(l);
    const CMatrix s_inv = detail::hermitian_inverse(s);
    const CMatrix mult = detail::oriented_multiplier(m, l, t, order);
    const double cross = std::sqrt(mu * b_l);

    MultiplierInverse out;
    auto& cert = out.certificate;
    cert.rule = MultiplierRule::MuPerturbation;
    cert.order = order;
    cert.hypothesis_values = {{"mu", mu},
                              {"A_L", a_l},
                              {"B_L", b_l},
                              {"A_mT", frame_bounds(scaled_blocks(t, m.values())).lower}};
    cert.contraction = cross / a_l;
    cert.tail_scale = 1.0 / a_l;
    cert.inverse_norm_lower = 1.0 / (b_l + cross);
    cert.inverse_norm_upper = 1.0 / (a_l - cross);
    out.inverse = detail::series_sum(CMatrix(s_inv * (s - mult)), s_inv, cert, tol, observer);
    detail::finish(out, mult);
    return out;
}

/// Neumann inverse sum_k (I - M)^k when sum |(m_i T_i - D_i) f|^2 <= mu |f|^2
/// for a dual D of L and mu < 1 / B_L.
[[nodiscard]] inline MultiplierInverse invert_dual_mu_perturb(const WeightSequence& m, const GFrame& l,
                                                              const GFrame& d, const GFrame& t,
                                                              double tol = default_series_tol,
                                                              Order order = Order::LambdaTheta,
                                                              std::optional<double> mu_claim = std::nullopt,
                                                              const SeriesObserver& observer = {})
{
    if (!l.same_shape(t) || !l.same_shape(d) || m.size() != l.size()) {
        throw Error(ErrorKind::ShapeMismatch, "weights and frames differ in shape");
    }
    const double defect = duality_defect(l, d);
    if (defect > tol::dual) {
        std::ostringstream os;
        os << "|sum D_i^H L_i - I|_F = " << defect;
        throw Error(ErrorKind::NotDual, os.str());
    }
    const double b_l = frame_bounds(l).upper;
    const WeightSequence w = order == Order::LambdaTheta ? m : m.conjugated();
    const double mu = detail::perturbation_mu(w, t, d, mu_claim);
    if (mu >= 1.0 / b_l) {
        detail::hypothesis_failed("mu < 1 / B_L", detail::fmt({{"mu", mu}, {"1/B_L", 1.0 / b_l}}));
    }
    const CMatrix mult = detail::oriented_multiplier(m, l, t, order);
    const double q = std::sqrt(mu * b_l);

    MultiplierInverse out;
    auto& cert = out.certificate;
    cert.rule = MultiplierRule::DualMuPerturbation;
    cert.order = order;
    cert.hypothesis_values = {{"mu", mu}, {"B_L", b_l}, {"A_mT", frame_bounds(scaled_blocks(t, m.values())).lower}};
    cert.contraction = q;
    cert.tail_scale = 1.0;
    cert.inverse_norm_lower = 1.0 / (1.0 + q);
    cert.inverse_norm_upper = 1.0 / (1.0 - q);
    const CMatrix id = identity(l.h_dim());
    out.inverse = detail::series_sum(CMatrix(id - mult), id, cert, tol, observer);
    detail::finish(out, mult);
    return out;
}

/// Which family the lower bound refers to: m L (companion bound B_T) or
/// m T (companion bound B_L).
enum class LowerBoundSide { WeightedLambda, WeightedTheta };

/// 1 / (B_other |M^{-1}|^2): a lower frame bound for the weighted family on
/// the requested side whenever M is invertible.
[[nodiscard]] inline double lower_bound_from_invertible(const CMatrix& m, double b_other,
                                                        LowerBoundSide side = LowerBoundSide::WeightedLambda)
{
    static_cast<void>(side);  // the formula is symmetric; the side only names the family
    require_finite(m);
    require_square(m);
    if (!(b_other > 0.0)) {
        throw Error(ErrorKind::NonPositiveInput, "companion upper bound must be positive");
    }
    const double smin = smallest_singular_value(m);
    if (smin <= tol::rank) {
        std::ostringstream os;
        os << "multiplier is singular (sigma_min = " << smin << ")";
        throw Error(ErrorKind::Singular, os.str());
    }
    return smin * smin / b_other;
}

}  // namespace gframe
