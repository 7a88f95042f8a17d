#pragma once

// Random instances that satisfy the hypotheses of the multiplier inversions
// and of the controlled/weighted results. Each builder aims at the middle of
// the admissible region rather than its edge, so that certificates are not
// decided by roundoff.

#include <random>

#include "gframe/controlled.hpp"
#include "gframe/generate.hpp"
#include "gframe/multipliers.hpp"

namespace gframe {

struct MultiplierInstance {
    WeightSequence m;
    GFrame lambda;
    GFrame theta;                 // second operand (T, or L G for the bijection case)
    std::optional<GFrame> dual;   // a dual of lambda when the rule needs one
    std::optional<CMatrix> g;     // bijection G
};

namespace detail {

inline GFrame random_frame_for_multipliers(Eigen::Index d, Rng& rng)
{
    std::uniform_int_distribution<Eigen::Index> extra(0, 3);
    std::vector<Eigen::Index> p;
    do {  // at most 8 blocks
        p = random_partition(d + extra(rng), 3, rng);
    } while (p.size() > 8);
    return random_gframe(d, p, rng, 50.0);
}

// Random complex perturbation with frame-operator norm exactly `target`.
inline GFrame perturbation_with_bound(const GFrame& shape, double target, Rng& rng)
{
    const CMatrix e = random_complex_matrix(shape.total_rows(), shape.h_dim(), rng);
    const double n = operator_norm(e);
    return from_stacked(e * (std::sqrt(target) / n), shape.partition());
}

// Weights 1 + lambda z_i with |z_i| <= 1 and one |z_i| = 1; complex when requested.
inline WeightSequence weights_near_one(std::size_t n, double lambda, bool complex_weights, Rng& rng)
{
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * M_PI);
    std::vector<complex> w;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = i == 0 ? 1.0 : unit(rng);
        const complex z = complex_weights ? std::polar(r, phase(rng)) : complex(unit(rng) < 0.5 ? -r : r);
        w.push_back(1.0 + lambda * z);
    }
    return WeightSequence(std::move(w));
}

inline WeightSequence sign_definite_weights(std::size_t n, Rng& rng, double lo = 0.5, double hi = 2.0)
{
    std::uniform_real_distribution<double> dist(lo, hi);
    const double sign = std::bernoulli_distribution(0.5)(rng) ? 1.0 : -1.0;
    std::vector<double> w(n);
    for (double& v : w) {
        v = sign * dist(rng);
    }
    return WeightSequence::real(w);
}

inline WeightSequence nonzero_complex_weights(std::size_t n, Rng& rng)
{
    std::uniform_real_distribution<double> mag(0.5, 2.0);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * M_PI);
    std::vector<complex> w;
    for (std::size_t i = 0; i < n; ++i) {
        w.push_back(std::polar(mag(rng), phase(rng)));
    }
    return WeightSequence(std::move(w));
}

inline CMatrix well_conditioned_square(Eigen::Index d, Rng& rng)
{
    for (;;) {
        const CMatrix g = random_complex_matrix(d, d, rng);
        if (condition_number(g) <= 1e2) {
            return g;
        }
    }
}

}  // namespace detail

/// m sign-definite, T_i = L_i G with G invertible.
[[nodiscard]] inline MultiplierInstance bijection_instance(Eigen::Index d, Rng& rng)
{
    GFrame l = detail::random_frame_for_multipliers(d, rng);
    CMatrix g = detail::well_conditioned_square(d, rng);
    GFrame t = composed(l, g);
    return {detail::sign_definite_weights(l.size(), rng), std::move(l), std::move(t), std::nullopt, std::move(g)};
}

/// D a (generally non-canonical) dual, lambda sqrt(B_L B_D) = `ratio`.
[[nodiscard]] inline MultiplierInstance dual_neumann_instance(Eigen::Index d, Rng& rng, double ratio = 0.2)
{
    GFrame l = detail::random_frame_for_multipliers(d, rng);
    GFrame dual = random_dual(l, rng);
    const double lambda = ratio / std::sqrt(frame_bounds(l).upper * frame_bounds(dual).upper);
    WeightSequence m = detail::weights_near_one(l.size(), lambda, std::bernoulli_distribution(0.5)(rng), rng);
    GFrame t = dual;
    return {std::move(m), std::move(l), std::move(t), std::move(dual), std::nullopt};
}

/// lambda = ratio * sqrt(A_L / B_L).
[[nodiscard]] inline MultiplierInstance canonical_dual_instance(Eigen::Index d, Rng& rng, double ratio = 0.5)
{
    GFrame l = detail::random_frame_for_multipliers(d, rng);
    const FrameBounds fb = frame_bounds(l);
    WeightSequence m = detail::weights_near_one(l.size(), ratio * std::sqrt(fb.lower / fb.upper),
                                                std::bernoulli_distribution(0.5)(rng), rng);
    GFrame dual = canonical_dual(l);
    GFrame t = dual;
    return {std::move(m), std::move(l), std::move(t), std::move(dual), std::nullopt};
}

/// T = L + E with B_E = ratio * A^2 / (B (b/a)^2), which satisfies both
/// inequalities for ratio < 1.
[[nodiscard]] inline MultiplierInstance bessel_perturb_instance(Eigen::Index d, Rng& rng, double ratio = 0.5)
{
    GFrame l = detail::random_frame_for_multipliers(d, rng);
    WeightSequence m = detail::sign_definite_weights(l.size(), rng);
    const FrameBounds fb = frame_bounds(l);
    const SemiNormBounds sn = *m.semi_norm_bounds();
    const double r = sn.b / sn.a;
    const GFrame e = detail::perturbation_with_bound(l, ratio * fb.lower * fb.lower / (fb.upper * r * r), rng);
    std::vector<CMatrix> blocks;
    for (std::size_t i = 0; i < l.size(); ++i) {
        blocks.push_back(l.block(i) + e.block(i));
    }
    GFrame t(l.h_dim(), std::move(blocks));
    return {std::move(m), std::move(l), std::move(t), std::nullopt, std::nullopt};
}

/// T_i = (R_i + E_i) / w_i with B_E = mu, where w = m (or conj(m) for the
/// reversed order) and R is L, or the dual D for the dual variant.
[[nodiscard]] inline GFrame perturbed_reciprocal(const WeightSequence& m, const GFrame& reference, double mu,
                                                 Order order, Rng& rng)
{
    const GFrame e = detail::perturbation_with_bound(reference, mu, rng);
    std::vector<CMatrix> blocks;
    for (std::size_t i = 0; i < reference.size(); ++i) {
        const complex w = order == Order::LambdaTheta ? m[i] : std::conj(m[i]);
        blocks.push_back((reference.block(i) + e.block(i)) / w);
    }
    return GFrame(reference.h_dim(), std::move(blocks));
}

/// mu = ratio * A_L^2 / B_L.
[[nodiscard]] inline MultiplierInstance mu_perturb_instance(Eigen::Index d, Rng& rng, Order order = Order::LambdaTheta,
                                                            double ratio = 0.5)
{
    GFrame l = detail::random_frame_for_multipliers(d, rng);
    WeightSequence m = detail::nonzero_complex_weights(l.size(), rng);
    const FrameBounds fb = frame_bounds(l);
    GFrame t = perturbed_reciprocal(m, l, ratio * fb.lower * fb.lower / fb.upper, order, rng);
    return {std::move(m), std::move(l), std::move(t), std::nullopt, std::nullopt};
}

/// mu = ratio / B_L against a random dual.
[[nodiscard]] inline MultiplierInstance dual_mu_instance(Eigen::Index d, Rng& rng, Order order = Order::LambdaTheta,
                                                         double ratio = 0.5)
{
    GFrame l = detail::random_frame_for_multipliers(d, rng);
    GFrame dual = random_dual(l, rng);
    WeightSequence m = detail::nonzero_complex_weights(l.size(), rng);
    GFrame t = perturbed_reciprocal(m, dual, ratio / frame_bounds(l).upper, order, rng);
    return {std::move(m), std::move(l), std::move(t), std::move(dual), std::nullopt};
}

/// Two independent random frames with complex weights; M is invertible with
/// probability one and checked by the caller.
[[nodiscard]] inline MultiplierInstance generic_multiplier_instance(Eigen::Index d, Rng& rng)
{
    GFrame l = detail::random_frame_for_multipliers(d, rng);
    GFrame t = random_gframe(d, l.partition(), rng, 50.0);
    return {detail::nonzero_complex_weights(l.size(), rng), std::move(l), std::move(t), std::nullopt, std::nullopt};
}

// ---------------------------------------------------------------------------

/// Self-adjoint invertible C = 2 I + H for a random Hermitian H, redrawn
/// until it visibly fails to commute with S. Needs S not scalar.
[[nodiscard]] inline CMatrix non_commuting_control(const GFrame& f, Rng& rng)
{
    const CMatrix s = frame_operator(f);
    const SpectralRange r = spectral_range(s);
    if (r.lambda_max - r.lambda_min <= 1e-6 * r.lambda_max) {
        throw Error(ErrorKind::InfeasibleKind, "every operator commutes with a scalar frame operator");
    }
    for (;;) {
        const CMatrix h = hermitian_part(random_complex_matrix(f.h_dim(), f.h_dim(), rng));
        const CMatrix c = hermitian_part(identity(f.h_dim()) * 2.0 + h);
        if (smallest_singular_value(c) > 0.1 && (s * c - c * s).norm() > 1e-3 * (1.0 + s.norm() * c.norm())) {
            return c;
        }
    }
}

/// Self-adjoint, commuting but indefinite C: a polynomial in S with one
/// eigenvalue flipped negative through the spectral projector.
[[nodiscard]] inline CMatrix indefinite_commuting_control(const GFrame& f, Rng& rng)
{
    Eigen::SelfAdjointEigenSolver<CMatrix> es(frame_operator(f));
    std::uniform_real_distribution<double> mag(0.5, 2.0);
    RVector values(f.h_dim());
    for (Eigen::Index k = 0; k < values.size(); ++k) {
        values(k) = mag(rng);
    }
    values(std::uniform_int_distribution<Eigen::Index>(0, values.size() - 1)(rng)) *= -1.0;
    return hermitian_part(es.eigenvectors() * values.cast<complex>().asDiagonal() * es.eigenvectors().adjoint());
}

struct WeightedControlInstance {
    GFrame frame;
    CMatrix control;
    std::vector<double> weights;
};

/// Positive C with distinct eigenvalues and a frame whose every block row
/// space lies inside one eigenspace of C: then C L_i^H = w_i L_i^H with w_i
/// the eigenvalue of that eigenspace.
[[nodiscard]] inline WeightedControlInstance weighted_control_instance(Eigen::Index d, Rng& rng)
{
    const CMatrix u = random_unitary(d, rng);
    std::uniform_real_distribution<double> eig(0.5, 3.0);
    // Eigenspaces: split 0..d-1 into contiguous groups.
    const std::vector<Eigen::Index> groups = random_partition(d, 2, rng);
    RVector values(d);
    std::vector<double> group_value;
    Eigen::Index pos = 0;
    for (Eigen::Index g : groups) {
        const double v = eig(rng);
        group_value.push_back(v);
        values.segment(pos, g).setConstant(v);
        pos += g;
    }
    const CMatrix c = hermitian_part(u * values.cast<complex>().asDiagonal() * u.adjoint());

    // Each block lives in one group's span; every group gets at least one block
    // with full row rank so that the family is a g-frame.
    std::vector<CMatrix> blocks;
    std::vector<double> weights;
    std::uniform_int_distribution<int> extra(0, 2);
    pos = 0;
    for (std::size_t gi = 0; gi < groups.size(); ++gi) {
        const Eigen::Index g = groups[gi];
        const CMatrix basis = u.middleCols(pos, g);  // d x g
        const int copies = 1 + extra(rng);
        for (int c_i = 0; c_i < copies; ++c_i) {
            const Eigen::Index rows = c_i == 0 ? g : std::uniform_int_distribution<Eigen::Index>(1, g)(rng);
            blocks.push_back(random_complex_matrix(rows, g, rng) * basis.adjoint());
            weights.push_back(group_value[gi]);
        }
        pos += g;
    }
    return {GFrame(d, std::move(blocks)), c, std::move(weights)};
}

}  // namespace gframe
