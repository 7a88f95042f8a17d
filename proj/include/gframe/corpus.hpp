#pragma once

// Randomized property corpus: one runner per acceptance property, shared by
// the `selftest` command and the acceptance binary. Each runner draws its
// own seeded stream, so results do not depend on which runners are selected.

#include <chrono>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "gframe/decompositions.hpp"
#include "gframe/instances.hpp"
#include "gframe/io.hpp"
#include "gframe/weighted.hpp"

namespace gframe::corpus {

struct Config {
    /// Multiplies every trial count (rounded up, at least 1).
    double scale = 1.0;
    Eigen::Index max_dim = 8;
    std::uint64_t seed = 20240611;
};

struct Result {
    int id = 0;
    std::string title;
    long checks = 0;
    long failures = 0;
    std::vector<std::string> samples;  // first few failure descriptions
    double seconds = 0.0;

    [[nodiscard]] bool passed() const { return failures == 0 && checks > 0; }
};

class Recorder {
public:
    explicit Recorder(Result& r) : r_(r) {}

    /// Records one check; `what` is only evaluated on failure.
    template <class Describe>
    void check(bool ok, Describe&& what)
    {
        ++r_.checks;
        if (!ok) {
            fail(what());
        }
    }

    void fail(const std::string& message)
    {
        ++r_.failures;
        if (r_.samples.size() < 5) {
            r_.samples.push_back(message);
        }
    }

    /// Runs one trial; an exception escaping it counts as a failed check.
    void trial(const std::string& name, const std::function<void()>& body)
    {
        try {
            body();
        } catch (const std::exception& e) {
            ++r_.checks;
            fail(name + ": unexpected exception: " + e.what());
        }
    }

private:
    Result& r_;
};

namespace detail {

inline int trials(const Config& c, int full)
{
    return std::max(1, static_cast<int>(std::ceil(full * c.scale)));
}

inline Eigen::Index pick(Rng& rng, Eigen::Index lo, Eigen::Index hi)
{
    return std::uniform_int_distribution<Eigen::Index>(lo, std::max(lo, hi))(rng);
}

inline std::string num(double v)
{
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

inline double op_norm_of_inverse(const CMatrix& m)
{
    return 1.0 / smallest_singular_value(m);
}

/// Random partition with at most `max_blocks` blocks of size <= max_block and total `total`.
inline std::vector<Eigen::Index> bounded_partition(Eigen::Index total, Eigen::Index max_block,
                                                   std::size_t max_blocks, Rng& rng)
{
    for (;;) {
        auto p = random_partition(total, max_block, rng);
        if (p.size() <= max_blocks) {
            return p;
        }
    }
}

inline GFrame square_frame(Eigen::Index d, Rng& rng)
{
    return random_gframe(d, bounded_partition(d, 3, 8, rng), rng);
}

inline GFrame overcomplete_frame(Eigen::Index d, Rng& rng)
{
    const Eigen::Index extra = pick(rng, 0, 4);
    return random_gframe(d, bounded_partition(d + extra, 4, 8, rng), rng);
}

inline RVector hermitian_eigenvalues(const CMatrix& m)
{
    return Eigen::SelfAdjointEigenSolver<CMatrix>(hermitian_part(m), Eigen::EigenvaluesOnly).eigenvalues();
}

template <class Fn>
Result timed(int id, std::string title, Fn&& body)
{
    Result r;
    r.id = id;
    r.title = std::move(title);
    const auto start = std::chrono::steady_clock::now();
    Recorder rec(r);
    body(rec);
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

}  // namespace detail

/// g-frame operator equals the induced frame operator; predicates agree.
inline Result frame_bridge(const Config& cfg)
{
    return detail::timed(1, "g-frame / induced frame bridge", [&](Recorder& rec) {
        Rng rng(cfg.seed + 1);
        for (int t = 0; t < detail::trials(cfg, 1000); ++t) {
            rec.trial("bridge", [&] {
                const Eigen::Index d = detail::pick(rng, 1, cfg.max_dim);
                const Eigen::Index blocks = detail::pick(rng, 1, 6);
                std::vector<Eigen::Index> p;
                for (Eigen::Index i = 0; i < blocks; ++i) {
                    p.push_back(detail::pick(rng, 1, 4));
                }
                const Eigen::Index total = std::accumulate(p.begin(), p.end(), Eigen::Index{0});
                CMatrix stacked;
                switch (t % 4) {
                case 0: stacked = random_complex_matrix(total, d, rng); break;
                case 1: stacked = analysis_matrix(random_gframe(d, p, rng)); break;
                case 2:
                    p = detail::bounded_partition(d, 4, 6, rng);
                    stacked = random_unitary(d, rng);
                    break;
                default:
                    if (total < d) {
                        p.push_back(d);
                    }
                    stacked = random_isometry(std::accumulate(p.begin(), p.end(), Eigen::Index{0}), d, rng) *
                              std::uniform_real_distribution<double>(0.5, 2.0)(rng);
                    break;
                }
                const GFrame f = from_stacked(stacked, p);
                const VectorFrame v = induced_frame(f);
                const double diff = (frame_operator(f) - vector_frame_operator(v)).cwiseAbs().maxCoeff();
                rec.check(diff <= 1e-12, [&] { return "frame operators differ by " + detail::num(diff); });
                const ClassificationReport a = classify(f);
                const ClassificationReport b = classify_vector_frame(v);
                rec.check(a.is_g_bessel == b.is_g_bessel && a.is_g_frame == b.is_g_frame &&
                              a.is_tight == b.is_tight && a.is_parseval == b.is_parseval &&
                              a.is_g_complete == b.is_g_complete && a.is_g_riesz == b.is_g_riesz &&
                              a.is_g_onb == b.is_g_onb,
                          [&] { return "classification predicates disagree at trial " + std::to_string(t); });
            });
        }
    });
}

/// Bounds of the canonical dual are (1/B, 1/A).
inline Result canonical_dual_bounds(const Config& cfg)
{
    return detail::timed(2, "canonical dual bounds (1/B, 1/A)", [&](Recorder& rec) {
        Rng rng(cfg.seed + 2);
        for (int t = 0; t < detail::trials(cfg, 1000); ++t) {
            rec.trial("dual bounds", [&] {
                const GFrame f = detail::overcomplete_frame(detail::pick(rng, 1, cfg.max_dim), rng);
                const FrameBounds fb = frame_bounds(f);
                const FrameBounds db = frame_bounds(canonical_dual(f));
                const double el = std::abs(db.lower * fb.upper - 1.0);
                const double eu = std::abs(db.upper * fb.lower - 1.0);
                rec.check(el <= 1e-9 && eu <= 1e-9, [&] {
                    return "relative errors " + detail::num(el) + ", " + detail::num(eu);
                });
            });
        }
    });
}

/// The five decompositions reconstruct and certify; the two-g-ONB converse.
inline Result decompositions(const Config& cfg)
{
    return detail::timed(3, "decompositions: reconstruction, certification, converse", [&](Recorder& rec) {
        Rng rng(cfg.seed + 3);
        auto certify = [&](const char* name, const GFrame& f, const GFrameDecomposition& dec) {
            const double bound = 1e-9 * (1.0 + analysis_matrix(f).norm());
            const double res = reconstruction_residual(f, dec.scalars, dec.components);
            rec.check(res <= bound, [&] { return std::string(name) + " residual " + detail::num(res); });
            for (std::size_t j = 0; j < dec.components.size(); ++j) {
                rec.check(matches_kind(classify(dec.components[j]), dec.component_kinds[j]), [&] {
                    return std::string(name) + " component " + std::to_string(j) + " fails " +
                           std::string(to_string(dec.component_kinds[j]));
                });
            }
        };
        const Eigen::Index dmax = std::min<Eigen::Index>(cfg.max_dim, 6);
        for (int t = 0; t < detail::trials(cfg, 500); ++t) {
            rec.trial("decompositions", [&] {
                const Eigen::Index d = detail::pick(rng, 1, dmax);
                const GFrame sq = detail::square_frame(d, rng);
                certify("three-onb", sq, decompose_three_gonb(sq));
                certify("two-onb", sq, decompose_two_gonb_combo(sq));
                certify("onb-plus-riesz", sq, decompose_gonb_plus_griesz(sq));
                const GFrame over = detail::overcomplete_frame(d, rng);
                certify("two-parseval", over, decompose_two_parseval(over));

                const GFrame theta = from_stacked(random_unitary(d, rng), detail::bounded_partition(d, 3, 8, rng));
                const GFrame img = coisometry_image(theta, random_isometry(d, detail::pick(rng, 1, d), rng).adjoint());
                const FrameBounds fb = frame_bounds(img);
                rec.check(std::abs(fb.lower - 1.0) <= 1e-9 && std::abs(fb.upper - 1.0) <= 1e-9 &&
                              classify(img).is_parseval,
                          [&] { return "coisometry image bounds " + detail::num(fb.lower) + ", " + detail::num(fb.upper); });
            });
        }
        std::uniform_real_distribution<double> mag(0.05, 5.0);
        std::uniform_real_distribution<double> phase(0.0, 2.0 * M_PI);
        for (int t = 0; t < detail::trials(cfg, 200); ++t) {
            rec.trial("converse", [&] {
                const Eigen::Index d = detail::pick(rng, 1, dmax);
                double ma = mag(rng);
                double mb = mag(rng);
                while (std::abs(ma - mb) < 1e-3 * std::max(ma, mb)) {
                    mb = mag(rng);
                }
                const complex a = std::polar(std::min(ma, mb), phase(rng));
                const complex b = std::polar(std::max(ma, mb), phase(rng));
                const CMatrix combo = a * random_unitary(d, rng) + b * random_unitary(d, rng);
                rec.check(classify(from_stacked(combo, detail::bounded_partition(d, 3, 8, rng))).is_g_riesz,
                          [&] { return "a U + b G with |a| < |b| is not g-Riesz"; });
            });
        }
    });
}

/// Multiplier equals the flattened vector multiplier; the norm bound holds.
inline Result multiplier_flattening(const Config& cfg)
{
    return detail::timed(4, "multiplier flattening and norm bound", [&](Recorder& rec) {
        Rng rng(cfg.seed + 4);
        for (int t = 0; t < detail::trials(cfg, 1000); ++t) {
            rec.trial("flattening", [&] {
                const MultiplierInstance inst = generic_multiplier_instance(detail::pick(rng, 1, cfg.max_dim), rng);
                const CMatrix m = multiplier(inst.m, inst.lambda, inst.theta);
                const CMatrix flat = vector_multiplier(replicate_weights(inst.m, inst.lambda.partition()),
                                                       induced_frame(inst.lambda), induced_frame(inst.theta));
                const double diff = (m - flat).cwiseAbs().maxCoeff();
                rec.check(diff <= 1e-12, [&] { return "flattened multiplier differs by " + detail::num(diff); });
                const double n = operator_norm(m);
                const double bound = multiplier_norm_bound(inst.m, inst.lambda, inst.theta);
                rec.check(n <= bound * (1.0 + 1e-12), [&] {
                    return "|M| = " + detail::num(n) + " exceeds " + detail::num(bound);
                });
            });
        }
    });
}

/// All six inversion rules: residual, bracket, direct-solve agreement, and
/// the geometric tail monitor on every series.
inline Result multiplier_inversions(const Config& cfg)
{
    return detail::timed(5, "multiplier inversions: residual, bracket, tail monitor", [&](Recorder& rec) {
        Rng rng(cfg.seed + 5);
        auto verify = [&](const char* rule, const CMatrix& m, const MultiplierInverse& inv,
                          const std::vector<CMatrix>& partials) {
            const double res = (m * inv.inverse - identity(m.rows())).norm();
            rec.check(res <= 1e-8, [&] { return std::string(rule) + " residual " + detail::num(res); });
            const CMatrix direct = m.fullPivLu().inverse();
            const double agree = (inv.inverse - direct).norm();
            rec.check(agree <= 1e-8, [&] { return std::string(rule) + " differs from direct solve by " + detail::num(agree); });
            const double n = detail::op_norm_of_inverse(m);
            const auto& c = inv.certificate;
            rec.check(n >= c.inverse_norm_lower * (1.0 - 1e-9) && n <= c.inverse_norm_upper * (1.0 + 1e-9), [&] {
                return std::string(rule) + " bracket [" + detail::num(c.inverse_norm_lower) + ", " +
                       detail::num(c.inverse_norm_upper) + "] misses " + detail::num(n);
            });
            // Summing K terms in floating point accrues about K eps |M^{-1}| of
            // rounding, which the exact-arithmetic tail bound does not cover.
            const double inv_norm = operator_norm(direct);
            for (std::size_t k = 0; k < partials.size(); ++k) {
                const double err = operator_norm(direct - partials[k]);
                const double predicted = c.predicted_tail(static_cast<int>(k));
                const double rounding = 64.0 * std::numeric_limits<double>::epsilon() * (k + 1.0) * inv_norm;
                rec.check(err <= predicted + rounding, [&] {
                    return std::string(rule) + " truncation error " + detail::num(err) + " > predicted " +
                           detail::num(predicted) + " at K = " + std::to_string(k);
                });
            }
        };
        auto oriented = [](const MultiplierInstance& inst, const GFrame& second, Order o) {
            return o == Order::LambdaTheta ? multiplier(inst.m, inst.lambda, second)
                                           : multiplier(inst.m, second, inst.lambda);
        };
        const Eigen::Index dmax = cfg.max_dim;
        for (int t = 0; t < detail::trials(cfg, 200); ++t) {
            const Order order = t % 2 ? Order::ThetaLambda : Order::LambdaTheta;
            std::vector<CMatrix> partials;
            const SeriesObserver keep = [&](int, const CMatrix& s) { partials.push_back(s); };
            rec.trial("bijection", [&] {
                const MultiplierInstance inst = bijection_instance(detail::pick(rng, 1, dmax), rng);
                verify("bijection", multiplier(inst.m, inst.lambda, inst.theta),
                       invert_via_bijection(inst.m, inst.lambda, *inst.g), {});
            });
            rec.trial("dual-neumann", [&] {
                partials.clear();
                const MultiplierInstance inst = dual_neumann_instance(detail::pick(rng, 1, dmax), rng);
                const MultiplierInverse inv = invert_dual_neumann(inst.m, inst.lambda, *inst.dual, 1e-12, order, keep);
                verify("dual-neumann", oriented(inst, *inst.dual, order), inv, partials);
            });
            rec.trial("canonical", [&] {
                partials.clear();
                const MultiplierInstance inst = canonical_dual_instance(detail::pick(rng, 1, dmax), rng);
                const MultiplierInverse inv = invert_canonical_dual(inst.m, inst.lambda, 1e-12, order, keep);
                verify("canonical", oriented(inst, *inst.dual, order), inv, partials);
            });
            rec.trial("bessel-perturb", [&] {
                partials.clear();
                const MultiplierInstance inst = bessel_perturb_instance(detail::pick(rng, 1, dmax), rng);
                const MultiplierInverse inv = invert_bessel_perturb(inst.m, inst.lambda, inst.theta, 1e-12, order, keep);
                verify("bessel-perturb", oriented(inst, inst.theta, order), inv, partials);
            });
            rec.trial("mu-perturb", [&] {
                partials.clear();
                const MultiplierInstance inst = mu_perturb_instance(detail::pick(rng, 1, dmax), rng, order);
                const MultiplierInverse inv =
                    invert_mu_perturb(inst.m, inst.lambda, inst.theta, 1e-12, order, std::nullopt, keep);
                verify("mu-perturb", oriented(inst, inst.theta, order), inv, partials);
                rec.check(inv.certificate.hypothesis("A_mT") > 0.0, [] { return "m T is not a g-frame"; });
            });
            rec.trial("dual-mu", [&] {
                partials.clear();
                const MultiplierInstance inst = dual_mu_instance(detail::pick(rng, 1, dmax), rng, order);
                const MultiplierInverse inv =
                    invert_dual_mu_perturb(inst.m, inst.lambda, *inst.dual, inst.theta, 1e-12, order, std::nullopt, keep);
                verify("dual-mu", oriented(inst, inst.theta, order), inv, partials);
            });
        }
    });
}

/// 1 / (B_other |M^{-1}|^2) is a lower bound of both weighted families.
inline Result invertible_lower_bound(const Config& cfg)
{
    return detail::timed(6, "lower bound from an invertible multiplier", [&](Recorder& rec) {
        Rng rng(cfg.seed + 6);
        for (int t = 0; t < detail::trials(cfg, 500); ++t) {
            rec.trial("lower bound", [&] {
                const MultiplierInstance inst = generic_multiplier_instance(detail::pick(rng, 1, cfg.max_dim), rng);
                const CMatrix m = multiplier(inst.m, inst.lambda, inst.theta);
                const double b_l = frame_bounds(inst.lambda).upper;
                const double b_t = frame_bounds(inst.theta).upper;
                const double actual_l = detail::hermitian_eigenvalues(
                                            frame_operator(scaled_blocks(inst.lambda, inst.m.values())))
                                            .minCoeff();
                const double actual_t = detail::hermitian_eigenvalues(
                                            frame_operator(scaled_blocks(inst.theta, inst.m.values())))
                                            .minCoeff();
                const double claim_l = lower_bound_from_invertible(m, b_t, LowerBoundSide::WeightedLambda);
                const double claim_t = lower_bound_from_invertible(m, b_l, LowerBoundSide::WeightedTheta);
                rec.check(claim_l <= actual_l * (1.0 + 1e-10), [&] {
                    return "claimed " + detail::num(claim_l) + " > lambda_min " + detail::num(actual_l);
                });
                rec.check(claim_t <= actual_t * (1.0 + 1e-10), [&] {
                    return "claimed (theta side) " + detail::num(claim_t) + " > lambda_min " + detail::num(actual_t);
                });
            });
        }
    });
}

/// Commutation on certified instances, the controlled biconditional, and
/// the bound-arithmetic containments.
inline Result controlled(const Config& cfg)
{
    return detail::timed(7, "controlled g-frames: commutation, biconditional, bound arithmetic", [&](Recorder& rec) {
        Rng rng(cfg.seed + 7);
        long certified = 0;
        for (int t = 0; t < detail::trials(cfg, 500); ++t) {
            rec.trial("controlled", [&] {
                const Eigen::Index d = detail::pick(rng, 2, cfg.max_dim);
                const GFrame f = detail::overcomplete_frame(d, rng);
                CMatrix c;
                switch (t % 5) {
                case 0:
                case 1: c = commuting_positive_control(f, rng); break;
                case 2: c = non_commuting_control(f, rng); break;
                case 3: c = indefinite_commuting_control(f, rng); break;
                default: c = -commuting_positive_control(f, rng); break;
                }
                const ControlOperator op(c);
                const ControlledBounds cb = controlled_bounds(f, op);
                if (cb.is_controlled_frame) {
                    ++certified;
                    const double defect = verify_commutation(f, op).defect;
                    rec.check(defect <= 1e-8, [&] { return "certified instance with commutation defect " + detail::num(defect); });
                }
                const ControlledEquivalence eq = controlled_equivalence(f, op);
                rec.check(eq.lhs == eq.rhs, [&] {
                    return std::string("biconditional split: controlled = ") + (eq.lhs ? "true" : "false") +
                           " at trial " + std::to_string(t);
                });
            });
        }
        rec.check(certified > 0, [] { return "no certified controlled instance was generated"; });

        for (int t = 0; t < detail::trials(cfg, 500); ++t) {
            rec.trial("bound arithmetic", [&] {
                const GFrame f = detail::overcomplete_frame(detail::pick(rng, 1, cfg.max_dim), rng);
                const ControlOperator op(commuting_positive_control(f, rng));
                const ControlledBounds cb = controlled_bounds(f, op);
                const FrameBounds fb = frame_bounds(f);
                const ControlledBoundArithmetic a = controlled_bound_arithmetic(
                    cb.m_cl, cb.big_m_cl, fb.lower, fb.upper, op.bounds()->lambda_min, op.bounds()->lambda_max);
                auto range = [](const RVector& e) { return SpectralRange{e.minCoeff(), e.maxCoeff()}; };
                const RVector sc = Eigen::ComplexEigenSolver<CMatrix>(controlled_frame_operator(f, op)).eigenvalues().real();
                rec.check(a.for_s.contains(range(detail::hermitian_eigenvalues(frame_operator(f)))),
                          [] { return "spectrum of S outside its derived interval"; });
                rec.check(a.for_c.contains(range(detail::hermitian_eigenvalues(op.matrix()))),
                          [] { return "spectrum of C outside its derived interval"; });
                rec.check(a.for_sc.contains(range(sc)), [] { return "spectrum of S_C outside its derived interval"; });
            });
        }
    });
}

/// Weighted bounds, weight recovery, weighted duals, the weighted
/// multiplier checks, and the six-way equivalence.
inline Result weighted(const Config& cfg)
{
    return detail::timed(8, "weighted g-frames: bounds, recovery, duals, equivalence", [&](Recorder& rec) {
        Rng rng(cfg.seed + 8);
        for (int t = 0; t < detail::trials(cfg, 500); ++t) {
            rec.trial("weighted", [&] {
                const Eigen::Index d = detail::pick(rng, 1, cfg.max_dim);
                const GFrame f = detail::overcomplete_frame(d, rng);

                const WeightSequence wc = gframe::detail::nonzero_complex_weights(f.size(), rng);
                const FrameBounds a = weighted_bounds(f, wc);
                const FrameBounds b = weighted_vector_frame_bounds(induced_weighted_frame(f, wc));
                rec.check(std::abs(a.lower - b.lower) <= 1e-12 && std::abs(a.upper - b.upper) <= 1e-12, [&] {
                    return "weighted bounds differ: " + detail::num(a.lower - b.lower) + ", " + detail::num(a.upper - b.upper);
                });

                const WeightedControlInstance wci = weighted_control_instance(d, rng);
                const WeightFromControl wfc = weight_from_control(wci.frame, ControlOperator(wci.control));
                double wdiff = 0.0;
                for (std::size_t i = 0; i < wci.weights.size(); ++i) {
                    wdiff = std::max(wdiff, std::abs(wfc.weights[i] - wci.weights[i]));
                }
                rec.check(wfc.weights.all_positive() && wfc.multiplier_defect <= 1e-9 && wdiff <= 1e-9, [&] {
                    return "weight recovery: defect " + detail::num(wfc.multiplier_defect) + ", weight error " +
                           detail::num(wdiff);
                });

                std::vector<double> signed_w;
                std::uniform_real_distribution<double> mag(0.3, 3.0);
                for (std::size_t i = 0; i < f.size(); ++i) {
                    signed_w.push_back(std::bernoulli_distribution(0.5)(rng) ? mag(rng) : -mag(rng));
                }
                const WeightSequence ws = WeightSequence::real(signed_w);
                const GFrame wf = scaled_blocks(f, ws.values());
                const double dd = duality_defect(wf, weighted_dual(f, ws));
                const SemiNormBounds sn = *ws.semi_norm_bounds();
                const FrameBounds fb = frame_bounds(f);
                const FrameBounds wb = frame_bounds(wf);
                rec.check(dd <= 1e-10, [&] { return "weighted dual residual " + detail::num(dd); });
                rec.check(wb.lower >= sn.a * sn.a * fb.lower * (1.0 - 1e-10) &&
                              wb.upper <= sn.b * sn.b * fb.upper * (1.0 + 1e-10),
                          [] { return "weighted bounds outside [a^2 A, b^2 B]"; });

                const WeightSequence wp = random_positive_weights(f.size(), rng);
                const auto [m, checks] = weighted_multiplier_as_frame_operator(f, wp);
                rec.check(checks.equals_frame_operator && checks.hermitian && checks.positive_definite, [&] {
                    return "weighted multiplier checks failed (defect " + detail::num(checks.frame_operator_defect) + ")";
                });

                // Equivalence on a frame or, every other trial, a deficient family.
                GFrame g = f;
                if (t % 2 == 1) {
                    g = d >= 2 && t % 4 == 1
                            ? composed(f, identity(d) - CVector::Unit(d, 0) * CVector::Unit(d, 0).transpose())
                            : random_gframe(d, detail::bounded_partition(std::max<Eigen::Index>(1, d - 1), 3, 8, rng), rng);
                }
                const WeightSequence w = random_positive_weights(g.size(), rng, 0.1, 10.0);
                for (int k = 0; k < 10; ++k) {
                    const WeightedEquivalence eq =
                        weighted_equivalence_suite(g, w, random_positive_weights(g.size(), rng, 0.1, 10.0));
                    rec.check(eq.unanimous(), [&] { return "six-way equivalence split at trial " + std::to_string(t); });
                }
            });
        }
    });
}

/// Unitary pair/triple reconstructions and spectral_range vs Rayleigh quotients.
inline Result kernel(const Config& cfg)
{
    return detail::timed(9, "kernel: unitary averaging and spectral range", [&](Recorder& rec) {
        Rng rng(cfg.seed + 9);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        for (int t = 0; t < detail::trials(cfg, 1000); ++t) {
            rec.trial("unitary averaging", [&] {
                const Eigen::Index n = detail::pick(rng, 1, cfg.max_dim);
                CMatrix a = random_complex_matrix(n, n, rng);
                a *= (t % 10 == 0 ? 1.0 : unit(rng)) / operator_norm(a);  // includes |A| = 1 exactly
                const UnitaryPair p = unitary_pair_from_contraction(a);
                const double pair_err = ((p.first + p.second) * 0.5 - a).norm();
                const double pair_def = std::max(unitarity_defect(p.first), unitarity_defect(p.second));
                rec.check(pair_err <= 1e-9 && pair_def <= 1e-9, [&] {
                    return "pair: reconstruction " + detail::num(pair_err) + ", unitarity " + detail::num(pair_def);
                });
                const CMatrix small = a / 3.0;
                const UnitaryTriple u = unitary_triple_from_small_norm(small);
                const double tri_err = ((u.first + u.second + u.third) / 3.0 - small).norm();
                const double tri_def =
                    std::max({unitarity_defect(u.first), unitarity_defect(u.second), unitarity_defect(u.third)});
                rec.check(tri_err <= 1e-9 && tri_def <= 1e-9, [&] {
                    return "triple: reconstruction " + detail::num(tri_err) + ", unitarity " + detail::num(tri_def);
                });
            });
        }
        for (int t = 0; t < detail::trials(cfg, 100); ++t) {
            rec.trial("rayleigh", [&] {
                const Eigen::Index n = detail::pick(rng, 1, cfg.max_dim);
                const CMatrix h = hermitian_part(random_complex_matrix(n, n, rng));
                const SpectralRange r = spectral_range(h);
                const double scale = 1.0 + std::max(std::abs(r.lambda_min), std::abs(r.lambda_max));
                double lo = std::numeric_limits<double>::infinity();
                double hi = -lo;
                for (int s = 0; s < 1000; ++s) {
                    const CVector x = random_unit_vector(n, rng);
                    const double q = x.dot(h * x).real();
                    lo = std::min(lo, q);
                    hi = std::max(hi, q);
                }
                rec.check(lo >= r.lambda_min - 1e-12 * scale && hi <= r.lambda_max + 1e-12 * scale,
                          [] { return "a sampled Rayleigh quotient escapes the spectral range"; });
                // Eigenvector witnesses attain the extremes.
                Eigen::ComplexEigenSolver<CMatrix> ces(h);
                double wlo = std::numeric_limits<double>::infinity();
                double whi = -wlo;
                for (Eigen::Index k = 0; k < n; ++k) {
                    const CVector v = ces.eigenvectors().col(k).normalized();
                    const double q = v.dot(h * v).real();
                    wlo = std::min(wlo, q);
                    whi = std::max(whi, q);
                }
                rec.check(std::abs(wlo - r.lambda_min) <= 1e-6 && std::abs(whi - r.lambda_max) <= 1e-6, [&] {
                    return "witness extremes " + detail::num(wlo) + ", " + detail::num(whi) + " vs " +
                           detail::num(r.lambda_min) + ", " + detail::num(r.lambda_max);
                });
            });
        }
    });
}

/// Serialization round trip through text on generated instances.
inline Result serialization(const Config& cfg)
{
    return detail::timed(10, "serialization round trip", [&](Recorder& rec) {
        Rng rng(cfg.seed + 10);
        const GenerateKind kinds[] = {GenerateKind::RandomGFrame, GenerateKind::GRiesz, GenerateKind::GOnb,
                                      GenerateKind::Parseval, GenerateKind::ControlledCommuting, GenerateKind::Weighted};
        for (int t = 0; t < detail::trials(cfg, 100); ++t) {
            rec.trial("round trip", [&] {
                const GenerateKind kind = kinds[t % 6];
                const Eigen::Index d = detail::pick(rng, 1, cfg.max_dim);
                const bool square = kind == GenerateKind::GRiesz || kind == GenerateKind::GOnb;
                const auto p = detail::bounded_partition(square ? d : d + detail::pick(rng, 0, 3), 3, 8, rng);
                Instance inst = generate(kind, d, p, static_cast<std::uint64_t>(t));
                inst.mu = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
                inst.bijection = random_complex_matrix(d, d, rng);
                const std::string text = serialize_instance(inst);
                const std::string again = serialize_instance(parse_instance(text));
                rec.check(text == again, [&] { return "round trip changed the document at trial " + std::to_string(t); });
            });
        }
    });
}

/// Library-level runners in criterion order; `serialization` is the
/// in-process part of the CLI criterion.
inline std::vector<std::function<Result(const Config&)>> runners()
{
    return {frame_bridge,          canonical_dual_bounds,  decompositions, multiplier_flattening,
            multiplier_inversions, invertible_lower_bound, controlled,     weighted,
            kernel,                serialization};
}

}  // namespace gframe::corpus
