#include "test_support.hpp"

#include "gframe/instances.hpp"
#include "gframe/weighted.hpp"

using namespace gframe;
using namespace gframe::testing;

namespace {

const GFrame& id2()
{
    static const GFrame f = identity_gframe(2);
    return f;
}

}  // namespace

TEST(WeightSequence, SemiNormBounds)
{
    const WeightSequence w = WeightSequence::real({-2.0, 0.5, 3.0});
    ASSERT_TRUE(w.semi_norm_bounds().has_value());
    EXPECT_DOUBLE_EQ(w.semi_norm_bounds()->a, 0.5);
    EXPECT_DOUBLE_EQ(w.semi_norm_bounds()->b, 3.0);
    EXPECT_DOUBLE_EQ(w.norm_inf(), 3.0);
    EXPECT_FALSE(w.all_positive());
    EXPECT_FALSE(WeightSequence::real({1.0, 0.0}).semi_norm_bounds().has_value());
    EXPECT_EQ(error_kind([] { WeightSequence({complex(std::nan(""), 0.0)}); }), ErrorKind::NonFinite);
}

TEST(WeightedBounds, Examples)
{
    FrameBounds fb = weighted_bounds(id2(), WeightSequence::real({2.0, 3.0}));
    EXPECT_DOUBLE_EQ(fb.lower, 4.0);
    EXPECT_DOUBLE_EQ(fb.upper, 9.0);

    Rng rng(1);
    const GFrame f = random_gframe(4, {2, 2, 1}, rng);
    fb = weighted_bounds(f, WeightSequence::ones(3));
    EXPECT_DOUBLE_EQ(fb.lower, frame_bounds(f).lower);
    EXPECT_DOUBLE_EQ(fb.upper, frame_bounds(f).upper);

    const WeightSequence w({complex(0.5, 1.0), -1.5, complex(0.0, 2.0)});
    fb = weighted_bounds(f, w);
    for (int s = 0; s < 10000; ++s) {
        const CVector x = random_unit_vector(4, rng);
        double e = 0.0;
        for (std::size_t i = 0; i < f.size(); ++i) {
            e += std::norm(w[i]) * (f.block(i) * x).squaredNorm();
        }
        EXPECT_GE(e, fb.lower * (1.0 - 1e-12));
        EXPECT_LE(e, fb.upper * (1.0 + 1e-12));
    }
    EXPECT_EQ(error_kind([&] { (void)weighted_bounds(f, WeightSequence::ones(2)); }), ErrorKind::ShapeMismatch);
}

TEST(InducedWeighted, BoundsCoincide)
{
    WeightedVectorFrame v = induced_weighted_frame(id2(), WeightSequence::real({2.0, 3.0}));
    EXPECT_EQ(v.weights, (std::vector<complex>{2.0, 3.0}));
    FrameBounds fb = weighted_vector_frame_bounds(v);
    EXPECT_DOUBLE_EQ(fb.lower, 4.0);
    EXPECT_DOUBLE_EQ(fb.upper, 9.0);

    Rng rng(2);
    for (int trial = 0; trial < 200; ++trial) {
        const Eigen::Index d = uniform_index(rng, 1, 6);
        const GFrame f = random_gframe(d, random_partition(d + uniform_index(rng, 0, 4), 3, rng), rng);
        const WeightSequence w = detail::nonzero_complex_weights(f.size(), rng);
        v = induced_weighted_frame(f, w);
        ASSERT_EQ(v.weights.size(), v.frame.vectors.size());
        for (std::size_t j = 0; j < v.weights.size(); ++j) {
            EXPECT_EQ(v.weights[j], w[v.frame.indices[j].first]);
        }
        const FrameBounds a = weighted_bounds(f, w);
        const FrameBounds b = weighted_vector_frame_bounds(v);
        EXPECT_NEAR(a.lower, b.lower, 1e-12 * (1.0 + a.upper));
        EXPECT_NEAR(a.upper, b.upper, 1e-12 * (1.0 + a.upper));
    }
}

TEST(WeightFromControl, Examples)
{
    WeightFromControl r = weight_from_control(id2(), ControlOperator(diag({2.0, 3.0})));
    EXPECT_NEAR(r.weights[0].real(), 2.0, 1e-15);
    EXPECT_NEAR(r.weights[1].real(), 3.0, 1e-15);
    EXPECT_TRUE(r.is_multiplier);

    r = weight_from_control(id2(), ControlOperator(identity(2)));
    EXPECT_EQ(r.weights.values(), (std::vector<complex>{1.0, 1.0}));

    const double h = 1.0 / std::sqrt(2.0);
    EXPECT_EQ(error_kind([&] {
                  (void)weight_from_control(GFrame(2, {row({h, h}), row({h, -h})}),
                                            ControlOperator(diag({2.0, 3.0})));
              }),
              ErrorKind::NotEigenRelation);
    EXPECT_EQ(error_kind([&] {
                  (void)weight_from_control(GFrame(2, {row({1.0, 0.0}), row({0.0, 1.0}), row({0.0, 0.0})}),
                                            ControlOperator(diag({2.0, 3.0})));
              }),
              ErrorKind::ZeroBlock);
    EXPECT_EQ(error_kind([&] { (void)weight_from_control(id2(), ControlOperator(diag({-2.0, 3.0}))); }),
              ErrorKind::HypothesisFailed);
}

TEST(WeightFromControl, ConstructiveInstances)
{
    Rng rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        const WeightedControlInstance inst = weighted_control_instance(uniform_index(rng, 1, 6), rng);
        const WeightFromControl r = weight_from_control(inst.frame, ControlOperator(inst.control));
        ASSERT_EQ(r.weights.size(), inst.weights.size());
        EXPECT_TRUE(r.weights.all_positive());
        for (std::size_t i = 0; i < inst.weights.size(); ++i) {
            EXPECT_NEAR(r.weights[i].real(), inst.weights[i], 1e-10);
        }
        // Oracle: rebuild the multiplier from scratch with the constructed weights.
        const CMatrix s_inv = frame_operator(inst.frame).inverse();
        CMatrix m = CMatrix::Zero(inst.frame.h_dim(), inst.frame.h_dim());
        for (std::size_t i = 0; i < inst.frame.size(); ++i) {
            m += inst.weights[i] * inst.frame.block(i).adjoint() * inst.frame.block(i) * s_inv;
        }
        EXPECT_TRUE(matrix_near(m, inst.control, 1e-9));
        EXPECT_TRUE(r.is_multiplier);
        EXPECT_LE(r.multiplier_defect, 1e-9);
    }
}

TEST(WeightedDual, Examples)
{
    const WeightSequence w = WeightSequence::real({2.0, 3.0});
    const GFrame d = weighted_dual(id2(), w);
    EXPECT_TRUE(matrix_near(d.block(0), row({0.5, 0.0}), 1e-15));
    EXPECT_TRUE(matrix_near(d.block(1), row({0.0, 1.0 / 3.0}), 1e-15));
    EXPECT_TRUE(verify_duality(scaled_blocks(id2(), w.values()), d));

    const GFrame f(2, {row({1.0, 0.0}), row({0.0, 2.0})});
    const GFrame plain = weighted_dual(f, WeightSequence::ones(2));
    const GFrame canon = canonical_dual(f);
    EXPECT_TRUE(matrix_near(plain.block(0), canon.block(0), 0.0));
    EXPECT_TRUE(matrix_near(plain.block(1), canon.block(1), 0.0));

    EXPECT_EQ(error_kind([&] { (void)weighted_dual(id2(), WeightSequence::real({1.0, 0.0})); }), ErrorKind::ZeroWeight);
    EXPECT_EQ(error_kind([&] { (void)weighted_dual(id2(), WeightSequence({complex(0.0, 1.0), 1.0})); }),
              ErrorKind::ComplexWeight);
}

TEST(WeightedDual, RandomDualityAndBoundContainment)
{
    Rng rng(4);
    std::uniform_real_distribution<double> mag(0.3, 3.0);
    for (int trial = 0; trial < 200; ++trial) {
        const Eigen::Index d = uniform_index(rng, 1, 6);
        const GFrame f = random_gframe(d, random_partition(d + uniform_index(rng, 0, 4), 3, rng), rng);
        std::vector<double> wv;
        for (std::size_t i = 0; i < f.size(); ++i) {
            wv.push_back(std::bernoulli_distribution(0.5)(rng) ? mag(rng) : -mag(rng));
        }
        const WeightSequence w = WeightSequence::real(wv);
        const GFrame wf = scaled_blocks(f, w.values());
        EXPECT_LE(duality_defect(wf, weighted_dual(f, w)), 1e-10);
        const FrameBounds fb = frame_bounds(f);
        const FrameBounds wb = frame_bounds(wf);
        const SemiNormBounds sn = *w.semi_norm_bounds();
        EXPECT_GE(wb.lower, sn.a * sn.a * fb.lower * (1.0 - 1e-10));
        EXPECT_LE(wb.upper, sn.b * sn.b * fb.upper * (1.0 + 1e-10));
    }
}

TEST(WeightedMultiplier, Examples)
{
    auto [m, checks] = weighted_multiplier_as_frame_operator(id2(), WeightSequence::real({2.0, 3.0}));
    EXPECT_TRUE(matrix_near(m, diag({2.0, 3.0}), 0.0));
    EXPECT_TRUE(checks.equals_frame_operator && checks.hermitian && checks.positive_definite);

    const GFrame f(2, {row({1.0, 0.0}), row({0.0, 2.0})});
    std::tie(m, checks) = weighted_multiplier_as_frame_operator(f, WeightSequence::ones(2));
    EXPECT_TRUE(matrix_near(m, frame_operator(f), 0.0));

    Rng rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        const Eigen::Index d = uniform_index(rng, 1, 6);
        const GFrame g = random_gframe(d, random_partition(d + uniform_index(rng, 0, 4), 3, rng), rng);
        std::tie(m, checks) = weighted_multiplier_as_frame_operator(g, random_positive_weights(g.size(), rng));
        EXPECT_TRUE(checks.equals_frame_operator);
        EXPECT_TRUE(checks.hermitian);
        EXPECT_TRUE(checks.positive_definite);
        EXPECT_GT(checks.lambda_min, 0.0);
    }
    EXPECT_EQ(error_kind([&] { (void)weighted_multiplier_as_frame_operator(f, WeightSequence::real({1.0, -1.0})); }),
              ErrorKind::NonPositiveWeight);
}

TEST(WeightedEquivalence, Examples)
{
    Rng rng(6);
    WeightedEquivalence eq =
        weighted_equivalence_suite(id2(), random_positive_weights(2, rng), random_positive_weights(2, rng));
    EXPECT_TRUE(eq.g_frame && eq.unanimous());

    eq = weighted_equivalence_suite(GFrame(2, {row({1.0, 0.0})}), WeightSequence::ones(1), WeightSequence::real({2.0}));
    EXPECT_FALSE(eq.g_frame);
    EXPECT_TRUE(eq.unanimous());
    EXPECT_EQ(error_kind([] {
                  (void)weighted_equivalence_suite(identity_gframe(2), WeightSequence::real({1.0, -1.0}),
                                                   WeightSequence::ones(2));
              }),
              ErrorKind::NonPositiveWeight);
}

TEST(WeightedEquivalence, UnanimousOnMixedFamilies)
{
    Rng rng(7);
    int frames = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const Eigen::Index d = uniform_index(rng, 1, 6);
        // Every other instance is deficient: fewer rows than d, or a common kernel.
        GFrame f = trial % 2 == 0 ? random_gframe(d, random_partition(d + uniform_index(rng, 0, 3), 3, rng), rng)
                                  : random_gframe(d, random_partition(std::max<Eigen::Index>(1, d - 1), 3, rng), rng);
        if (trial % 6 == 5 && d >= 2) {
            const CMatrix kill = identity(d) - CVector::Unit(d, 0) * CVector::Unit(d, 0).transpose();
            f = composed(random_gframe(d, random_partition(d + 2, 3, rng), rng), kill);
        }
        const WeightSequence w = random_positive_weights(f.size(), rng, 0.1, 10.0);
        for (int k = 0; k < 10; ++k) {
            const WeightedEquivalence eq =
                weighted_equivalence_suite(f, w, random_positive_weights(f.size(), rng, 0.1, 10.0));
            EXPECT_TRUE(eq.unanimous()) << "trial " << trial;
        }
        frames += classify(f).is_g_frame ? 1 : 0;
    }
    EXPECT_GT(frames, 50);
    EXPECT_LT(frames, 150);
}
