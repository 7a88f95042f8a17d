#include "test_support.hpp"

#include "gframe/decompositions.hpp"

using namespace gframe;
using namespace gframe::testing;

namespace {

void expect_certified(const GFrameDecomposition& dec, const GFrame& f)
{
    ASSERT_EQ(dec.components.size(), dec.component_kinds.size());
    ASSERT_EQ(dec.components.size(), dec.scalars.size());
    const double t_norm = analysis_matrix(f).norm();
    EXPECT_LE(dec.reconstruction_residual, 1e-9 * (1.0 + t_norm));
    // Recompute the residual blockwise rather than trusting the stored value.
    double r2 = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        CMatrix acc = f.block(i);
        for (std::size_t j = 0; j < dec.components.size(); ++j) {
            acc -= dec.scalars[j] * dec.components[j].block(i);
        }
        r2 += acc.squaredNorm();
    }
    EXPECT_LE(std::sqrt(r2), 1e-9 * (1.0 + t_norm));
    for (std::size_t j = 0; j < dec.components.size(); ++j) {
        EXPECT_TRUE(matches_kind(classify(dec.components[j]), dec.component_kinds[j]))
            << "component " << j << " is not " << to_string(dec.component_kinds[j]);
        EXPECT_EQ(dec.components[j].partition(), f.partition());
    }
}

GFrame square_frame(Eigen::Index d, Rng& rng)
{
    return random_gframe(d, random_partition(d, 3, rng), rng);
}

}  // namespace

TEST(ThreeGOnb, Examples)
{
    const GFrame id = identity_gframe(2);
    GFrameDecomposition dec = decompose_three_gonb(id);
    EXPECT_NEAR(dec.scalars[0].real(), 1.0, 1e-14);
    EXPECT_TRUE(matrix_near(analysis_matrix(dec.components[0]), identity(2), 1e-12));
    EXPECT_TRUE(matrix_near(analysis_matrix(dec.components[1]), I_unit * identity(2), 1e-12));
    EXPECT_TRUE(matrix_near(analysis_matrix(dec.components[2]), -I_unit * identity(2), 1e-12));
    EXPECT_LE(dec.reconstruction_residual, 1e-10);

    dec = decompose_three_gonb(scaled(id, 3.0));
    EXPECT_NEAR(dec.scalars[0].real(), 3.0, 1e-13);
    EXPECT_TRUE(matrix_near(analysis_matrix(dec.components[1]), I_unit * identity(2), 1e-12));

    Rng rng(1);
    const GFrame f = random_gframe(4, {2, 2}, rng);
    expect_certified(decompose_three_gonb(f), f);
}

TEST(ThreeGOnb, Errors)
{
    Rng rng(2);
    EXPECT_EQ(error_kind([&] { (void)decompose_three_gonb(random_gframe(3, {2, 2}, rng)); }),
              ErrorKind::DimensionMismatch);
    EXPECT_EQ(error_kind([&] { (void)decompose_three_gonb(GFrame(2, {row({1.0, 0.0}), row({1.0, 0.0})})); }),
              ErrorKind::NotAFrame);
}

TEST(ThreeGOnb, RandomAndScalingCovariance)
{
    Rng rng(3);
    for (int trial = 0; trial < 100; ++trial) {
        const GFrame f = square_frame(uniform_index(rng, 1, 6), rng);
        const GFrameDecomposition dec = decompose_three_gonb(f);
        expect_certified(dec, f);
        EXPECT_NEAR(dec.scalars[0].real(), operator_norm(analysis_matrix(f)), 1e-12 * dec.scalars[0].real());

        const double c = std::uniform_real_distribution<double>(0.1, 10.0)(rng);
        const GFrameDecomposition scaled_dec = decompose_three_gonb(scaled(f, c));
        EXPECT_NEAR(scaled_dec.scalars[0].real(), c * dec.scalars[0].real(), 1e-10 * c * dec.scalars[0].real());
        expect_certified(scaled_dec, scaled(f, c));
    }
}

TEST(TwoGOnb, Examples)
{
    GFrameDecomposition dec = decompose_two_gonb_combo(identity_gframe(2));
    EXPECT_NEAR(dec.scalars[0].real(), 0.5, 1e-15);
    EXPECT_NEAR(dec.scalars[1].real(), 0.5, 1e-15);
    EXPECT_TRUE(matrix_near(analysis_matrix(dec.components[0]), identity(2), 1e-12));
    EXPECT_TRUE(matrix_near(analysis_matrix(dec.components[1]), identity(2), 1e-12));

    const GFrame two(2, {row({2.0, 0.0}), row({0.0, 2.0})});
    dec = decompose_two_gonb_combo(two);
    EXPECT_NEAR(dec.scalars[0].real(), 1.0, 1e-15);
    EXPECT_TRUE(matrix_near(analysis_matrix(dec.components[0]), identity(2), 1e-12));
    EXPECT_TRUE(matrix_near(analysis_matrix(dec.components[1]), identity(2), 1e-12));
    EXPECT_LE(dec.reconstruction_residual, 1e-14);

    Rng rng(4);
    const GFrame f = random_gframe(4, {1, 3}, rng);
    expect_certified(decompose_two_gonb_combo(f), f);

    const double h = 1.0 / std::sqrt(2.0);
    EXPECT_EQ(error_kind([&] {
                  (void)decompose_two_gonb_combo(GFrame(2, {row({1.0, 0.0}), row({0.0, 1.0}), row({h, h})}));
              }),
              ErrorKind::NotGRiesz);
}

TEST(TwoGOnb, ConverseOnRandomPairs)
{
    Rng rng(5);
    std::uniform_real_distribution<double> mag(0.05, 5.0);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * M_PI);
    int checked = 0;
    while (checked < 200) {
        const Eigen::Index d = uniform_index(rng, 1, 6);
        const auto p = random_partition(d, 3, rng);
        const double ma = mag(rng);
        const double mb = mag(rng);
        if (std::abs(ma - mb) < 1e-3 * std::max(ma, mb)) continue;
        const complex a = std::polar(std::min(ma, mb), phase(rng));
        const complex b = std::polar(std::max(ma, mb), phase(rng));
        const CMatrix combo = a * random_unitary(d, rng) + b * random_unitary(d, rng);
        EXPECT_TRUE(classify(from_stacked(combo, p)).is_g_riesz);
        ++checked;
    }
}

TEST(Coisometry, Examples)
{
    const GFrame id = identity_gframe(2);
    GFrame img = coisometry_image(id, row({1.0, 0.0}));
    ASSERT_EQ(img.h_dim(), 1);
    EXPECT_TRUE(matrix_near(img.block(0), CMatrix::Constant(1, 1, 1.0), 0.0));
    EXPECT_TRUE(matrix_near(img.block(1), CMatrix::Zero(1, 1), 0.0));
    EXPECT_TRUE(classify(img).is_parseval);

    img = coisometry_image(id, identity(2));
    EXPECT_TRUE(classify(img).is_g_onb);

    Rng rng(6);
    const GFrame theta = from_stacked(random_unitary(4, rng), {1, 2, 1});
    const CMatrix k = random_isometry(4, 2, rng).adjoint();
    const FrameBounds fb = frame_bounds(coisometry_image(theta, k));
    EXPECT_NEAR(fb.lower, 1.0, 1e-10);
    EXPECT_NEAR(fb.upper, 1.0, 1e-10);

    EXPECT_EQ(error_kind([&] { (void)coisometry_image(scaled(id, 2.0), identity(2)); }), ErrorKind::NotGOnb);
    EXPECT_EQ(error_kind([&] { (void)coisometry_image(id, row({2.0, 0.0})); }), ErrorKind::NotCoisometry);
    EXPECT_EQ(error_kind([&] { (void)coisometry_image(id, identity(3)); }), ErrorKind::ShapeMismatch);
}

TEST(Coisometry, RandomBoundsAreOne)
{
    Rng rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        const Eigen::Index d = uniform_index(rng, 1, 6);
        const Eigen::Index d0 = uniform_index(rng, 1, d);
        const GFrame theta = from_stacked(random_unitary(d, rng), random_partition(d, 3, rng));
        const GFrame img = coisometry_image(theta, random_isometry(d, d0, rng).adjoint());
        const FrameBounds fb = frame_bounds(img);
        EXPECT_NEAR(fb.lower, 1.0, 1e-9);
        EXPECT_NEAR(fb.upper, 1.0, 1e-9);
    }
}

TEST(TwoParseval, Examples)
{
    GFrameDecomposition dec = decompose_two_parseval(identity_gframe(2));
    EXPECT_NEAR(dec.scalars[0].real(), 0.5, 1e-15);
    // P/(2a) = I, so B = I and both components are the identity g-frame.
    EXPECT_TRUE(matrix_near(analysis_matrix(dec.components[0]), identity(2), 1e-12));
    EXPECT_TRUE(matrix_near(analysis_matrix(dec.components[1]), identity(2), 1e-12));

    dec = decompose_two_parseval(scaled(identity_gframe(2), 2.0));
    EXPECT_NEAR(dec.scalars[0].real(), 1.0, 1e-15);
    EXPECT_TRUE(matrix_near(analysis_matrix(dec.components[0]), identity(2), 1e-12));

    Rng rng(8);
    const GFrame f = random_gframe(3, {2, 2}, rng);
    expect_certified(decompose_two_parseval(f), f);

    EXPECT_EQ(error_kind([&] { (void)decompose_two_parseval(GFrame(2, {row({1.0, 0.0})})); }), ErrorKind::NotAFrame);
}

TEST(TwoParseval, LargeUpperBoundNeedsTheScalar)
{
    // B = 25 > 4: without a scalar the two-Parseval sum would have norm at most 2.
    const GFrame f = scaled(identity_gframe(3), 5.0);
    const GFrameDecomposition dec = decompose_two_parseval(f);
    EXPECT_NEAR(dec.scalars[0].real(), 2.5, 1e-14);
    expect_certified(dec, f);
}

TEST(GOnbPlusGRiesz, Examples)
{
    GFrameDecomposition dec = decompose_gonb_plus_griesz(identity_gframe(2));
    EXPECT_TRUE(matrix_near(analysis_matrix(dec.components[0]), -identity(2), 1e-14));
    EXPECT_TRUE(matrix_near(analysis_matrix(dec.components[1]), 2.0 * identity(2), 1e-14));

    dec = decompose_gonb_plus_griesz(GFrame(2, {row({2.0, 0.0}), row({0.0, 1.0})}));
    EXPECT_TRUE(matrix_near(analysis_matrix(dec.components[0]), -identity(2), 1e-14));
    EXPECT_TRUE(matrix_near(analysis_matrix(dec.components[1]), diag({3.0, 2.0}), 1e-14));
    EXPECT_EQ(dec.scalars, (std::vector<complex>{1.0, 1.0}));

    Rng rng(9);
    const GFrame f = random_gframe(4, {2, 1, 1}, rng);
    dec = decompose_gonb_plus_griesz(f);
    expect_certified(dec, f);
    EXPECT_LE(dec.reconstruction_residual, 1e-12 * (1.0 + analysis_matrix(f).norm()));

    EXPECT_EQ(error_kind([&] { (void)decompose_gonb_plus_griesz(random_gframe(2, {2, 1}, rng)); }),
              ErrorKind::DimensionMismatch);
}

TEST(Decompositions, ReconstructionOnRandomAdmissibleInputs)
{
    Rng rng(10);
    for (int trial = 0; trial < 100; ++trial) {
        const Eigen::Index d = uniform_index(rng, 1, 6);
        const GFrame sq = square_frame(d, rng);
        expect_certified(decompose_three_gonb(sq), sq);
        expect_certified(decompose_two_gonb_combo(sq), sq);
        expect_certified(decompose_gonb_plus_griesz(sq), sq);
        const GFrame over = random_gframe(d, random_partition(d + uniform_index(rng, 0, 4), 3, rng), rng);
        expect_certified(decompose_two_parseval(over), over);
    }
}
