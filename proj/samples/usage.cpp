// Walk-through: classify a small g-frame, take its canonical dual,
// decompose it, and invert a multiplier with a certificate.

#include <iostream>

#include "gframe/decompositions.hpp"
#include "gframe/multipliers.hpp"

using namespace gframe;

int main()
{
    // e1, e2 and e1 + e2 as three rank-one blocks on C^2.
    CMatrix t(3, 2);
    t << 1, 0, 0, 1, 1, 1;
    const GFrame f = from_stacked(t, {1, 1, 1});

    const ClassificationReport rep = classify(f);
    std::cout << "bounds: [" << rep.bounds.lower << ", " << rep.bounds.upper << "] "
              << to_string(rep.bounds.classification) << '\n';

    const FrameBounds db = frame_bounds(canonical_dual(f));
    std::cout << "canonical dual bounds: [" << db.lower << ", " << db.upper << "]\n";

    const GFrameDecomposition dec = decompose_two_parseval(f);
    std::cout << "two-Parseval decomposition, residual " << dec.reconstruction_residual << '\n';

    // Weights within 0.1 of one: the canonical-dual series converges.
    const WeightSequence m = WeightSequence::real({1.1, 0.9, 1.05});
    const MultiplierInverse inv = invert_canonical_dual(m, f);
    const auto& c = inv.certificate;
    std::cout << "inverse norm in [" << c.inverse_norm_lower << ", " << c.inverse_norm_upper << "] after "
              << c.series_terms << " terms, residual " << c.residual << '\n';

    try {
        (void)invert_canonical_dual(WeightSequence::real({3.0, 1.0, 1.0}), f);
    } catch (const Error& e) {
        std::cout << "rejected: " << e.what() << '\n';
    }
    return 0;
}
