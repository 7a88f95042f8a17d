#pragma once

namespace gframe::tol {

// Absolute thresholds on Frobenius / operator-norm defects.
inline constexpr double herm = 1e-8;
inline constexpr double norm = 1e-8;
inline constexpr double psd = 1e-8;

// Relative threshold for tight / Parseval classification.
inline constexpr double classify = 1e-8;
// Absolute threshold on eigenvalues separating rank deficiency from roundoff.
inline constexpr double rank = 1e-10;

inline constexpr double dual = 1e-8;
inline constexpr double recon = 1e-9;
inline constexpr double inverse = 1e-8;
// Scaled by (1 + |S| |C|).
inline constexpr double commute = 1e-8;
// Relative proportionality residual for weight extraction.
inline constexpr double eigen_relation = 1e-8;

inline constexpr int max_series_terms = 100000;

}  // namespace gframe::tol
