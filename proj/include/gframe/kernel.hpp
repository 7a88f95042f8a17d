#pragma once

// Dense complex-matrix primitives: spectral ranges, polar decomposition,
// principal square roots and the unitary-averaging identities used to write
// a contraction as a mean of two or three unitaries.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "gframe/error.hpp"
#include "gframe/tolerance.hpp"

namespace gframe {

using complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

inline constexpr complex I_unit{0.0, 1.0};

struct SpectralRange {
    double lambda_min = 0.0;
    double lambda_max = 0.0;
};

struct PolarParts {
    CMatrix isometry;
    CMatrix positive;
};

struct UnitaryPair {
    CMatrix first;
    CMatrix second;
};

struct UnitaryTriple {
    CMatrix first;
    CMatrix second;
    CMatrix third;
};

namespace detail {

inline std::string shape_string(const CMatrix& m)
{
    std::ostringstream os;
    os << m.rows() << "x" << m.cols();
    return os.str();
}

}  // namespace detail

inline void require_finite(const CMatrix& m, std::string_view what = "matrix")
{
    if (!m.allFinite()) {
        throw Error(ErrorKind::NonFinite, std::string(what) + " contains NaN or Inf entries");
    }
}

inline void require_square(const CMatrix& m, std::string_view what = "matrix")
{
    if (m.rows() != m.cols()) {
        throw Error(ErrorKind::ShapeMismatch,
                    std::string(what) + " must be square, got " + detail::shape_string(m));
    }
}

[[nodiscard]] inline CMatrix identity(Eigen::Index n)
{
    return CMatrix::Identity(n, n);
}

[[nodiscard]] inline CMatrix hermitian_part(const CMatrix& m)
{
    return (m + m.adjoint()) * 0.5;
}

/// Frobenius norm of M - M^dagger.
[[nodiscard]] inline double hermitian_defect(const CMatrix& m)
{
    return (m - m.adjoint()).norm();
}

/// Frobenius norm of U^dagger U - I.
[[nodiscard]] inline double unitarity_defect(const CMatrix& u)
{
    return (u.adjoint() * u - identity(u.cols())).norm();
}

[[nodiscard]] inline RVector singular_values(const CMatrix& m)
{
    if (m.size() == 0) {
        return RVector::Zero(0);
    }
    return Eigen::JacobiSVD<CMatrix>(m).singularValues();
}

/// Largest singular value.
[[nodiscard]] inline double operator_norm(const CMatrix& m)
{
    const RVector s = singular_values(m);
    return s.size() == 0 ? 0.0 : s(0);
}

[[nodiscard]] inline double smallest_singular_value(const CMatrix& m)
{
    const RVector s = singular_values(m);
    return s.size() == 0 ? 0.0 : s(s.size() - 1);
}

inline void require_hermitian(const CMatrix& m, std::string_view what = "matrix")
{
    require_finite(m, what);
    require_square(m, what);
    const double defect = hermitian_defect(m);
    if (defect > tol::herm) {
        std::ostringstream os;
        os << what << " is not Hermitian (|M - M^H|_F = " << defect << ")";
        throw Error(ErrorKind::NotHermitian, os.str());
    }
}

/// Smallest and largest eigenvalue of a Hermitian matrix.
[[nodiscard]] inline SpectralRange spectral_range(const CMatrix& m)
{
    require_hermitian(m);
    Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(m), Eigen::EigenvaluesOnly);
    const RVector& ev = es.eigenvalues();
    return {ev(0), ev(ev.size() - 1)};
}

/// Applies a real function to the spectrum of a Hermitian matrix.
template <typename Fn>
[[nodiscard]] CMatrix hermitian_function(const CMatrix& m, Fn&& fn)
{
    Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(m));
    const CMatrix& q = es.eigenvectors();
    CVector mapped(q.cols());
    for (Eigen::Index k = 0; k < q.cols(); ++k) {
        mapped(k) = complex(fn(es.eigenvalues()(k)));
    }
    return q * mapped.asDiagonal() * q.adjoint();
}

/// Principal square root of a Hermitian positive semidefinite matrix.
/// Eigenvalues in [-tol::psd, 0) are clamped to zero.
[[nodiscard]] inline CMatrix psd_sqrt(const CMatrix& m)
{
    require_hermitian(m);
    Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(m));
    const double lowest = es.eigenvalues()(0);
    if (lowest < -tol::psd) {
        std::ostringstream os;
        os << "eigenvalue " << lowest << " below -" << tol::psd;
        throw Error(ErrorKind::NegativeEigenvalue, os.str());
    }
    const CMatrix& q = es.eigenvectors();
    const RVector roots = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    const CMatrix r = q * roots.cast<complex>().asDiagonal() * q.adjoint();
    return hermitian_part(r);
}

namespace detail {

// Extends the orthonormal columns of `basis` by `count` further orthonormal
// vectors, drawn from the standard basis with largest-residual pivoting.
inline CMatrix complete_orthonormal(const CMatrix& basis, Eigen::Index rows, Eigen::Index count)
{
    CMatrix out(rows, basis.cols() + count);
    out.leftCols(basis.cols()) = basis;
    Eigen::Index filled = basis.cols();
    std::vector<bool> used(static_cast<std::size_t>(rows), false);
    for (Eigen::Index step = 0; step < count; ++step) {
        double best_norm = -1.0;
        Eigen::Index best = -1;
        CVector best_vec;
        for (Eigen::Index k = 0; k < rows; ++k) {
            if (used[static_cast<std::size_t>(k)]) {
                continue;
            }
            CVector v = CVector::Unit(rows, k);
            for (int pass = 0; pass < 2; ++pass) {
                const auto q = out.leftCols(filled);
                v -= q * (q.adjoint() * v);
            }
            const double n = v.norm();
            if (n > best_norm + 1e-12) {
                best_norm = n;
                best = k;
                best_vec = v;
            }
        }
        used[static_cast<std::size_t>(best)] = true;
        out.col(filled++) = best_vec / best_norm;
    }
    return out;
}

}  // namespace detail

/// M = isometry * positive with positive = (M^H M)^{1/2}. Requires rows >= cols.
/// On a rank-deficient input the isometry is completed on the kernel
/// deterministically, so square inputs always yield a unitary factor.
[[nodiscard]] inline PolarParts polar_decompose(const CMatrix& m)
{
    require_finite(m);
    if (m.rows() < m.cols()) {
        throw Error(ErrorKind::ShapeMismatch,
                    "polar decomposition needs rows >= cols, got " + detail::shape_string(m));
    }
    const Eigen::Index n = m.cols();
    Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const RVector& s = svd.singularValues();
    const double cutoff = static_cast<double>(std::max(m.rows(), n)) *
                          std::numeric_limits<double>::epsilon() * (s.size() ? s(0) : 0.0);
    Eigen::Index rank = 0;
    while (rank < s.size() && s(rank) > cutoff) {
        ++rank;
    }
    const CMatrix& v = svd.matrixV();
    const CMatrix u = detail::complete_orthonormal(svd.matrixU().leftCols(rank), m.rows(), n - rank);

    PolarParts parts;
    parts.isometry = u * v.adjoint();
    parts.positive = hermitian_part(v * s.cast<complex>().asDiagonal() * v.adjoint());
    return parts;
}

/// Writes a square contraction A as (U1 + U2) / 2 with U1, U2 unitary, using
/// A = W P, B = P + i (I - P^2)^{1/2}, U1 = W B, U2 = W B^H.
[[nodiscard]] inline UnitaryPair unitary_pair_from_contraction(const CMatrix& a)
{
    require_finite(a);
    require_square(a);
    const double norm = operator_norm(a);
    if (norm > 1.0 + tol::norm) {
        std::ostringstream os;
        os << "|A| = " << norm << " exceeds 1";
        throw Error(ErrorKind::NormTooLarge, os.str());
    }
    const PolarParts polar = polar_decompose(a);
    Eigen::SelfAdjointEigenSolver<CMatrix> es(polar.positive);
    const CMatrix& q = es.eigenvectors();
    CVector phases(q.cols());
    for (Eigen::Index k = 0; k < q.cols(); ++k) {
        const double p = std::clamp(es.eigenvalues()(k), 0.0, 1.0);
        phases(k) = complex(p, std::sqrt(1.0 - p * p));
    }
    const CMatrix b = q * phases.asDiagonal() * q.adjoint();
    return {polar.isometry * b, polar.isometry * b.adjoint()};
}

/// Writes a square A with |A| <= 1/3 as (U1 + U2 + U3) / 3 with unitary U_k.
[[nodiscard]] inline UnitaryTriple unitary_triple_from_small_norm(const CMatrix& a)
{
    require_finite(a);
    require_square(a);
    const double norm = operator_norm(a);
    if (norm > 1.0 / 3.0 + tol::norm) {
        std::ostringstream os;
        os << "|A| = " << norm << " exceeds 1/3";
        throw Error(ErrorKind::NormTooLarge, os.str());
    }
    const CMatrix scaled = 3.0 * a;
    const CMatrix first = polar_decompose(scaled).isometry;
    // 3A - U1 = U1 (P - I) with 0 <= P <= I, hence a contraction.
    const CMatrix rest = (scaled - first) * 0.5;
    UnitaryPair pair = unitary_pair_from_contraction(rest);
    return {first, std::move(pair.first), std::move(pair.second)};
}

/// Inverse of a square matrix; Singular when sigma_min <= tol::rank.
[[nodiscard]] inline CMatrix checked_inverse(const CMatrix& m, std::string_view what = "matrix")
{
    require_finite(m, what);
    require_square(m, what);
    const double smin = smallest_singular_value(m);
    if (smin <= tol::rank) {
        std::ostringstream os;
        os << what << " is singular (sigma_min = " << smin << ")";
        throw Error(ErrorKind::Singular, os.str());
    }
    return m.partialPivLu().inverse();
}

}  // namespace gframe
