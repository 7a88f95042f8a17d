#pragma once

// Seeded random matrices and g-frames, and the instance generator behind the
// `generate` command. Every generator is deterministic in its seed.

#include <cstdint>
#include <numeric>
#include <random>
#include <string>
#include <string_view>

#include "gframe/io.hpp"

namespace gframe {

using Rng = std::mt19937_64;

[[nodiscard]] inline CMatrix random_complex_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng)
{
    std::normal_distribution<double> normal;
    CMatrix m(rows, cols);
    for (Eigen::Index c = 0; c < cols; ++c) {
        for (Eigen::Index r = 0; r < rows; ++r) {
            m(r, c) = complex(normal(rng), normal(rng)) / std::sqrt(2.0);
        }
    }
    return m;
}

[[nodiscard]] inline CVector random_unit_vector(Eigen::Index n, Rng& rng)
{
    CVector v = random_complex_matrix(n, 1, rng).col(0);
    return v / v.norm();
}

/// Haar-distributed unitary: QR of a Gaussian matrix with the phases of
/// diag(R) moved into Q.
[[nodiscard]] inline CMatrix random_unitary(Eigen::Index n, Rng& rng)
{
    const CMatrix z = random_complex_matrix(n, n, rng);
    Eigen::HouseholderQR<CMatrix> qr(z);
    CMatrix q = qr.householderQ() * identity(n);
    const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index k = 0; k < n; ++k) {
        const complex d = r(k, k);
        if (std::abs(d) > 0.0) {
            q.col(k) *= d / std::abs(d);
        }
    }
    return q;
}

/// rows x cols matrix with orthonormal columns (rows >= cols).
[[nodiscard]] inline CMatrix random_isometry(Eigen::Index rows, Eigen::Index cols, Rng& rng)
{
    return random_unitary(rows, rng).leftCols(cols);
}

[[nodiscard]] inline double condition_number(const CMatrix& m)
{
    const RVector s = singular_values(m);
    const double smin = s.size() >= m.cols() ? s(m.cols() - 1) : 0.0;
    return smin > 0.0 ? s(0) / smin : std::numeric_limits<double>::infinity();
}

/// Gaussian blocks with the given partition; when sum d_i >= d the draw is
/// repeated until cond(T) <= max_cond.
[[nodiscard]] inline GFrame random_gframe(Eigen::Index d, const std::vector<Eigen::Index>& partition, Rng& rng,
                                          double max_cond = 1e3)
{
    const Eigen::Index total = std::accumulate(partition.begin(), partition.end(), Eigen::Index{0});
    for (;;) {
        const CMatrix t = random_complex_matrix(total, d, rng);
        if (total < d || condition_number(t) <= max_cond) {
            return from_stacked(t, partition);
        }
    }
}

/// Random partition of `total` rows into blocks of size at most `max_block`.
[[nodiscard]] inline std::vector<Eigen::Index> random_partition(Eigen::Index total, Eigen::Index max_block, Rng& rng)
{
    std::vector<Eigen::Index> p;
    while (total > 0) {
        std::uniform_int_distribution<Eigen::Index> pick(1, std::min(max_block, total));
        const Eigen::Index di = pick(rng);
        p.push_back(di);
        total -= di;
    }
    return p;
}

/// A dual of f other than the canonical one whenever sum d_i > d:
/// canonical dual plus blocks of (I - T S^{-1} T^H) Z for random Z.
[[nodiscard]] inline GFrame random_dual(const GFrame& f, Rng& rng, double scale = 0.5)
{
    const CMatrix t = analysis_matrix(f);
    const CMatrix s_inv = frame_operator(f).llt().solve(identity(f.h_dim()));
    const CMatrix projector = identity(t.rows()) - t * s_inv * t.adjoint();
    const CMatrix extra = projector * random_complex_matrix(t.rows(), f.h_dim(), rng) * scale;
    return from_stacked(analysis_matrix(canonical_dual(f)) + extra, f.partition());
}

enum class GenerateKind { RandomGFrame, GRiesz, GOnb, Parseval, ControlledCommuting, Weighted };

[[nodiscard]] inline std::optional<GenerateKind> parse_generate_kind(std::string_view s)
{
    if (s == "random_gframe") return GenerateKind::RandomGFrame;
    if (s == "g_riesz") return GenerateKind::GRiesz;
    if (s == "g_onb") return GenerateKind::GOnb;
    if (s == "parseval") return GenerateKind::Parseval;
    if (s == "controlled_commuting") return GenerateKind::ControlledCommuting;
    if (s == "weighted") return GenerateKind::Weighted;
    return std::nullopt;
}

[[nodiscard]] constexpr std::string_view to_string(GenerateKind k) noexcept
{
    switch (k) {
    case GenerateKind::RandomGFrame: return "random_gframe";
    case GenerateKind::GRiesz: return "g_riesz";
    case GenerateKind::GOnb: return "g_onb";
    case GenerateKind::Parseval: return "parseval";
    case GenerateKind::ControlledCommuting: return "controlled_commuting";
    case GenerateKind::Weighted: return "weighted";
    }
    return "unknown";
}

/// Positive control operator c0 I + c1 S + c2 S^2, which commutes with S.
[[nodiscard]] inline CMatrix commuting_positive_control(const GFrame& f, Rng& rng)
{
    std::uniform_real_distribution<double> coef(0.5, 2.0);
    const CMatrix s = frame_operator(f);
    return hermitian_part(coef(rng) * identity(f.h_dim()) + coef(rng) * s + coef(rng) * s * s);
}

[[nodiscard]] inline WeightSequence random_positive_weights(std::size_t n, Rng& rng, double lo = 0.5, double hi = 2.0)
{
    std::uniform_real_distribution<double> dist(lo, hi);
    std::vector<double> w(n);
    for (double& v : w) {
        v = dist(rng);
    }
    return WeightSequence::real(w);
}

[[nodiscard]] inline Instance generate(GenerateKind kind, Eigen::Index d, const std::vector<Eigen::Index>& partition,
                                       std::uint64_t seed)
{
    if (d < 1 || partition.empty()) {
        throw Error(ErrorKind::InfeasibleKind, "need d >= 1 and a non-empty partition");
    }
    for (Eigen::Index di : partition) {
        if (di < 1) {
            throw Error(ErrorKind::BadPartition, "partition entries must be positive");
        }
    }
    const Eigen::Index total = std::accumulate(partition.begin(), partition.end(), Eigen::Index{0});
    const std::string name(to_string(kind));
    const bool square = kind == GenerateKind::GRiesz || kind == GenerateKind::GOnb;
    if (square && total != d) {
        throw Error(ErrorKind::InfeasibleKind, name + " needs sum of block dims == d");
    }
    if (!square && total < d) {
        throw Error(ErrorKind::InfeasibleKind, name + " needs sum of block dims >= d");
    }

    Rng rng(seed);
    const std::string label = name + "/d=" + std::to_string(d) + "/seed=" + std::to_string(seed);
    switch (kind) {
    case GenerateKind::GOnb:
        return Instance{from_stacked(random_unitary(d, rng), partition, label)};
    case GenerateKind::Parseval:
        return Instance{from_stacked(random_isometry(total, d, rng), partition, label)};
    case GenerateKind::RandomGFrame:
    case GenerateKind::GRiesz:
        return Instance{from_stacked(analysis_matrix(random_gframe(d, partition, rng)), partition, label)};
    case GenerateKind::ControlledCommuting: {
        Instance inst{from_stacked(analysis_matrix(random_gframe(d, partition, rng)), partition, label)};
        inst.control = commuting_positive_control(inst.frame, rng);
        return inst;
    }
    case GenerateKind::Weighted: {
        Instance inst{from_stacked(analysis_matrix(random_gframe(d, partition, rng)), partition, label)};
        inst.weights = random_positive_weights(partition.size(), rng);
        inst.weights_alt = random_positive_weights(partition.size(), rng);
        return inst;
    }
    }
    throw Error(ErrorKind::InfeasibleKind, "unknown kind");
}

}  // namespace gframe
