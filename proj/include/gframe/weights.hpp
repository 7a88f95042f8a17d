#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "gframe/kernel.hpp"

namespace gframe {

struct SemiNormBounds {
    double a = 0.0;
    double b = 0.0;
};

/// Per-block scalars m_i. On a finite index set every sequence without zeros
/// is semi-normalized with a = min |m_i|, b = max |m_i|.
class WeightSequence {
public:
    WeightSequence() = default;

    explicit WeightSequence(std::vector<complex> values) : values_(std::move(values))
    {
        double lo = std::numeric_limits<double>::infinity();
        for (const complex& v : values_) {
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
                throw Error(ErrorKind::NonFinite, "weight is NaN or Inf");
            }
            norm_inf_ = std::max(norm_inf_, std::abs(v));
            lo = std::min(lo, std::abs(v));
        }
        if (!values_.empty() && lo > 0.0) {
            semi_norm_ = SemiNormBounds{lo, norm_inf_};
        }
    }

    static WeightSequence real(const std::vector<double>& values)
    {
        return WeightSequence(std::vector<complex>(values.begin(), values.end()));
    }

    static WeightSequence ones(std::size_t n) { return WeightSequence(std::vector<complex>(n, complex(1.0))); }

    [[nodiscard]] const std::vector<complex>& values() const noexcept { return values_; }
    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
    [[nodiscard]] complex operator[](std::size_t i) const { return values_.at(i); }
    [[nodiscard]] double norm_inf() const noexcept { return norm_inf_; }
    [[nodiscard]] const std::optional<SemiNormBounds>& semi_norm_bounds() const noexcept { return semi_norm_; }

    [[nodiscard]] bool is_real() const
    {
        return std::all_of(values_.begin(), values_.end(), [](complex v) { return v.imag() == 0.0; });
    }

    [[nodiscard]] bool all_positive() const
    {
        return is_real() && std::all_of(values_.begin(), values_.end(), [](complex v) { return v.real() > 0.0; });
    }

    [[nodiscard]] bool all_negative() const
    {
        return is_real() && std::all_of(values_.begin(), values_.end(), [](complex v) { return v.real() < 0.0; });
    }

    /// |m_i| for each i.
    [[nodiscard]] std::vector<double> magnitudes() const
    {
        std::vector<double> out;
        out.reserve(values_.size());
        for (const complex& v : values_) {
            out.push_back(std::abs(v));
        }
        return out;
    }

    [[nodiscard]] WeightSequence conjugated() const
    {
        std::vector<complex> out;
        out.reserve(values_.size());
        for (const complex& v : values_) {
            out.push_back(std::conj(v));
        }
        return WeightSequence(std::move(out));
    }

private:
    std::vector<complex> values_;
    double norm_inf_ = 0.0;
    std::optional<SemiNormBounds> semi_norm_;
};

}  // namespace gframe
