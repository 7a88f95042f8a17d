#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gframe {

enum class ErrorKind {
    NotHermitian,
    NonFinite,
    NormTooLarge,
    NegativeEigenvalue,
    NotAFrame,
    BadPartition,
    ShapeMismatch,
    DimensionMismatch,
    NotGRiesz,
    NotGOnb,
    NotCoisometry,
    MixedSigns,
    ComplexWeight,
    SingularG,
    NotDual,
    HypothesisFailed,
    MaxIterations,
    Singular,
    NotSelfAdjoint,
    NonPositiveInput,
    NotEigenRelation,
    ZeroBlock,
    ZeroWeight,
    NonPositiveWeight,
    SchemaError,
    InfeasibleKind,
};

[[nodiscard]] constexpr std::string_view to_string(ErrorKind kind) noexcept
{
    switch (kind) {
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::NormTooLarge: return "NormTooLarge";
    case ErrorKind::NegativeEigenvalue: return "NegativeEigenvalue";
    case ErrorKind::NotAFrame: return "NotAFrame";
    case ErrorKind::BadPartition: return "BadPartition";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NotGRiesz: return "NotGRiesz";
    case ErrorKind::NotGOnb: return "NotGOnb";
    case ErrorKind::NotCoisometry: return "NotCoisometry";
    case ErrorKind::MixedSigns: return "MixedSigns";
    case ErrorKind::ComplexWeight: return "ComplexWeight";
    case ErrorKind::SingularG: return "SingularG";
    case ErrorKind::NotDual: return "NotDual";
    case ErrorKind::HypothesisFailed: return "HypothesisFailed";
    case ErrorKind::MaxIterations: return "MaxIterations";
    case ErrorKind::Singular: return "Singular";
    case ErrorKind::NotSelfAdjoint: return "NotSelfAdjoint";
    case ErrorKind::NonPositiveInput: return "NonPositiveInput";
    case ErrorKind::NotEigenRelation: return "NotEigenRelation";
    case ErrorKind::ZeroBlock: return "ZeroBlock";
    case ErrorKind::ZeroWeight: return "ZeroWeight";
    case ErrorKind::NonPositiveWeight: return "NonPositiveWeight";
    case ErrorKind::SchemaError: return "SchemaError";
    case ErrorKind::InfeasibleKind: return "InfeasibleKind";
    }
    return "Unknown";
}

/// Errors whose cause is a mathematical hypothesis of the requested
/// construction rather than malformed input. The CLI maps these to exit 2.
[[nodiscard]] constexpr bool is_hypothesis_failure(ErrorKind kind) noexcept
{
    switch (kind) {
    case ErrorKind::NormTooLarge:
    case ErrorKind::NegativeEigenvalue:
    case ErrorKind::NotAFrame:
    case ErrorKind::DimensionMismatch:
    case ErrorKind::NotGRiesz:
    case ErrorKind::NotGOnb:
    case ErrorKind::NotCoisometry:
    case ErrorKind::MixedSigns:
    case ErrorKind::SingularG:
    case ErrorKind::NotDual:
    case ErrorKind::HypothesisFailed:
    case ErrorKind::MaxIterations:
    case ErrorKind::Singular:
    case ErrorKind::NotSelfAdjoint:
    case ErrorKind::NotEigenRelation:
    case ErrorKind::ZeroBlock:
    case ErrorKind::ZeroWeight:
    case ErrorKind::NonPositiveWeight:
    case ErrorKind::InfeasibleKind:
        return true;
    default:
        return false;
    }
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind)
    {
    }

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace gframe
