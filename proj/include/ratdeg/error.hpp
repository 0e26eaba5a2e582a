// Typed error codes shared by every module. Every failure path in the
// library throws ratdeg::Error; nothing throws bare std exceptions.
#pragma once

#include <stdexcept>
#include <string>

namespace ratdeg {

enum class Errc {
    not_prime,
    degree_too_large,
    division_by_zero,
    field_too_large,
    ring_mismatch,
    arity_mismatch,
    not_homogeneous,
    mixed_degrees,
    budget_exceeded,
    positive_dimensional,
    not_zero_dimensional,
    extension_cap_exceeded,
    not_a_point,
    truncation_too_small,
    positive_dimensional_base_locus,
    positive_dimensional_fiber,
    no_valid_source,
    not_surjective,
    not_generating,
    verification_failed,
    characteristic_two,
    parse_error,
    violation,
    internal,
};

inline const char* errc_name(Errc c) {
    switch (c) {
        case Errc::not_prime: return "NotPrime";
        case Errc::degree_too_large: return "DegreeTooLarge";
        case Errc::division_by_zero: return "DivisionByZero";
        case Errc::field_too_large: return "FieldTooLarge";
        case Errc::ring_mismatch: return "RingMismatch";
        case Errc::arity_mismatch: return "ArityMismatch";
        case Errc::not_homogeneous: return "NotHomogeneous";
        case Errc::mixed_degrees: return "MixedDegrees";
        case Errc::budget_exceeded: return "ComputationBudgetExceeded";
        case Errc::positive_dimensional: return "PositiveDimensional";
        case Errc::not_zero_dimensional: return "NotZeroDimensional";
        case Errc::extension_cap_exceeded: return "ExtensionCapExceeded";
        case Errc::not_a_point: return "NotAPoint";
        case Errc::truncation_too_small: return "TruncationTooSmall";
        case Errc::positive_dimensional_base_locus: return "PositiveDimensionalBaseLocus";
        case Errc::positive_dimensional_fiber: return "PositiveDimensionalFiber";
        case Errc::no_valid_source: return "NoValidSource";
        case Errc::not_surjective: return "NotSurjective";
        case Errc::not_generating: return "NotGenerating";
        case Errc::verification_failed: return "VerificationFailed";
        case Errc::characteristic_two: return "CharacteristicTwo";
        case Errc::parse_error: return "ParseError";
        case Errc::violation: return "Violation";
        case Errc::internal: return "InternalError";
    }
    return "UnknownError";
}

class Error : public std::runtime_error {
public:
    Error(Errc code, std::string message)
        : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

    Error(Errc code, std::string message, int line, int column)
        : std::runtime_error(std::string(errc_name(code)) + ": " + message + " (line " +
                             std::to_string(line) + ", column " + std::to_string(column) + ")"),
          code_(code), line_(line), column_(column) {}

    Errc code() const noexcept { return code_; }
    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    Errc code_;
    int line_ = -1;
    int column_ = -1;
};

}  // namespace ratdeg
