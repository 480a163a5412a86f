#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bcsecrecy {

enum class Errc {
    NegativeEntry,
    SumNotOne,
    InvalidPmf,
    InvalidChannel,
    InvalidJoint,
    DimensionMismatch,
    AxisOverlap,
    NegativeSnr,
    InvalidParams,
    AlphaOutOfRange,
    InvalidGrid,
    GridTooLarge,
    EmptyInput,
    SizeOverBudget,
    MessageOutOfRange,
    SymbolOutOfRange,
    EnumerationBudgetExceeded,
    ParseError,
};

constexpr std::string_view to_string(Errc e) {
    switch (e) {
    case Errc::NegativeEntry: return "NegativeEntry";
    case Errc::SumNotOne: return "SumNotOne";
    case Errc::InvalidPmf: return "InvalidPmf";
    case Errc::InvalidChannel: return "InvalidChannel";
    case Errc::InvalidJoint: return "InvalidJoint";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::AxisOverlap: return "AxisOverlap";
    case Errc::NegativeSnr: return "NegativeSnr";
    case Errc::InvalidParams: return "InvalidParams";
    case Errc::AlphaOutOfRange: return "AlphaOutOfRange";
    case Errc::InvalidGrid: return "InvalidGrid";
    case Errc::GridTooLarge: return "GridTooLarge";
    case Errc::EmptyInput: return "EmptyInput";
    case Errc::SizeOverBudget: return "SizeOverBudget";
    case Errc::MessageOutOfRange: return "MessageOutOfRange";
    case Errc::SymbolOutOfRange: return "SymbolOutOfRange";
    case Errc::EnumerationBudgetExceeded: return "EnumerationBudgetExceeded";
    case Errc::ParseError: return "ParseError";
    }
    return "Unknown";
}

/// Every failure raised by the library carries one of the Errc kinds so
/// callers (notably the CLI) can map it to an exit status.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }

    bool is_budget() const noexcept {
        return code_ == Errc::GridTooLarge || code_ == Errc::SizeOverBudget ||
               code_ == Errc::EnumerationBudgetExceeded;
    }

private:
    Errc code_;
};

}  // namespace bcsecrecy
