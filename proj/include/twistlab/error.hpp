#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace twistlab {

/// Classification of failures. `usage` and `parse` are caller mistakes about
/// the shape of the input; everything else is a mathematical domain error.
enum class ErrorKind {
    usage,
    parse,
    invalid_argument,
    division_by_zero,
    incompatible_fields,
    rational_input,
    not_primitive,
    singular,
    not_cf_type,
    precondition,
};

constexpr std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::usage: return "usage";
    case ErrorKind::parse: return "parse";
    case ErrorKind::invalid_argument: return "invalid_argument";
    case ErrorKind::division_by_zero: return "division_by_zero";
    case ErrorKind::incompatible_fields: return "incompatible_fields";
    case ErrorKind::rational_input: return "rational_input";
    case ErrorKind::not_primitive: return "not_primitive";
    case ErrorKind::singular: return "singular";
    case ErrorKind::not_cf_type: return "not_cf_type";
    case ErrorKind::precondition: return "precondition";
    }
    return "unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Surd literal syntax error; `column` is 1-based.
class ParseError : public Error {
public:
    ParseError(std::size_t column, const std::string& message)
        : Error(ErrorKind::parse, "column " + std::to_string(column) + ": " + message),
          column_(column) {}

    std::size_t column() const noexcept { return column_; }

private:
    std::size_t column_;
};

} // namespace twistlab
