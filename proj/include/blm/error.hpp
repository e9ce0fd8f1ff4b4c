#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace blm {

enum class ErrorKind {
    InvalidArgument,
    EmptyInput,
    UndefinedCorrelation,
    Domain,
    DimensionMismatch,
    Parse,
    Schema,
    IllConditioned,
    Usage,
    InvalidValue,
    Io,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Single exception type for the library; `kind()` lets callers (the CLI in
/// particular) map failures onto exit codes without string matching.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace blm
