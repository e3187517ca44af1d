#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace nlsd {

enum class ErrorKind {
    InvalidArgument,
    EmptyResult,
    InvalidStencil,
    NotAFunctionGraph,
    IncompatibleWindow,
    CorruptPyramid,
    NotDifferenceRepresentable,
    DegenerateDecay,
    ParseError,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries one of the kinds above so the
/// CLI can emit a machine-readable error record.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace nlsd
