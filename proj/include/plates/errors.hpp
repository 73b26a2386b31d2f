#pragma once

#include <stdexcept>
#include <string>

namespace plates {

/// Broad failure categories. The CLI maps these onto exit codes.
enum class ErrorKind {
    Domain,    // argument outside the mathematical domain of an operation
    Spec,      // invalid mesh/geometry specification
    Geometry,  // degenerate element geometry
    Mesh,      // inconsistent mesh topology or boundary tagging
    Parse,     // malformed text input
    Numeric,   // factorization / quadrature / eigensolver failure
    Config,    // invalid run configuration
    Internal,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

const char* to_string(ErrorKind kind) noexcept;

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace plates
