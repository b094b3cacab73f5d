#pragma once

#include <stdexcept>
#include <string>

namespace sqfap {

/// Bad input at an API boundary: non-squarefree modulus, non-unit residue,
/// parameter out of range. The CLI maps this to exit code 2.
class input_error : public std::invalid_argument {
public:
    explicit input_error(const std::string& what) : std::invalid_argument(what) {}
};

/// An identity or hard cap that must always hold was violated. This is a bug
/// signal, never a user error; the CLI maps it to exit code 3.
class invariant_error : public std::logic_error {
public:
    explicit invariant_error(const std::string& what) : std::logic_error(what) {}
};

namespace detail {

inline void check_invariant(bool ok, const char* what) {
    if (!ok) throw invariant_error(what);
}

}  // namespace detail
}  // namespace sqfap
