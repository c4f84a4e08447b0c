#pragma once

#include <stdexcept>
#include <string>

namespace ascwave {

/// Raised when an operation's preconditions are not met by its arguments.
class invalid_input : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when a postcondition that the mathematics guarantees fails to hold.
/// Seeing one of these means there is a bug in this library.
class contract_violation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// A stored or supplied coloring failed its avoidance re-check.
class verification_failure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline void require(bool ok, const std::string& what) {
    if (!ok) throw invalid_input(what);
}

inline void ensure(bool ok, const std::string& what) {
    if (!ok) throw contract_violation(what);
}

} // namespace detail
} // namespace ascwave
