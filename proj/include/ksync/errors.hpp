// errors.hpp -- exception hierarchy shared by all ksync components
#pragma once

#include <stdexcept>
#include <string>

namespace ksync {

// Base class so callers can catch everything ksync throws with one handler.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Unparseable or ill-formed input: bad digits, bad files, bad arguments.
struct MalformedInputError : Error {
    explicit MalformedInputError(const std::string& msg) : Error(msg) {}
};

// A configured resource cap (state count, iteration count) was exceeded.
struct CapExceededError : Error {
    explicit CapExceededError(const std::string& msg) : Error(msg) {}
};

// A query fell outside the domain of the queried object.
struct DomainError : Error {
    explicit DomainError(const std::string& msg) : Error(msg) {}
};

// A structural invariant that should hold by construction was observed broken.
struct InvariantError : Error {
    explicit InvariantError(const std::string& msg) : Error(msg) {}
};

// A brute-force computation did not stabilize within its prefix budget.
struct InstabilityError : Error {
    explicit InstabilityError(const std::string& msg) : Error(msg) {}
};

} // namespace ksync
