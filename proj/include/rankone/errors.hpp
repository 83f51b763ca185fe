#pragma once

#include <stdexcept>
#include <string>

namespace rankone {

// Thrown when a computation would exceed a configured length/size budget
// or overflow 63-bit position arithmetic.
class resource_limit_error : public std::runtime_error {
public:
    explicit resource_limit_error(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when internal cross-checks fail (malformed cache, violated
// structural invariant). Signals corrupt data, not bad user input.
class integrity_error : public std::runtime_error {
public:
    explicit integrity_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace rankone
