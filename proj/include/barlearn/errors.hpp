#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace barlearn {

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t position)
        : std::runtime_error("parse error at " + std::to_string(position) + ": " + what), position_(position) {}

    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

/// A configured session limit (counterexample size, restarts, ...) was hit.
class LimitExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The operation does not support this automaton kind (e.g. Büchi equality).
class UnsupportedKind : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

} // namespace barlearn
