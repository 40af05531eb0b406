#pragma once

#include <stdexcept>
#include <string>

namespace bml {

/// Input could not be parsed. `offset` is the byte position of the failure.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t offset)
        : std::runtime_error(what + " (byte " + std::to_string(offset) + ")"), offset_(offset) {}
    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

/// A numerical procedure failed (non-finite values, inconsistent ranks, ...).
class NumericError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

class IdenticallyZeroSlice : public std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

class OutOfRange : public std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

class SpaceMismatch : public std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

class PointOutsideBidisk : public std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

class EmptyTruncation : public std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

class DegreeOverflow : public std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

class MemoryBudget : public std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

class NotInSubspace : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace bml
