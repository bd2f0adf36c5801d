#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace padicsum {

// Invalid input: bad polynomial, bad level, constant polynomial, bad ranges.
class UsageError : public std::invalid_argument {
public:
    explicit UsageError(const std::string& what) : std::invalid_argument(what) {}
};

class ParseError : public UsageError {
public:
    ParseError(const std::string& message, std::size_t position)
        : UsageError(message + " at position " + std::to_string(position)),
          position_(position) {}

    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

// A structured input document (resolution data, run config) violates its schema
// or one of its invariants. `field` names the offending field path.
class DataError : public UsageError {
public:
    DataError(const std::string& field, const std::string& message)
        : UsageError(field + ": " + message), field_(field) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

class BudgetError : public std::runtime_error {
public:
    BudgetError(std::uint64_t required, std::uint64_t allowed)
        : std::runtime_error("enumeration budget exceeded: requires " + std::to_string(required) +
                             " points, allowed " + std::to_string(allowed)),
          required_(required),
          allowed_(allowed) {}

    std::uint64_t required() const noexcept { return required_; }
    std::uint64_t allowed() const noexcept { return allowed_; }

private:
    std::uint64_t required_;
    std::uint64_t allowed_;
};

}  // namespace padicsum
