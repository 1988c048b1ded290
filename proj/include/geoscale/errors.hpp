#pragma once

#include <stdexcept>
#include <string>

namespace geoscale {

/// Input text could not be parsed. `position` is a byte offset into the
/// input when known, std::string::npos otherwise.
class parse_error : public std::runtime_error {
public:
    explicit parse_error(const std::string& what, std::size_t position = std::string::npos)
        : std::runtime_error(what), position_(position) {}

    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

/// A computation cannot produce a meaningful number (too few scales for a
/// fit, zero variance, undefined rate and so on).
class numeric_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A request would exceed a hard resource guard (e.g. curve iteration
/// counts that would allocate unbounded memory).
class resource_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace geoscale
