#pragma once

#include <stdexcept>
#include <string>

namespace gbe {

inline constexpr const char* kVersion = "0.1.0";

// Raised when a computation cannot reach its stated accuracy
// (near-degenerate eigenvalues, catastrophic cancellation, ...).
class precision_error : public std::runtime_error {
public:
    explicit precision_error(const std::string& what) : std::runtime_error(what) {}
};

// Raised on malformed experiment configuration; carries the offending field path.
class config_error : public std::runtime_error {
public:
    config_error(std::string field, const std::string& what)
        : std::runtime_error("config field '" + field + "': " + what), field_(std::move(field)) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

} // namespace gbe
