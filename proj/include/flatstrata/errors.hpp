#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace flatstrata {

// Every domain failure carries a stable kind tag (EquationViolation,
// NotGeneric, ...) so callers and the CLI can dispatch without parsing
// messages. `index` optionally names the offending triangle/edge/point.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& message, int index = -1)
        : std::runtime_error(message), kind_(std::move(kind)), index_(index) {}

    const std::string& kind() const { return kind_; }
    int index() const { return index_; }

private:
    std::string kind_;
    int index_;
};

[[noreturn]] inline void fail(const std::string& kind, const std::string& message, int index = -1)
{
    throw Error(kind, message, index);
}

} // namespace flatstrata
