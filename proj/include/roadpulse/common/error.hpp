#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace roadpulse {

// Error carries a short machine-readable code next to the human message.
// The CLI prints failures as "error: <code>: <message>" on a single line.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

[[noreturn]] inline void fail(std::string code, const std::string& message) {
    throw Error(std::move(code), message);
}

} // namespace roadpulse
