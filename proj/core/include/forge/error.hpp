#pragma once

#include <stdexcept>
#include <string>

namespace forge {

// Every failure carries a stable machine-readable code ("NoCycle",
// "TooLarge", ...) next to the human-readable message, so callers and
// tests can dispatch on the code without parsing text.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(code + ": " + message), code_(std::move(code)) {}

    const std::string& code() const { return code_; }

private:
    std::string code_;
};

[[noreturn]] inline void fail(const std::string& code, const std::string& message) {
    throw Error(code, message);
}

inline void require(bool condition, const std::string& code, const std::string& message) {
    if (!condition) fail(code, message);
}

} // namespace forge
