#pragma once

#include <stdexcept>
#include <string>

namespace twise {

// Thrown when an operation would exceed a resource cap (materialization,
// verification work, ...). Callers that budget resources catch this; the CLI
// maps it to exit code 3.
class capacity_error : public std::runtime_error {
public:
    explicit capacity_error(const std::string& what) : std::runtime_error(what) {}
};

// Thrown by the text-format readers; carries the 1-based offending line.
class parse_error : public std::runtime_error {
public:
    parse_error(long line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

    long line() const { return line_; }

private:
    long line_;
};

} // namespace twise
