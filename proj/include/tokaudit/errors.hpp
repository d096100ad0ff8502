#pragma once

#include <stdexcept>
#include <string>

namespace tokaudit {

// Malformed input data: bad JSON, bad merges line, bad sensor row, bad UTF-8.
// The message names the line / byte offset / field that failed.
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Structurally valid data that violates a cross-file or cross-field invariant:
// duplicate vocab ids, merge result missing from vocab, reserved id collisions.
class IntegrityError : public std::runtime_error {
public:
    explicit IntegrityError(const std::string& what) : std::runtime_error(what) {}
};

// A symbol or id that the tokenizer cannot represent.
class TokenError : public std::runtime_error {
public:
    explicit TokenError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace tokaudit
