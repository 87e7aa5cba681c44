#pragma once

#include <stdexcept>
#include <string>

namespace wifipos {

// Base class for all library-level failures. The CLI maps these to exit 1.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input data (CSV rows, env files, persisted maps). Messages carry
// the offending line or record so the diagnostic is actionable.
class ParseError : public Error {
public:
    explicit ParseError(const std::string& what) : Error(what) {}
};

} // namespace wifipos
