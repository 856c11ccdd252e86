#pragma once

#include <stdexcept>
#include <string>

namespace stsbo {

// Error taxonomy used across the library:
//   DomainError    invalid argument or configuration value (caller bug or bad config)
//   FormatError    malformed file content (CSV, config text)
//   NumericalError factorization or iteration failure after all fallbacks
//   ResourceError  a guard tripped (enumeration blow-up, budget exhaustion)
struct DomainError : std::invalid_argument {
  explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

struct FormatError : std::runtime_error {
  explicit FormatError(const std::string& what) : std::runtime_error(what) {}
};

struct NumericalError : std::runtime_error {
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

struct ResourceError : std::runtime_error {
  explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace stsbo
