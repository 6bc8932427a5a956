#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace sievelab {

// Argument outside a table or representable range.
class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Argument violates a mathematical precondition (not squarefree, not prime, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class NotInvertibleError : public DomainError {
 public:
  using DomainError::DomainError;
};

// A configured resource cap (support size, table size) would be exceeded.
class ResourceError : public std::runtime_error {
 public:
  ResourceError(const std::string& what, std::size_t estimate)
      : std::runtime_error(what), estimate_(estimate) {}
  // Lower bound on the size that was being built when the cap tripped.
  std::size_t estimate() const noexcept { return estimate_; }

 private:
  std::size_t estimate_;
};

// Inputs built from different parameter sets were combined.
class ConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class SplitInfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A requested integral does not converge.
class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Configuration problem; carries the offending field names.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(const std::string& what, std::vector<std::string> fields)
      : std::invalid_argument(what), fields_(std::move(fields)) {}
  const std::vector<std::string>& fields() const noexcept { return fields_; }

 private:
  std::vector<std::string> fields_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace sievelab
