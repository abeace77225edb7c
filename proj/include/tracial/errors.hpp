#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace tracial {

/// Base class for every error raised by the library. `code()` is a stable
/// machine-readable tag (e.g. "syntax-error", "budget-exceeded").
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& what)
      : std::runtime_error(what), code_(std::move(code)) {}
  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& what) : Error("invalid-argument", what) {}
};

/// Formula/term text that does not match the grammar.
class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t position, std::vector<std::string> expected, const std::string& what,
              std::string code = "syntax-error")
      : Error(std::move(code), what), position_(position), expected_(std::move(expected)) {}
  std::size_t position() const noexcept { return position_; }
  const std::vector<std::string>& expected() const noexcept { return expected_; }

 private:
  std::size_t position_;
  std::vector<std::string> expected_;
};

/// Requests outside what the evaluator can answer (mixed quantifiers,
/// quantifiers inside a modulus computation, ...).
class Unsupported : public Error {
 public:
  explicit Unsupported(const std::string& what, std::string code = "unsupported")
      : Error(std::move(code), what) {}
};

class BudgetExceeded : public Error {
 public:
  BudgetExceeded(double required, std::uint64_t budget, const std::string& what)
      : Error("budget-exceeded", what), required_(required), budget_(budget) {}
  /// Cardinality that would have been needed (may exceed 2^64, hence double).
  double required() const noexcept { return required_; }
  std::uint64_t budget() const noexcept { return budget_; }

 private:
  double required_;
  std::uint64_t budget_;
};

/// Inputs that violate a numeric or structural contract (not-hermitian,
/// invalid-pvm, too-far, dimension-mismatch, unbound-variable, ...).
class ValidationError : public Error {
 public:
  ValidationError(std::string code, const std::string& what) : Error(std::move(code), what) {}
};

}  // namespace tracial
