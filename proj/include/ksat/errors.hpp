#ifndef KSAT_ERRORS_HPP
#define KSAT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ksat {

struct MalformedInput : std::runtime_error {
  explicit MalformedInput(const std::string& what) : std::runtime_error("malformed input: " + what) {}
};

struct NonUniformWidth : std::runtime_error {
  explicit NonUniformWidth(const std::string& what) : std::runtime_error("non-uniform clause width: " + what) {}
};

struct DomainError : std::runtime_error {
  explicit DomainError(const std::string& what) : std::runtime_error("domain error: " + what) {}
};

struct ResampleBudgetExceeded : std::runtime_error {
  explicit ResampleBudgetExceeded(const std::string& what)
      : std::runtime_error("resample budget exceeded: " + what) {}
};

struct ComponentTooLarge : std::runtime_error {
  std::size_t size;
  std::size_t cap;
  ComponentTooLarge(std::size_t size_, std::size_t cap_)
      : std::runtime_error("component exceeds cap: size > " + std::to_string(cap_)), size(size_), cap(cap_) {}
};

struct ExcessBudgetExceeded : std::runtime_error {
  explicit ExcessBudgetExceeded(const std::string& what)
      : std::runtime_error("cycle-variable budget exceeded: " + what) {}
};

// Internal consistency failure: the residual graph was expected to be acyclic.
struct NotAForest : std::logic_error {
  explicit NotAForest(const std::string& what) : std::logic_error("not a forest: " + what) {}
};

struct UnsatisfiableResidual : std::runtime_error {
  UnsatisfiableResidual() : std::runtime_error("residual formula has no satisfying assignment") {}
};

struct EmptyClause : std::runtime_error {
  EmptyClause() : std::runtime_error("simplified formula contains an empty clause") {}
};

struct TooLarge : std::runtime_error {
  explicit TooLarge(const std::string& what) : std::runtime_error("instance too large: " + what) {}
};

struct SupportMismatch : std::runtime_error {
  explicit SupportMismatch(const std::string& what) : std::runtime_error("support mismatch: " + what) {}
};

struct UndefinedConditional : std::runtime_error {
  explicit UndefinedConditional(const std::string& what)
      : std::runtime_error("undefined conditional: " + what) {}
};

struct MarkingInvalid : std::runtime_error {
  explicit MarkingInvalid(const std::string& what) : std::runtime_error("invalid marking: " + what) {}
};

}  // namespace ksat

#endif
