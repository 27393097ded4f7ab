#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace biot {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration; `issues` lists every problem as "field: message".
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(what), issues_{what} {}
  explicit ConfigError(std::vector<std::string> issues) : Error(join(issues)), issues_(std::move(issues)) {}
  const std::vector<std::string>& issues() const noexcept { return issues_; }

 private:
  static std::string join(const std::vector<std::string>& v) {
    std::string s;
    for (const auto& x : v) s += (s.empty() ? "" : "\n") + x;
    return s;
  }
  std::vector<std::string> issues_;
};

/// Raised when a factorization meets a zero (or, for SPD, non-positive) pivot.
class SingularMatrixError : public Error {
 public:
  SingularMatrixError(const std::string& what, long dof) : Error(what), dof_(dof) {}
  long dof() const noexcept { return dof_; }

 private:
  long dof_;
};

class SolverError : public Error {
 public:
  using Error::Error;
};

/// Fixed-stress iteration did not converge (or failed its residual check).
class NonConvergenceError : public Error {
 public:
  NonConvergenceError(const std::string& what, int slab, std::vector<double> history)
      : Error(what), slab_(slab), history_(std::move(history)) {}
  int slab() const noexcept { return slab_; }
  const std::vector<double>& history() const noexcept { return history_; }

 private:
  int slab_;
  std::vector<double> history_;
};

}  // namespace biot
