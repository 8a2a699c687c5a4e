#pragma once

#include <stdexcept>
#include <string>

namespace odopt {

enum class ErrorKind {
  parameter,
  validation,
  structure,
  convergence,
  generation,
  degenerate,
  assembly,
  dimension,
  rank,
  config,
  runtime,
};

const char* to_string(ErrorKind kind) noexcept;

/// Base of every error raised by the library. The kind lets the CLI map
/// failures onto exit codes without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double achieved_gap)
      : Error(ErrorKind::convergence, what), gap_(achieved_gap) {}

  double achieved_gap() const noexcept { return gap_; }

 private:
  double gap_;
};

class AssemblyError : public Error {
 public:
  AssemblyError(const std::string& what, int agent)
      : Error(ErrorKind::assembly, what), agent_(agent) {}

  /// 0-based agent index whose row could not be built.
  int agent() const noexcept { return agent_; }

 private:
  int agent_;
};

/// Raised when a round cannot complete (non-finite oracle output and the like).
class RoundAbort : public Error {
 public:
  RoundAbort(const std::string& what, long round, int agent)
      : Error(ErrorKind::runtime, what), round_(round), agent_(agent) {}

  long round() const noexcept { return round_; }
  int agent() const noexcept { return agent_; }

 private:
  long round_;
  int agent_;
};

}  // namespace odopt
