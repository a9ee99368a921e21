#pragma once

#include <stdexcept>
#include <string>

namespace lawprice {

// Exceptions carry a category so drivers can map them to stable exit codes.
enum class ErrorKind {
  InvalidArgument,
  Parse,
  SpaceMismatch,
  FlagViolation,
  Solver,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

struct InvalidArgument : Error {
  explicit InvalidArgument(const std::string& what) : Error(ErrorKind::InvalidArgument, what) {}
};
struct ParseError : Error {
  explicit ParseError(const std::string& what) : Error(ErrorKind::Parse, what) {}
};
struct SpaceMismatch : Error {
  explicit SpaceMismatch(const std::string& what) : Error(ErrorKind::SpaceMismatch, what) {}
};
struct FlagViolation : Error {
  explicit FlagViolation(const std::string& what) : Error(ErrorKind::FlagViolation, what) {}
};
struct SolverError : Error {
  explicit SolverError(const std::string& what) : Error(ErrorKind::Solver, what) {}
};

}  // namespace lawprice
