#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace maslov {

enum class ErrorKind {
  InvalidInput,
  RankDeficiency,
  DegenerateCoefficient,
  SingularMatrix,
  BlowUp,
  InvarianceViolation,
  NeedsFinerGrid,
  NeedsRefinement,
  Syntax,
  Evaluation,
  UnknownName,
  Config,
};

const char* kind_name(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t offset, std::vector<std::string> expected,
              const std::string& what)
      : Error(ErrorKind::Syntax, what),
        offset_(offset),
        expected_(std::move(expected)) {}
  std::size_t offset() const noexcept { return offset_; }
  const std::vector<std::string>& expected() const noexcept {
    return expected_;
  }

 private:
  std::size_t offset_;
  std::vector<std::string> expected_;
};

class BlowUpError : public Error {
 public:
  BlowUpError(double x, const std::string& what)
      : Error(ErrorKind::BlowUp, what), x_(x) {}
  double x() const noexcept { return x_; }

 private:
  double x_;
};

// Raised when rho vanishes (or nearly so) on a shelf.
class InvarianceError : public Error {
 public:
  InvarianceError(std::string shelf, std::size_t node, double param,
                  const std::string& what)
      : Error(ErrorKind::InvarianceViolation, what),
        shelf_(std::move(shelf)),
        node_(node),
        param_(param) {}
  const std::string& shelf() const noexcept { return shelf_; }
  std::size_t node() const noexcept { return node_; }
  double param() const noexcept { return param_; }

 private:
  std::string shelf_;
  std::size_t node_;
  double param_;
};

}  // namespace maslov
