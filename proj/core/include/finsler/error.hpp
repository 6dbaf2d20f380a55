#pragma once

#include <stdexcept>
#include <string>

namespace finsler {

/// Broad failure classes; the CLI maps these onto exit statuses.
enum class ErrorKind {
  domain,        // bad input: zero vector, wrong dimension, rep not in N-perp, ...
  cone,          // (x, v) outside the admissible cone (or its closure)
  evaluation,    // non-finite Lagrangian value or derivative
  solver,        // iterative solve failed to converge
  signature,     // degenerate or wrong-signature fundamental tensor
  construction,  // catalog constructor could not build a valid Lagrangian
  precondition,  // a verification precondition does not hold
  degeneracy,    // limit / profile degenerates (focal point on the base ray)
  schema,        // malformed descriptor or run configuration
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

struct DomainError : Error {
  explicit DomainError(const std::string& w) : Error(ErrorKind::domain, w) {}
};
/// Linearly dependent input where independence is required.
struct RankError : Error {
  explicit RankError(const std::string& w) : Error(ErrorKind::domain, w) {}
};
struct ConeViolation : Error {
  explicit ConeViolation(const std::string& w) : Error(ErrorKind::cone, w) {}
};
struct EvaluationError : Error {
  explicit EvaluationError(const std::string& w) : Error(ErrorKind::evaluation, w) {}
};
struct SolverError : Error {
  explicit SolverError(const std::string& w) : Error(ErrorKind::solver, w) {}
};
struct SignatureError : Error {
  explicit SignatureError(const std::string& w) : Error(ErrorKind::signature, w) {}
};
struct ConstructionError : Error {
  explicit ConstructionError(const std::string& w) : Error(ErrorKind::construction, w) {}
};
struct PreconditionError : Error {
  explicit PreconditionError(const std::string& w) : Error(ErrorKind::precondition, w) {}
};
struct DegeneracyError : Error {
  explicit DegeneracyError(const std::string& w) : Error(ErrorKind::degeneracy, w) {}
};
struct SchemaError : Error {
  explicit SchemaError(const std::string& w) : Error(ErrorKind::schema, w) {}
};

}  // namespace finsler
