#pragma once

#include <stdexcept>
#include <string>

namespace ccmp {

// Base of every error raised by the library. Operations that report
// problems (validate_instance, check_certificate) return values instead.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised by a solver when a time or iteration cap is hit. `bound` is the
// best bound known at that point (may be infinite).
class LimitExceeded : public Error {
 public:
  LimitExceeded(const std::string& what, double bound)
      : Error(what), bound_(bound) {}
  double bound() const { return bound_; }

 private:
  double bound_;
};

class NumericalFailure : public Error {
 public:
  using Error::Error;
};

// A bilinear product or big-M coefficient needs a finite variable bound.
class MissingBound : public Error {
 public:
  explicit MissingBound(const std::string& variable)
      : Error("no finite upper bound for " + variable), variable_(variable) {}
  const std::string& variable() const { return variable_; }

 private:
  std::string variable_;
};

class PreconditionViolated : public Error {
 public:
  using Error::Error;
};

class UnboundedRecourse : public Error {
 public:
  explicit UnboundedRecourse(int scenario)
      : Error("recourse of scenario " + std::to_string(scenario) +
              " is unbounded below"),
        scenario_(scenario) {}
  int scenario() const { return scenario_; }

 private:
  int scenario_;
};

class DualInfeasible : public Error {
 public:
  explicit DualInfeasible(int scenario)
      : Error("dual subproblem of scenario " + std::to_string(scenario) +
              " is infeasible"),
        scenario_(scenario) {}
  int scenario() const { return scenario_; }

 private:
  int scenario_;
};

class QStarUnbounded : public Error {
 public:
  QStarUnbounded(int scenario, int row)
      : Error("q* for scenario " + std::to_string(scenario) + " row " +
              std::to_string(row) + " is unbounded below"),
        scenario_(scenario),
        row_(row) {}
  int scenario() const { return scenario_; }
  int row() const { return row_; }

 private:
  int scenario_;
  int row_;
};

class ChanceViolated : public Error {
 public:
  using Error::Error;
};

class TooManyScenarios : public Error {
 public:
  explicit TooManyScenarios(int k)
      : Error("enumeration oracle refuses K = " + std::to_string(k)), k_(k) {}
  int scenarios() const { return k_; }

 private:
  int k_;
};

class SplitCaseDetected : public Error {
 public:
  explicit SplitCaseDetected(int scenario)
      : Error("scenario " + std::to_string(scenario) +
              " is recourse-infeasible on part of X and unbounded on the "
              "rest; branching on X is not supported"),
        scenario_(scenario) {}
  int scenario() const { return scenario_; }

 private:
  int scenario_;
};

class ApplicabilityFailed : public Error {
 public:
  using Error::Error;
};

// Instance or config file does not conform to its schema. `locus` names the
// offending field path or line.
class SchemaError : public Error {
 public:
  SchemaError(const std::string& locus, const std::string& detail)
      : Error("schema error at " + locus + ": " + detail), locus_(locus) {}
  const std::string& locus() const { return locus_; }

 private:
  std::string locus_;
};

}  // namespace ccmp
