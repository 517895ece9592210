#pragma once

#include <stdexcept>
#include <string>

namespace medfilter {

// Two failure families, mapped to CLI exit codes: config/usage problems
// exit 1, numerical problems exit 2.
enum class ErrorKind { Config, Numerical };

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, std::string msg)
      : std::runtime_error(std::move(msg)), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

private:
  ErrorKind kind_;
};

class ZeroVarianceColumn : public Error {
public:
  explicit ZeroVarianceColumn(long index)
      : Error(ErrorKind::Numerical,
              "column " + std::to_string(index) + " has zero variance"),
        index_(index) {}
  long index() const { return index_; }

private:
  long index_;
};

class NonFiniteInput : public Error {
public:
  explicit NonFiniteInput(const std::string& where)
      : Error(ErrorKind::Numerical, "non-finite value in " + where) {}
};

class RankDeficient : public Error {
public:
  explicit RankDeficient(const std::string& what)
      : Error(ErrorKind::Numerical, "rank-deficient design: " + what) {}
};

class DimensionMismatch : public Error {
public:
  explicit DimensionMismatch(const std::string& what)
      : Error(ErrorKind::Numerical, "dimension mismatch: " + what) {}
};

class NotPSD : public Error {
public:
  explicit NotPSD(const std::string& what)
      : Error(ErrorKind::Numerical, "matrix not positive semidefinite: " + what) {}
};

class SampleTooSmall : public Error {
public:
  SampleTooSmall(long n, long k)
      : Error(ErrorKind::Numerical,
              "sample size " + std::to_string(n) +
                  " too small for dimension " + std::to_string(k)) {}
};

class DegenerateSE : public Error {
public:
  DegenerateSE()
      : Error(ErrorKind::Numerical,
              "both variance terms are zero with a nonzero product estimate") {}
};

class ConfigError : public Error {
public:
  explicit ConfigError(const std::string& what)
      : Error(ErrorKind::Config, what) {}
};

class EmptyResults : public Error {
public:
  explicit EmptyResults(const std::string& what)
      : Error(ErrorKind::Config, "no results to score: " + what) {}
};

class IoError : public Error {
public:
  explicit IoError(const std::string& what) : Error(ErrorKind::Config, what) {}
};

}  // namespace medfilter
