/*
 * This file is part of entfrontier.
 *
 * Licensed under the Apache License, Version 2.0; you may obtain a copy
 * of the license at http://www.apache.org/licenses/LICENSE-2.0.
 */

#pragma once

#include <stdexcept>
#include <string>

namespace entfrontier {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Input matrix is not Hermitian; carries max |m - m^dagger|.
class NotHermitian : public Error {
public:
  explicit NotHermitian(double deviation)
      : Error("matrix is not Hermitian: max|m - m^dagger| = " +
              std::to_string(deviation)),
        deviation(deviation) {}
  double deviation;
};

/// Input matrix trace differs from one; carries |tr - 1|.
class NotUnitTrace : public Error {
public:
  explicit NotUnitTrace(double deviation)
      : Error("matrix trace is not one: |tr - 1| = " + std::to_string(deviation)),
        deviation(deviation) {}
  double deviation;
};

/// Input matrix has a negative eigenvalue; carries the eigenvalue.
class NotPSD : public Error {
public:
  explicit NotPSD(double min_eigenvalue)
      : Error("matrix is not positive semidefinite: min eigenvalue = " +
              std::to_string(min_eigenvalue)),
        min_eigenvalue(min_eigenvalue) {}
  double min_eigenvalue;
};

class DomainError : public Error {
public:
  using Error::Error;
};

class RankError : public Error {
public:
  using Error::Error;
};

class RootBracketFailure : public Error {
public:
  RootBracketFailure(const std::string& what, double residual_lo, double residual_hi)
      : Error(what + " (residuals " + std::to_string(residual_lo) + ", " +
              std::to_string(residual_hi) + ")"),
        residual_lo(residual_lo),
        residual_hi(residual_hi) {}
  double residual_lo;
  double residual_hi;
};

class NonPhysicalCss : public Error {
public:
  using Error::Error;
};

class ConvergenceFailure : public Error {
public:
  using Error::Error;
};

class SearchFailure : public Error {
public:
  using Error::Error;
};

}  // namespace entfrontier
