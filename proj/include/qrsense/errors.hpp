// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace qrsense {

/// Bad parameters or violated preconditions. The CLI maps this to exit code 1.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A gauss_sum argument k or a multiplier p shares a factor with N.
class CoprimalityError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// File could not be opened, written or parsed. The CLI maps this to exit code 2.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Iterative eigen-solver hit its sweep cap.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A column set whose estimated condition number exceeds the solver limit.
class RankDeficiency : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qrsense
