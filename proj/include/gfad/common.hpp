// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace gfad {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;
using Index = Eigen::Index;

/// A precondition on an argument does not hold (bad dimension, out-of-range value).
class InvalidParameter : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A linear system that has to be inverted is rank deficient or too badly conditioned.
class SingularSystem : public std::runtime_error {
 public:
  SingularSystem(const std::string& what, double condition_number)
      : std::runtime_error(what + " (condition number " + std::to_string(condition_number) + ")"),
        condition_number_(condition_number) {}

  double condition_number() const noexcept { return condition_number_; }

 private:
  double condition_number_;
};

/// A hypothesis of one of the recovery guarantees is not met by the given inputs.
class ConditionViolated : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// File could not be opened, read or written; the message names the path.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Set of active node indices out of K nodes. Indices are kept strictly increasing.
class Support {
 public:
  Support() = default;
  explicit Support(int num_nodes) : num_nodes_(num_nodes) {
    if (num_nodes < 0) throw InvalidParameter("Support: negative node count");
  }
  /// Sorts and validates; duplicates or out-of-range indices are rejected.
  Support(int num_nodes, std::vector<int> indices);

  int num_nodes() const noexcept { return num_nodes_; }
  int size() const noexcept { return static_cast<int>(indices_.size()); }
  bool empty() const noexcept { return indices_.empty(); }
  const std::vector<int>& indices() const noexcept { return indices_; }
  bool contains(int k) const;

  auto begin() const noexcept { return indices_.begin(); }
  auto end() const noexcept { return indices_.end(); }
  int operator[](std::size_t i) const { return indices_[i]; }

  friend bool operator==(const Support&, const Support&) = default;

 private:
  int num_nodes_ = 0;
  std::vector<int> indices_;
};

/// Union of two supports over the same node count.
Support support_union(const Support& a, const Support& b);

std::string to_string(const Support& s);

/// Columns of `m` listed in `support`, in support order.
CMatrix select_columns(const CMatrix& m, const Support& support);

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

}  // namespace gfad
