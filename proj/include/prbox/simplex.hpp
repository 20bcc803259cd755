// Copyright 2026 The prbox Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Dense two-phase simplex for small problems:
//
//   minimize c.x  subject to  A x = b,  x >= 0.
//
// Bland's rule is used for both entering and leaving variables, so the method
// terminates on degenerate problems. Intended for tens of variables.

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "prbox/errors.hpp"

namespace prbox::lp {

enum class Status { kOptimal, kInfeasible, kUnbounded };

struct Solution {
  Status status = Status::kInfeasible;
  std::vector<double> x;
  double objective = std::numeric_limits<double>::quiet_NaN();
};

struct Problem {
  std::vector<std::vector<double>> a;  // m rows of n coefficients
  std::vector<double> b;               // m
  std::vector<double> c;               // n
};

namespace detail {

class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), t_((rows + 1) * (cols + 1), 0.0) {}

  double& at(std::size_t r, std::size_t c) { return t_[r * (cols_ + 1) + c]; }
  double& rhs(std::size_t r) { return at(r, cols_); }
  // Objective row is stored last.
  double& cost(std::size_t c) { return at(rows_, c); }

  void pivot(std::size_t pr, std::size_t pc) {
    const double p = at(pr, pc);
    for (std::size_t c = 0; c <= cols_; ++c) at(pr, c) /= p;
    for (std::size_t r = 0; r <= rows_; ++r) {
      if (r == pr) continue;
      const double f = at(r, pc);
      if (f == 0.0) continue;
      for (std::size_t c = 0; c <= cols_; ++c) at(r, c) -= f * at(pr, c);
    }
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

 private:
  std::size_t rows_, cols_;
  std::vector<double> t_;
};

// Runs simplex iterations on the objective row. Columns with
// allowed[c] == false never enter. Returns false if unbounded.
inline bool iterate(Tableau& t, std::vector<std::size_t>& basis,
                    const std::vector<bool>& allowed, double eps) {
  for (;;) {
    std::size_t enter = t.cols();
    for (std::size_t c = 0; c < t.cols(); ++c) {
      if (allowed[c] && t.cost(c) < -eps) {
        enter = c;
        break;
      }
    }
    if (enter == t.cols()) return true;

    std::size_t leave = t.rows();
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < t.rows(); ++r) {
      const double a = t.at(r, enter);
      if (a <= eps) continue;
      const double ratio = t.rhs(r) / a;
      if (leave == t.rows() || ratio < best - eps ||
          (std::abs(ratio - best) <= eps && basis[r] < basis[leave])) {
        best = ratio;
        leave = r;
      }
    }
    if (leave == t.rows()) return false;
    t.pivot(leave, enter);
    basis[leave] = enter;
  }
}

}  // namespace detail

inline Solution solve(const Problem& prob, double eps = 1e-12) {
  const std::size_t m = prob.b.size();
  const std::size_t n = prob.c.size();
  if (prob.a.size() != m) throw DimensionError("lp::solve: A/b row mismatch");
  for (const auto& row : prob.a) {
    if (row.size() != n) throw DimensionError("lp::solve: A/c column mismatch");
  }

  // Columns: n structural, then m artificial.
  detail::Tableau t(m, n + m);
  std::vector<std::size_t> basis(m);
  for (std::size_t r = 0; r < m; ++r) {
    const double sign = prob.b[r] < 0.0 ? -1.0 : 1.0;
    for (std::size_t c = 0; c < n; ++c) t.at(r, c) = sign * prob.a[r][c];
    t.at(r, n + r) = 1.0;
    t.rhs(r) = sign * prob.b[r];
    basis[r] = n + r;
  }

  // Phase 1: minimize the sum of artificials.
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t c = 0; c < n; ++c) t.cost(c) -= t.at(r, c);
    t.rhs(m) -= t.rhs(r);
  }
  std::vector<bool> allowed(n + m, true);
  detail::iterate(t, basis, allowed, eps);

  Solution sol;
  const double infeasibility = -t.rhs(m);
  if (infeasibility > 1e3 * eps) {
    sol.status = Status::kInfeasible;
    return sol;
  }

  // Drive remaining artificials out of the basis; rows where that is
  // impossible are redundant and stay at zero.
  for (std::size_t r = 0; r < m; ++r) {
    if (basis[r] < n) continue;
    for (std::size_t c = 0; c < n; ++c) {
      if (std::abs(t.at(r, c)) > 1e3 * eps) {
        t.pivot(r, c);
        basis[r] = c;
        break;
      }
    }
  }

  // Phase 2 objective in terms of the current basis.
  for (std::size_t c = 0; c <= n + m; ++c) t.cost(c) = 0.0;
  for (std::size_t c = 0; c < n; ++c) t.cost(c) = prob.c[c];
  for (std::size_t r = 0; r < m; ++r) {
    if (basis[r] >= n) continue;
    const double f = prob.c[basis[r]];
    if (f == 0.0) continue;
    for (std::size_t c = 0; c <= n + m; ++c) t.cost(c) -= f * t.at(r, c);
  }
  for (std::size_t c = n; c < n + m; ++c) allowed[c] = false;
  if (!detail::iterate(t, basis, allowed, eps)) {
    sol.status = Status::kUnbounded;
    return sol;
  }

  sol.status = Status::kOptimal;
  sol.x.assign(n, 0.0);
  for (std::size_t r = 0; r < m; ++r) {
    if (basis[r] < n) sol.x[basis[r]] = t.rhs(r);
  }
  sol.objective = 0.0;
  for (std::size_t c = 0; c < n; ++c) sol.objective += prob.c[c] * sol.x[c];
  return sol;
}

}  // namespace prbox::lp
