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

#include "prbox/simplex.hpp"

#include <gtest/gtest.h>

namespace prbox::lp {
namespace {

TEST(Simplex, SmallOptimum) {
  // min -x - y  s.t.  x + 2y + s1 = 4,  3x + y + s2 = 6.
  // Vertex (8/5, 6/5), objective -14/5.
  const Problem p{{{1, 2, 1, 0}, {3, 1, 0, 1}}, {4, 6}, {-1, -1, 0, 0}};
  const auto s = solve(p);
  ASSERT_EQ(s.status, Status::kOptimal);
  EXPECT_NEAR(s.x[0], 1.6, 1e-12);
  EXPECT_NEAR(s.x[1], 1.2, 1e-12);
  EXPECT_NEAR(s.objective, -2.8, 1e-12);
}

TEST(Simplex, Infeasible) {
  // x + y = 1 and x + y = 2.
  const Problem p{{{1, 1}, {1, 1}}, {1, 2}, {0, 0}};
  EXPECT_EQ(solve(p).status, Status::kInfeasible);
}

TEST(Simplex, Unbounded) {
  // min -x  s.t.  x - y = 0.
  const Problem p{{{1, -1}}, {0}, {-1, 0}};
  EXPECT_EQ(solve(p).status, Status::kUnbounded);
}

TEST(Simplex, RedundantRowsAndNegativeRhs) {
  // -x - y = -2 twice, minimize x: optimum x = 0, y = 2.
  const Problem p{{{-1, -1}, {-1, -1}}, {-2, -2}, {1, 0}};
  const auto s = solve(p);
  ASSERT_EQ(s.status, Status::kOptimal);
  EXPECT_NEAR(s.x[0], 0.0, 1e-12);
  EXPECT_NEAR(s.x[1], 2.0, 1e-12);
}

TEST(Simplex, ShapeMismatchThrows) {
  const Problem p{{{1, 1}}, {1, 2}, {0, 0}};
  EXPECT_THROW(solve(p), DimensionError);
}

}  // namespace
}  // namespace prbox::lp
