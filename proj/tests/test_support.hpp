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

// Shared test helpers. The oracles here are written independently of the
// library routines they check (explicit basis sums, brute-force enumeration,
// facet inequalities) and must stay that way.

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

#include "prbox/boxes.hpp"
#include "prbox/linalg.hpp"
#include "prbox/random.hpp"

namespace prbox::testing {

using linalg::Complex;
using linalg::ComplexMatrix;

inline ComplexMatrix random_hermitian(Rng& rng, std::size_t d) {
  const auto g = random_ginibre(rng, d, d);
  return 0.5 * (g + g.adjoint());
}

/// tr_B(M) = sum_k (I (x) <k|) M (I (x) |k>), for M on C^da (x) C^db.
inline ComplexMatrix trace_out_second(const ComplexMatrix& m, std::size_t da,
                                      std::size_t db) {
  ComplexMatrix r(da);
  for (std::size_t k = 0; k < db; ++k) {
    ComplexMatrix bra(da, da * db);  // I (x) <k|
    for (std::size_t i = 0; i < da; ++i) bra(i, i * db + k) = 1.0;
    r += bra * m * bra.adjoint();
  }
  return r;
}

/// tr_A(M) = sum_k (<k| (x) I) M (|k> (x) I).
inline ComplexMatrix trace_out_first(const ComplexMatrix& m, std::size_t da,
                                     std::size_t db) {
  ComplexMatrix r(db);
  for (std::size_t k = 0; k < da; ++k) {
    ComplexMatrix bra(db, da * db);  // <k| (x) I
    for (std::size_t i = 0; i < db; ++i) bra(i, k * db + i) = 1.0;
    r += bra * m * bra.adjoint();
  }
  return r;
}

/// All eight CHSH facets: sum_{X,Y} (-1)^{XY + alpha X + beta Y + gamma}
/// <XY> <= 2. For no-signaling boxes these characterize the local polytope.
inline double max_chsh_facet(const boxes::CorrelationBox& box) {
  double best = -1e300;
  for (unsigned variant = 0; variant < 8; ++variant) {
    const unsigned alpha = variant & 1, beta = (variant >> 1) & 1,
                   gamma = (variant >> 2) & 1;
    double s = 0.0;
    for (unsigned sx = 0; sx < 2; ++sx) {
      for (unsigned sy = 0; sy < 2; ++sy) {
        const unsigned parity = (sx & sy) ^ (alpha & sx) ^ (beta & sy) ^ gamma;
        s += (parity ? -1.0 : 1.0) * boxes::correlator(box, sx, sy);
      }
    }
    best = std::max(best, s);
  }
  return best;
}

/// PR-type box P(x,y|X,Y) = 1/2 if x^y = XY ^ alpha X ^ beta Y ^ gamma.
inline boxes::CorrelationBox pr_variant(unsigned variant) {
  const unsigned alpha = variant & 1, beta = (variant >> 1) & 1,
                 gamma = (variant >> 2) & 1;
  boxes::CorrelationBox::Table p{};
  for (unsigned sx = 0; sx < 2; ++sx) {
    for (unsigned sy = 0; sy < 2; ++sy) {
      for (unsigned x = 0; x < 2; ++x) {
        for (unsigned y = 0; y < 2; ++y) {
          const unsigned target = (sx & sy) ^ (alpha & sx) ^ (beta & sy) ^ gamma;
          p[boxes::box_index(x, y, sx, sy)] = (x ^ y) == target ? 0.5 : 0.0;
        }
      }
    }
  }
  return boxes::CorrelationBox(p);
}

inline boxes::CorrelationBox mix(const std::vector<boxes::CorrelationBox>& parts,
                                 const std::vector<double>& weights) {
  boxes::CorrelationBox::Table p{};
  for (std::size_t i = 0; i < parts.size(); ++i) {
    for (std::size_t k = 0; k < 16; ++k) p[k] += weights[i] * parts[i].table()[k];
  }
  return boxes::CorrelationBox(p, 1e-9);
}

inline std::vector<double> random_simplex_weights(Rng& rng, std::size_t n) {
  std::vector<double> w(n);
  double total = 0.0;
  for (auto& v : w) {
    v = -std::log(1.0 - rng.uniform());
    total += v;
  }
  for (auto& v : w) v /= total;
  return w;
}

}  // namespace prbox::testing
