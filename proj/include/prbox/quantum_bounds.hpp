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

// CHSH with two-qubit states and projective +-1 qubit observables, and a
// seesaw ascent that climbs to the quantum maximum 2*sqrt(2).

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <utility>
#include <vector>

#include "prbox/boxes.hpp"
#include "prbox/channels.hpp"
#include "prbox/errors.hpp"
#include "prbox/linalg.hpp"
#include "prbox/random.hpp"

namespace prbox::bounds {

using channels::DensityOperator;
using linalg::Complex;
using linalg::ComplexMatrix;

inline const double kTsirelson = 2.0 * std::numbers::sqrt2;

/// Observable n.sigma with unit Bloch vector n; eigenvalues +-1.
class QubitObservable {
 public:
  explicit QubitObservable(std::array<double, 3> bloch) : bloch_(bloch) {
    const double norm = std::sqrt(bloch[0] * bloch[0] + bloch[1] * bloch[1] +
                                  bloch[2] * bloch[2]);
    if (std::abs(norm - 1.0) > 1e-12) {
      throw ValidationError("QubitObservable: Bloch vector is not unit length");
    }
  }

  /// Normalizes v; v must be nonzero.
  static QubitObservable along(std::array<double, 3> v) {
    const double norm = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    if (norm == 0.0) throw ValidationError("QubitObservable: zero direction");
    return QubitObservable({v[0] / norm, v[1] / norm, v[2] / norm});
  }

  const std::array<double, 3>& bloch() const { return bloch_; }

  ComplexMatrix matrix() const {
    return bloch_[0] * linalg::pauli_x() + bloch_[1] * linalg::pauli_y() +
           bloch_[2] * linalg::pauli_z();
  }

  /// Spectral projector for outcome bit o (0 -> +1, 1 -> -1).
  ComplexMatrix projector(unsigned o) const {
    const double sign = o == 0 ? 1.0 : -1.0;
    return 0.5 * (ComplexMatrix::identity(2) + sign * matrix());
  }

 private:
  std::array<double, 3> bloch_;
};

using ObservablePair = std::array<QubitObservable, 2>;

struct ChshInstance {
  DensityOperator state;
  ObservablePair alice;
  ObservablePair bob;
};

/// A(x)B + A(x)B' + A'(x)B - A'(x)B'
inline ComplexMatrix bell_operator(const ObservablePair& alice,
                                   const ObservablePair& bob) {
  const auto a0 = alice[0].matrix(), a1 = alice[1].matrix();
  const auto b0 = bob[0].matrix(), b1 = bob[1].matrix();
  return linalg::tensor(a0, b0 + b1) + linalg::tensor(a1, b0 - b1);
}

/// tr[rho * Bell]; signed, callers take the absolute value when reporting.
inline double chsh_value(const ChshInstance& inst) {
  if (inst.state.dim() != 4) {
    throw DimensionError("chsh_value: state must be two qubits");
  }
  return (inst.state.matrix() * bell_operator(inst.alice, inst.bob))
      .trace()
      .real();
}

/// Born-rule box p[x,y|X,Y] = tr[rho (P^A_{x|X} (x) P^B_{y|Y})].
inline boxes::CorrelationBox born_box(const ChshInstance& inst) {
  boxes::CorrelationBox::Table p{};
  for (unsigned sx = 0; sx < 2; ++sx) {
    for (unsigned sy = 0; sy < 2; ++sy) {
      for (unsigned x = 0; x < 2; ++x) {
        for (unsigned y = 0; y < 2; ++y) {
          const auto eff = linalg::tensor(inst.alice[sx].projector(x),
                                          inst.bob[sy].projector(y));
          p[boxes::box_index(x, y, sx, sy)] =
              (inst.state.matrix() * eff).trace().real();
        }
      }
    }
  }
  return boxes::CorrelationBox(p);
}

/// |Phi+> with A = Z, A' = X, B = (Z+X)/sqrt2, B' = (Z-X)/sqrt2.
inline ChshInstance canonical_instance() {
  const double s = 1.0 / std::numbers::sqrt2;
  const linalg::Vector phi{s, 0.0, 0.0, s};
  return {DensityOperator::pure(phi, linalg::qubits(2)),
          {QubitObservable({0, 0, 1}), QubitObservable({1, 0, 0})},
          {QubitObservable({s, 0, s}), QubitObservable({-s, 0, s})}};
}

struct SeesawConfig {
  int restarts = 20;
  int max_iters = 500;
  double tol = 1e-10;
  std::uint64_t seed = 1;

  void validate() const {
    if (restarts <= 0 || max_iters <= 0 || !(tol > 0.0)) {
      throw ValidationError("SeesawConfig: restarts, max_iters and tol must "
                            "be positive");
    }
  }
};

struct SeesawRun {
  ChshInstance best;
  double value;
  std::vector<double> trace;  // value after every sweep
};

struct SeesawResult {
  ChshInstance best;
  double value;
  std::vector<double> trace;           // trace of the winning restart
  std::vector<double> restart_values;  // final value of every restart
  std::size_t best_restart;
};

namespace detail {

inline DensityOperator top_eigenstate(const ComplexMatrix& bell) {
  const auto es = linalg::hermitian_eigensystem(bell);
  return DensityOperator::pure(es.vector(es.values.size() - 1),
                               linalg::qubits(2));
}

// Optimal Bloch direction for an observable O entering as tr[rho (O (x) K)]
// (alice_side) or tr[rho (K (x) O)]; falls back to `current` when the
// conditional correlation vector vanishes.
inline QubitObservable best_direction(const ComplexMatrix& rho,
                                      const ComplexMatrix& partner,
                                      bool alice_side,
                                      const QubitObservable& current) {
  const std::array<const ComplexMatrix*, 3> paulis{
      &linalg::pauli_x(), &linalg::pauli_y(), &linalg::pauli_z()};
  std::array<double, 3> v{};
  for (std::size_t i = 0; i < 3; ++i) {
    const auto op = alice_side ? linalg::tensor(*paulis[i], partner)
                               : linalg::tensor(partner, *paulis[i]);
    v[i] = (rho * op).trace().real();
  }
  const double norm = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
  if (norm < 1e-14) return current;
  return QubitObservable::along(v);
}

inline QubitObservable random_observable(Rng& rng) {
  for (;;) {
    std::array<double, 3> v{rng.normal(), rng.normal(), rng.normal()};
    if (v[0] * v[0] + v[1] * v[1] + v[2] * v[2] > 1e-12) {
      return QubitObservable::along(v);
    }
  }
}

}  // namespace detail

/// One seesaw ascent from the given measurements. Each sweep sets the state
/// to the top eigenvector of the Bell operator, then re-optimizes Alice's and
/// Bob's Bloch vectors in closed form.
inline SeesawRun seesaw_from(ObservablePair alice, ObservablePair bob,
                             const SeesawConfig& cfg) {
  cfg.validate();
  auto state = detail::top_eigenstate(bell_operator(alice, bob));
  std::vector<double> trace;
  trace.push_back(chsh_value({state, alice, bob}));
  for (int it = 0; it < cfg.max_iters; ++it) {
    const auto& rho = state.matrix();
    {
      const auto b0 = bob[0].matrix(), b1 = bob[1].matrix();
      alice = {detail::best_direction(rho, b0 + b1, true, alice[0]),
               detail::best_direction(rho, b0 - b1, true, alice[1])};
    }
    {
      const auto a0 = alice[0].matrix(), a1 = alice[1].matrix();
      bob = {detail::best_direction(rho, a0 + a1, false, bob[0]),
             detail::best_direction(rho, a0 - a1, false, bob[1])};
    }
    state = detail::top_eigenstate(bell_operator(alice, bob));
    const double value = chsh_value({state, alice, bob});
    const double gain = value - trace.back();
    trace.push_back(value);
    if (gain < cfg.tol) break;
  }
  const double value = trace.back();
  return {ChshInstance{std::move(state), alice, bob}, value, std::move(trace)};
}

/// Best of cfg.restarts ascents; restart r draws its initial Bloch vectors
/// from derive_seed(cfg.seed, r).
inline SeesawResult seesaw_maximize(const SeesawConfig& cfg) {
  cfg.validate();
  std::optional<SeesawResult> result;
  std::vector<double> finals;
  for (int r = 0; r < cfg.restarts; ++r) {
    Rng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(r)));
    ObservablePair alice{detail::random_observable(rng),
                         detail::random_observable(rng)};
    ObservablePair bob{detail::random_observable(rng),
                       detail::random_observable(rng)};
    auto run = seesaw_from(alice, bob, cfg);
    finals.push_back(run.value);
    if (!result || run.value > result->value) {
      result = SeesawResult{std::move(run.best), run.value, std::move(run.trace),
                            {}, static_cast<std::size_t>(r)};
    }
  }
  result->restart_values = std::move(finals);
  return std::move(*result);
}

}  // namespace prbox::bounds
