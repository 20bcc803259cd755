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

// Two-party correlation boxes P(x,y|X,Y) with binary settings and outcomes.
//
// Labels are fixed once for the whole library: outcome bit 0 is the value +1
// and bit 1 is -1; setting 0 is the undashed observable (A, B, Z_0) and
// setting 1 the dashed one (A', B', Z_1).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>

#include "prbox/channels.hpp"
#include "prbox/errors.hpp"
#include "prbox/linalg.hpp"
#include "prbox/simplex.hpp"

namespace prbox::boxes {

using channels::Channel;
using channels::DensityOperator;
using linalg::ComplexMatrix;

inline constexpr double kBoxTol = 1e-9;
inline constexpr double kNormalizationTol = 1e-12;

/// Flat index of p[x,y|X,Y]: settings pair major, outcome pair minor, both
/// lexicographic.
constexpr std::size_t box_index(unsigned x, unsigned y, unsigned sx,
                                unsigned sy) {
  return (sx * 2 + sy) * 4 + x * 2 + y;
}

/// +1 for outcome bit 0, -1 for bit 1.
constexpr int outcome_value(unsigned bit) { return bit == 0 ? 1 : -1; }

class CorrelationBox {
 public:
  using Table = std::array<double, 16>;

  explicit CorrelationBox(const Table& p, double tol = kNormalizationTol)
      : p_(p) {
    for (double v : p_) {
      if (!std::isfinite(v) || v < -tol || v > 1.0 + tol) {
        throw ValidationError("CorrelationBox: probability outside [0, 1]");
      }
    }
    for (unsigned s = 0; s < 4; ++s) {
      double sum = 0.0;
      for (unsigned o = 0; o < 4; ++o) sum += p_[s * 4 + o];
      if (std::abs(sum - 1.0) > tol) {
        throw ValidationError("CorrelationBox: distribution for setting pair " +
                              std::to_string(s >> 1) + "," +
                              std::to_string(s & 1) + " does not sum to 1");
      }
    }
  }

  double operator()(unsigned x, unsigned y, unsigned sx, unsigned sy) const {
    return p_[box_index(x, y, sx, sy)];
  }

  const Table& table() const { return p_; }

  /// Alice's marginal P(x|X) computed with Bob's setting Y.
  double alice_marginal(unsigned x, unsigned sx, unsigned sy) const {
    return (*this)(x, 0, sx, sy) + (*this)(x, 1, sx, sy);
  }
  double bob_marginal(unsigned y, unsigned sx, unsigned sy) const {
    return (*this)(0, y, sx, sy) + (*this)(1, y, sx, sy);
  }

 private:
  Table p_;
};

inline double max_abs_difference(const CorrelationBox& a,
                                 const CorrelationBox& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < 16; ++i) {
    worst = std::max(worst, std::abs(a.table()[i] - b.table()[i]));
  }
  return worst;
}

/// P(x,y|X,Y) = 1/2 if x xor y = X*Y, else 0.
inline CorrelationBox make_pr_box() {
  CorrelationBox::Table p{};
  for (unsigned sx = 0; sx < 2; ++sx) {
    for (unsigned sy = 0; sy < 2; ++sy) {
      for (unsigned x = 0; x < 2; ++x) {
        for (unsigned y = 0; y < 2; ++y) {
          p[box_index(x, y, sx, sy)] = ((x ^ y) == (sx & sy)) ? 0.5 : 0.0;
        }
      }
    }
  }
  return CorrelationBox(p);
}

inline CorrelationBox make_uniform_box() {
  CorrelationBox::Table p;
  p.fill(0.25);
  return CorrelationBox(p);
}

/// <X (x) Y> = sum_{x,y} (+-1)(+-1) P(x,y|X,Y).
inline double correlator(const CorrelationBox& box, unsigned sx, unsigned sy) {
  double e = 0.0;
  for (unsigned x = 0; x < 2; ++x) {
    for (unsigned y = 0; y < 2; ++y) {
      e += outcome_value(x) * outcome_value(y) * box(x, y, sx, sy);
    }
  }
  return e;
}

/// <00> + <01> + <10> - <11>, without the absolute value.
inline double chsh_signed(const CorrelationBox& box) {
  return correlator(box, 0, 0) + correlator(box, 0, 1) +
         correlator(box, 1, 0) - correlator(box, 1, 1);
}

inline double chsh(const CorrelationBox& box) {
  return std::abs(chsh_signed(box));
}

struct NoSignalingReport {
  bool no_signaling;
  double max_violation;
};

/// Checks that P(x|X) does not depend on Y and P(y|Y) does not depend on X:
/// four conditions per party, eight in total.
inline NoSignalingReport check_no_signaling(const CorrelationBox& box,
                                            double tol = kBoxTol) {
  double worst = 0.0;
  for (unsigned s = 0; s < 2; ++s) {
    for (unsigned o = 0; o < 2; ++o) {
      worst = std::max(worst, std::abs(box.alice_marginal(o, s, 0) -
                                       box.alice_marginal(o, s, 1)));
      worst = std::max(worst, std::abs(box.bob_marginal(o, 0, s) -
                                       box.bob_marginal(o, 1, s)));
    }
  }
  return {worst <= tol, worst};
}

/// Deterministic local strategy: Alice answers a[X], Bob answers b[Y].
struct Strategy {
  std::array<unsigned, 2> a;
  std::array<unsigned, 2> b;

  /// Index in 0..15 as the bit string a0 a1 b0 b1.
  static Strategy from_index(unsigned i) {
    return {{(i >> 3) & 1u, (i >> 2) & 1u}, {(i >> 1) & 1u, i & 1u}};
  }
  unsigned index() const { return a[0] << 3 | a[1] << 2 | b[0] << 1 | b[1]; }
};

inline CorrelationBox deterministic_box(const Strategy& s) {
  CorrelationBox::Table p{};
  for (unsigned sx = 0; sx < 2; ++sx) {
    for (unsigned sy = 0; sy < 2; ++sy) {
      p[box_index(s.a[sx], s.b[sy], sx, sy)] = 1.0;
    }
  }
  return CorrelationBox(p);
}

/// Convex weights over the 16 deterministic strategies (indexed as in
/// Strategy::index).
struct LocalModel {
  std::array<double, 16> weights{};

  CorrelationBox reconstruct() const {
    CorrelationBox::Table p{};
    for (unsigned i = 0; i < 16; ++i) {
      if (weights[i] == 0.0) continue;
      const auto d = deterministic_box(Strategy::from_index(i));
      for (std::size_t k = 0; k < 16; ++k) p[k] += weights[i] * d.table()[k];
    }
    return CorrelationBox(p, 1e-9);
  }
};

/// Searches for a local hidden-variable model: weights w >= 0 with sum 1 that
/// minimize the L-infinity distance t between sum_s w_s D_s and the box.
/// Returns the model if t <= tol.
inline std::optional<LocalModel> local_membership(const CorrelationBox& box,
                                                  double tol = kBoxTol) {
  // Variables: w[0..15], t, u[0..15], v[0..15].
  //   D w - t + u = p      (D w - p <= t)
  //   D w + t - v = p      (p - D w <= t)
  //   sum w = 1
  constexpr std::size_t kW = 16, kT = 16, kU = 17, kV = 33, kN = 49;
  std::array<CorrelationBox::Table, 16> vertices;
  for (unsigned s = 0; s < 16; ++s) {
    vertices[s] = deterministic_box(Strategy::from_index(s)).table();
  }
  lp::Problem prob;
  prob.c.assign(kN, 0.0);
  prob.c[kT] = 1.0;
  for (std::size_t k = 0; k < 16; ++k) {
    std::vector<double> upper(kN, 0.0), lower(kN, 0.0);
    for (std::size_t s = 0; s < kW; ++s) {
      upper[s] = vertices[s][k];
      lower[s] = vertices[s][k];
    }
    upper[kT] = -1.0;
    upper[kU + k] = 1.0;
    lower[kT] = 1.0;
    lower[kV + k] = -1.0;
    prob.a.push_back(std::move(upper));
    prob.b.push_back(box.table()[k]);
    prob.a.push_back(std::move(lower));
    prob.b.push_back(box.table()[k]);
  }
  std::vector<double> norm(kN, 0.0);
  for (std::size_t s = 0; s < kW; ++s) norm[s] = 1.0;
  prob.a.push_back(std::move(norm));
  prob.b.push_back(1.0);

  const auto sol = lp::solve(prob);
  if (sol.status != lp::Status::kOptimal || sol.objective > tol) {
    return std::nullopt;
  }
  LocalModel model;
  double total = 0.0;
  for (std::size_t s = 0; s < kW; ++s) {
    model.weights[s] = std::max(0.0, sol.x[s]);
    total += model.weights[s];
  }
  for (auto& w : model.weights) w /= total;
  if (max_abs_difference(model.reconstruct(), box) > tol) return std::nullopt;
  return model;
}

/// Z_psi: prepare the single-qubit test state, run the process, read the
/// output qubit in the computational basis (bit 0 = +1, bit 1 = -1).
class ProcessMeasurementSetting {
 public:
  explicit ProcessMeasurementSetting(DensityOperator test_state)
      : test_state_(std::move(test_state)) {
    if (test_state_.dim() != 2) {
      throw DimensionError("ProcessMeasurementSetting: test state must be a "
                           "single qubit");
    }
    if (!test_state_.is_pure()) {
      throw ValidationError("ProcessMeasurementSetting: test state is not pure");
    }
  }

  /// Z_j with test state |j>.
  static ProcessMeasurementSetting z_basis(unsigned j) {
    return ProcessMeasurementSetting(
        DensityOperator::basis(linalg::SubsystemShape{{2}}, j));
  }

  const DensityOperator& test_state() const { return test_state_; }

  /// Readout effect for outcome bit o: |o><o|.
  static ComplexMatrix readout(unsigned o) {
    return ComplexMatrix::basis_projector(2, o);
  }

 private:
  DensityOperator test_state_;
};

using SettingPair = std::array<ProcessMeasurementSetting, 2>;

inline SettingPair z_settings() {
  return {ProcessMeasurementSetting::z_basis(0),
          ProcessMeasurementSetting::z_basis(1)};
}

/// p[x,y|X,Y] = tr[(E_x (x) E_y) ch(rho_X (x) rho_Y)].
inline CorrelationBox box_from_channel(const Channel& ch,
                                       const SettingPair& alice,
                                       const SettingPair& bob) {
  if (ch.din() != 4 || ch.dout() != 4) {
    throw DimensionError("box_from_channel: channel must act on two qubits");
  }
  CorrelationBox::Table p{};
  for (unsigned sx = 0; sx < 2; ++sx) {
    for (unsigned sy = 0; sy < 2; ++sy) {
      const auto out = ch.apply_to(linalg::tensor(
          alice[sx].test_state().matrix(), bob[sy].test_state().matrix()));
      for (unsigned x = 0; x < 2; ++x) {
        for (unsigned y = 0; y < 2; ++y) {
          const auto eff = linalg::tensor(ProcessMeasurementSetting::readout(x),
                                          ProcessMeasurementSetting::readout(y));
          p[box_index(x, y, sx, sy)] = (eff * out).trace().real();
        }
      }
    }
  }
  return CorrelationBox(p);
}

}  // namespace prbox::boxes
