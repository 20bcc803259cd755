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

// The library's end-to-end check battery, parameterized by the channel under
// test so that a deliberately broken channel can be fed through it.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "prbox/boxes.hpp"
#include "prbox/channels.hpp"
#include "prbox/linalg.hpp"
#include "prbox/process_gpt.hpp"
#include "prbox/protocol.hpp"
#include "prbox/quantum_bounds.hpp"
#include "prbox/random.hpp"

namespace prbox::verify {

struct CheckResult {
  std::string name;
  bool passed;
  double value;      // measured error or quantity
  double threshold;  // pass condition documented per check
};

struct Config {
  std::uint64_t seed = 1;
  double tol = 1e-12;            // exact-table checks (box, CHSH, marginals)
  std::uint64_t mc_runs = 100000;
  int seesaw_restarts = 20;
};

struct Report {
  std::vector<CheckResult> checks;
  bool passed() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const CheckResult& c) { return c.passed; });
  }
};

// Streams used by the seeded checks, so that each draws independent data.
enum Stream : std::uint64_t {
  kChannelEquation = 1,
  kSimulation = 2,
  kProcessEffect = 3,
  kRoundTrip = 4,
  kMonteCarlo = 5,
};

inline Rng stream(std::uint64_t seed, Stream s) {
  return Rng(derive_seed(seed, s));
}

/// max over `count` random two-qubit states of
/// ||ch(rho) - ((1-kappa) xi_cor + kappa xi_acor)||_F, kappa = <11|rho|11>.
inline double channel_equation_error(const channels::Channel& ch,
                                     std::uint64_t seed, int count = 50) {
  const auto [cor, acor] = channels::make_prepared_states();
  auto rng = stream(seed, kChannelEquation);
  double worst = 0.0;
  for (int i = 0; i < count; ++i) {
    const auto rho = channels::random_density(rng, linalg::qubits(2));
    const double kappa = rho.population(3);
    const auto expected =
        (1.0 - kappa) * cor.matrix() + kappa * acor.matrix();
    worst = std::max(worst, linalg::frobenius_distance(
                                channels::apply(ch, rho).matrix(), expected));
  }
  return worst;
}

/// max over `count` random states of ||averaged protocol - ch(rho)||_F.
inline double simulation_identity_error(const channels::Channel& ch,
                                        std::uint64_t seed, int count = 50) {
  auto rng = stream(seed, kSimulation);
  double worst = 0.0;
  for (int i = 0; i < count; ++i) {
    const auto rho = channels::random_density(rng, linalg::qubits(2));
    const auto sim = protocol::averaged_channel(protocol::ClassicalInput(rho));
    worst = std::max(worst, linalg::frobenius_distance(
                                sim.matrix(), channels::apply(ch, rho).matrix()));
  }
  return worst;
}

/// max |evaluate(F, Choi(ch)) - tr[E ch(rho)]| over random qubit triples
/// (full-rank rho, random effect, random channel with 1..4 Kraus operators).
inline double process_effect_error(std::uint64_t seed, int count = 100) {
  auto rng = stream(seed, kProcessEffect);
  double worst = 0.0;
  for (int i = 0; i < count; ++i) {
    const std::size_t d = i % 2 == 0 ? 2 : 4;
    const auto shape = d == 2 ? linalg::SubsystemShape{{2}} : linalg::qubits(2);
    const auto rho = channels::random_density(rng, shape);
    const auto e = gpt::random_effect(rng, d);
    const auto ch = channels::random_channel(rng, d, d, 1 + i % 4, shape);
    const auto f = gpt::make_process_effect(rho, e);
    const double via_choi = gpt::evaluate(f, channels::to_choi(ch));
    const double direct =
        (e.matrix() * channels::apply(ch, rho).matrix()).trace().real();
    worst = std::max(worst, std::abs(via_choi - direct));
  }
  return worst;
}

/// max Frobenius error of to_choi(from_choi(C)) over random channels.
inline double choi_round_trip_error(std::uint64_t seed, int count = 20) {
  auto rng = stream(seed, kRoundTrip);
  double worst = 0.0;
  for (int i = 0; i < count; ++i) {
    const std::size_t d = i % 2 == 0 ? 2 : 4;
    const auto ch = channels::random_channel(rng, d, d, 1 + i % 5);
    const auto c = channels::to_choi(ch);
    const auto back = channels::to_choi(channels::from_choi(c));
    worst = std::max(worst, linalg::frobenius_distance(c.matrix(), back.matrix()));
  }
  return worst;
}

struct ChoiReport {
  double min_eigenvalue;
  double trace_error;
  double marginal_error;
};

/// Raw Choi-invariant figures of a channel.
inline ChoiReport choi_invariants(const channels::Channel& ch) {
  const auto c = channels::to_choi(ch).matrix();
  const auto ev = linalg::hermitian_eigenvalues(c);
  const auto marginal = linalg::partial_trace(
      c, linalg::SubsystemShape{{ch.dout(), ch.din()}}, {1});
  const auto target =
      linalg::ComplexMatrix::identity(ch.din()) * (1.0 / double(ch.din()));
  return {ev.front(), std::abs(c.trace() - linalg::Complex(1.0)),
          linalg::frobenius_distance(marginal, target)};
}

inline double max_deterministic_chsh() {
  double best = -4.0;
  for (unsigned s = 0; s < 16; ++s) {
    best = std::max(best, boxes::chsh(boxes::deterministic_box(
                              boxes::Strategy::from_index(s))));
  }
  return best;
}

inline Report run_all(const channels::Channel& phi, const Config& cfg) {
  Report r;
  auto add = [&](std::string name, bool ok, double value, double threshold) {
    r.checks.push_back({std::move(name), ok, value, threshold});
  };

  const auto ci = choi_invariants(phi);
  add("choi_psd", ci.min_eigenvalue > -1e-10, ci.min_eigenvalue, -1e-10);
  add("choi_trace", ci.trace_error <= 1e-10, ci.trace_error, 1e-10);
  add("choi_trace_preservation", ci.marginal_error <= 1e-10, ci.marginal_error,
      1e-10);
  const double rt = choi_round_trip_error(cfg.seed);
  add("choi_kraus_round_trip", rt < 1e-9, rt, 1e-9);

  const double eq = channel_equation_error(phi, cfg.seed);
  add("channel_equation", eq < 1e-10, eq, 1e-10);

  const auto settings = boxes::z_settings();
  const auto box = boxes::box_from_channel(phi, settings, settings);
  const double box_err = boxes::max_abs_difference(box, boxes::make_pr_box());
  add("box_identity", box_err <= cfg.tol, box_err, cfg.tol);
  const double chsh = boxes::chsh(box);
  add("chsh_maximum", std::abs(chsh - 4.0) <= cfg.tol, chsh, 4.0);
  const auto ns = boxes::check_no_signaling(box, cfg.tol);
  add("no_signaling", ns.no_signaling, ns.max_violation, cfg.tol);

  const double local_max = max_deterministic_chsh();
  add("local_bound", local_max == 2.0, local_max, 2.0);
  const bool pr_nonlocal = !boxes::local_membership(boxes::make_pr_box());
  const bool uniform_local =
      boxes::local_membership(boxes::make_uniform_box()).has_value();
  add("local_membership", pr_nonlocal && uniform_local,
      double(pr_nonlocal) + double(uniform_local), 2.0);

  const double pe = process_effect_error(cfg.seed);
  add("process_effect_contract", pe < 1e-9, pe, 1e-9);

  const double sim = simulation_identity_error(phi, cfg.seed);
  add("simulation_identity", sim < 1e-12, sim, 1e-12);

  const auto mc = protocol::monte_carlo_box(cfg.mc_runs,
                                            derive_seed(cfg.seed, kMonteCarlo));
  const auto mc_chsh = mc.chsh();
  add("monte_carlo_chsh", mc_chsh && *mc_chsh == 4.0, mc_chsh.value_or(0.0),
      4.0);

  bounds::SeesawConfig scfg;
  scfg.restarts = cfg.seesaw_restarts;
  scfg.seed = cfg.seed;
  const auto ss = bounds::seesaw_maximize(scfg);
  const double gap = std::abs(ss.value - bounds::kTsirelson);
  add("tsirelson", gap <= 1e-6, ss.value, bounds::kTsirelson);
  return r;
}

}  // namespace prbox::verify
