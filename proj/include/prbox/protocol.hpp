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

// Classical two-party simulation of the PR-box channel. Alice and Bob share a
// uniform key bit k. Each measures their input qubit in the computational
// basis (outcomes a, b). Alice sends a to Bob and outputs |k>; Bob, once the
// message arrives, outputs |k xor (a AND b)>. One bit of shared randomness and
// one bit of communication per channel use.

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

#include "prbox/boxes.hpp"
#include "prbox/channels.hpp"
#include "prbox/errors.hpp"
#include "prbox/linalg.hpp"
#include "prbox/random.hpp"

namespace prbox::protocol {

using channels::DensityOperator;
using linalg::ComplexMatrix;

struct SharedKey {
  unsigned k = 0;
};

enum class Role { kAlice, kBob };

inline const char* role_name(Role r) { return r == Role::kAlice ? "alice" : "bob"; }

struct Message {
  Role from;
  unsigned bit;
  double latency;  // recorded, never waited on
};

/// In-process, in-order message link between the two parties.
class MessageLink {
 public:
  explicit MessageLink(double latency = 0.0) : latency_(latency) {}

  void send(Role from, unsigned bit) {
    queue_.push_back({from, bit, latency_});
    ++sent_;
  }

  std::optional<Message> deliver() {
    if (queue_.empty()) return std::nullopt;
    auto m = queue_.front();
    queue_.pop_front();
    return m;
  }

  std::size_t sent() const { return sent_; }
  double latency() const { return latency_; }

 private:
  double latency_;
  std::deque<Message> queue_;
  std::size_t sent_ = 0;
};

/// Event-driven party. Alice produces her output on measurement; Bob only
/// after both his measurement and Alice's message are in.
class Party {
 public:
  Party(Role role, SharedKey key) : role_(role), key_(key) {}

  void on_measurement(unsigned outcome, MessageLink& link) {
    if (measured_) throw std::logic_error("Party: measured twice");
    measured_ = outcome;
    if (role_ == Role::kAlice) {
      link.send(role_, outcome);
      output_ = key_.k;
    } else {
      try_output();
    }
  }

  void on_message(const Message& m) {
    if (role_ != Role::kBob || m.from != Role::kAlice) {
      throw std::logic_error("Party: unexpected message");
    }
    received_ = m.bit;
    try_output();
  }

  Role role() const { return role_; }
  SharedKey key() const { return key_; }
  std::optional<unsigned> measured() const { return measured_; }
  std::optional<unsigned> received() const { return received_; }
  std::optional<unsigned> output() const { return output_; }

 private:
  void try_output() {
    if (measured_ && received_) output_ = key_.k ^ (*received_ & *measured_);
  }

  Role role_;
  SharedKey key_;
  std::optional<unsigned> measured_;
  std::optional<unsigned> received_;
  std::optional<unsigned> output_;
};

struct ProtocolTranscript {
  std::uint64_t seed;
  unsigned key;
  unsigned a;
  unsigned b;
  unsigned message;
  unsigned alice_out;
  unsigned bob_out;
  std::size_t messages_sent;
  double latency;

  bool consistent() const {
    return alice_out == key && bob_out == (key ^ (a & b)) && message == a &&
           messages_sent == 1;
  }
};

/// Two-qubit input state; only its computational-basis diagonal matters.
struct ClassicalInput {
  DensityOperator rho;

  explicit ClassicalInput(DensityOperator r) : rho(std::move(r)) {
    if (rho.dim() != 4) {
      throw DimensionError("ClassicalInput: state must be two qubits");
    }
  }

  /// |j> (x) |k>
  static ClassicalInput basis(unsigned j, unsigned k) {
    return ClassicalInput(
        DensityOperator::basis(linalg::qubits(2), j * 2 + k));
  }

  /// Joint outcome distribution of the two sigma_z measurements, order
  /// 00, 01, 10, 11.
  std::array<double, 4> outcome_distribution() const {
    std::array<double, 4> p{};
    double total = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
      p[i] = std::max(0.0, rho.population(i));
      total += p[i];
    }
    for (auto& v : p) v /= total;
    return p;
  }
};

/// One channel use. Draw order from Rng(seed): key bit, then the joint
/// measurement outcome.
inline ProtocolTranscript run_once(const ClassicalInput& input,
                                   std::uint64_t seed, double latency = 0.0) {
  Rng rng(seed);
  const SharedKey key{rng.bit()};
  const auto dist = input.outcome_distribution();
  const double u = rng.uniform();
  std::size_t outcome = 3;
  double acc = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    acc += dist[i];
    if (u < acc) {
      outcome = i;
      break;
    }
  }
  while (dist[outcome] == 0.0) --outcome;  // guards rounding at u ~ 1
  const unsigned a = static_cast<unsigned>(outcome >> 1);
  const unsigned b = static_cast<unsigned>(outcome & 1);

  MessageLink link(latency);
  Party alice(Role::kAlice, key);
  Party bob(Role::kBob, key);
  alice.on_measurement(a, link);
  bob.on_measurement(b, link);
  while (auto m = link.deliver()) bob.on_message(*m);

  if (!alice.output() || !bob.output()) {
    throw std::logic_error("run_once: protocol did not complete");
  }
  return {seed, key.k, a, b, *bob.received(), *alice.output(), *bob.output(),
          link.sent(), link.latency()};
}

/// Exact average over the joint outcome distribution and the key:
/// sum_{a,b} <ab|rho|ab> sum_k 1/2 |k><k| (x) |k^ab><k^ab|.
inline DensityOperator averaged_channel(const ClassicalInput& input) {
  ComplexMatrix out(4);
  for (unsigned a = 0; a < 2; ++a) {
    for (unsigned b = 0; b < 2; ++b) {
      const double w = input.rho.population(a * 2 + b);
      for (unsigned k = 0; k < 2; ++k) {
        const unsigned bob_out = k ^ (a & b);
        out(k * 2 + bob_out, k * 2 + bob_out) += 0.5 * w;
      }
    }
  }
  return DensityOperator(std::move(out), linalg::qubits(2));
}

/// Outcome counts of a run of the CHSH experiment, mergeable across batches.
struct MonteCarloTally {
  std::array<std::uint64_t, 16> counts{};  // boxes::box_index layout
  std::array<std::uint64_t, 4> trials{};   // per setting pair (X*2+Y)

  MonteCarloTally& operator+=(const MonteCarloTally& o) {
    for (std::size_t i = 0; i < 16; ++i) counts[i] += o.counts[i];
    for (std::size_t i = 0; i < 4; ++i) trials[i] += o.trials[i];
    return *this;
  }

  std::uint64_t total() const {
    return trials[0] + trials[1] + trials[2] + trials[3];
  }
};

/// Empirical box. Cells whose setting pair was never sampled hold nullopt.
struct MonteCarloBox {
  MonteCarloTally tally;
  std::array<std::optional<double>, 16> p;
  std::array<std::optional<double>, 16> std_error;

  bool complete() const {
    for (auto t : tally.trials) {
      if (t == 0) return false;
    }
    return true;
  }

  std::optional<boxes::CorrelationBox> box() const {
    if (!complete()) return std::nullopt;
    boxes::CorrelationBox::Table t{};
    for (std::size_t i = 0; i < 16; ++i) t[i] = *p[i];
    return boxes::CorrelationBox(t, 1e-9);
  }

  std::optional<double> chsh() const {
    if (auto b = box()) return boxes::chsh(*b);
    return std::nullopt;
  }
};

inline MonteCarloBox summarize(const MonteCarloTally& tally) {
  MonteCarloBox out{tally, {}, {}};
  for (std::size_t i = 0; i < 16; ++i) {
    const auto n = tally.trials[i / 4];
    if (n == 0) continue;
    const double p = double(tally.counts[i]) / double(n);
    out.p[i] = p;
    out.std_error[i] = std::sqrt(p * (1.0 - p) / double(n));
  }
  return out;
}

using TranscriptSink = std::function<void(const ProtocolTranscript&)>;

/// Trials [first, first + count) of the experiment seeded by `seed`. Trial t
/// draws its settings from derive_seed(seed, 2t) and runs the protocol with
/// seed derive_seed(seed, 2t + 1), so batches can be split arbitrarily.
inline MonteCarloTally monte_carlo_tally(std::uint64_t first,
                                         std::uint64_t count,
                                         std::uint64_t seed,
                                         const TranscriptSink& sink = {}) {
  const std::array<ClassicalInput, 4> inputs{
      ClassicalInput::basis(0, 0), ClassicalInput::basis(0, 1),
      ClassicalInput::basis(1, 0), ClassicalInput::basis(1, 1)};
  MonteCarloTally tally;
  for (std::uint64_t t = first; t < first + count; ++t) {
    Rng settings(derive_seed(seed, 2 * t));
    const unsigned sx = settings.bit();
    const unsigned sy = settings.bit();
    const auto tr = run_once(inputs[sx * 2 + sy], derive_seed(seed, 2 * t + 1));
    if (sink) sink(tr);
    // Outputs are basis states, so the readout is deterministic.
    ++tally.counts[boxes::box_index(tr.alice_out, tr.bob_out, sx, sy)];
    ++tally.trials[sx * 2 + sy];
  }
  return tally;
}

inline MonteCarloBox monte_carlo_box(std::uint64_t n_runs, std::uint64_t seed,
                                     const TranscriptSink& sink = {}) {
  if (n_runs < 1) throw ValidationError("monte_carlo_box: n_runs must be >= 1");
  return summarize(monte_carlo_tally(0, n_runs, seed, sink));
}

}  // namespace prbox::protocol
