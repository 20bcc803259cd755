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

#include "prbox/verify.hpp"

#include <gtest/gtest.h>

#include <array>

#include "prbox/channels.hpp"

namespace prbox::verify {
namespace {

channels::Channel corrupted_pr_channel() {
  const auto shape = linalg::qubits(2);
  const channels::DensityOperator cor(
      linalg::ComplexMatrix::diagonal({0.75, 0.0, 0.0, 0.25}), shape);
  const auto acor = channels::make_prepared_states().second;
  const std::array<channels::DensityOperator, 4> prepared{cor, cor, cor, acor};
  return channels::measure_and_prepare(prepared);
}

const CheckResult& find(const Report& r, const std::string& name) {
  for (const auto& c : r.checks) {
    if (c.name == name) return c;
  }
  throw std::out_of_range(name);
}

TEST(Verify, PrChannelPassesEverything) {
  Config cfg;
  cfg.mc_runs = 20000;
  const auto r = run_all(channels::make_pr_channel(), cfg);
  for (const auto& c : r.checks) EXPECT_TRUE(c.passed) << c.name;
  EXPECT_TRUE(r.passed());
  EXPECT_NEAR(find(r, "tsirelson").value, 2.8284271247, 1e-6);
}

TEST(Verify, CorruptedChannelFailsBoxIdentity) {
  Config cfg;
  cfg.mc_runs = 1000;
  cfg.seesaw_restarts = 2;
  const auto r = run_all(corrupted_pr_channel(), cfg);
  EXPECT_FALSE(r.passed());
  EXPECT_FALSE(find(r, "box_identity").passed);
  EXPECT_NEAR(find(r, "box_identity").value, 0.25, 1e-12);
  EXPECT_FALSE(find(r, "channel_equation").passed);
  EXPECT_FALSE(find(r, "simulation_identity").passed);
  // Still a valid channel.
  EXPECT_TRUE(find(r, "choi_psd").passed);
  EXPECT_TRUE(find(r, "choi_trace_preservation").passed);
}

TEST(MeasureAndPrepare, ReproducesPrChannelFromPreparedStates) {
  const auto [cor, acor] = channels::make_prepared_states();
  const std::array<channels::DensityOperator, 4> prepared{cor, cor, cor, acor};
  const auto built = channels::measure_and_prepare(prepared);
  EXPECT_LT(linalg::frobenius_distance(
                channels::to_choi(built).matrix(),
                channels::to_choi(channels::make_pr_channel()).matrix()),
            1e-15);
}

}  // namespace
}  // namespace prbox::verify
