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

#include "prbox/io.hpp"

#include <gtest/gtest.h>

#include "prbox/channels.hpp"
#include "prbox/random.hpp"

namespace prbox::io {
namespace {

using linalg::frobenius_distance;

TEST(ChannelJson, RoundTripsPrChannel) {
  const auto phi = channels::make_pr_channel();
  const auto j = channel_to_json(phi);
  EXPECT_EQ(j.at("din"), 4);
  EXPECT_EQ(j.at("kraus").size(), 16u);
  const auto back = channel_from_json(json::parse(j.dump()));
  ASSERT_EQ(back.kraus().size(), phi.kraus().size());
  for (std::size_t i = 0; i < phi.kraus().size(); ++i) {
    EXPECT_LE(frobenius_distance(back.kraus()[i], phi.kraus()[i]), 1e-12);
  }
  EXPECT_EQ(back.out_shape(), linalg::qubits(2));
}

TEST(ChoiJson, RoundTripsRandomChannelChoi) {
  Rng rng(1);
  const auto c = channels::to_choi(channels::random_channel(rng, 2, 2, 3));
  const auto back = choi_from_json(json::parse(choi_to_json(c).dump()));
  EXPECT_LE(frobenius_distance(back.matrix(), c.matrix()), 1e-12);

  // Bare {"choi": ...} infers square dimensions.
  const json bare{{"choi", matrix_to_json(c.matrix())}};
  EXPECT_EQ(choi_from_json(bare).din(), 2u);
}

TEST(BoxJson, KeysAndRoundTrip) {
  const auto pr = boxes::make_pr_box();
  const auto j = box_to_json(pr);
  EXPECT_EQ(j.at("p").at("0,1|1,1"), 0.5);
  EXPECT_EQ(j.at("p").at("0,0|1,1"), 0.0);
  EXPECT_EQ(box_from_json(json::parse(j.dump())).table(), pr.table());
}

TEST(BoxCsv, LayoutAndRoundTrip) {
  const auto pr = boxes::make_pr_box();
  const auto csv = box_to_csv(pr);
  EXPECT_EQ(csv,
            "0.5,0,0,0.5\n0.5,0,0,0.5\n0.5,0,0,0.5\n0,0.5,0.5,0\n");
  EXPECT_EQ(box_from_csv(csv).table(), pr.table());

  Rng rng(3);
  boxes::CorrelationBox::Table t{};
  for (unsigned s = 0; s < 4; ++s) {
    double rest = 1.0;
    for (unsigned o = 0; o < 3; ++o) {
      t[s * 4 + o] = rest * rng.uniform();
      rest -= t[s * 4 + o];
    }
    t[s * 4 + 3] = rest;
  }
  const boxes::CorrelationBox random_box(t);
  EXPECT_EQ(box_from_csv(box_to_csv(random_box)).table(), random_box.table());
  EXPECT_EQ(box_from_json(json::parse(box_to_json(random_box).dump())).table(),
            random_box.table());
}

TEST(Parsing, RejectsMalformedInput) {
  EXPECT_THROW(matrix_from_json(json::parse("[[1, 2]]")), ValidationError);
  EXPECT_THROW(matrix_from_json(json::parse("[[[1,0]],[[1,0],[0,0]]]")),
               DimensionError);
  EXPECT_THROW(box_from_json(json::parse(R"({"p": {"0,0|0,0": 1}})")),
               ValidationError);
  EXPECT_THROW(box_from_csv("1,0,0,0\n"), ValidationError);
  EXPECT_THROW(box_from_csv("1,0,0\n1,0,0\n1,0,0\n1,0,0\n"), ValidationError);
  EXPECT_THROW(channel_from_json(json::parse(R"({"din": 2})")), ValidationError);
  EXPECT_THROW(choi_from_json(json::parse(R"({"choi": [[[1,0],[0,0],[0,0]]]})")),
               DimensionError);
}

TEST(TranscriptJson, Fields) {
  const auto t = protocol::run_once(protocol::ClassicalInput::basis(1, 1), 5);
  const auto j = transcript_to_json(t);
  for (const char* key : {"seed", "key", "a", "b", "msg", "alice_out", "bob_out"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  EXPECT_EQ(j.at("seed"), 5u);
  EXPECT_EQ(j.at("bob_out").get<unsigned>(), t.key ^ 1u);
}

}  // namespace
}  // namespace prbox::io
