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

// JSON and CSV forms of the library's values.
//
//   matrix:   [[[re, im], ...], ...]            (row-major)
//   channel:  {"din": n, "dout": n, "kraus": [matrix, ...]}
//   choi:     {"choi": matrix}                  (din/dout optional; square
//                                                dims are inferred)
//   box:      {"p": {"x,y|X,Y": value, ...}}
//   box CSV:  4 rows (X,Y = 00,01,10,11) x 4 columns (x,y = 00,01,10,11)

#include <cmath>
#include <cstddef>
#include <iomanip>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "prbox/boxes.hpp"
#include "prbox/channels.hpp"
#include "prbox/errors.hpp"
#include "prbox/linalg.hpp"
#include "prbox/protocol.hpp"
#include "prbox/quantum_bounds.hpp"

namespace prbox::io {

using nlohmann::json;

inline json matrix_to_json(const linalg::ComplexMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) {
      row.push_back({m(i, j).real(), m(i, j).imag()});
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

inline linalg::ComplexMatrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty() || !j.front().is_array()) {
    throw ValidationError("matrix JSON: expected a nonempty array of rows");
  }
  const std::size_t rows = j.size();
  const std::size_t cols = j.front().size();
  std::vector<linalg::Complex> data;
  data.reserve(rows * cols);
  for (const auto& row : j) {
    if (!row.is_array() || row.size() != cols) {
      throw DimensionError("matrix JSON: ragged rows");
    }
    for (const auto& z : row) {
      if (!z.is_array() || z.size() != 2 || !z[0].is_number() ||
          !z[1].is_number()) {
        throw ValidationError("matrix JSON: entries must be [re, im] pairs");
      }
      data.emplace_back(z[0].get<double>(), z[1].get<double>());
    }
  }
  return linalg::ComplexMatrix(rows, cols, std::move(data));
}

inline json channel_to_json(const channels::Channel& ch) {
  json kraus = json::array();
  for (const auto& k : ch.kraus()) kraus.push_back(matrix_to_json(k));
  return {{"din", ch.din()}, {"dout", ch.dout()}, {"kraus", std::move(kraus)}};
}

/// Output dimension 4 is read as two qubits; anything else as one system.
inline channels::Channel channel_from_json(const json& j) {
  try {
    const auto din = j.at("din").get<std::size_t>();
    const auto dout = j.at("dout").get<std::size_t>();
    std::vector<linalg::ComplexMatrix> kraus;
    for (const auto& k : j.at("kraus")) kraus.push_back(matrix_from_json(k));
    auto shape = dout == 4 ? linalg::qubits(2)
                           : linalg::SubsystemShape{{dout}};
    return channels::Channel(std::move(kraus), din, dout, std::move(shape));
  } catch (const json::exception& e) {
    throw ValidationError(std::string("channel JSON: ") + e.what());
  }
}

inline json choi_to_json(const channels::ChoiOperator& c) {
  return {{"choi", matrix_to_json(c.matrix())},
          {"din", c.din()},
          {"dout", c.dout()}};
}

inline channels::ChoiOperator choi_from_json(const json& j) {
  try {
    auto m = matrix_from_json(j.at("choi"));
    std::size_t din = 0, dout = 0;
    if (j.contains("din") && j.contains("dout")) {
      din = j.at("din").get<std::size_t>();
      dout = j.at("dout").get<std::size_t>();
    } else {
      const auto root = static_cast<std::size_t>(
          std::llround(std::sqrt(static_cast<double>(m.rows()))));
      if (root * root != m.rows()) {
        throw DimensionError("choi JSON: cannot infer din/dout from a "
                             "non-square dimension; give them explicitly");
      }
      din = dout = root;
    }
    return channels::ChoiOperator(std::move(m), din, dout);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("choi JSON: ") + e.what());
  }
}

inline std::string box_key(unsigned x, unsigned y, unsigned sx, unsigned sy) {
  std::ostringstream os;
  os << x << ',' << y << '|' << sx << ',' << sy;
  return os.str();
}

inline json box_to_json(const boxes::CorrelationBox& box) {
  json p = json::object();
  for (unsigned sx = 0; sx < 2; ++sx) {
    for (unsigned sy = 0; sy < 2; ++sy) {
      for (unsigned x = 0; x < 2; ++x) {
        for (unsigned y = 0; y < 2; ++y) {
          p[box_key(x, y, sx, sy)] = box(x, y, sx, sy);
        }
      }
    }
  }
  return {{"p", std::move(p)}};
}

inline boxes::CorrelationBox box_from_json(const json& j) {
  try {
    const auto& p = j.at("p");
    if (p.size() != 16) {
      throw ValidationError("box JSON: expected 16 entries in \"p\"");
    }
    boxes::CorrelationBox::Table t{};
    for (unsigned sx = 0; sx < 2; ++sx) {
      for (unsigned sy = 0; sy < 2; ++sy) {
        for (unsigned x = 0; x < 2; ++x) {
          for (unsigned y = 0; y < 2; ++y) {
            t[boxes::box_index(x, y, sx, sy)] =
                p.at(box_key(x, y, sx, sy)).get<double>();
          }
        }
      }
    }
    return boxes::CorrelationBox(t);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("box JSON: ") + e.what());
  }
}

/// Shortest round-trip decimal form of a double.
inline std::string exact(double v) {
  std::ostringstream os;
  os << std::setprecision(std::numeric_limits<double>::max_digits10) << v;
  return os.str();
}

inline std::string box_to_csv(const boxes::CorrelationBox& box) {
  std::ostringstream os;
  for (unsigned s = 0; s < 4; ++s) {
    for (unsigned o = 0; o < 4; ++o) {
      if (o) os << ',';
      os << exact(box.table()[s * 4 + o]);
    }
    os << '\n';
  }
  return os.str();
}

inline boxes::CorrelationBox box_from_csv(const std::string& text) {
  std::istringstream in(text);
  boxes::CorrelationBox::Table t{};
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (row >= 4) throw ValidationError("box CSV: more than 4 rows");
    std::istringstream ls(line);
    std::string cell;
    std::size_t col = 0;
    while (std::getline(ls, cell, ',')) {
      if (col >= 4) throw ValidationError("box CSV: more than 4 columns");
      try {
        t[row * 4 + col] = std::stod(cell);
      } catch (const std::exception&) {
        throw ValidationError("box CSV: bad number '" + cell + "'");
      }
      ++col;
    }
    if (col != 4) throw ValidationError("box CSV: row with fewer than 4 cells");
    ++row;
  }
  if (row != 4) throw ValidationError("box CSV: expected 4 rows");
  return boxes::CorrelationBox(t);
}

inline json transcript_to_json(const protocol::ProtocolTranscript& t) {
  return {{"seed", t.seed},           {"key", t.key},
          {"a", t.a},                 {"b", t.b},
          {"msg", t.message},         {"alice_out", t.alice_out},
          {"bob_out", t.bob_out}};
}

inline json observable_to_json(const bounds::QubitObservable& o) {
  return {o.bloch()[0], o.bloch()[1], o.bloch()[2]};
}

inline json seesaw_to_json(const bounds::SeesawResult& r) {
  return {{"value", r.value},
          {"best_restart", r.best_restart},
          {"restart_values", r.restart_values},
          {"state", matrix_to_json(r.best.state.matrix())},
          {"alice", {observable_to_json(r.best.alice[0]),
                     observable_to_json(r.best.alice[1])}},
          {"bob", {observable_to_json(r.best.bob[0]),
                   observable_to_json(r.best.bob[1])}},
          {"trace", r.trace}};
}

}  // namespace prbox::io
