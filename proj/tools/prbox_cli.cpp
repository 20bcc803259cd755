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

// prbox: command-line front end.
//
// Exit codes: 0 pass, 1 check failure, 2 usage error.

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "prbox/prbox.hpp"

namespace {

using prbox::io::json;

enum class Format { kText, kJson, kCsv };

struct Options {
  std::uint64_t seed = 1;
  std::uint64_t n_runs = 100000;
  double tol = 1e-9;
  int restarts = 20;
  std::string out;
  std::string in;
  std::string channel;
  std::string transcript;
  bool choi = false;
  Format format = Format::kText;
};

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string text_number(double v) {
  std::ostringstream os;
  os << std::setprecision(12) << v;
  return os.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit(const Options& opt, const std::string& text) {
  if (opt.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(opt.out);
  if (!out) throw UsageError("cannot write '" + opt.out + "'");
  out << text;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

prbox::channels::Channel load_channel(const Options& opt) {
  if (opt.channel.empty()) return prbox::channels::make_pr_channel();
  return prbox::io::channel_from_json(json::parse(read_file(opt.channel)));
}

/// Box from --in (JSON, or CSV when the file does not start with '{'), or
/// the box of the channel under test with Z_0/Z_1 settings.
prbox::boxes::CorrelationBox load_box(const Options& opt) {
  if (!opt.in.empty()) {
    const auto text = read_file(opt.in);
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
      return prbox::io::box_from_json(json::parse(text));
    }
    return prbox::io::box_from_csv(text);
  }
  const auto s = prbox::boxes::z_settings();
  return prbox::boxes::box_from_channel(load_channel(opt), s, s);
}

std::string box_text(const prbox::boxes::CorrelationBox& box) {
  std::ostringstream os;
  os << "P(x,y|X,Y)   x,y=00        01        10        11\n";
  for (unsigned sx = 0; sx < 2; ++sx) {
    for (unsigned sy = 0; sy < 2; ++sy) {
      os << "  X,Y=" << sx << sy << "      ";
      for (unsigned x = 0; x < 2; ++x) {
        for (unsigned y = 0; y < 2; ++y) {
          os << std::left << std::setw(10) << text_number(box(x, y, sx, sy));
        }
      }
      os << "\n";
    }
  }
  return os.str();
}

void require_not_csv(const Options& opt, const char* cmd) {
  if (opt.format == Format::kCsv) {
    throw UsageError(std::string(cmd) + " has no CSV output");
  }
}

int cmd_chsh_demo(const Options& opt) {
  const auto box = load_box(opt);
  const double c[4] = {prbox::boxes::correlator(box, 0, 0),
                       prbox::boxes::correlator(box, 0, 1),
                       prbox::boxes::correlator(box, 1, 0),
                       prbox::boxes::correlator(box, 1, 1)};
  const double chsh = prbox::boxes::chsh(box);
  const double pr_err =
      prbox::boxes::max_abs_difference(box, prbox::boxes::make_pr_box());
  switch (opt.format) {
    case Format::kCsv:
      emit(opt, prbox::io::box_to_csv(box));
      break;
    case Format::kJson: {
      json j = prbox::io::box_to_json(box);
      j["correlators"] = {c[0], c[1], c[2], c[3]};
      j["chsh"] = chsh;
      j["pr_box_max_deviation"] = pr_err;
      emit(opt, dump(j));
      break;
    }
    case Format::kText: {
      std::ostringstream os;
      os << box_text(box);
      os << "<Z0 Z0> = " << text_number(c[0]) << "\n"
         << "<Z0 Z1> = " << text_number(c[1]) << "\n"
         << "<Z1 Z0> = " << text_number(c[2]) << "\n"
         << "<Z1 Z1> = " << text_number(c[3]) << "\n"
         << "CHSH = " << text_number(chsh) << "\n"
         << "max |P - P_PR| = " << text_number(pr_err) << "\n";
      emit(opt, os.str());
      break;
    }
  }
  return kPass;
}

int cmd_pr_box(const Options& opt) {
  const auto box = prbox::boxes::make_pr_box();
  switch (opt.format) {
    case Format::kCsv: emit(opt, prbox::io::box_to_csv(box)); break;
    case Format::kJson: emit(opt, dump(prbox::io::box_to_json(box))); break;
    case Format::kText: emit(opt, box_text(box)); break;
  }
  return kPass;
}

int cmd_no_signaling(const Options& opt) {
  require_not_csv(opt, "no-signaling");
  const auto box = load_box(opt);
  const auto r = prbox::boxes::check_no_signaling(box, opt.tol);
  if (opt.format == Format::kJson) {
    emit(opt, dump({{"no_signaling", r.no_signaling},
                    {"max_violation", r.max_violation},
                    {"tol", opt.tol}}));
  } else {
    emit(opt, std::string("no-signaling: ") + (r.no_signaling ? "yes" : "no") +
                  "\nmax marginal deviation = " +
                  text_number(r.max_violation) + "\n");
  }
  return r.no_signaling ? kPass : kFail;
}

int cmd_local_bound(const Options& opt) {
  require_not_csv(opt, "local-bound");
  json strategies = json::array();
  std::ostringstream os;
  double best = -4.0;
  int at_plus_two = 0;
  os << "strategy a0 a1 b0 b1   CHSH (signed)\n";
  for (unsigned i = 0; i < 16; ++i) {
    const auto s = prbox::boxes::Strategy::from_index(i);
    const double v =
        prbox::boxes::chsh_signed(prbox::boxes::deterministic_box(s));
    best = std::max(best, v);
    if (v == 2.0) ++at_plus_two;
    strategies.push_back({{"a", {s.a[0], s.a[1]}},
                          {"b", {s.b[0], s.b[1]}},
                          {"chsh", v}});
    os << std::setw(8) << i << "  " << s.a[0] << "  " << s.a[1] << "  "
       << s.b[0] << "  " << s.b[1] << "   " << text_number(v) << "\n";
  }
  os << "maximum = " << text_number(best) << "\n"
     << "strategies at +2 = " << at_plus_two << "\n";

  json j{{"strategies", strategies},
         {"maximum", best},
         {"count_at_plus_two", at_plus_two}};
  int status = kPass;
  if (!opt.in.empty()) {
    const auto box = load_box(opt);
    const auto model = prbox::boxes::local_membership(box, opt.tol);
    j["local"] = model.has_value();
    j["chsh"] = prbox::boxes::chsh(box);
    if (model) j["weights"] = model->weights;
    os << "input box CHSH = " << text_number(prbox::boxes::chsh(box)) << "\n"
       << "input box local: " << (model ? "yes" : "no") << "\n";
    if (model) {
      os << "weights:";
      for (double w : model->weights) os << " " << text_number(w);
      os << "\n";
    }
  }
  emit(opt, opt.format == Format::kJson ? dump(j) : os.str());
  return status;
}

int cmd_tsirelson(const Options& opt) {
  require_not_csv(opt, "tsirelson");
  prbox::bounds::SeesawConfig cfg;
  cfg.seed = opt.seed;
  cfg.restarts = opt.restarts;
  const auto r = prbox::bounds::seesaw_maximize(cfg);
  const double gap = std::abs(r.value - prbox::bounds::kTsirelson);
  if (opt.format == Format::kJson) {
    json j = prbox::io::seesaw_to_json(r);
    j["tsirelson"] = prbox::bounds::kTsirelson;
    j["seed"] = opt.seed;
    emit(opt, dump(j));
  } else {
    std::ostringstream os;
    os << "best CHSH = " << text_number(r.value) << " (restart "
       << r.best_restart << " of " << cfg.restarts << ")\n"
       << "2*sqrt(2) = " << text_number(prbox::bounds::kTsirelson) << "\n"
       << "gap = " << text_number(gap) << "\n";
    for (int p = 0; p < 2; ++p) {
      const auto& obs = p == 0 ? r.best.alice : r.best.bob;
      for (int s = 0; s < 2; ++s) {
        const auto& n = obs[s].bloch();
        os << (p == 0 ? "alice" : "bob") << "[" << s << "] = ("
           << text_number(n[0]) << ", " << text_number(n[1]) << ", "
           << text_number(n[2]) << ")\n";
      }
    }
    emit(opt, os.str());
  }
  return gap <= 1e-6 ? kPass : kFail;
}

int cmd_simulate(const Options& opt) {
  if (opt.n_runs < 1) throw UsageError("--n-runs must be >= 1");
  std::optional<std::ofstream> log;
  if (!opt.transcript.empty()) {
    log.emplace(opt.transcript);
    if (!*log) throw UsageError("cannot write '" + opt.transcript + "'");
  }
  bool consistent = true;
  const auto mc = prbox::protocol::monte_carlo_box(
      opt.n_runs, opt.seed, [&](const prbox::protocol::ProtocolTranscript& t) {
        consistent = consistent && t.consistent();
        if (log) *log << prbox::io::transcript_to_json(t).dump() << "\n";
      });
  const auto box = mc.box();
  if (opt.format == Format::kCsv) {
    if (!box) throw UsageError("not every setting pair was sampled; no CSV");
    emit(opt, prbox::io::box_to_csv(*box));
  } else if (opt.format == Format::kJson) {
    json p = json::object(), se = json::object();
    for (unsigned sx = 0; sx < 2; ++sx) {
      for (unsigned sy = 0; sy < 2; ++sy) {
        for (unsigned x = 0; x < 2; ++x) {
          for (unsigned y = 0; y < 2; ++y) {
            const auto i = prbox::boxes::box_index(x, y, sx, sy);
            const auto key = prbox::io::box_key(x, y, sx, sy);
            p[key] = mc.p[i] ? json(*mc.p[i]) : json(nullptr);
            se[key] = mc.std_error[i] ? json(*mc.std_error[i]) : json(nullptr);
          }
        }
      }
    }
    json j{{"p", p},
           {"stderr", se},
           {"trials", mc.tally.trials},
           {"seed", opt.seed},
           {"n_runs", opt.n_runs},
           {"transcripts_consistent", consistent}};
    j["chsh"] = mc.chsh() ? json(*mc.chsh()) : json(nullptr);
    emit(opt, dump(j));
  } else {
    std::ostringstream os;
    os << "runs = " << opt.n_runs << ", seed = " << opt.seed << "\n";
    for (unsigned s = 0; s < 4; ++s) {
      os << "  X,Y=" << (s >> 1) << (s & 1) << "  trials=" << mc.tally.trials[s]
         << "  ";
      for (unsigned o = 0; o < 4; ++o) {
        const auto& v = mc.p[s * 4 + o];
        os << std::left << std::setw(16)
           << (v ? text_number(*v) : std::string("-"));
      }
      os << "\n";
    }
    os << "CHSH = " << (mc.chsh() ? text_number(*mc.chsh()) : "n/a") << "\n"
       << "transcripts consistent: " << (consistent ? "yes" : "no") << "\n";
    emit(opt, os.str());
  }
  return consistent ? kPass : kFail;
}

int cmd_verify_all(const Options& opt) {
  require_not_csv(opt, "verify-all");
  prbox::verify::Config cfg;
  cfg.seed = opt.seed;
  cfg.mc_runs = opt.n_runs;
  cfg.seesaw_restarts = opt.restarts;
  const auto report = prbox::verify::run_all(load_channel(opt), cfg);
  json checks = json::array();
  for (const auto& c : report.checks) {
    checks.push_back({{"name", c.name},
                      {"passed", c.passed},
                      {"value", c.value},
                      {"threshold", c.threshold}});
  }
  const json summary{{"passed", report.passed()},
                     {"seed", opt.seed},
                     {"checks", checks}};
  if (opt.format == Format::kJson) {
    emit(opt, dump(summary));
  } else {
    std::ostringstream os;
    for (const auto& c : report.checks) {
      os << (c.passed ? "PASS " : "FAIL ") << std::left << std::setw(26)
         << c.name << " value=" << text_number(c.value)
         << " threshold=" << text_number(c.threshold) << "\n";
    }
    os << summary.dump() << "\n";
    emit(opt, os.str());
  }
  return report.passed() ? kPass : kFail;
}

int cmd_export_channel(const Options& opt) {
  require_not_csv(opt, "export-channel");
  const auto ch = load_channel(opt);
  emit(opt, dump(opt.choi ? prbox::io::choi_to_json(prbox::channels::to_choi(ch))
                          : prbox::io::channel_to_json(ch)));
  return kPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Process-based PR box simulator and verifier"};
  app.require_subcommand(1);
  Options opt;

  const std::map<std::string, Format> formats{
      {"text", Format::kText}, {"json", Format::kJson}, {"csv", Format::kCsv}};
  auto common = [&](CLI::App* sub) {
    sub->add_option("--out", opt.out, "Write output to this file");
    sub->add_option("--format", opt.format, "text, json or csv")
        ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
  };

  auto* chsh_demo = app.add_subcommand(
      "chsh-demo", "Box, correlators and CHSH of the PR channel");
  auto* pr_box = app.add_subcommand("pr-box", "Print the ideal PR box");
  auto* no_signaling =
      app.add_subcommand("no-signaling", "Check the no-signaling conditions");
  auto* local_bound = app.add_subcommand(
      "local-bound", "Deterministic strategies and local-model search");
  auto* tsirelson =
      app.add_subcommand("tsirelson", "Seesaw search for the quantum maximum");
  auto* simulate = app.add_subcommand(
      "simulate", "Monte-Carlo CHSH run of the two-party protocol");
  auto* verify_all =
      app.add_subcommand("verify-all", "Run the full check battery");
  auto* export_channel = app.add_subcommand(
      "export-channel", "Write the PR channel as Kraus or Choi JSON");

  for (auto* sub : {chsh_demo, pr_box, no_signaling, local_bound, tsirelson,
                    simulate, verify_all, export_channel}) {
    common(sub);
  }
  for (auto* sub : {chsh_demo, no_signaling, local_bound}) {
    sub->add_option("--in", opt.in, "Box file (JSON or CSV)")
        ->check(CLI::ExistingFile);
  }
  for (auto* sub : {chsh_demo, no_signaling, verify_all, export_channel}) {
    sub->add_option("--channel", opt.channel,
                    "Channel JSON to use instead of the PR channel")
        ->check(CLI::ExistingFile);
  }
  for (auto* sub : {no_signaling, local_bound}) {
    sub->add_option("--tol", opt.tol, "Tolerance")
        ->check(CLI::PositiveNumber);
  }
  for (auto* sub : {tsirelson, simulate, verify_all}) {
    sub->add_option("--seed", opt.seed, "RNG seed");
  }
  for (auto* sub : {tsirelson, verify_all}) {
    sub->add_option("--restarts", opt.restarts, "Seesaw restarts")
        ->check(CLI::PositiveNumber);
  }
  for (auto* sub : {simulate, verify_all}) {
    sub->add_option("--n-runs", opt.n_runs, "Number of protocol runs")
        ->check(CLI::PositiveNumber);
  }
  simulate->add_option("--transcript", opt.transcript,
                       "Write one JSON object per run to this file");
  export_channel->add_flag("--choi", opt.choi, "Export the Choi operator");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kUsage;
  }

  try {
    if (*chsh_demo) return cmd_chsh_demo(opt);
    if (*pr_box) return cmd_pr_box(opt);
    if (*no_signaling) return cmd_no_signaling(opt);
    if (*local_bound) return cmd_local_bound(opt);
    if (*tsirelson) return cmd_tsirelson(opt);
    if (*simulate) return cmd_simulate(opt);
    if (*verify_all) return cmd_verify_all(opt);
    if (*export_channel) return cmd_export_channel(opt);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFail;
  }
  return kUsage;
}
