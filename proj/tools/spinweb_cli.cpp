// Copyright 2026 The spinweb Authors
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

#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "spinweb/io.hpp"
#include "spinweb/spinweb.hpp"

namespace {

using namespace spinweb;
using nlohmann::json;

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitDomain = 3;
constexpr int kExitResource = 4;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GridFlags {
  double c_min = 0.0;
  double c_max = 1.0;
  int c_steps = 400;

  void add(CLI::App* app) {
    app->add_option("--c-min", c_min, "Lower end of the c grid")->capture_default_str();
    app->add_option("--c-max", c_max, "Upper end of the c grid")->capture_default_str();
    app->add_option("--c-steps", c_steps, "Number of grid intervals (points = steps + 1)")->capture_default_str();
  }
  std::vector<double> grid() const { return uniform_grid(c_min, c_max, c_steps); }
  json to_json() const { return {{"c_min", c_min}, {"c_max", c_max}, {"c_steps", c_steps}}; }
};

struct SizeFlags {
  int n = 4;
  bool allow_large = false;

  void add(CLI::App* app) {
    app->add_option("--n", n, "Number of outer spins")->required();
    app->add_flag("--allow-large", allow_large, "Permit N above the dense-solver cap");
  }
  void check() const {
    if (n < 2) throw DomainError("--n must be at least 2");
    if (n > kMaxOuterSpins && !allow_large) {
      throw ResourceError("N = " + std::to_string(n) + " exceeds the cap of " + std::to_string(kMaxOuterSpins) +
                          " outer spins (dimension " + std::to_string(Index{1} << (n + 1)) +
                          "); pass --allow-large to override");
    }
    if (n > kMaxOuterSpins) {
      std::cerr << "warning: N = " << n << " uses dense matrices of dimension " << (Index{1} << (n + 1)) << "\n";
    }
  }
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, sep)) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<SitePair> parse_pairs(const std::string& spec, const SpinSystem& sys) {
  const auto defaults = default_pairs(sys);
  std::vector<SitePair> out;
  for (const auto& tok : split(spec, ',')) {
    if (tok == "nn") {
      out.push_back(defaults[0]);
    } else if (tok == "nnn") {
      out.push_back(defaults[1]);
    } else {
      const auto dash = tok.find('-');
      try {
        if (dash == std::string::npos) throw std::invalid_argument(tok);
        std::size_t used_a = 0, used_b = 0;
        const std::string sa = tok.substr(0, dash), sb = tok.substr(dash + 1);
        const int a = std::stoi(sa, &used_a), b = std::stoi(sb, &used_b);
        if (used_a != sa.size() || used_b != sb.size()) throw std::invalid_argument(tok);
        out.push_back({std::to_string(a) + "_" + std::to_string(b), a, b});
      } catch (const std::logic_error&) {
        throw UsageError("--pairs: expected nn, nnn or i-j, got '" + tok + "'");
      }
    }
  }
  if (out.empty()) throw UsageError("--pairs: no pairs given");
  return out;
}

ReferenceSet parse_refs(const std::string& spec) {
  ReferenceSet refs;
  refs.star = false;
  for (const auto& tok : split(spec, ',')) {
    if (tok == "ring") continue;
    if (tok == "star") {
      refs.star = true;
    } else if (tok == "ansatz") {
      refs.ansatz = true;
    } else if (tok == "ring-eps") {
      refs.ring_eps = 0.01;
    } else if (tok.rfind("ring-eps=", 0) == 0) {
      try {
        refs.ring_eps = std::stod(tok.substr(9));
      } catch (const std::logic_error&) {
        throw UsageError("--refs: bad ring-eps value in '" + tok + "'");
      }
    } else {
      throw UsageError("--refs: unknown reference '" + tok + "'");
    }
  }
  return refs;
}

void emit(const std::string& out, const std::string& content) {
  if (out.empty() || out == "-") {
    std::cout << content;
  } else {
    io::atomic_write(out, content);
  }
}

// ---------------------------------------------------------------------------

struct SweepCmd {
  SizeFlags size;
  GridFlags grid;
  double J = 1.0;
  std::string pairs = "nn,nnn";
  std::string refs = "ring,star";
  int levels = 1;
  std::string format = "csv";
  std::string out = "-";
  bool allow_double_bond = false;

  void add(CLI::App& root) {
    auto* app = root.add_subcommand("sweep", "Ground-state observables along c");
    size.add(app);
    grid.add(app);
    app->add_option("--j", J, "Coupling J")->capture_default_str();
    app->add_option("--pairs", pairs, "Site pairs: nn, nnn or i-j, comma separated")->capture_default_str();
    app->add_option("--refs", refs, "Overlap references: ring, star, ring-eps[=eps], ansatz")->capture_default_str();
    app->add_option("--levels", levels, "Low energy levels stored per point")->capture_default_str();
    app->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    app->add_option("--out", out, "Output path, - for stdout")->capture_default_str();
    app->add_flag("--allow-double-bond", allow_double_bond, "Allow the N = 2 ring");
    app->callback([this] { result = run(); });
  }

  int run() {
    size.check();
    SweepConfig cfg;
    cfg.n_outer = size.n;
    cfg.J = J;
    cfg.c_grid = grid.grid();
    cfg.pairs = parse_pairs(pairs, cfg.system());
    cfg.refs = parse_refs(refs);
    cfg.n_levels = levels;
    cfg.ring.allow_double_bond = allow_double_bond;
    const auto records = run_sweep(cfg);
    std::vector<LevelCrossing> crossings;
    if (cfg.c_grid.size() >= 2) crossings = sweep_crossings(cfg).crossings;

    const bool ansatz = cfg.refs.ansatz;
    json config = {{"n", size.n},         {"j", J},           {"grid", grid.to_json()}, {"pairs", pairs},
                   {"refs", refs},        {"levels", levels}, {"format", format},
                   {"allow_double_bond", allow_double_bond}};
    const auto manifest = io::RunManifest::make("sweep", config);
    if (format == "csv") {
      emit(out, io::sweep_csv(records, cfg.pairs, ansatz));
      if (out.empty() || out == "-") {
        std::cout << "\n" << io::crossings_csv(crossings);
      } else {
        io::atomic_write(out + ".crossings.csv", io::crossings_csv(crossings));
        io::atomic_write(out + ".manifest.json", manifest.to_json().dump(2) + "\n");
      }
    } else {
      json recs = json::array();
      for (const auto& r : records) recs.push_back(io::to_json(r, cfg.pairs, ansatz));
      emit(out, io::document(manifest, recs, io::crossings_json(crossings), json::object()).dump(2) + "\n");
    }
    return 0;
  }

  int result = 0;
};

struct SpectrumCmd {
  SizeFlags size;
  GridFlags grid;
  double J = 1.0;
  int levels = 2;
  std::string format = "csv";
  std::string out = "-";
  bool allow_double_bond = false;

  void add(CLI::App& root) {
    auto* app = root.add_subcommand("spectrum", "Tracked low energy levels and ground-level crossings");
    size.add(app);
    grid.add(app);
    app->add_option("--j", J, "Coupling J")->capture_default_str();
    app->add_option("--levels", levels, "Number of tracked levels; 1 gives energies without crossing analysis")
        ->capture_default_str();
    app->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    app->add_option("--out", out, "Output path, - for stdout")->capture_default_str();
    app->add_flag("--allow-double-bond", allow_double_bond, "Allow the N = 2 ring");
    app->callback([this] { result = run(); });
  }

  int run() {
    size.check();
    if (levels < 1) throw UsageError("--levels must be positive");
    const auto sys = SpinSystem::with_central(size.n);
    const auto c_grid = grid.grid();
    json config = {{"n", size.n}, {"j", J}, {"grid", grid.to_json()}, {"levels", levels}, {"format", format}};
    const auto manifest = io::RunManifest::make("spectrum", config);
    RingOptions ring{allow_double_bond};

    if (levels == 1) {
      std::vector<double> energy(c_grid.size());
      std::vector<int> degeneracy(c_grid.size());
      parallel_for(c_grid.size(), [&](Index i) {
        const auto g = ground_at(sys, J, c_grid[i], ring);
        energy[i] = g.energy;
        degeneracy[i] = g.degeneracy;
      });
      if (format == "csv") {
        std::string text = "label,c,energy,degeneracy\n";
        for (std::size_t i = 0; i < c_grid.size(); ++i) {
          text += io::join_csv({"0", io::format_number(c_grid[i]), io::format_number(energy[i]),
                                std::to_string(degeneracy[i])});
        }
        emit(out, text);
      } else {
        json recs = json::array();
        for (std::size_t i = 0; i < c_grid.size(); ++i) {
          recs.push_back({{"label", 0}, {"c", c_grid[i]}, {"energy", energy[i]}, {"degeneracy", degeneracy[i]}});
        }
        emit(out, io::document(manifest, recs, json::array(), json::object()).dump(2) + "\n");
      }
      return 0;
    }

    TrackOptions opt;
    opt.ring = ring;
    const auto track = track_levels(sys, J, c_grid, levels, opt);
    if (format == "csv") {
      emit(out, io::levels_csv(track));
      if (out.empty() || out == "-") {
        std::cout << "\n" << io::crossings_csv(track.crossings);
      } else {
        io::atomic_write(out + ".crossings.csv", io::crossings_csv(track.crossings));
        io::atomic_write(out + ".manifest.json", manifest.to_json().dump(2) + "\n");
      }
    } else {
      emit(out, io::document(manifest, io::levels_json(track), io::crossings_json(track.crossings), json::object())
                        .dump(2) +
                    "\n");
    }
    return 0;
  }

  int result = 0;
};

struct GhzCmd {
  std::optional<double> c;
  double field_h = 1e-3;
  double J = 1.0;
  std::string region = "intermediate";
  std::string out = "-";

  void add(CLI::App& root) {
    auto* app = root.add_subcommand("ghz", "Field splitting and central-spin measurement for N = 4");
    app->add_option("--c", c, "Coupling mix (default: intermediate midpoint, or 0.95 for the star region)");
    app->add_option("--field-h", field_h, "Uniform z field strength")->capture_default_str();
    app->add_option("--j", J, "Coupling J")->capture_default_str();
    app->add_option("--region", region, "intermediate or star")
        ->check(CLI::IsMember({"intermediate", "star"}))
        ->capture_default_str();
    app->add_option("--out", out, "Output path, - for stdout")->capture_default_str();
    app->callback([this] { result = run(); });
  }

  int run() {
    const n4::Model model{J, 0.0};
    n4::ProtocolReport rep;
    if (region == "intermediate") {
      rep = n4::ghz_protocol(c.value_or(n4::intermediate_region(J).midpoint()), field_h, model);
    } else {
      rep = n4::star_region_protocol(c.value_or(0.95), field_h, model);
    }
    json config = {{"c", c ? json(*c) : json(nullptr)}, {"field_h", field_h}, {"j", J}, {"region", region}};
    const auto manifest = io::RunManifest::make("ghz", config);
    emit(out, io::document(manifest, json::array(), json::array(),
                           {{"protocol", io::to_json(rep)}})
                      .dump(2) +
                  "\n");
    return 0;
  }

  int result = 0;
};

struct VerifyCmd {
  double perturb = 0.0;
  std::string out = "-";

  void add(CLI::App& root) {
    auto* app = root.add_subcommand("verify-n4", "Action table, closed forms and coefficient endpoints for N = 4");
    app->add_option("--perturb", perturb, "Add delta * sz1 sz2 to the Hamiltonian (negative control)")
        ->capture_default_str();
    app->add_option("--out", out, "Output path, - for stdout")->capture_default_str();
    app->callback([this] { result = run(); });
  }

  int run() {
    n4::VerifyOptions opt;
    opt.model.perturbation = perturb;
    const auto rep = n4::verify(opt);
    for (const auto& item : rep.items) {
      std::cerr << (item.passed ? "PASS " : "FAIL ") << item.name << ": " << item.detail << "\n";
    }
    const auto manifest = io::RunManifest::make("verify-n4", {{"perturb", perturb}});
    emit(out, io::document(manifest, json::array(), json::array(), {{"verify_n4", io::to_json(rep)}}).dump(2) +
                  "\n");
    return rep.all_passed() ? 0 : kExitFailure;
  }

  int result = 0;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spinweb: entanglement in XX spin rings with a central spin"};
  app.require_subcommand(1);
  app.set_version_flag("--version", io::kVersion);
  SweepCmd sweep;
  SpectrumCmd spectrum;
  GhzCmd ghz;
  VerifyCmd verify;
  sweep.add(app);
  spectrum.add(app);
  ghz.add(app);
  verify.add(app);
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const ResourceError& e) {
    std::cerr << "resource error: " << e.what() << "\n";
    return kExitResource;
  }
  for (const auto* sub : app.get_subcommands()) {
    if (sub->get_name() == "sweep") return sweep.result;
    if (sub->get_name() == "spectrum") return spectrum.result;
    if (sub->get_name() == "ghz") return ghz.result;
    if (sub->get_name() == "verify-n4") return verify.result;
  }
  return 0;
}
