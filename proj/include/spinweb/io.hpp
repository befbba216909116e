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

// Serialization of sweeps, spectra and protocol reports to CSV and JSON.

#pragma once

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <string>
#include <system_error>
#include <vector>

#include "json.hpp"
#include "spinweb/n4_analytic.hpp"
#include "spinweb/sweep.hpp"

namespace spinweb::io {

inline constexpr const char* kVersion = "0.1.0";

/// Shortest decimal that parses back to the same binary64.
inline std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

inline std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

struct RunManifest {
  std::string command;
  nlohmann::json config;
  std::string version = kVersion;
  std::string timestamp;
  std::string input_hash;

  static RunManifest make(std::string command, nlohmann::json config) {
    RunManifest m;
    m.command = std::move(command);
    m.config = std::move(config);
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a(m.command + "\n" + m.config.dump())));
    m.input_hash = buf;
    const auto now = std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now());
    m.timestamp = iso_time(now);
    return m;
  }

  nlohmann::json to_json() const {
    return {{"command", command}, {"config", config}, {"version", version}, {"timestamp", timestamp},
            {"input_hash", input_hash}};
  }

 private:
  static std::string iso_time(std::chrono::sys_seconds t) {
    const std::time_t tt = std::chrono::system_clock::to_time_t(t);
    std::tm tm{};
    gmtime_r(&tt, &tm);
    char out[32];
    std::strftime(out, sizeof out, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return out;
  }
};

/// Writes to a sibling temporary file and renames it over path.
inline void atomic_write(const std::filesystem::path& path, const std::string& content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw ResourceError("cannot open " + tmp.string() + " for writing");
    f << content;
    f.flush();
    if (!f) throw ResourceError("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw ResourceError("cannot move output into place at " + path.string());
  }
}

// ---------------------------------------------------------------------------
// sweeps

/// c, E0, deg, then C_<pair>..., XX_<pair>..., ZZ_<pair>..., O_r, O_s and optionally O_p.
inline std::vector<std::string> sweep_columns(const std::vector<SitePair>& pairs, bool with_ansatz) {
  std::vector<std::string> cols{"c", "E0", "deg"};
  for (const char* q : {"C_", "XX_", "ZZ_"}) {
    for (const auto& p : pairs) cols.push_back(q + p.name);
  }
  cols.insert(cols.end(), {"O_r", "O_s"});
  if (with_ansatz) cols.emplace_back("O_p");
  return cols;
}

inline std::vector<double> sweep_values(const SweepRecord& r, bool with_ansatz) {
  std::vector<double> v{r.c, r.ground_energy, static_cast<double>(r.ground_degeneracy)};
  for (const auto& p : r.pairs) v.push_back(p.concurrence);
  for (const auto& p : r.pairs) v.push_back(p.xx);
  for (const auto& p : r.pairs) v.push_back(p.zz);
  v.push_back(r.O_r);
  v.push_back(r.O_s);
  if (with_ansatz) v.push_back(r.O_p.value_or(std::nan("")));
  return v;
}

inline std::string join_csv(const std::vector<std::string>& cells) {
  std::string line;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) line += ',';
    line += cells[i];
  }
  line += '\n';
  return line;
}

inline std::string sweep_csv(const std::vector<SweepRecord>& records, const std::vector<SitePair>& pairs,
                             bool with_ansatz) {
  std::string out = join_csv(sweep_columns(pairs, with_ansatz));
  for (const auto& r : records) {
    std::vector<std::string> cells;
    const auto vals = sweep_values(r, with_ansatz);
    for (std::size_t i = 0; i < vals.size(); ++i) {
      cells.push_back(i == 2 ? std::to_string(r.ground_degeneracy) : format_number(vals[i]));
    }
    out += join_csv(cells);
  }
  return out;
}

inline std::string crossings_csv(const std::vector<LevelCrossing>& crossings) {
  std::string out = "c_lo,c_hi,location,from_label,to_label,min_gap\n";
  for (const auto& x : crossings) {
    out += join_csv({format_number(x.c_lo), format_number(x.c_hi), format_number(x.location()),
                     std::to_string(x.from_label), std::to_string(x.to_label), format_number(x.min_gap)});
  }
  return out;
}

inline nlohmann::json number_json(double x) {
  if (!std::isfinite(x)) return nullptr;
  return x;
}

inline nlohmann::json to_json(const SweepRecord& r, const std::vector<SitePair>& pairs, bool with_ansatz) {
  nlohmann::json j;
  const auto cols = sweep_columns(pairs, with_ansatz);
  const auto vals = sweep_values(r, with_ansatz);
  for (std::size_t i = 0; i < cols.size(); ++i) {
    if (i == 2) {
      j[cols[i]] = r.ground_degeneracy;
    } else {
      j[cols[i]] = number_json(vals[i]);
    }
  }
  j["low_energies"] = r.low_energies;
  if (with_ansatz) j["ansatz_angles"] = r.ansatz_angles;
  return j;
}

inline nlohmann::json to_json(const LevelCrossing& x) {
  return {{"c_lo", x.c_lo},           {"c_hi", x.c_hi},       {"location", x.location()},
          {"from_label", x.from_label}, {"to_label", x.to_label}, {"min_gap", x.min_gap}};
}

inline nlohmann::json crossings_json(const std::vector<LevelCrossing>& crossings) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& x : crossings) arr.push_back(to_json(x));
  return arr;
}

inline nlohmann::json document(const RunManifest& m, nlohmann::json records, nlohmann::json crossings,
                               nlohmann::json reports) {
  return {{"manifest", m.to_json()},
          {"records", std::move(records)},
          {"crossings", std::move(crossings)},
          {"reports", std::move(reports)}};
}

// ---------------------------------------------------------------------------
// spectra

inline std::string levels_csv(const LevelTrack& track) {
  std::string out = "label,c,energy,degeneracy\n";
  for (const auto& l : track.levels) {
    for (const auto& p : l.points) {
      out += join_csv({std::to_string(l.label), format_number(p.c), format_number(p.energy),
                       std::to_string(p.degeneracy)});
    }
  }
  return out;
}

inline nlohmann::json levels_json(const LevelTrack& track) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& l : track.levels) {
    for (const auto& p : l.points) {
      arr.push_back({{"label", l.label}, {"c", p.c}, {"energy", p.energy}, {"degeneracy", p.degeneracy}});
    }
  }
  return arr;
}

// ---------------------------------------------------------------------------
// N = 4 reports

inline nlohmann::json to_json(const n4::GhzOutcome& o) {
  nlohmann::json j = {{"outcome", std::string(n4::outcome_name(o.outcome))},
                      {"central_bit", o.central_bit},
                      {"probability", o.probability},
                      {"match_fidelity", o.match_fidelity},
                      {"bipartition_entropies", o.bipartition_entropies},
                      {"pairwise_concurrences", o.pairwise_concurrences}};
  j["matched_state"] = o.matched ? nlohmann::json(std::string(n4::label_name(*o.matched))) : nlohmann::json(nullptr);
  return j;
}

inline nlohmann::json to_json(const n4::ProtocolReport& r) {
  nlohmann::json outcomes = nlohmann::json::array();
  for (const auto& o : r.outcomes) outcomes.push_back(to_json(o));
  const auto& k = r.coefficients;
  nlohmann::json coeffs = k.level == n4::Level::I
                              ? nlohmann::json{{"level", "I"}, {"alpha", k.alpha}, {"beta", k.beta}, {"gamma", k.gamma}}
                              : nlohmann::json{{"level", "II"}, {"alpha_p", k.alpha}, {"gamma_p", k.gamma}};
  return {{"c", r.c},
          {"field_h", r.field_h},
          {"region", {{"lo", r.region.lo}, {"hi", r.region.hi}}},
          {"coefficients", coeffs},
          {"subspace_fidelity", r.subspace_fidelity},
          {"outcomes", outcomes}};
}

inline nlohmann::json to_json(const n4::VerifyReport& r) {
  nlohmann::json items = nlohmann::json::array();
  for (const auto& i : r.items) items.push_back({{"name", i.name}, {"passed", i.passed}, {"detail", i.detail}});
  return {{"passed", r.all_passed()}, {"failures", r.failures()}, {"items", items}};
}

}  // namespace spinweb::io
