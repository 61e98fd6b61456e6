// Copyright 2026 The spinpulse developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "spinpulse/pulse.hpp"
#include "spinpulse/synthesis.hpp"
#include "spinpulse/verification.hpp"

namespace spinpulse {

/// Schema violation with the offending field path in the message.
class SchemaError : public std::runtime_error {
 public:
  explicit SchemaError(const std::string& path, const std::string& what)
      : std::runtime_error(path + ": " + what) {}
};

/// On-disk pulse schedule: the core sequence plus optional metadata carrying
/// the target phase, the per-block variant choices, and correction pulses.
struct Schedule {
  PulseSequence core;
  std::vector<PulseSpec> corrections;
  std::optional<double> phi;
  std::vector<std::string> variant_profile;

  PulseSequence full() const { return core.appended(corrections); }
};

inline nlohmann::json pulse_to_json(const PulseSpec& p) {
  return nlohmann::json{{"pair", {p.i, p.j}}, {"t", p.t}};
}

inline nlohmann::json schedule_to_json(const Schedule& s) {
  nlohmann::json pulses = nlohmann::json::array();
  for (const PulseSpec& p : s.core.pulses()) pulses.push_back(pulse_to_json(p));
  nlohmann::json corrections = nlohmann::json::array();
  for (const PulseSpec& p : s.corrections) corrections.push_back(pulse_to_json(p));
  nlohmann::json meta{{"corrections", corrections},
                      {"variant_profile", s.variant_profile}};
  if (s.phi.has_value()) meta["phi"] = *s.phi;
  return nlohmann::json{{"n_sites", s.core.n_sites()}, {"pulses", pulses}, {"meta", meta}};
}

inline nlohmann::json schedule_to_json(const SynthesisResult& r) {
  Schedule s{r.core, r.corrections, r.phi, r.profile.to_strings()};
  return schedule_to_json(s);
}

namespace detail {

inline PulseSpec parse_pulse(const nlohmann::json& j, const std::string& path) {
  if (!j.is_object()) throw SchemaError(path, "expected an object");
  if (!j.contains("pair")) throw SchemaError(path + ".pair", "missing field");
  const auto& pair = j.at("pair");
  if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number_integer() ||
      !pair[1].is_number_integer()) {
    throw SchemaError(path + ".pair", "expected an array of two integers");
  }
  if (!j.contains("t") || !j.at("t").is_number()) {
    throw SchemaError(path + ".t", "expected a number");
  }
  return PulseSpec{pair[0].get<int>(), pair[1].get<int>(), j.at("t").get<double>()};
}

}  // namespace detail

inline Schedule parse_schedule(const nlohmann::json& j) {
  if (!j.is_object()) throw SchemaError("$", "expected an object");
  if (!j.contains("n_sites") || !j.at("n_sites").is_number_integer()) {
    throw SchemaError("n_sites", "expected an integer");
  }
  const int n_sites = j.at("n_sites").get<int>();
  if (!j.contains("pulses") || !j.at("pulses").is_array()) {
    throw SchemaError("pulses", "expected an array");
  }
  std::vector<PulseSpec> pulses;
  for (std::size_t k = 0; k < j.at("pulses").size(); ++k) {
    pulses.push_back(detail::parse_pulse(j.at("pulses")[k], "pulses[" + std::to_string(k) + "]"));
  }

  std::vector<PulseSpec> corrections;
  std::optional<double> phi;
  std::vector<std::string> profile;
  if (j.contains("meta")) {
    const auto& meta = j.at("meta");
    if (!meta.is_object()) throw SchemaError("meta", "expected an object");
    if (meta.contains("phi")) {
      if (!meta.at("phi").is_number()) throw SchemaError("meta.phi", "expected a number");
      phi = meta.at("phi").get<double>();
    }
    if (meta.contains("corrections")) {
      if (!meta.at("corrections").is_array()) throw SchemaError("meta.corrections", "expected an array");
      for (std::size_t k = 0; k < meta.at("corrections").size(); ++k) {
        corrections.push_back(detail::parse_pulse(meta.at("corrections")[k],
                                                  "meta.corrections[" + std::to_string(k) + "]"));
      }
    }
    if (meta.contains("variant_profile")) {
      if (!meta.at("variant_profile").is_array()) {
        throw SchemaError("meta.variant_profile", "expected an array of strings");
      }
      for (std::size_t k = 0; k < meta.at("variant_profile").size(); ++k) {
        const auto& v = meta.at("variant_profile")[k];
        if (!v.is_string()) {
          throw SchemaError("meta.variant_profile[" + std::to_string(k) + "]", "expected a string");
        }
        profile.push_back(v.get<std::string>());
      }
    }
  }

  try {
    return Schedule{PulseSequence(n_sites, std::move(pulses)), std::move(corrections), phi,
                    std::move(profile)};
  } catch (const std::invalid_argument& e) {
    throw SchemaError("pulses", e.what());
  }
}

inline nlohmann::json gate_report_to_json(const GateReport& r) {
  nlohmann::json gate = nlohmann::json::array();
  for (int row = 0; row < 4; ++row) {
    nlohmann::json cells = nlohmann::json::array();
    for (int col = 0; col < 4; ++col) {
      cells.push_back({r.gate(row, col).real(), r.gate(row, col).imag()});
    }
    gate.push_back(cells);
  }
  nlohmann::json out{{"g", r.g},
                     {"m", r.m},
                     {"gate", gate},
                     {"leakage_norm", r.leakage_norm},
                     {"diagonal", r.diagonal}};
  if (r.diagonal) {
    out["diagonal_phases"] = r.diagonal_phases;
    out["entangling_phase"] = r.entangling_phase;
  }
  if (r.makhlin.has_value()) {
    out["makhlin"] = {{"g1", {r.makhlin->first.real(), r.makhlin->first.imag()}},
                      {"g2", r.makhlin->second}};
  }
  return out;
}

}  // namespace spinpulse
