// Copyright 2026 The bqaoa Authors
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


#include "bqaoa/device.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "bqaoa/errors.hpp"

namespace bqaoa::device {

using nlohmann::json;

std::string_view to_string(GateFlavor f) {
  return f == GateFlavor::EcrCx ? "ecr" : "direct";
}

std::string_view to_string(FlavorSource s) {
  return s == FlavorSource::Paper ? "paper" : "assumed";
}

std::string_view to_string(QubitClass c) {
  switch (c) {
    case QubitClass::QEcr:
      return "q_ecr";
    case QubitClass::QDirect:
      return "q_direct";
    case QubitClass::QBipotent:
      return "q_bipotent";
    case QubitClass::Isolated:
      return "isolated";
  }
  return "?";
}

GateFlavor parse_flavor(std::string_view s) {
  if (s == "ecr") return GateFlavor::EcrCx;
  if (s == "direct") return GateFlavor::DirectCx;
  throw ValidationError("flavor: expected \"ecr\" or \"direct\", got \"" +
                        std::string(s) + "\"");
}

namespace {

void check_probability(double p, const std::string& field) {
  if (!std::isfinite(p) || p < 0.0 || p > 1.0) {
    std::ostringstream os;
    os << field << ": probability " << p << " outside [0,1]";
    throw ValidationError(os.str());
  }
}

void check_positive(double v, const std::string& field) {
  if (!std::isfinite(v) || v <= 0.0) {
    std::ostringstream os;
    os << field << ": must be > 0, got " << v;
    throw ValidationError(os.str());
  }
}

void check_nonnegative(double v, const std::string& field) {
  if (!std::isfinite(v) || v < 0.0) {
    std::ostringstream os;
    os << field << ": must be >= 0, got " << v;
    throw ValidationError(os.str());
  }
}

}  // namespace

DeviceModel::DeviceModel(DeviceSpec spec) : spec_(std::move(spec)) {
  const int n = num_qubits();
  if (n <= 0) throw ValidationError("num_qubits: must be positive");
  for (int q = 0; q < n; ++q) {
    const auto& c = spec_.qubits[q];
    const std::string f = "qubits[" + std::to_string(q) + "].";
    check_positive(c.t1_us, f + "t1_us");
    check_positive(c.t2_us, f + "t2_us");
    check_probability(c.sx_error, f + "sx_error");
    check_probability(c.readout_error, f + "readout_error");
    check_probability(c.prob_meas0_prep1, f + "prob_meas0_prep1");
    check_probability(c.prob_meas1_prep0, f + "prob_meas1_prep0");
    check_nonnegative(c.readout_length_ns, f + "readout_length_ns");
    const double mean = 0.5 * (c.prob_meas0_prep1 + c.prob_meas1_prep0);
    if (std::abs(mean - c.readout_error) > 0.01) {
      std::ostringstream os;
      os << f << "readout_error: " << c.readout_error
         << " inconsistent with mean of prep/meas probabilities " << mean;
      throw ValidationError(os.str());
    }
  }
  const auto& d = spec_.single_qubit_durations;
  check_nonnegative(d.rz, "single_qubit_durations_ns.rz");
  check_nonnegative(d.sx, "single_qubit_durations_ns.sx");
  check_nonnegative(d.x, "single_qubit_durations_ns.x");
  check_nonnegative(d.rx, "single_qubit_durations_ns.rx");
  check_nonnegative(d.ry, "single_qubit_durations_ns.ry");
  const auto& cr = spec_.cr_scale_model;
  check_nonnegative(cr.overhead_ns, "cr_scale_model.overhead_ns");
  check_nonnegative(cr.cx_non_cr_ns, "cr_scale_model.cx_non_cr_ns");

  adjacency_.assign(n, {});
  edge_index_.assign(n, std::vector<int>(n, -1));
  for (std::size_t i = 0; i < spec_.edges.size(); ++i) {
    const auto& e = spec_.edges[i];
    const std::string f = "edges[" + std::to_string(i) + "].";
    if (e.control < 0 || e.control >= n || e.target < 0 || e.target >= n) {
      throw ValidationError(f + "control/target: qubit index out of range");
    }
    if (e.control == e.target) {
      throw ValidationError(f + "control/target: endpoints must differ");
    }
    check_probability(e.cx_error, f + "cx_error");
    if (e.cx_error >= 1.0) throw ValidationError(f + "cx_error: must be < 1");
    check_positive(e.cx_duration_ns, f + "cx_duration_ns");
    for (const auto& [name, v] :
         {std::pair{"zz", e.schedule_ns.zz},
          std::pair{"zz_swap", e.schedule_ns.zz_swap},
          std::pair{"cz", e.schedule_ns.cz}}) {
      if (v) check_positive(*v, f + "schedule_ns." + name);
    }
    if (edge_index_[e.control][e.target] != -1) {
      throw ValidationError(f + "control/target: duplicate edge on pair");
    }
    edge_index_[e.control][e.target] = static_cast<int>(i);
    edge_index_[e.target][e.control] = static_cast<int>(i);
    adjacency_[e.control].push_back(e.target);
    adjacency_[e.target].push_back(e.control);
  }
  for (auto& nb : adjacency_) std::sort(nb.begin(), nb.end());
}

const QubitCalibration& DeviceModel::qubit(int q) const {
  if (q < 0 || q >= num_qubits()) {
    throw IndexError("qubit " + std::to_string(q) + " out of range");
  }
  return spec_.qubits[q];
}

const EdgeCalibration* DeviceModel::find_edge(int a, int b) const {
  const int n = num_qubits();
  if (a < 0 || b < 0 || a >= n || b >= n) return nullptr;
  const int i = edge_index_[a][b];
  return i < 0 ? nullptr : &spec_.edges[i];
}

const std::vector<int>& DeviceModel::neighbors(int q) const {
  if (q < 0 || q >= num_qubits()) {
    throw IndexError("qubit " + std::to_string(q) + " out of range");
  }
  return adjacency_[q];
}

double DeviceModel::cx_duration(int control, int target) const {
  const EdgeCalibration* e = find_edge(control, target);
  if (e == nullptr) {
    throw UnmappedEdgeError("no device edge between qubits " +
                            std::to_string(control) + " and " +
                            std::to_string(target));
  }
  if (e->control == control) return e->cx_duration_ns;
  const double sx = durations().sx;
  return e->flavor == GateFlavor::EcrCx ? e->cx_duration_ns + sx
                                        : e->cx_duration_ns + 2.0 * sx;
}

bool DeviceModel::operator==(const DeviceModel& other) const {
  return spec_.name == other.spec_.name &&
         spec_.description == other.spec_.description &&
         spec_.qubits == other.spec_.qubits &&
         spec_.edges == other.spec_.edges &&
         spec_.single_qubit_durations == other.spec_.single_qubit_durations &&
         spec_.cr_scale_model == other.spec_.cr_scale_model;
}

namespace {

template <typename T>
T required(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) {
    throw ValidationError(where + key + ": missing");
  }
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ValidationError(where + key + ": " + e.what());
  }
}

template <typename T>
std::optional<T> optional_field(const json& j, const char* key,
                                const std::string& where) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ValidationError(where + key + ": " + e.what());
  }
}

}  // namespace

DeviceModel device_from_json(const json& j) {
  if (!j.is_object()) throw ValidationError("device: expected JSON object");
  DeviceSpec s;
  s.name = required<std::string>(j, "name", "");
  s.description = j.value("description", std::string{});
  const int n = required<int>(j, "num_qubits", "");
  if (n <= 0) throw ValidationError("num_qubits: must be positive");

  if (auto it = j.find("single_qubit_durations_ns"); it != j.end()) {
    auto& d = s.single_qubit_durations;
    d.rz = it->value("rz", d.rz);
    d.sx = it->value("sx", d.sx);
    d.x = it->value("x", d.x);
    d.rx = it->value("rx", d.sx);
    d.ry = it->value("ry", d.sx);
  }
  if (auto it = j.find("cr_scale_model"); it != j.end()) {
    auto& c = s.cr_scale_model;
    c.overhead_ns = it->value("overhead_ns", c.overhead_ns);
    c.cx_non_cr_ns = it->value("cx_non_cr_ns", c.cx_non_cr_ns);
    c.reference_angle_rad =
        it->value("reference_angle_rad", c.reference_angle_rad);
    c.reference_duration_ns =
        it->value("reference_duration_ns", c.reference_duration_ns);
  }

  const auto qs = required<json>(j, "qubits", "");
  if (!qs.is_array() || static_cast<int>(qs.size()) != n) {
    throw ValidationError("qubits: expected array of num_qubits entries");
  }
  for (std::size_t q = 0; q < qs.size(); ++q) {
    const auto& qj = qs[q];
    const std::string w = "qubits[" + std::to_string(q) + "].";
    QubitCalibration c;
    c.t1_us = required<double>(qj, "t1_us", w);
    c.t2_us = required<double>(qj, "t2_us", w);
    c.sx_error = required<double>(qj, "sx_error", w);
    c.readout_error = required<double>(qj, "readout_error", w);
    c.prob_meas0_prep1 = required<double>(qj, "prob_meas0_prep1", w);
    c.prob_meas1_prep0 = required<double>(qj, "prob_meas1_prep0", w);
    c.readout_length_ns = required<double>(qj, "readout_length_ns", w);
    c.frequency_ghz = optional_field<double>(qj, "frequency_ghz", w);
    c.anharmonicity_ghz = optional_field<double>(qj, "anharmonicity_ghz", w);
    s.qubits.push_back(c);
  }

  const auto es = required<json>(j, "edges", "");
  if (!es.is_array()) throw ValidationError("edges: expected array");
  for (std::size_t i = 0; i < es.size(); ++i) {
    const auto& ej = es[i];
    const std::string w = "edges[" + std::to_string(i) + "].";
    EdgeCalibration e;
    e.control = required<int>(ej, "control", w);
    e.target = required<int>(ej, "target", w);
    try {
      e.flavor = parse_flavor(required<std::string>(ej, "flavor", w));
    } catch (const ValidationError& err) {
      throw ValidationError(w + err.what());
    }
    e.cx_error = required<double>(ej, "cx_error", w);
    e.cx_duration_ns = required<double>(ej, "cx_duration_ns", w);
    const auto src = ej.value("flavor_source", std::string("paper"));
    if (src == "paper") {
      e.flavor_source = FlavorSource::Paper;
    } else if (src == "assumed") {
      e.flavor_source = FlavorSource::Assumed;
    } else {
      throw ValidationError(w + "flavor_source: expected paper|assumed");
    }
    if (auto it = ej.find("schedule_ns"); it != ej.end()) {
      const std::string ws = w + "schedule_ns.";
      e.schedule_ns.zz = optional_field<double>(*it, "zz", ws);
      e.schedule_ns.zz_swap = optional_field<double>(*it, "zz_swap", ws);
      e.schedule_ns.cz = optional_field<double>(*it, "cz", ws);
    }
    s.edges.push_back(e);
  }
  return DeviceModel(std::move(s));
}

DeviceModel load_device(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open device file " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  return device_from_json(j);
}

json device_to_json(const DeviceModel& dev) {
  json j;
  j["name"] = dev.name();
  if (!dev.description().empty()) j["description"] = dev.description();
  j["num_qubits"] = dev.num_qubits();
  const auto& d = dev.durations();
  j["single_qubit_durations_ns"] = {
      {"rz", d.rz}, {"sx", d.sx}, {"x", d.x}, {"rx", d.rx}, {"ry", d.ry}};
  const auto& c = dev.cr_scale_model();
  j["cr_scale_model"] = {{"overhead_ns", c.overhead_ns},
                         {"cx_non_cr_ns", c.cx_non_cr_ns},
                         {"reference_angle_rad", c.reference_angle_rad},
                         {"reference_duration_ns", c.reference_duration_ns}};
  j["qubits"] = json::array();
  for (const auto& q : dev.qubits()) {
    json qj = {{"t1_us", q.t1_us},
               {"t2_us", q.t2_us},
               {"sx_error", q.sx_error},
               {"readout_error", q.readout_error},
               {"prob_meas0_prep1", q.prob_meas0_prep1},
               {"prob_meas1_prep0", q.prob_meas1_prep0},
               {"readout_length_ns", q.readout_length_ns}};
    if (q.frequency_ghz) qj["frequency_ghz"] = *q.frequency_ghz;
    if (q.anharmonicity_ghz) qj["anharmonicity_ghz"] = *q.anharmonicity_ghz;
    j["qubits"].push_back(qj);
  }
  j["edges"] = json::array();
  for (const auto& e : dev.edges()) {
    json ej = {{"control", e.control},
               {"target", e.target},
               {"flavor", to_string(e.flavor)},
               {"cx_error", e.cx_error},
               {"cx_duration_ns", e.cx_duration_ns},
               {"flavor_source", to_string(e.flavor_source)}};
    json sj = json::object();
    if (e.schedule_ns.zz) sj["zz"] = *e.schedule_ns.zz;
    if (e.schedule_ns.zz_swap) sj["zz_swap"] = *e.schedule_ns.zz_swap;
    if (e.schedule_ns.cz) sj["cz"] = *e.schedule_ns.cz;
    if (!sj.empty()) ej["schedule_ns"] = sj;
    j["edges"].push_back(ej);
  }
  return j;
}

QubitClass qubit_class(const DeviceModel& dev, int q) {
  const auto& nb = dev.neighbors(q);
  if (nb.empty()) return QubitClass::Isolated;
  bool ecr = false;
  bool direct = false;
  for (int r : nb) {
    if (dev.find_edge(q, r)->flavor == GateFlavor::EcrCx) {
      ecr = true;
    } else {
      direct = true;
    }
  }
  if (ecr && direct) return QubitClass::QBipotent;
  return ecr ? QubitClass::QEcr : QubitClass::QDirect;
}

DeviceSummary summarize(const DeviceModel& dev) {
  if (dev.num_qubits() == 0 || dev.edges().empty()) {
    throw EmptyDeviceError("device " + dev.name() + " has no edges");
  }
  DeviceSummary s;
  for (const auto& e : dev.edges()) {
    auto& m = e.flavor == GateFlavor::EcrCx ? s.ecr : s.direct;
    ++m.count;
    m.cx_error += e.cx_error;
    m.cx_duration_ns += e.cx_duration_ns;
  }
  for (auto* m : {&s.ecr, &s.direct}) {
    if (m->count == 0) continue;
    m->cx_error /= static_cast<double>(m->count);
    m->cx_duration_ns /= static_cast<double>(m->count);
  }
  for (int q = 0; q < dev.num_qubits(); ++q) {
    auto& m = s.by_class[static_cast<std::size_t>(qubit_class(dev, q))];
    const auto& c = dev.qubit(q);
    ++m.count;
    m.t1_us += c.t1_us;
    m.t2_us += c.t2_us;
    m.sx_error += c.sx_error;
    m.readout_error += c.readout_error;
  }
  for (auto& m : s.by_class) {
    if (m.count == 0) continue;
    const double k = static_cast<double>(m.count);
    m.t1_us /= k;
    m.t2_us /= k;
    m.sx_error /= k;
    m.readout_error /= k;
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();
  if (s.ecr.count > 0 && s.direct.count > 0) {
    s.error_reduction_pct =
        100.0 * (s.ecr.cx_error - s.direct.cx_error) / s.ecr.cx_error;
    s.duration_reduction_pct = 100.0 *
                               (s.ecr.cx_duration_ns - s.direct.cx_duration_ns) /
                               s.ecr.cx_duration_ns;
  } else {
    s.error_reduction_pct = nan;
    s.duration_reduction_pct = nan;
  }
  return s;
}

json summary_to_json(const DeviceSummary& s) {
  auto flavor = [](const FlavorMeans& m) {
    return json{{"count", m.count},
                {"cx_error_pct", 100.0 * m.cx_error},
                {"cx_duration_ns", m.cx_duration_ns}};
  };
  auto pct_or_null = [](double v) { return std::isnan(v) ? json() : json(v); };
  json j;
  j["edges"] = {{"ecr", flavor(s.ecr)}, {"direct", flavor(s.direct)}};
  j["reduction_pct"] = {{"cx_error", pct_or_null(s.error_reduction_pct)},
                        {"cx_duration", pct_or_null(s.duration_reduction_pct)}};
  j["qubits"] = json::object();
  for (auto c : {QubitClass::QEcr, QubitClass::QDirect, QubitClass::QBipotent,
                 QubitClass::Isolated}) {
    const auto& m = s.of(c);
    j["qubits"][std::string(to_string(c))] = {
        {"count", m.count},
        {"t1_us", m.t1_us},
        {"t2_us", m.t2_us},
        {"sx_error_pct", 100.0 * m.sx_error},
        {"readout_error_pct", 100.0 * m.readout_error}};
  }
  return j;
}

}  // namespace bqaoa::device
