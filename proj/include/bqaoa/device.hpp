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

#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace bqaoa::device {

/// The two CX implementations of a bipotent device.
enum class GateFlavor { EcrCx, DirectCx };

/// Whether an edge's flavor label was stated explicitly or filled in.
enum class FlavorSource { Paper, Assumed };

enum class QubitClass { QEcr, QDirect, QBipotent, Isolated };

std::string_view to_string(GateFlavor f);
std::string_view to_string(FlavorSource s);
std::string_view to_string(QubitClass c);
GateFlavor parse_flavor(std::string_view s);

struct QubitCalibration {
  double t1_us = 100.0;
  double t2_us = 100.0;
  double sx_error = 0.0;
  double readout_error = 0.0;
  double prob_meas0_prep1 = 0.0;
  double prob_meas1_prep0 = 0.0;
  double readout_length_ns = 0.0;
  std::optional<double> frequency_ghz;
  std::optional<double> anharmonicity_ghz;

  bool operator==(const QubitCalibration&) const = default;
};

/// Backend-reported schedule durations for composite gates on one edge.
/// When present they take precedence over durations composed from
/// cx_duration_ns and the single-qubit durations.
struct CompositeDurations {
  std::optional<double> zz;
  std::optional<double> zz_swap;
  std::optional<double> cz;

  bool operator==(const CompositeDurations&) const = default;
};

struct EdgeCalibration {
  int control = 0;  // hardware-native direction
  int target = 1;
  GateFlavor flavor = GateFlavor::EcrCx;
  double cx_error = 0.0;
  double cx_duration_ns = 0.0;
  FlavorSource flavor_source = FlavorSource::Paper;
  CompositeDurations schedule_ns;

  bool connects(int a, int b) const {
    return (control == a && target == b) || (control == b && target == a);
  }
  bool operator==(const EdgeCalibration&) const = default;
};

struct SingleQubitDurations {
  double rz = 0.0;
  double sx = 32.0;
  double x = 32.0;
  double rx = 32.0;
  double ry = 32.0;

  bool operator==(const SingleQubitDurations&) const = default;
};

/// Duration model for pulse-scaled (cross-resonance-stretched) ZZ gates on
/// ECR edges:
///
///   duration(theta) = overhead_ns + |theta|/pi * (cx_duration - cx_non_cr_ns)
///
/// with theta wrapped into (-pi, pi]. The reference point records the one
/// measured value the defaults were fixed against.
struct CrScaleModel {
  double overhead_ns = 96.0;
  double cx_non_cr_ns = 64.0;
  double reference_angle_rad = 1.789235190989812;
  double reference_duration_ns = 241.8;

  bool operator==(const CrScaleModel&) const = default;
};

/// Plain field bundle used to build a DeviceModel.
struct DeviceSpec {
  std::string name;
  std::vector<QubitCalibration> qubits;
  std::vector<EdgeCalibration> edges;
  SingleQubitDurations single_qubit_durations;
  CrScaleModel cr_scale_model;
  std::string description;
};

/// Immutable, validated description of a bipotent device.
class DeviceModel {
 public:
  /// Validates every invariant; throws ValidationError naming the field.
  explicit DeviceModel(DeviceSpec spec);

  const std::string& name() const { return spec_.name; }
  const std::string& description() const { return spec_.description; }
  int num_qubits() const { return static_cast<int>(spec_.qubits.size()); }
  const std::vector<QubitCalibration>& qubits() const { return spec_.qubits; }
  const QubitCalibration& qubit(int q) const;
  const std::vector<EdgeCalibration>& edges() const { return spec_.edges; }
  const SingleQubitDurations& durations() const {
    return spec_.single_qubit_durations;
  }
  const CrScaleModel& cr_scale_model() const { return spec_.cr_scale_model; }
  const DeviceSpec& spec() const { return spec_; }

  /// Edge on the unordered pair {a, b}, or nullptr.
  const EdgeCalibration* find_edge(int a, int b) const;
  const std::vector<int>& neighbors(int q) const;

  /// Schedule duration of CX(control, target). The native direction costs
  /// cx_duration_ns. Reversing an ECR-CX re-dresses the echoed CR sequence
  /// with one extra single-qubit layer; reversing a direct-CX needs the
  /// Hadamard conjugation on both sides (two layers).
  double cx_duration(int control, int target) const;

  bool operator==(const DeviceModel& other) const;

 private:
  DeviceSpec spec_;
  std::vector<std::vector<int>> adjacency_;
  std::vector<std::vector<int>> edge_index_;  // dense num_qubits^2, -1 = none
};

DeviceModel load_device(const std::filesystem::path& path);
DeviceModel device_from_json(const nlohmann::json& j);
nlohmann::json device_to_json(const DeviceModel& dev);

QubitClass qubit_class(const DeviceModel& dev, int q);

struct FlavorMeans {
  std::size_t count = 0;
  double cx_error = 0.0;
  double cx_duration_ns = 0.0;
};

struct ClassMeans {
  std::size_t count = 0;
  double t1_us = 0.0;
  double t2_us = 0.0;
  double sx_error = 0.0;
  double readout_error = 0.0;
};

struct DeviceSummary {
  FlavorMeans ecr;
  FlavorMeans direct;
  /// Indexed by QubitClass.
  std::array<ClassMeans, 4> by_class;
  /// Relative reduction of direct vs ECR means, in percent. NaN when either
  /// flavor is absent.
  double error_reduction_pct = 0.0;
  double duration_reduction_pct = 0.0;

  const ClassMeans& of(QubitClass c) const {
    return by_class[static_cast<std::size_t>(c)];
  }
};

DeviceSummary summarize(const DeviceModel& dev);
nlohmann::json summary_to_json(const DeviceSummary& s);

}  // namespace bqaoa::device
