#pragma once

// Sweep configuration: an INI-style file with [model], [sweep] and [run]
// sections.
//
//   [model]
//   type = dispersive          ; dispersive | jc | dissipative-jc
//   B = 1
//   gamma = 0.1
//   theta = 1.5707963267948966
//
//   [sweep]
//   gamma = 0, 0.8, 11         ; start, stop, steps (at most two axes)
//
//   [run]
//   methods = joint-state, quantum-jump, oracle
//   dt = 0.001                 ; 0 picks min(1e-3, T/1e4)
//   bath_W = 80
//   bath_N = 1601
//   guard = 0.3
//   degrees = false            ; theta given in degrees
//   threads = 1
//   output = phases.csv
//
// T defaults to the natural cycle of the model (2 pi / B or pi / Omega_n).

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace jointphase {

enum class ModelKind { Dispersive, JC, DissipativeJC };
enum class SweepMethod { JointState, QuantumJump, Oracle };

std::string_view to_string(ModelKind k);
std::string_view to_string(SweepMethod m);
std::optional<SweepMethod> parse_method(std::string_view name);

/// Parameter names accepted by a model, in CSV column order.
const std::vector<std::string>& parameter_names(ModelKind k);

struct SweepAxis {
    std::string name;
    double start = 0.0;
    double stop = 0.0;
    std::size_t steps = 1;

    /// Evenly spaced values from start to stop inclusive.
    std::vector<double> values() const;
};

struct SweepConfig {
    ModelKind model = ModelKind::Dispersive;
    std::map<std::string, double> params;  // explicitly given values only
    std::vector<SweepAxis> axes;
    std::vector<SweepMethod> methods{SweepMethod::JointState};
    std::string output;
    double dt = 0.0;
    double bath_W = 80.0;
    std::size_t bath_N = 1601;
    double guard = 0.3;
    bool degrees = false;
    std::size_t threads = 1;
};

/// Throws ConfigError carrying the offending line and key.
SweepConfig parse_config(std::istream& in);
SweepConfig load_config(const std::string& path);

}  // namespace jointphase
