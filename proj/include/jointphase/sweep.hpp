#pragma once

#include "jointphase/config.hpp"
#include "jointphase/phase.hpp"

#include <cmath>
#include <iosfwd>
#include <string>
#include <vector>

namespace jointphase {

struct SweepRow {
    std::vector<double> inputs;  // parameter_names(model) order
    SweepMethod method = SweepMethod::JointState;
    bool ok = false;  // report is meaningful only when true
    PhaseReport report;
    double p_detect = NAN;  // Ramsey readout when the model has one
    std::string warnings;   // ';'-separated flags
    std::string error;
};

struct SweepTable {
    std::vector<std::string> input_names;
    std::vector<SweepRow> rows;

    /// Header plus one line per row; numbers use 17 significant digits,
    /// empty cells for values that do not apply.
    void write_csv(std::ostream& out) const;
};

/// Always 17 significant digits, locale independent; NaN prints empty.
std::string format_number(double x);

/// Rows are ordered by grid point (first axis outermost), then by method.
/// The result does not depend on cfg.threads.
SweepTable run_sweep(const SweepConfig& cfg);

}  // namespace jointphase
