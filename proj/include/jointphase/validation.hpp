#pragma once

// Cross-checks between the closed forms, the integrator and the bath oracle,
// plus the measurement helpers they are built from.

#include "jointphase/models.hpp"
#include "jointphase/phase.hpp"

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace jointphase {

/// Least-squares polynomial coefficients, lowest order first.
std::vector<double> polyfit(std::span<const double> x, std::span<const double> y, int degree);

/// beta (principal) of the numerically propagated no-jump trajectory.
PhaseReport propagated_phase(const ModelSystem& sys, double t_final, PhaseMethod method, double dt = 0.0);

/// d beta_jump / d gamma at gamma -> 0 for the dispersive qubit at B T = 2 pi,
/// from a two-point Richardson extrapolation at gamma = h and 2h.
double jump_beta_slope(double B, double theta, double h = 1e-3);

/// Final-state error ratio err(dt) / err(dt/2) of RK4 against the exact
/// 2x2 evolution for the given conditional Hamiltonian.
double rk4_convergence_ratio(const ModelSystem& sys, double t_final, double dt);

struct OracleMeasurement {
    double amplitude_error = 0.0;  // max relative error of the no-excitation block
    double worst_time = 0.0;
    double beta_joint = 0.0;
    double beta_system = 0.0;
    double beta_gap = 0.0;  // |wrap(joint - system)| / |system|
    double transport_residual = 0.0;
    double norm_drift = 0.0;
    double excitation_drift = 0.0;
    double independence_gap = 0.0;
};

/// Step used for the oracle; RK4 needs h * W/2 well inside its stability
/// region and the centred-difference residual scales as W h^2.
double oracle_step(double bandwidth);

/// Flat bath of bandwidth W with N modes. The amplitude is compared with the
/// closed form on (0, t_window]; phases are compared at p.T.
OracleMeasurement measure_dispersive_oracle(const DispersiveQubitParams& p, double bandwidth, std::size_t modes,
                                            double t_window = 3.0);
/// Two-bath JC (n = 0); phases are compared after one Rabi cycle.
OracleMeasurement measure_jc_oracle(const JCParams& p, double bandwidth, std::size_t modes, double t_window = 3.0);

enum class ValidationLevel { Fast, Full };

struct ValidationCheck {
    std::string name;
    double measured = 0.0;
    double tolerance = 0.0;
    bool passed = false;
    double seconds = 0.0;
    std::string detail;
};

struct ValidationReport {
    std::vector<ValidationCheck> checks;
    bool all_passed() const;
};

/// Runs every check; when `progress` is given, one line is printed per
/// check as it finishes.
ValidationReport run_validation(ValidationLevel level, std::ostream* progress = nullptr);

}  // namespace jointphase
