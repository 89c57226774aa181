#pragma once

// Total, dynamical and geometric phases of a trajectory, under the
// joint-state definition (dynamical phase from the conserved total energy)
// and the quantum-jump definition (dynamical phase integrated along the
// normalised no-jump branch).

#include "jointphase/errors.hpp"
#include "jointphase/state.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace jointphase {

inline constexpr double kOverlapFloor = 1e-10;

enum class PhaseMethod { JointState, QuantumJump };

std::string_view to_string(PhaseMethod m);

struct PhaseReport {
    double total_phase = 0.0;        // principal value, (-pi, pi]
    double dynamical_phase = 0.0;    // unbounded
    double beta_principal = 0.0;     // (phi - phi_d) mapped to (-pi, pi]
    double beta_unwrapped = 0.0;     // trajectory-continuous value
    double survival_prob = 1.0;      // final norm^2
    PhaseMethod method = PhaseMethod::JointState;
};

/// Maps an angle to (-pi, pi].
double wrap_phase(double x);

/// arg<initial|final>. Throws OrthogonalStates when |overlap| <= floor.
double total_phase(const StateVector& initial, const StateVector& final_state, double overlap_floor = kOverlapFloor);

/// -<psi0|H_s|psi0> T. `h_s` must be Hermitian and psi0 normalised.
double dynamical_phase_joint(const StateVector& psi0, const OperatorMatrix& h_s, double t_final);

/// -int_0^T <psi|H_s|psi>/<psi|psi> dt by composite Simpson on the stored grid.
double dynamical_phase_jump(const Trajectory& traj, const OperatorMatrix& h_s);

/// arg<psi(0)|psi(t_k)> followed continuously along the stored grid. Points
/// whose overlap is below the floor are skipped.
double unwrapped_total_phase(const Trajectory& traj, double overlap_floor = kOverlapFloor);

PhaseReport geometric_phase(const Trajectory& traj, const OperatorMatrix& h_s, PhaseMethod method);

/// Composite Simpson on a uniform grid. An odd number of intervals closes
/// with the 3/8 rule; a single interval falls back to the trapezoid.
double simpson(std::span<const double> values, double h);

namespace detail {

template <LinearOperator Op>
Complex expectation_of(const Op& h, const CVector& psi, CVector& scratch) {
    h.apply(psi, scratch);
    return psi.dot(scratch);
}

}  // namespace detail

/// max_k |<Phi(t_k)| dPhi/dt(t_k)>| where Phi = e^{-i phi_d(t)} psi and
/// phi_d(t) = -int_0^t <psi|H|psi>. The derivative is a centred difference
/// on the stored grid, so only interior points contribute. Passing
/// `remove_dynamical_phase = false` skips the gauge factor.
template <LinearOperator Op>
double parallel_transport_residual(const Trajectory& traj, const Op& h, bool remove_dynamical_phase = true) {
    const std::size_t n = traj.size();
    if (n < 3) throw std::invalid_argument("parallel transport residual needs at least three points");
    if (h.dimension() != traj.initial().dimension())
        throw std::invalid_argument("Hamiltonian/trajectory dimension mismatch");

    const double step = traj.spacing();
    CVector scratch(static_cast<Eigen::Index>(h.dimension()));
    std::vector<double> energy(n);
    for (std::size_t k = 0; k < n; ++k)
        energy[k] = detail::expectation_of(h, traj.states[k].amplitudes(), scratch).real();

    // Cumulative trapezoid; for unitary motion <H> is constant and this is exact.
    std::vector<double> phi_d(n, 0.0);
    for (std::size_t k = 1; k < n; ++k)
        phi_d[k] = phi_d[k - 1] - 0.5 * step * (energy[k - 1] + energy[k]);

    auto gauged = [&](std::size_t k) -> CVector {
        if (!remove_dynamical_phase) return traj.states[k].amplitudes();
        return std::exp(-kI * phi_d[k]) * traj.states[k].amplitudes();
    };

    double worst = 0.0;
    CVector prev = gauged(0);
    CVector here = gauged(1);
    for (std::size_t k = 1; k + 1 < n; ++k) {
        CVector next = gauged(k + 1);
        const CVector derivative = (next - prev) / (2.0 * step);
        worst = std::max(worst, std::abs(here.dot(derivative)));
        prev = std::move(here);
        here = std::move(next);
    }
    return worst;
}

}  // namespace jointphase
