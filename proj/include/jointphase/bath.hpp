#pragma once

// Brute-force unitary evolution of a system coupled to N discretised
// reservoir modes, restricted to the single-excitation sector. This is the
// ground truth that the conditional-Hamiltonian (no-jump) reduction is
// checked against.

#include "jointphase/models.hpp"
#include "jointphase/phase.hpp"
#include "jointphase/state.hpp"

#include <cstddef>
#include <variant>
#include <vector>

namespace jointphase {

/// Uniformly spaced reservoir modes with flat couplings.
struct BathSpec {
    std::vector<double> detunings;  // delta_k = omega_k - omega_a
    std::vector<double> couplings;  // g_k >= 0
    double target_gamma = 0.0;
    double bandwidth = 0.0;
    double spacing = 0.0;  // delta omega
    double t_max = 0.0;    // recurrence time 2 pi / delta omega

    std::size_t mode_count() const noexcept { return detunings.size(); }
    /// Same grid, couplings rescaled to a different decay rate.
    BathSpec with_rate(double gamma) const;
};

/// Detunings span [-W/2, W/2] (N odd, so zero is a grid point) and
/// g_k = sqrt(gamma dw / 2 pi), which gives 2 pi g_k^2 / dw = gamma.
BathSpec build_flat_bath(double target_gamma, double bandwidth, std::size_t mode_count);

/// Dense system block plus reservoir modes, each coupled to a single
/// system state. The matrix is an arrow: the only off-diagonal entries
/// outside the system block are the system-mode couplings, so it is
/// applied in O(dimension) without dense storage.
class JointHamiltonian {
public:
    struct Mode {
        double energy;       // source-state energy + delta_k
        double coupling;     // g_k
        std::size_t source;  // index of the emitting system state
    };

    JointHamiltonian(OperatorMatrix system, std::vector<Mode> modes);

    std::size_t dimension() const noexcept { return system_.dimension() + modes_.size(); }
    std::size_t system_dimension() const noexcept { return system_.dimension(); }
    const OperatorMatrix& system() const noexcept { return system_; }
    const std::vector<Mode>& modes() const noexcept { return modes_; }

    void apply(const CVector& x, CVector& y) const;
    /// Dense copy; intended for small instances and tests.
    CMatrix to_dense() const;

private:
    OperatorMatrix system_;
    std::vector<Mode> modes_;
};

/// Everything needed to run the oracle for one model.
struct JointSystem {
    JointHamiltonian hamiltonian;
    BasisPtr basis;         // joint basis; the first system_dim labels are the system block
    BasisPtr system_basis;  // labels of the no-excitation block
    OperatorMatrix h_s;     // bare system Hamiltonian on the system block
    StateVector initial;    // system initial state times the reservoir vacuum
    std::vector<int> excitations;  // excitation number of each joint basis state
    double t_max;

    std::size_t system_dim() const noexcept { return system_basis->size(); }
};

using ModelParams = std::variant<DispersiveQubitParams, JCParams>;

/// Qubit basis {|e;vac>, |g;vac>, |g;1_k>}, dimension N + 2.
JointSystem joint_dispersive(const DispersiveQubitParams& p, const BathSpec& bath);
/// Four-block JC basis {|e,0;vac>, |g,1;vac>, |g,0;1_k^a>, |g,0;1_k^p>},
/// dimension 2N + 2. Requires n = 0.
JointSystem joint_jc(const JCParams& p, const BathSpec& atomic, const BathSpec& photonic);
/// Dispatches on the model; the photonic bath for JC reuses the grid of
/// `bath` at rate kappa.
JointSystem make_joint_system(const BathSpec& bath, const ModelParams& model);

struct JointState {
    StateVector state;
    BasisPtr system_basis;
};

struct JointTrajectory {
    Trajectory path;
    BasisPtr system_basis;

    JointState at(std::size_t k) const { return {path.states.at(k), system_basis}; }
};

inline constexpr std::size_t kMaxJointDimension = 100000;

/// Unitary RK4 propagation of the full system-reservoir Hamiltonian.
/// Throws when T reaches the recurrence time or the dimension exceeds
/// kMaxJointDimension.
JointTrajectory evolve_joint(const JointSystem& system, double t_final, double dt, PropagationOptions options = {});
JointTrajectory evolve_joint(const BathSpec& bath, const ModelParams& model, double t_final, double dt,
                             PropagationOptions options = {});

/// The no-excitation system block |psi_0^s(t)>, unnormalised.
StateVector project_no_excitation(const JointState& js);

struct JointPhaseReport {
    PhaseReport report;
    double no_excitation_phase;  // arg of the system-block overlap alone
    double independence_gap;     // |phi - no_excitation_phase| mod 2 pi
};

/// Phases of the genuinely unitary joint motion. phi_d uses the conserved
/// total energy, -<psi(0)|H_sr|psi(0)> T.
JointPhaseReport joint_phase_report(const JointTrajectory& traj, const JointHamiltonian& h_total);

}  // namespace jointphase
