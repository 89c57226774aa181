#pragma once

// Closed-form no-jump states, exact phases, dressed-state decompositions and
// perturbative expansions for the three physical models:
//
//   dispersive qubit   H_s = (B/2)(|e><e| - |g><g|),    o = |g><e|
//   Jaynes-Cummings    H_s = delta a^dag a + g(a^dag s- + a s+),  o = s-
//   dissipative JC     as above plus cavity loss, o_p = a
//
// All Hamiltonians are in the frame rotating at the bare atomic frequency.

#include "jointphase/state.hpp"

#include <optional>

namespace jointphase {

struct DispersiveQubitParams {
    double B = 1.0;      // level shift
    double gamma = 0.0;  // atomic decay rate
    double theta = 0.0;  // initial polar angle in [0, pi]
    double T = 2.0 * kPi;

    void validate() const;
    /// |B T - 2 pi| < 1e-12.
    bool cyclic() const;
    /// T chosen so that B T = 2 pi.
    static DispersiveQubitParams cyclic_for(double B, double gamma, double theta);
};

struct JCParams {
    double g = 1.0;      // atom-field coupling
    double delta = 0.0;  // field detuning from the atom
    double gamma = 0.0;  // atomic decay
    double kappa = 0.0;  // cavity decay
    int n = 0;           // initial photon number

    void validate() const;
    /// Omega_n = sqrt(g^2 (n+1) + delta^2/4).
    double rabi_frequency() const;
    /// pi / Omega_n, one full Rabi cycle.
    double rabi_period() const;
    /// theta_n with cos(theta_n) = delta / (2 Omega_n).
    double mixing_angle() const;
};

/// Bare Hamiltonian, conditional Hamiltonian and initial state of a model
/// in its minimal basis.
struct ModelSystem {
    OperatorMatrix h_s;
    OperatorMatrix h_c;
    StateVector psi0;
    /// Natural cycle time (2 pi / B or pi / Omega_n).
    double period;
};

ModelSystem dispersive_system(const DispersiveQubitParams& p);
/// Doublet {|e,n>, |g,n+1>}. The decay terms come from the genuine
/// lowering operators on a truncated Fock space, restricted to the doublet.
ModelSystem jc_system(const JCParams& p);

struct Angle {
    double unwrapped;
    double principal;
};

/// A perturbative estimate together with its validity flag.
struct Approximation {
    double value;
    bool outside_validity;
};

StateVector dispersive_state(const DispersiveQubitParams& p, double t);
/// -pi (1 - cos theta) at B T = 2 pi.
Angle dispersive_beta_cyclic(const DispersiveQubitParams& p);
/// -pi (1 - cos theta) - gamma (pi sin theta)^2 / (2 B).
double dispersive_beta_jump_first_order(const DispersiveQubitParams& p);

/// lambda_n = sqrt(g^2 (n+1) + [delta/2 + i (gamma - kappa)/4]^2), principal branch.
Complex jc_lambda(const JCParams& p);

/// Vacuum-field no-jump state from |e,0> (requires n = 0, kappa = 0).
StateVector jc_state(const JCParams& p, double t);
/// phi - phi_d for jc_state; phi_d = 0 because <e,0|H_s|e,0> = 0.
double jc_beta_exact(const JCParams& p, double t);

/// Same evaluation with the opposite square-root branch; used to check
/// that every lambda formula is branch invariant.
StateVector jc_state_with_branch(const JCParams& p, double t, Complex lambda);
StateVector dissipative_jc_state_with_branch(const JCParams& p, double t, Complex lambda);

struct JCExpansion {
    Complex lambda;  // second-order lambda
    double beta;     // second-order beta at T = pi / Omega
    double beta0;    // pi [1 - delta / (2 Omega)]
    bool outside_validity;
};

/// Second-order expansions in gamma/Omega at T = pi/Omega (n = 0, kappa = 0).
JCExpansion jc_lambda_expansion(const JCParams& p, double guard = 0.3);

struct DressedDecomposition {
    StateVector plus_state;
    StateVector minus_state;
    double gamma_plus;
    double gamma_minus;
    double theta;
};

DressedDecomposition dressed_decomposition(const JCParams& p);

/// Independent-branch approximation of the no-jump state: each dressed
/// state decays at its own rate. Expressed in the jc_state basis.
StateVector dressed_approximate_state(const JCParams& p, double t);

struct DissipativeStateOptions {
    /// Multiply by e^{+i n delta t}, removing the common phase factor that
    /// carries the bare photon-number energy.
    bool drop_common_phase = false;
};

/// No-jump state from |e,n> in {|e,n>, |g,n+1>}.
StateVector dissipative_jc_state(const JCParams& p, double t, DissipativeStateOptions options = {});
/// phi - phi_d with phi_d = -n delta t.
double dissipative_jc_beta_exact(const JCParams& p, double t);

struct DissipativeExpansion {
    double beta;
    double beta0;  // pi [1 - delta / (2 Omega_n)]
    bool outside_validity;
};

/// Second-order expansion in (gamma - kappa)/Omega_n at T = pi/Omega_n.
DissipativeExpansion dissipative_jc_beta_expansion(const JCParams& p, double guard = 0.3);

/// Second-order coefficient c2 in beta = beta0 + c2 (gamma - kappa)^2:
/// -3 pi delta g^2 (n+1) / (64 Omega_n^5).
double jc_beta_second_order_coefficient(const JCParams& p);

}  // namespace jointphase
