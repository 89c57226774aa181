#pragma once

// Ramsey-type readout of the geometric phase. Each protocol is evaluated
// twice: from the closed visibility formula, and by simulating the protocol
// on the exact no-jump state with every reservoir sector tracked as an
// orthogonal population.

#include "jointphase/models.hpp"

#include <string_view>

namespace jointphase {

enum class RamseyProtocol { QubitPg, MultiChannelPg, FockPf };

std::string_view to_string(RamseyProtocol p);

struct RamseyOutcome {
    RamseyProtocol protocol = RamseyProtocol::QubitPg;
    double p_detect = 0.0;   // simulated detection probability
    double p_formula = 0.0;  // closed visibility formula
    double u = 1.0;
    double v = 0.0;
    double xi = 0.0;
    double p_n = 0.0;  // Fock protocol only
    double q_n = 0.0;
    double s_n = 0.0;
    double beta_reference = 0.0;      // from the exact no-jump state
    double cos_beta_recovered = 1.0;  // inverted from p_detect
    double beta_recovered = 0.0;      // acos of the above, in [0, pi]
    bool inversion_clamped = false;   // |cos| exceeded 1 by rounding and was clamped
    double sector_population_sum = 1.0;
    bool outside_validity = false;
};

/// Default guard on gamma/Omega and (n+1) kappa/Omega_n.
inline constexpr double kRamseyGuard = 0.3;

/// (|e>+|g>)|0>/sqrt2, one Rabi cycle, rotation on {e, g}, detect g.
/// Requires n = 0 and kappa = 0.
RamseyOutcome ramsey_pg(const JCParams& p, double guard = kRamseyGuard);

/// Same protocol with the excited state also decaying to a state outside
/// {e, g}; gamma_g is the part of gamma that lands in |g>.
RamseyOutcome ramsey_pg_multichannel(const JCParams& p, double gamma_g, double guard = kRamseyGuard);

/// (|e>+|f>)|n>/sqrt2 with an auxiliary level |f> decoupled from the field;
/// atomic decay splits evenly between |g> and |f>. Detect f.
RamseyOutcome ramsey_pf_fock(const JCParams& p, double guard = kRamseyGuard);

/// First-order dynamical phase that the quantum-jump definition attributes
/// to a Rabi cycle: -pi^2 g^2 (n+1) delta (gamma - kappa) / (8 Omega_n^4).
Approximation previous_method_dynamical_contamination(const JCParams& p, double guard = kRamseyGuard);

}  // namespace jointphase
