#include "jointphase/bath.hpp"

#include "jointphase/errors.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>

namespace jointphase {

BathSpec build_flat_bath(double target_gamma, double bandwidth, std::size_t mode_count) {
    if (!(target_gamma >= 0.0) || !std::isfinite(target_gamma))
        throw std::invalid_argument("bath decay rate must be finite and >= 0");
    if (mode_count < 201 || mode_count % 2 == 0)
        throw std::invalid_argument("bath needs an odd mode count >= 201");
    if (!(bandwidth > 0.0) || bandwidth < 20.0 * target_gamma)
        throw std::invalid_argument("bath bandwidth must be positive and at least 20 x the decay rate");

    BathSpec spec;
    spec.target_gamma = target_gamma;
    spec.bandwidth = bandwidth;
    spec.spacing = bandwidth / static_cast<double>(mode_count - 1);
    spec.t_max = 2.0 * kPi / spec.spacing;
    const double g = std::sqrt(target_gamma * spec.spacing / (2.0 * kPi));
    const auto half = static_cast<long>(mode_count / 2);
    spec.detunings.reserve(mode_count);
    for (long k = -half; k <= half; ++k) spec.detunings.push_back(static_cast<double>(k) * spec.spacing);
    spec.couplings.assign(mode_count, g);
    return spec;
}

BathSpec BathSpec::with_rate(double gamma) const {
    if (!(gamma >= 0.0)) throw std::invalid_argument("bath decay rate must be >= 0");
    BathSpec out = *this;
    out.target_gamma = gamma;
    out.couplings.assign(detunings.size(), std::sqrt(gamma * spacing / (2.0 * kPi)));
    return out;
}

JointHamiltonian::JointHamiltonian(OperatorMatrix system, std::vector<Mode> modes)
    : system_(std::move(system)), modes_(std::move(modes)) {
    if (!system_.is_hermitian()) throw std::invalid_argument("joint Hamiltonian needs a Hermitian system block");
    for (const auto& m : modes_)
        if (m.source >= system_.dimension()) throw std::invalid_argument("mode couples to a non-existent system state");
}

void JointHamiltonian::apply(const CVector& x, CVector& y) const {
    const auto m = static_cast<Eigen::Index>(system_.dimension());
    y.resize(x.size());
    y.head(m).noalias() = system_.entries() * x.head(m);
    for (std::size_t j = 0; j < modes_.size(); ++j) {
        const Mode& mode = modes_[j];
        const Eigen::Index b = m + static_cast<Eigen::Index>(j);
        const auto s = static_cast<Eigen::Index>(mode.source);
        y(s) += mode.coupling * x(b);
        y(b) = mode.energy * x(b) + mode.coupling * x(s);
    }
}

CMatrix JointHamiltonian::to_dense() const {
    const auto m = static_cast<Eigen::Index>(system_.dimension());
    const auto dim = static_cast<Eigen::Index>(dimension());
    CMatrix h = CMatrix::Zero(dim, dim);
    h.topLeftCorner(m, m) = system_.entries();
    for (std::size_t j = 0; j < modes_.size(); ++j) {
        const Eigen::Index b = m + static_cast<Eigen::Index>(j);
        const auto s = static_cast<Eigen::Index>(modes_[j].source);
        h(b, b) = modes_[j].energy;
        h(b, s) = modes_[j].coupling;
        h(s, b) = modes_[j].coupling;
    }
    return h;
}

namespace {

void check_dimension(std::size_t dim) {
    if (dim > kMaxJointDimension) {
        std::ostringstream os;
        os << "joint dimension " << dim << " exceeds the guard " << kMaxJointDimension;
        throw std::invalid_argument(os.str());
    }
}

}  // namespace

JointSystem joint_dispersive(const DispersiveQubitParams& p, const BathSpec& bath) {
    const ModelSystem sys = dispersive_system(p);
    const std::size_t n = bath.mode_count();
    check_dimension(n + 2);

    // Detunings are measured from the emitting transition, so |g;1_k> sits
    // at E_e + delta_k and the band is centred on resonance.
    const double upper_energy = sys.h_s(0, 0).real();
    std::vector<JointHamiltonian::Mode> modes;
    modes.reserve(n);
    std::vector<std::string> labels{"e;vac", "g;vac"};
    labels.reserve(n + 2);
    for (std::size_t k = 0; k < n; ++k) {
        modes.push_back({upper_energy + bath.detunings[k], bath.couplings[k], 0});
        labels.push_back("g;a[" + std::to_string(k) + "]");
    }

    CVector psi = CVector::Zero(static_cast<Eigen::Index>(n + 2));
    psi.head(2) = sys.psi0.amplitudes();
    std::vector<int> excitations(n + 2, 1);
    excitations[1] = 0;

    BasisPtr basis = make_basis(std::move(labels));
    return {JointHamiltonian(sys.h_s, std::move(modes)),
            basis,
            sys.psi0.basis(),
            sys.h_s,
            StateVector(basis, psi),
            std::move(excitations),
            bath.t_max};
}

JointSystem joint_jc(const JCParams& p, const BathSpec& atomic, const BathSpec& photonic) {
    if (p.n != 0) throw std::invalid_argument("the two-bath JC oracle covers n = 0 only");
    const ModelSystem sys = jc_system(p);
    const std::size_t na = atomic.mode_count();
    const std::size_t np = photonic.mode_count();
    check_dimension(na + np + 2);

    // |e,0> -> |g,0> + photon (atomic reservoir) and |g,1> -> |g,0> +
    // photon (photonic reservoir); each band is centred on its source energy.
    const double atom_energy = sys.h_s(0, 0).real();
    const double cavity_energy = sys.h_s(1, 1).real();
    std::vector<JointHamiltonian::Mode> modes;
    modes.reserve(na + np);
    std::vector<std::string> labels{"e,0;vac", "g,1;vac"};
    labels.reserve(na + np + 2);
    for (std::size_t k = 0; k < na; ++k) {
        modes.push_back({atom_energy + atomic.detunings[k], atomic.couplings[k], 0});
        labels.push_back("g,0;a[" + std::to_string(k) + "]");
    }
    for (std::size_t k = 0; k < np; ++k) {
        modes.push_back({cavity_energy + photonic.detunings[k], photonic.couplings[k], 1});
        labels.push_back("g,0;p[" + std::to_string(k) + "]");
    }

    CVector psi = CVector::Zero(static_cast<Eigen::Index>(na + np + 2));
    psi(0) = 1.0;
    BasisPtr basis = make_basis(std::move(labels));
    return {JointHamiltonian(sys.h_s, std::move(modes)),
            basis,
            sys.psi0.basis(),
            sys.h_s,
            StateVector(basis, psi),
            std::vector<int>(na + np + 2, 1),
            std::min(atomic.t_max, photonic.t_max)};
}

JointSystem make_joint_system(const BathSpec& bath, const ModelParams& model) {
    return std::visit(
        [&](const auto& p) -> JointSystem {
            using P = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<P, DispersiveQubitParams>) {
                return joint_dispersive(p, bath.with_rate(p.gamma));
            } else {
                return joint_jc(p, bath.with_rate(p.gamma), bath.with_rate(p.kappa));
            }
        },
        model);
}

JointTrajectory evolve_joint(const JointSystem& system, double t_final, double dt, PropagationOptions options) {
    check_dimension(system.hamiltonian.dimension());
    if (!(t_final < system.t_max)) {
        std::ostringstream os;
        os << "T = " << t_final << " reaches the bath recurrence time " << system.t_max;
        throw std::invalid_argument(os.str());
    }
    if (std::abs(system.initial.norm_squared() - 1.0) > 1e-10)
        throw std::invalid_argument("joint initial state must be normalised");
    JointTrajectory out{detail::rk4_trajectory(system.hamiltonian, system.initial, t_final, dt, options),
                        system.system_basis};
    return out;
}

JointTrajectory evolve_joint(const BathSpec& bath, const ModelParams& model, double t_final, double dt,
                             PropagationOptions options) {
    return evolve_joint(make_joint_system(bath, model), t_final, dt, options);
}

StateVector project_no_excitation(const JointState& js) {
    const auto m = static_cast<Eigen::Index>(js.system_basis->size());
    if (m > static_cast<Eigen::Index>(js.state.dimension()))
        throw std::invalid_argument("system block larger than the joint state");
    return StateVector(js.system_basis, js.state.amplitudes().head(m));
}

JointPhaseReport joint_phase_report(const JointTrajectory& traj, const JointHamiltonian& h_total) {
    if (traj.path.size() == 0) throw std::invalid_argument("empty joint trajectory");
    const StateVector& first = traj.path.initial();
    const StateVector& last = traj.path.final_state();

    JointPhaseReport out{};
    PhaseReport& r = out.report;
    r.method = PhaseMethod::JointState;
    r.total_phase = total_phase(first, last);

    CVector scratch(first.amplitudes().size());
    h_total.apply(first.amplitudes(), scratch);
    const double energy = first.amplitudes().dot(scratch).real();
    const double t_final = traj.path.times.back() - traj.path.times.front();
    r.dynamical_phase = -energy * t_final;
    r.beta_principal = wrap_phase(r.total_phase - r.dynamical_phase);
    const double continuous = unwrapped_total_phase(traj.path);
    const double turns = std::round((continuous - r.total_phase) / (2.0 * kPi));
    r.beta_unwrapped = r.total_phase + 2.0 * kPi * turns - r.dynamical_phase;
    r.survival_prob = project_no_excitation(traj.at(traj.path.size() - 1)).norm_squared();

    const StateVector sys0 = project_no_excitation(traj.at(0));
    const StateVector sys_t = project_no_excitation(traj.at(traj.path.size() - 1));
    out.no_excitation_phase = total_phase(sys0, sys_t);
    out.independence_gap = std::abs(wrap_phase(r.total_phase - out.no_excitation_phase));
    return out;
}

}  // namespace jointphase
