#pragma once

#include "ymflow/field.hpp"
#include "ymflow/functionals.hpp"
#include "ymflow/perturbation.hpp"

#include <vector>

namespace ymflow {

enum class Integrator { Euler, RK3 };

struct FlowSchedule {
    double dtau = 1e-2;
    double tau_max = 1.0;
    Integrator integrator = Integrator::RK3;
    bool adaptive = true;
    double dtau_min = 1e-8;
    double dtau_max = 0.1;
    double accept_tol = 1e-10;  // relative energy-increase tolerance
    int sample_every = 1;       // record a sample every n accepted steps
    int snapshot_every = 0;     // keep a field copy every n accepted steps (0 = off)
};

struct FlowSample {
    double tau;
    double action;
    double ym_k;
    double fplus_sq;
    double cs_estimate;
    double grad_norm_sq;
    double q_charge;
    double dtau;
};

struct FlowTrace {
    std::vector<FlowSample> samples;
    std::vector<LinkField> snapshots;
    std::vector<double> snapshot_tau;
    LinkField final_field;
    double final_tau = 0.0;
    long steps_accepted = 0;
    long steps_rejected = 0;
};

// One explicit integrator step U -> exp(-dtau * force) U (first order), or
// the three-stage third-order exponential scheme.
LinkField euler_step(const LinkField& U, const HolonomyPerturbation& pert, double dtau);
LinkField rk3_step(const LinkField& U, const HolonomyPerturbation& pert, double dtau);

// Run the downward gradient flow of total_action.  With adaptivity on, a
// step is accepted only if the energy does not increase beyond the relative
// tolerance; rejected steps halve dtau, and after 10 consecutive accepts
// dtau grows by 10% (capped).  Throws "blow-up suspected" at dtau_min.
FlowTrace run_flow(const LinkField& U0, const HolonomyPerturbation& pert,
                   const FlowSchedule& sched);

// Gauge-fixed (de Turck) force: force + d_U phi with phi = div_U(eps),
// eps_mu(x) = log(U_mu(x) Uref_mu(x)^-1), phi clamped to zero on the frozen
// region so the implied gauge motion stays in the boundary-fixed group.
// Throws "reference too distant" if any |eps| reaches pi/2.
LinkAlgebraField deturck_force(const LinkField& U, const HolonomyPerturbation& pert,
                               const LinkField& ref);

struct DeturckResult {
    LinkField field;           // B(tau_end)
    GaugeTransformField gauge; // u(tau_end), identity at tau = 0
};

// Fixed-step first-order integration of the gauge-fixed flow, reconstructing
// the gauge motion alongside: u_{k+1} = u_k exp(-dtau phi_k).
DeturckResult run_deturck_flow(const LinkField& U0, const HolonomyPerturbation& pert,
                               const LinkField& ref, double dtau, int nsteps);

} // namespace ymflow
