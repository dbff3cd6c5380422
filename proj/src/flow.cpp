#include "ymflow/flow.hpp"

#include <cmath>
#include <stdexcept>

namespace ymflow {

namespace {

void exp_update(LinkField& U, const LinkAlgebraField& z) {
    const LatticeGeometry& geo = *U.geo;
    for (int l = 0; l < geo.n_links(); ++l) {
        if (geo.link_frozen(l)) continue;
        U.u[static_cast<size_t>(l)] =
            exp_alg(z.v[static_cast<size_t>(l)]) * U.u[static_cast<size_t>(l)];
    }
}

LinkAlgebraField scaled(const LinkAlgebraField& a, double c) {
    LinkAlgebraField out = a;
    for (auto& v : out.v) v *= c;
    return out;
}

} // namespace

LinkField euler_step(const LinkField& U, const HolonomyPerturbation& pert, double dtau) {
    LinkAlgebraField g = force(U, pert);
    LinkField out = U;
    exp_update(out, scaled(g, -dtau));
    return out;
}

LinkField rk3_step(const LinkField& U, const HolonomyPerturbation& pert, double dtau) {
    // three-stage third-order exponential integrator:
    // W1 = exp(1/4 Z0) W0
    // W2 = exp(8/9 Z1 - 17/36 Z0) W1
    // W3 = exp(3/4 Z2 - 8/9 Z1 + 17/36 Z0) W2,  Zi = -dtau * force(Wi)
    LinkAlgebraField z0 = scaled(force(U, pert), -dtau);
    LinkField W = U;
    exp_update(W, scaled(z0, 0.25));

    LinkAlgebraField z1 = scaled(force(W, pert), -dtau);
    LinkAlgebraField c1(*U.geo);
    for (size_t i = 0; i < c1.v.size(); ++i)
        c1.v[i] = (8.0 / 9.0) * z1.v[i] - (17.0 / 36.0) * z0.v[i];
    exp_update(W, c1);

    LinkAlgebraField z2 = scaled(force(W, pert), -dtau);
    LinkAlgebraField c2(*U.geo);
    for (size_t i = 0; i < c2.v.size(); ++i)
        c2.v[i] = 0.75 * z2.v[i] - (8.0 / 9.0) * z1.v[i] + (17.0 / 36.0) * z0.v[i];
    exp_update(W, c2);
    return W;
}

FlowTrace run_flow(const LinkField& U0, const HolonomyPerturbation& pert,
                   const FlowSchedule& sched) {
    FlowTrace trace;
    LinkField U = U0;
    double tau = 0.0;
    double dtau = sched.dtau;
    double energy = total_action(U, pert);
    int consecutive_accepts = 0;

    auto record = [&](double dt_used) {
        PerturbedEnergies e = perturbed_energies(U, pert);
        LinkAlgebraField g = force(U, pert);
        double gn = inner_int(g, g);
        trace.samples.push_back(FlowSample{tau, e.action, e.ym_k, e.fplus_sq, e.cs_estimate,
                                           gn, e.q_charge, dt_used});
    };
    record(dtau);

    long accepted_since_sample = 0;
    long accepted_since_snapshot = 0;
    if (sched.snapshot_every > 0) {
        trace.snapshots.push_back(U);
        trace.snapshot_tau.push_back(tau);
    }

    while (tau < sched.tau_max - 1e-14) {
        double dt = std::min(dtau, sched.tau_max - tau);
        LinkField Unew = (sched.integrator == Integrator::Euler) ? euler_step(U, pert, dt)
                                                                 : rk3_step(U, pert, dt);
        double enew = total_action(Unew, pert);
        double tol = sched.accept_tol * std::max(1.0, std::abs(energy));
        if (sched.adaptive && enew > energy + tol) {
            ++trace.steps_rejected;
            consecutive_accepts = 0;
            dtau *= 0.5;
            if (dtau < sched.dtau_min)
                throw std::runtime_error("blow-up suspected: step size underflow");
            continue;
        }
        U = std::move(Unew);
        energy = enew;
        tau += dt;
        ++trace.steps_accepted;
        ++consecutive_accepts;
        if (sched.adaptive && consecutive_accepts >= 10) {
            consecutive_accepts = 0;
            dtau = std::min(dtau * 1.1, sched.dtau_max);
        }
        if (++accepted_since_sample >= sched.sample_every) {
            accepted_since_sample = 0;
            record(dt);
        }
        if (sched.snapshot_every > 0 && ++accepted_since_snapshot >= sched.snapshot_every) {
            accepted_since_snapshot = 0;
            trace.snapshots.push_back(U);
            trace.snapshot_tau.push_back(tau);
        }
    }
    if (accepted_since_sample != 0) record(dtau);
    trace.final_field = U;
    trace.final_tau = tau;
    return trace;
}

LinkAlgebraField deturck_force(const LinkField& U, const HolonomyPerturbation& pert,
                               const LinkField& ref) {
    const LatticeGeometry& geo = *U.geo;
    LinkAlgebraField eps(geo);
    for (int l = 0; l < geo.n_links(); ++l) {
        if (geo.link_frozen(l)) continue;
        Alg e = log_group(renormalize(U.u[static_cast<size_t>(l)] *
                                      dagger(ref.u[static_cast<size_t>(l)])));
        if (norm_int(e) >= M_PI / 2.0)
            throw std::runtime_error("reference too distant for gauge-fixed flow");
        eps.v[static_cast<size_t>(l)] = e;
    }
    std::vector<Alg> phi = dcov0_adjoint(U, eps, true);
    for (int s = 0; s < geo.n_sites(); ++s)
        if (geo.site_frozen(s)) phi[static_cast<size_t>(s)] = Alg{};
    LinkAlgebraField extra = dcov0(U, phi, true);
    LinkAlgebraField g = force(U, pert);
    for (size_t i = 0; i < g.v.size(); ++i) g.v[i] += extra.v[i];
    for (int l = 0; l < geo.n_links(); ++l)
        if (geo.link_frozen(l)) g.v[static_cast<size_t>(l)] = Alg{};
    return g;
}

DeturckResult run_deturck_flow(const LinkField& U0, const HolonomyPerturbation& pert,
                               const LinkField& ref, double dtau, int nsteps) {
    const LatticeGeometry& geo = *U0.geo;
    DeturckResult out{U0, GaugeTransformField(geo)};
    for (int k = 0; k < nsteps; ++k) {
        // gauge-fixing 0-form phi_k from the current field
        LinkAlgebraField eps(geo);
        for (int l = 0; l < geo.n_links(); ++l) {
            if (geo.link_frozen(l)) continue;
            Alg e = log_group(renormalize(out.field.u[static_cast<size_t>(l)] *
                                          dagger(ref.u[static_cast<size_t>(l)])));
            if (norm_int(e) >= M_PI / 2.0)
                throw std::runtime_error("reference too distant for gauge-fixed flow");
            eps.v[static_cast<size_t>(l)] = e;
        }
        std::vector<Alg> phi = dcov0_adjoint(out.field, eps, true);
        for (int s = 0; s < geo.n_sites(); ++s)
            if (geo.site_frozen(s)) phi[static_cast<size_t>(s)] = Alg{};

        LinkAlgebraField extra = dcov0(out.field, phi, true);
        LinkAlgebraField g = force(out.field, pert);
        for (size_t i = 0; i < g.v.size(); ++i) g.v[i] += extra.v[i];
        for (int l = 0; l < geo.n_links(); ++l)
            if (geo.link_frozen(l)) g.v[static_cast<size_t>(l)] = Alg{};

        for (int l = 0; l < geo.n_links(); ++l) {
            if (geo.link_frozen(l)) continue;
            out.field.u[static_cast<size_t>(l)] =
                exp_alg(-dtau * g.v[static_cast<size_t>(l)]) * out.field.u[static_cast<size_t>(l)];
        }
        for (int s = 0; s < geo.n_sites(); ++s)
            out.gauge.g[static_cast<size_t>(s)] =
                out.gauge.g[static_cast<size_t>(s)] * exp_alg(-dtau * phi[static_cast<size_t>(s)]);
    }
    return out;
}

} // namespace ymflow
