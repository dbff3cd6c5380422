#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <iostream>

#include "ymflow/diagnostics.hpp"
#include "ymflow/flow.hpp"

using namespace ymflow;

namespace {

LatticeGeometry geo_tw() {
    return LatticeGeometry({6, 4, 4, 4}, BoundaryMode::Frozen, BoundaryMode::Frozen, 1,
                           {1, 0, 0});
}

HolonomyPerturbation make_pert(const LatticeGeometry& geo, double beta) {
    PerturbationSpec ps;
    ps.beta = beta;
    ps.w0 = 0.5;
    ps.mu0 = 1;
    ps.nu0 = 2;
    return HolonomyPerturbation(geo, ps);
}

LinkField start_field(const LatticeGeometry& geo, double eps, unsigned seed) {
    return random_near(flat_links(standard_flat_spec(geo.twist()), geo), eps, seed);
}

} // namespace

TEST_CASE("accepted steps never increase the total action") {
    LatticeGeometry geo = geo_tw();
    HolonomyPerturbation pert = make_pert(geo, 0.3);
    FlowSchedule sched;
    sched.tau_max = 0.5;
    sched.dtau = 0.02;
    for (unsigned seed : {1u, 2u, 3u}) {
        FlowTrace tr = run_flow(start_field(geo, 0.2, seed), pert, sched);
        REQUIRE(tr.samples.size() > 2);
        for (size_t i = 1; i < tr.samples.size(); ++i) {
            double prev = tr.samples[i - 1].ym_k;
            CHECK(tr.samples[i].ym_k <= prev + 1e-10 * std::abs(prev));
        }
    }
}

TEST_CASE("first-order energy balance: dE = -dtau * |grad|^2 + O(dtau^2)") {
    LatticeGeometry geo = geo_tw();
    HolonomyPerturbation pert = make_pert(geo, 0.3);
    LinkField U = start_field(geo, 0.2, 5);
    double dtau = 1e-3;
    LinkAlgebraField g = force(U, pert);
    double gnorm2 = inner_int(g, g);
    LinkField U1 = euler_step(U, pert, dtau);
    double dE = total_action(U1, pert) - total_action(U, pert);
    CHECK(std::abs(dE + dtau * gnorm2) < 0.05 * dtau * gnorm2);
}

TEST_CASE("rejected steps halve the step size and a sane start has none") {
    LatticeGeometry geo = geo_tw();
    HolonomyPerturbation pert = make_pert(geo, 0.3);
    FlowSchedule sched;
    sched.tau_max = 0.2;
    sched.dtau = 0.01;
    FlowTrace tr = run_flow(start_field(geo, 0.1, 7), pert, sched);
    CHECK(tr.steps_rejected == 0);
    CHECK(tr.final_tau >= sched.tau_max);

    // an absurdly large first step must be rejected, not accepted
    FlowSchedule rough = sched;
    rough.dtau = 0.1;
    rough.dtau_max = 8.0;
    rough.tau_max = 0.3;
    rough.integrator = Integrator::Euler;
    FlowTrace tr2 = run_flow(start_field(geo, 0.4, 11), pert, rough);
    CHECK(tr2.final_tau >= rough.tau_max);
    for (size_t i = 1; i < tr2.samples.size(); ++i) {
        double prev = tr2.samples[i - 1].ym_k;
        CHECK(tr2.samples[i].ym_k <= prev + 1e-10 * std::abs(prev));
    }
}

TEST_CASE("frozen links never move during the flow") {
    LatticeGeometry geo = geo_tw();
    HolonomyPerturbation pert = make_pert(geo, 0.3);
    LinkField U0 = start_field(geo, 0.2, 13);
    FlowSchedule sched;
    sched.tau_max = 0.3;
    FlowTrace tr = run_flow(U0, pert, sched);
    for (int l = 0; l < geo.n_links(); ++l) {
        if (!geo.link_frozen(l)) continue;
        int s = geo.link_site(l), d = geo.link_dir(l);
        Quat diff = tr.final_field.link(s, d) - U0.link(s, d);
        CHECK(quat_norm(diff) == doctest::Approx(0.0).epsilon(1e-30));
    }
}

TEST_CASE("euler and rk3 steps converge at their design orders") {
    LatticeGeometry geo = geo_tw();
    HolonomyPerturbation pert = make_pert(geo, 0.3);
    LinkField U = start_field(geo, 0.2, 17);
    double T = 0.08;
    auto integrate = [&](Integrator which, int nsteps) {
        LinkField V = U;
        double dt = T / nsteps;
        for (int i = 0; i < nsteps; ++i)
            V = (which == Integrator::Euler) ? euler_step(V, pert, dt) : rk3_step(V, pert, dt);
        return V;
    };
    auto order = [&](Integrator which) {
        LinkField a = integrate(which, 8);
        LinkField b = integrate(which, 16);
        LinkField c = integrate(which, 32);
        // successive-difference Richardson: |U_n - U_2n| ~ C dt^p (1 - 2^-p),
        // so the ratio of consecutive differences tends to 2^p
        double e1 = field_distance(a, b);
        double e2 = field_distance(b, c);
        return std::log2(e1 / e2);
    };
    double p_euler = order(Integrator::Euler);
    double p_rk3 = order(Integrator::RK3);
    CHECK(p_euler > 0.7);
    CHECK(p_euler < 1.3);
    CHECK(p_rk3 > 2.5);
    CHECK(p_rk3 < 3.5);
}

TEST_CASE("gauge-fixed flow reproduces the plain flow after undoing the gauge motion") {
    LatticeGeometry geo = geo_tw();
    HolonomyPerturbation pert = make_pert(geo, 0.3);
    LinkField U0 = start_field(geo, 0.15, 19);
    LinkField ref = flat_links(standard_flat_spec(geo.twist()), geo);
    double T = 0.1;

    auto discrepancy = [&](int nsteps) {
        double dt = T / nsteps;
        LinkField plain = U0;
        for (int i = 0; i < nsteps; ++i) plain = euler_step(plain, pert, dt);
        DeturckResult dres = run_deturck_flow(U0, pert, ref, dt, nsteps);
        LinkField pulled = apply_gauge(dres.field, dres.gauge.inverse());
        return field_distance(pulled, plain);
    };
    double d1 = discrepancy(20);
    double d2 = discrepancy(40);
    CHECK(d1 > 0.0);
    // halving dtau at least halves the discrepancy (first-order equivalence)
    CHECK(d1 / d2 >= 1.8);
}

TEST_CASE("blow-up protection throws when no acceptable step exists") {
    LatticeGeometry geo = geo_tw();
    // pin dtau_min == dtau_max at an enormous value so the rejected step
    // cannot shrink and the guard must fire
    FlowSchedule sched;
    sched.dtau = 64.0;
    sched.dtau_min = 64.0;
    sched.dtau_max = 64.0;
    sched.tau_max = 128.0;
    sched.integrator = Integrator::Euler;
    HolonomyPerturbation pert = make_pert(geo, 0.3);
    LinkField U = start_field(geo, 0.4, 23);
    CHECK_THROWS_WITH_AS(run_flow(U, pert, sched), doctest::Contains("blow-up"),
                         std::runtime_error);
}
