// Independent cross-checks that mint reference values for the test suite.
// Each record re-derives a quantity by a method different from the library
// code path (finite differences, exhaustive counting, Richardson order
// fits) and prints it as one JSON line.

#include <cmath>
#include <iostream>
#include <random>

#include "json.hpp"

#include "ymflow/field.hpp"
#include "ymflow/flow.hpp"
#include "ymflow/functionals.hpp"
#include "ymflow/lattice.hpp"

using namespace ymflow;
using nlohmann::json;

namespace {

void emit(const std::string& name, const json& detail) {
    json j;
    j["oracle"] = name;
    j["detail"] = detail;
    std::cout << j.dump() << "\n";
}

// Central-difference directional derivative of total_action, independent of
// the analytic staple/loop machinery.
void fd_gradient_oracle() {
    LatticeGeometry geo({6, 4, 4, 4}, BoundaryMode::Frozen, BoundaryMode::Frozen, 1, {1, 0, 0});
    PerturbationSpec ps;
    ps.beta = 0.3;
    HolonomyPerturbation pert(geo, ps);
    LinkField U = random_near(flat_links(standard_flat_spec(geo.twist()), geo), 0.2, 7);

    std::mt19937_64 rng(11);
    std::normal_distribution<double> gauss(0.0, 1.0);
    LinkAlgebraField v(geo);
    for (int l = 0; l < geo.n_links(); ++l)
        if (!geo.link_frozen(l))
            v.v[static_cast<size_t>(l)] = Alg{gauss(rng), gauss(rng), gauss(rng)};

    auto at = [&](double eps) {
        LinkField Us = U;
        for (int l = 0; l < geo.n_links(); ++l)
            Us.u[static_cast<size_t>(l)] =
                exp_alg(eps * v.v[static_cast<size_t>(l)]) * Us.u[static_cast<size_t>(l)];
        return total_action(Us, pert);
    };
    const double h = 1e-5;
    double fd = (at(h) - at(-h)) / (2.0 * h);
    double exact = inner_int(force(U, pert), v);
    emit("fd_gradient", {{"fd", fd}, {"exact", exact}, {"abs_err", std::abs(fd - exact)}});
}

// Exhaustive incidence counting on a small lattice: every link must appear
// in exactly 6 plaquette boundaries, every plaquette boundary must have 4
// links, and the counts must be consistent both ways.
void small_lattice_exhaustive() {
    LatticeGeometry geo({4, 4, 4, 4}, BoundaryMode::Frozen, BoundaryMode::Frozen, 1, {0, 1, 1});
    std::vector<int> link_count(static_cast<size_t>(geo.n_links()), 0);
    long boundary_links = 0;
    for (int q = 0; q < geo.n_plaquettes(); ++q) {
        for (const LinkRef& r : geo.plaquette_links(q)) {
            ++link_count[static_cast<size_t>(geo.link_index(r.site, r.dir))];
            ++boundary_links;
        }
    }
    int bad = 0;
    for (int c : link_count)
        if (c != 6) ++bad;
    long marked = geo.n_marked_plaquettes();
    long seams = 0;
    for (int q = 0; q < geo.n_plaquettes(); ++q)
        if (geo.plaquette_weight(q) == 0.0) ++seams;
    // seam plaquettes: planes (0,nu) at x0 = L0-1, three per such site
    long expected_seams = 3L * geo.n_sites() / geo.dims()[0];
    emit("incidence", {{"links_not_in_6_plaquettes", bad},
                       {"boundary_links", boundary_links},
                       {"expected_boundary_links", 4L * geo.n_plaquettes()},
                       {"marked", marked},
                       {"seams", seams},
                       {"expected_seams", expected_seams}});
}

// Richardson order probe: the flow integrators should show first order
// (Euler) and third order (three-stage scheme) local-to-global convergence
// in dtau against a reference field flowed at a much smaller step.
void richardson_order() {
    LatticeGeometry geo({6, 4, 4, 4}, BoundaryMode::Frozen, BoundaryMode::Frozen, 1, {0, 0, 0});
    PerturbationSpec ps;
    HolonomyPerturbation pert(geo, ps);
    LinkField U0 = random_near(flat_links(standard_flat_spec(geo.twist()), geo), 0.15, 3);

    auto flow_to = [&](double tau, double dt, bool rk3) {
        LinkField U = U0;
        int n = static_cast<int>(std::llround(tau / dt));
        for (int i = 0; i < n; ++i) U = rk3 ? rk3_step(U, pert, dt) : euler_step(U, pert, dt);
        return U;
    };
    const double tau = 0.2;
    LinkField ref = flow_to(tau, tau / 512, true);
    auto dist = [&](const LinkField& a) {
        double s = 0.0;
        for (size_t i = 0; i < a.u.size(); ++i) {
            Quat d = a.u[i] - ref.u[i];
            s += d.w * d.w + d.x * d.x + d.y * d.y + d.z * d.z;
        }
        return std::sqrt(s);
    };
    json detail;
    for (bool rk3 : {false, true}) {
        double e1 = dist(flow_to(tau, tau / 8, rk3));
        double e2 = dist(flow_to(tau, tau / 16, rk3));
        double order = std::log2(e1 / e2);
        detail[rk3 ? "rk3" : "euler"] = {{"err_h", e1}, {"err_h2", e2}, {"order", order}};
    }
    emit("richardson_order", detail);
}

} // namespace

int main() {
    fd_gradient_oracle();
    small_lattice_exhaustive();
    richardson_order();
    return 0;
}
