#include "ymflow/field.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace ymflow {

Quat LinkField::plaquette(int q) const {
    auto refs = geo->plaquette_links(q);
    Quat p = identity_q();
    for (const auto& r : refs) {
        const Quat& ul = link(r.site, r.dir);
        p = (r.sign > 0) ? p * ul : p * dagger(ul);
    }
    return p;
}

double LinkField::unitarity_error() const {
    double worst = 0.0;
    for (const auto& q : u) worst = std::max(worst, std::abs(quat_norm(q) - 1.0));
    return worst;
}

void LinkField::reunitarize() {
    for (auto& q : u) q = renormalize(q);
}

double inner_int(const LinkAlgebraField& a, const LinkAlgebraField& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.v.size(); ++i) s += inner_int(a.v[i], b.v[i]);
    return s;
}

GaugeTransformField GaugeTransformField::inverse() const {
    GaugeTransformField out(*geo);
    for (size_t i = 0; i < g.size(); ++i) out.g[i] = dagger(g[i]);
    return out;
}

void check_flat_spec(const FlatConnectionSpec& spec, const LatticeGeometry& geo, double tol) {
    for (int i = 0; i < 3; ++i) {
        double n = quat_norm(spec.h[i]);
        if (std::abs(n - 1.0) > tol)
            throw std::invalid_argument("flat connection holonomy not unitary");
    }
    // pairs (1,2), (1,3), (2,3) against twist bits
    const int pairs[3][2] = {{0, 1}, {0, 2}, {1, 2}};
    for (int k = 0; k < 3; ++k) {
        const Quat& a = spec.h[pairs[k][0]];
        const Quat& b = spec.h[pairs[k][1]];
        double sgn = geo.twist()[k] ? -1.0 : 1.0;
        Quat r = (a * b) - sgn * (b * a);
        double err = quat_norm(Quat{r.w, r.x, r.y, r.z});
        if (err > tol)
            throw std::invalid_argument(
                "flat connection holonomies do not satisfy the twist commutation pattern");
    }
}

FlatConnectionSpec standard_flat_spec(const std::array<int, 3>& twist) {
    for (int b : twist)
        if (b != 0 && b != 1) throw std::invalid_argument("twist bits must be 0 or 1");
    const Quat units[4] = {identity_q(), Quat{0, 1, 0, 0}, Quat{0, 0, 1, 0}, Quat{0, 0, 0, 1}};
    const int pairs[3][2] = {{0, 1}, {0, 2}, {1, 2}};
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            for (int c = 0; c < 4; ++c) {
                const Quat h[3] = {units[a], units[b], units[c]};
                bool ok = true;
                for (int k = 0; k < 3 && ok; ++k) {
                    double sgn = twist[k] ? -1.0 : 1.0;
                    Quat r = (h[pairs[k][0]] * h[pairs[k][1]]) -
                             sgn * (h[pairs[k][1]] * h[pairs[k][0]]);
                    ok = quat_norm(r) < 1e-14;
                }
                if (ok) {
                    FlatConnectionSpec spec;
                    spec.h[0] = h[0];
                    spec.h[1] = h[1];
                    spec.h[2] = h[2];
                    return spec;
                }
            }
    throw std::logic_error("no flat holonomy triple found");
}

LinkField flat_links(const FlatConnectionSpec& spec, const LatticeGeometry& geo) {
    check_flat_spec(spec, geo);
    LinkField U(geo);
    for (int s = 0; s < geo.n_sites(); ++s) {
        auto c = geo.site_coords(s);
        for (int d = 1; d < 4; ++d)
            if (c[d] == geo.dims()[d] - 1) U.link(s, d) = spec.h[d - 1];
    }
    return U;
}

LinkField apply_gauge(const LinkField& U, const GaugeTransformField& g) {
    const LatticeGeometry& geo = *U.geo;
    for (int s = 0; s < geo.n_sites(); ++s)
        if (geo.site_frozen(s)) {
            const Quat& q = g.g[static_cast<size_t>(s)];
            double dev = std::sqrt((q.w - 1.0) * (q.w - 1.0) + q.x * q.x + q.y * q.y + q.z * q.z);
            if (dev > 1e-12)
                throw std::invalid_argument("gauge transform must be identity on frozen region");
        }
    LinkField out(geo);
    for (int s = 0; s < geo.n_sites(); ++s)
        for (int d = 0; d < 4; ++d) {
            int s2 = geo.shift(s, d, 1);
            out.link(s, d) =
                dagger(g.g[static_cast<size_t>(s)]) * U.link(s, d) * g.g[static_cast<size_t>(s2)];
        }
    return out;
}

LinkField random_near(const LinkField& U, double eps, std::uint64_t seed) {
    const LatticeGeometry& geo = *U.geo;
    LinkField out = U;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int l = 0; l < geo.n_links(); ++l) {
        // draw in fixed link order regardless of frozenness, for stability
        // of the ensemble under geometry tweaks
        Alg eta{gauss(rng), gauss(rng), gauss(rng)};
        double n = std::sqrt(dot(eta, eta));
        if (n < 1e-14) { eta = Alg{1.0, 0.0, 0.0}; n = 1.0; }
        eta *= 1.0 / n;
        if (geo.link_frozen(l)) continue;
        out.u[static_cast<size_t>(l)] = exp_alg(eps * eta) * out.u[static_cast<size_t>(l)];
    }
    return out;
}

GaugeTransformField winding_gauge_transform(const LatticeGeometry& geo, int n) {
    GaugeTransformField out(geo);
    const auto& L = geo.dims();
    for (int s = 0; s < geo.n_sites(); ++s) {
        auto c = geo.site_coords(s);
        double y[3];
        double m = 0.0, r2 = 0.0;
        for (int d = 1; d < 4; ++d) {
            y[d - 1] = (2.0 * c[d] - L[d]) / L[d]; // in [-1, 1)
            m = std::max(m, std::abs(y[d - 1]));
            r2 += y[d - 1] * y[d - 1];
        }
        Quat gq = identity_q();
        if (n != 0 && r2 > 1e-14) {
            double q = m * m * (3.0 - 2.0 * m); // smoothstep profile
            double ang = M_PI * n * q;
            double r = std::sqrt(r2);
            Alg ax{y[0] / r, y[1] / r, y[2] / r};
            gq = exp_alg(ang * ax);
        } else if (n != 0) {
            gq = identity_q();
        }
        out.g[static_cast<size_t>(s)] = gq;
    }
    return out;
}

LinkField gauge_interpolation_field(const FlatConnectionSpec& spec,
                                    const GaugeTransformField& g,
                                    const LatticeGeometry& geo) {
    LinkField base = flat_links(spec, geo);
    // Fully transformed spatial links (same transform on every axis slice).
    LinkField target = base;
    for (int s = 0; s < geo.n_sites(); ++s)
        for (int d = 1; d < 4; ++d)
            target.link(s, d) = dagger(g.g[static_cast<size_t>(s)]) * base.link(s, d) *
                                g.g[static_cast<size_t>(geo.shift(s, d, 1))];
    LinkField out(geo);
    const auto& L = geo.dims();
    int fd = std::max(geo.frozen_depth(), 1);
    int s0 = fd;              // ramp starts after the bottom slab
    int s1 = L[0] - 1 - fd;   // and ends before the top slab
    if (s1 <= s0) throw std::invalid_argument("axis too short for interpolation ramp");
    for (int s = 0; s < geo.n_sites(); ++s) {
        auto c = geo.site_coords(s);
        double t;
        if (c[0] <= s0) t = 0.0;
        else if (c[0] >= s1) t = 1.0;
        else {
            double x = double(c[0] - s0) / double(s1 - s0);
            t = x * x * (3.0 - 2.0 * x);
        }
        out.link(s, 0) = identity_q();
        for (int d = 1; d < 4; ++d) {
            // geodesic from base to target; intermediate slices are not
            // flat, so the interpolation carries the winding charge
            Quat rel = dagger(base.link(s, d)) * target.link(s, d);
            Alg step;
            try {
                step = log_group(rel);
            } catch (const branch_error&) {
                // antipodal relative rotation: split through a fixed axis
                Quat h = exp_alg(Alg{M_PI / 2.0, 0.0, 0.0});
                step = log_group(rel * dagger(h));
                step += Alg{M_PI / 2.0, 0.0, 0.0};
            }
            out.link(s, d) = base.link(s, d) * exp_alg(t * step);
        }
    }
    out.reunitarize();
    return out;
}

namespace {
// self-dual (sign=+1) and anti-self-dual (sign=-1) 't Hooft tensors:
// eta^a_{mu nu}, a = 1..3, mu,nu = 0..3 with 0 the axis direction.
} // namespace

LinkField seed_instanton(const LatticeGeometry& geo, std::array<double, 4> center,
                         double rho, int sign) {
    if (rho <= 0.0) throw std::invalid_argument("rho must be positive");
    if (sign != 1 && sign != -1) throw std::invalid_argument("sign must be +1 or -1");
    const auto& L = geo.dims();
    // the ramp [center0 - rho, center0 + rho] must fit in the unfrozen window
    double lo = geo.frozen_depth(), hi = L[0] - 1.0 - geo.frozen_depth();
    if (center[0] - rho < lo || center[0] + rho > hi)
        throw std::invalid_argument("rho too large for lattice");
    if (2.0 * rho < 2.0) throw std::invalid_argument("rho too small for lattice");

    // Degree-(sign) winding map on the spatial torus, centered at the
    // requested spatial point: radial suspension of the cube collapse.
    std::vector<Alg> logg(static_cast<size_t>(geo.n_sites()));
    std::vector<char> central(static_cast<size_t>(geo.n_sites()), 0);
    for (int st = 0; st < geo.n_sites(); ++st) {
        auto c = geo.site_coords(st);
        double y[3];
        double m = 0.0, r2 = 0.0;
        for (int d = 1; d < 4; ++d) {
            double xm = c[d] - center[d];
            xm -= L[d] * std::round(xm / L[d]); // minimal image in [-L/2, L/2)
            y[d - 1] = 2.0 * xm / L[d];         // in [-1, 1)
            m = std::max(m, std::abs(y[d - 1]));
            r2 += y[d - 1] * y[d - 1];
        }
        double q = m * m * (3.0 - 2.0 * m); // smoothstep profile of sup-norm radius
        double ang = M_PI * sign * q;
        if (r2 < 1e-14 || std::abs(ang) > M_PI - 1e-6) {
            // center (angle 0) or cube boundary (angle pi): the map is the
            // central element there; mark it so link logs use a fixed axis
            central[static_cast<size_t>(st)] = (std::abs(ang) > M_PI / 2.0);
            logg[static_cast<size_t>(st)] = central[static_cast<size_t>(st)]
                                                ? Alg{double(sign) * M_PI, 0.0, 0.0}
                                                : Alg{};
            continue;
        }
        double r = std::sqrt(r2);
        logg[static_cast<size_t>(st)] = Alg{ang * y[0] / r, ang * y[1] / r, ang * y[2] / r};
    }

    LinkField U(geo);
    for (int st = 0; st < geo.n_sites(); ++st) {
        auto c = geo.site_coords(st);
        double t;
        if (c[0] <= center[0] - rho) t = 0.0;
        else if (c[0] >= center[0] + rho) t = 1.0;
        else {
            double x = (c[0] - (center[0] - rho)) / (2.0 * rho);
            t = x * x * (3.0 - 2.0 * x);
        }
        // frozen links are assigned too: the end slabs hold the two flat
        // fields the lump connects, which is what pins the charge
        for (int d = 1; d < 4; ++d) {
            int s2 = geo.shift(st, d, 1);
            // geodesic ramp of the pure-gauge target g(x)^-1 g(x+d)
            Quat target = dagger(exp_alg(logg[static_cast<size_t>(st)])) *
                          exp_alg(logg[static_cast<size_t>(s2)]);
            Alg step;
            try {
                step = log_group(target);
            } catch (const branch_error&) {
                Quat h = exp_alg(Alg{M_PI / 2.0, 0.0, 0.0});
                step = log_group(target * dagger(h));
                step += Alg{M_PI / 2.0, 0.0, 0.0};
            }
            U.link(st, d) = exp_alg(t * step);
        }
    }
    U.reunitarize();
    return U;
}

LinkField merge_fields(const LinkField& a, const LinkField& b) {
    LinkField out = a;
    for (size_t i = 0; i < out.u.size(); ++i) out.u[i] = renormalize(a.u[i] * b.u[i]);
    return out;
}

} // namespace ymflow
