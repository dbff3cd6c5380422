#pragma once

#include "ymflow/lattice.hpp"
#include "ymflow/su2.hpp"

#include <cstdint>
#include <vector>

namespace ymflow {

// Gauge field: one SU(2) element per (site, direction), site-major,
// direction-minor.  Frozen links (per geometry) are never updated by flows.
struct LinkField {
    const LatticeGeometry* geo = nullptr;
    std::vector<Quat> u;

    LinkField() = default;
    explicit LinkField(const LatticeGeometry& g)
        : geo(&g), u(static_cast<size_t>(g.n_links()), identity_q()) {}

    Quat& link(int site, int dir) { return u[static_cast<size_t>(geo->link_index(site, dir))]; }
    const Quat& link(int site, int dir) const {
        return u[static_cast<size_t>(geo->link_index(site, dir))];
    }

    // Holonomy of one plaquette traversal (no twist weight applied).
    Quat plaquette(int q) const;
    // Maximum |det - 1| deviation over all links.
    double unitarity_error() const;
    void reunitarize();
};

// Algebra-valued 1-form (tangent vector at a link field), same layout.
struct LinkAlgebraField {
    const LatticeGeometry* geo = nullptr;
    std::vector<Alg> v;

    LinkAlgebraField() = default;
    explicit LinkAlgebraField(const LatticeGeometry& g)
        : geo(&g), v(static_cast<size_t>(g.n_links())) {}

    Alg& at(int site, int dir) { return v[static_cast<size_t>(geo->link_index(site, dir))]; }
    const Alg& at(int site, int dir) const {
        return v[static_cast<size_t>(geo->link_index(site, dir))];
    }
};

double inner_int(const LinkAlgebraField& a, const LinkAlgebraField& b);

// Gauge transformation: one SU(2) element per site.
struct GaugeTransformField {
    const LatticeGeometry* geo = nullptr;
    std::vector<Quat> g;

    GaugeTransformField() = default;
    explicit GaugeTransformField(const LatticeGeometry& gg)
        : geo(&gg), g(static_cast<size_t>(gg.n_sites()), identity_q()) {}

    GaugeTransformField inverse() const;
};

// Commuting-up-to-twist holonomy triple (h1, h2, h3) describing a flat
// connection on the T^3 cross-section: h_i h_j = (-1)^{m_ij} h_j h_i.
struct FlatConnectionSpec {
    Quat h[3] = {identity_q(), identity_q(), identity_q()};
};

// Verify the (anti)commutation pattern against the geometry's twist bits.
void check_flat_spec(const FlatConnectionSpec& spec, const LatticeGeometry& geo,
                     double tol = 1e-12);

// A holonomy triple realizing the twist pattern (m_12, m_13, m_23), chosen
// from the unit quaternions {1, i s1, i s2, i s3}.  Every pattern is
// realizable; throws only on malformed bits.
FlatConnectionSpec standard_flat_spec(const std::array<int, 3>& twist);

// Flat link field: identity everywhere except U_d(x) = h_d on the last link
// of each periodic cycle (x_d = L_d - 1), so the cycle-d holonomy is h_d and
// every twist-compensated plaquette holonomy is trivial.
LinkField flat_links(const FlatConnectionSpec& spec, const LatticeGeometry& geo);

// U'_mu(x) = g(x)^-1 U_mu(x) g(x + mu).  Requires g = identity on the frozen
// region (so frozen links stay fixed).
LinkField apply_gauge(const LinkField& U, const GaugeTransformField& g);

// Left-multiply every unfrozen link by exp(eps * eta) with eta a unit random
// algebra element (deterministic in seed).
LinkField random_near(const LinkField& U, double eps, std::uint64_t seed);

// Degree-n map T^3 -> SU(2) (same on every axis slice): radial suspension of
// the cube collapse, g = exp(i pi n q(m) yhat.sigma) with m the sup-norm
// radius of the centered coordinates and q a smoothstep profile; g is the
// constant center element (-1)^n on the cube boundary, hence periodic.
// Note: this is *not* identity on the frozen region; it is construction data
// for mapping-cylinder interpolations, not an admissible flow gauge motion.
GaugeTransformField winding_gauge_transform(const LatticeGeometry& geo, int n);

// Interpolating cylinder field: bottom slices carry flat(spec), top slices
// carry the g-transform of flat(spec), with a smooth ramp between; axis
// links identity.  Used to measure relative Chern-Simons jumps.
LinkField gauge_interpolation_field(const FlatConnectionSpec& spec,
                                    const GaugeTransformField& g,
                                    const LatticeGeometry& geo);

// Approximately unit-charge lump: a mapping-cylinder ramp through a
// degree-(sign) winding map of the spatial torus, centered at `center` with
// axis half-width rho.  The two axis ends are exactly flat (identity and a
// pure-gauge image of it), so the lump is the charge carrier connecting
// them; sign selects the orientation.
LinkField seed_instanton(const LatticeGeometry& geo, std::array<double, 4> center,
                         double rho, int sign);

// Link-wise product of two fields (used to merge seeded lumps).
LinkField merge_fields(const LinkField& a, const LinkField& b);

} // namespace ymflow
