#pragma once

#include "ymflow/curvature.hpp"
#include "ymflow/field.hpp"
#include "ymflow/loops.hpp"

#include <vector>

namespace ymflow {

// Loop family description for the holonomy perturbation.  All loops lie in
// one fixed coordinate 2-plane (mu0, nu0); the class function is the
// quadratic f_cls(w) = beta (w - w0)^2 of w = (1/2) Re tr Hol.
struct PerturbationSpec {
    int mu0 = 1, nu0 = 2;         // spatial plane
    double beta = 0.0;            // coupling strength
    double w0 = 1.0;              // class-function center
    std::vector<double> profile;  // per-axis-slice weight f(s); empty => default bump
};

class HolonomyPerturbation {
public:
    HolonomyPerturbation(const LatticeGeometry& geo, const PerturbationSpec& spec);

    const PerturbationSpec& spec() const { return spec_; }
    const LatticeGeometry& geo() const { return *geo_; }
    const std::vector<double>& profile() const { return profile_; }
    bool trivial() const { return spec_.beta == 0.0; }

    // value = sum_loops f(s) * beta (w - w0)^2
    double value(const LinkField& U) const;

    // add the exact link gradient of value to out
    void add_gradient(const LinkField& U, LinkAlgebraField& out) const;

    // gradient 2-form K: supported on the (mu0, nu0) plane, defined so that
    // (d/deps) value(exp(eps v) U) = sum_x <K(x), (d_A v)_{mu0 nu0}(x)>_int
    // with d_A the forward covariant difference.
    CurvatureField form(const LinkField& U) const;

    // exact linearization of the form along a tangent field v
    CurvatureField dk_apply(const LinkField& U, const LinkAlgebraField& v) const;

    // adjoint scatter: given Z on sites (pairing partner of dK(v) in the
    // K-plane), return rho with <rho, v>_int = sum_x <Z(x), dK(v)(x)>_int
    LinkAlgebraField dk_adjoint(const LinkField& U, const std::vector<Alg>& Z) const;

    // exact Hessian of value applied to v (adds into out)
    void hess_apply(const LinkField& U, const LinkAlgebraField& v,
                    LinkAlgebraField& out) const;

    // largest |K| over sites (axiom 1 boundedness report); analytic bound 2*beta
    double form_sup(const LinkField& U) const;
    double form_bound() const { return 2.0 * spec_.beta; }

    int plane_index() const; // plane index of (mu0, nu0) in the 2-form layout

private:
    const LatticeGeometry* geo_;
    PerturbationSpec spec_;
    std::vector<double> profile_; // resolved per-slice weights
    std::vector<Loop> loops_;     // one plaquette loop per site with f(s) != 0

    struct Acc {
        const LinkField* U;
        Quat link(int site, int dir) const { return U->link(site, dir); }
        int shift(int site, int dir, int sgn) const { return U->geo->shift(site, dir, sgn); }
    };
};

// Default per-slice weight bump: zero on the frozen slabs, raised cosine on
// the interior.
std::vector<double> default_profile(const LatticeGeometry& geo);

} // namespace ymflow
