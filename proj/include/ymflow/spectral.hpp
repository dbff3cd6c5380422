#pragma once

#include "ymflow/field.hpp"
#include "ymflow/loops.hpp"
#include "ymflow/su2.hpp"

#include <array>
#include <vector>

namespace ymflow {

// Periodic T^3 cross-section with 't Hooft twist bits (m_12, m_13, m_23);
// internal directions 0,1,2 correspond to the cylinder's spatial 1,2,3.
class SliceGeometry {
public:
    SliceGeometry(std::array<int, 3> dims, std::array<int, 3> twist);

    const std::array<int, 3>& dims() const { return dims_; }
    const std::array<int, 3>& twist() const { return twist_; }
    int n_sites() const { return n_sites_; }
    int site_index(const std::array<int, 3>& c) const;
    std::array<int, 3> site_coords(int s) const;
    int shift(int site, int dir, int step) const;

private:
    std::array<int, 3> dims_;
    std::array<int, 3> twist_;
    int n_sites_;
};

// Links of a flat slice connection from a holonomy triple (corner-transition
// placement, cycle-d holonomy = h_d).
struct SliceLinks {
    const SliceGeometry* geo = nullptr;
    std::vector<Quat> u;

    SliceLinks() = default;
    SliceLinks(const SliceGeometry& g, const FlatConnectionSpec& spec);

    Quat link(int site, int dir) const { return u[static_cast<size_t>(3 * site + dir)]; }
    int shift(int site, int dir, int sgn) const { return geo->shift(site, dir, sgn); }
};

// Loop family for the slice perturbation.  Plaquette loops sit in the
// (0,1)-plane of the slice; winding loops wrap one periodic direction and
// can lift flat directions that plaquette loops cannot see.
struct SlicePerturbationSpec {
    double beta = 0.0;
    double w0 = 1.0;
    bool plaquette_loops = true;
    bool winding_loops = false; // straight loops winding in dirs 0 and 1
};

// Element of Omega^1 + Omega^0 on the slice: 3 link components + 1 site
// component, algebra-valued.
struct SlicePair {
    std::vector<Alg> v;   // 3 per site
    std::vector<Alg> phi; // 1 per site

    explicit SlicePair(int n_sites)
        : v(static_cast<size_t>(3 * n_sites)), phi(static_cast<size_t>(n_sites)) {}
};

// Extended Hessian at a flat slice connection:
//   H(v, phi) = ( sym(*d_a) v - Hess_h v - d_a phi , -d_a^* v )
// with sym(*d_a) the symmetrized covariant curl and Hess_h the exact second
// variation of the slice holonomy function.  Self-adjoint by construction.
SlicePair extended_hessian_apply(const SliceLinks& links, const SlicePerturbationSpec& pert,
                                 const SlicePair& x);

struct SpectrumReport {
    std::vector<double> eigenvalues; // k smallest by magnitude, ascending in |.|
    double gap = 0.0;                // min |lambda| over the whole spectrum
    bool acyclic = false;            // gap > tol
    double max_residual = 0.0;       // ||H x - lambda x|| over reported pairs
    int n_zero_modes = 0;            // eigenvalues with |lambda| < tol
};

// Dense symmetric eigensolve of the extended Hessian (desk-scale slices).
SpectrumReport smallest_eigenvalues(const SliceLinks& links,
                                    const SlicePerturbationSpec& pert, int k, double tol);

} // namespace ymflow
