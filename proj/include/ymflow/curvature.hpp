#pragma once

#include "ymflow/field.hpp"
#include "ymflow/lattice.hpp"
#include "ymflow/su2.hpp"

#include <vector>

namespace ymflow {

// Algebra-valued 2-form: 6 components per site, plane-major ordering
// matching LatticeGeometry::plane_dirs.
struct CurvatureField {
    const LatticeGeometry* geo = nullptr;
    std::vector<Alg> f;

    CurvatureField() = default;
    explicit CurvatureField(const LatticeGeometry& g)
        : geo(&g), f(static_cast<size_t>(g.n_plaquettes())) {}

    Alg& at(int site, int plane) { return f[static_cast<size_t>(6 * site + plane)]; }
    const Alg& at(int site, int plane) const {
        return f[static_cast<size_t>(6 * site + plane)];
    }
};

// Hodge star on 2-forms (Euclidean, eps_0123 = +1), in plane ordering
// (01),(02),(03),(12),(13),(23):
// (*F)_01 = F_23, (*F)_02 = -F_13, (*F)_03 = F_12 and back symmetrically.
CurvatureField hodge_star(const CurvatureField& F);

CurvatureField operator+(const CurvatureField& a, const CurvatureField& b);
CurvatureField operator-(const CurvatureField& a, const CurvatureField& b);
CurvatureField operator*(double c, const CurvatureField& a);

// Self-dual / anti-self-dual split F = F+ + F-, F+- = (F +- *F)/2.
struct SelfdualSplit {
    CurvatureField plus;
    CurvatureField minus;
};
SelfdualSplit selfdual_split(const CurvatureField& F);

// ||F||^2 = sum_{x, mu<nu} <F_mn, F_mn>_int  (internal normalization)
double norm2_int(const CurvatureField& F);

// integral of <A ^ B> in internal normalization:
// sum_{x, mu<nu} <A_mn, (*B)_mn>_int
double wedge_int(const CurvatureField& A, const CurvatureField& B);

// pointwise energy density e(x) = sum_{mu<nu} <F_mn, F_mn>_int
std::vector<double> energy_density(const CurvatureField& F);

} // namespace ymflow
