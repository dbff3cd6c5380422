#pragma once

#include "ymflow/curvature.hpp"
#include "ymflow/field.hpp"
#include "ymflow/perturbation.hpp"

#include <vector>

namespace ymflow {

// Wilson action sum_p w_p * (2 - w_p-compensated Re tr U_p) over plaquettes
// with nonzero weight; zero iff every untwisted plaquette holonomy is +1 and
// every marked one is -1.
double wilson_action(const LinkField& U);

// Total dissipated functional: wilson_action + perturbation value.  This is
// the discrete perturbed Yang-Mills energy whose exact gradient drives the
// flow.
double total_action(const LinkField& U, const HolonomyPerturbation& pert);

// Clover (4-leaf averaged) field strength with twist compensation; leaves
// with weight 0 (seam) are skipped and the average renormalized.  For flat
// twisted fields the output vanishes identically.
CurvatureField clover_field(const LinkField& U);

// Tree-level improved field strength (4/3) C1 - (1/3) C2/4 combining 1x1 and
// 2x2 clover leaves; cancels the leading a^2 discretization bias of charge
// and Chern-Simons estimates on smooth fields.
CurvatureField clover_field_improved(const LinkField& U);

// Exact gradient of total_action with respect to left-multiplied tangents,
// zeroed on frozen links.  Throws if a non-finite value appears.
LinkAlgebraField force(const LinkField& U, const HolonomyPerturbation& pert);

// Topological charge Q = (||F+||^2 - ||F-||^2) / 8 pi^2 of a clover field,
// and kappa = 2 Q (instanton number in the doubled normalization).
double topological_charge(const CurvatureField& F);
double kappa_charge(const CurvatureField& F);

struct PerturbedEnergies {
    double action;      // wilson action alone
    double ym_k;        // wilson + perturbation (dissipated energy)
    double fplus_sq;    // ||(F_clover - K)+||^2 internal
    double cs_estimate; // (1/2)(||G-||^2 - ||G+||^2), clover discretization
    double q_charge;    // clover charge of F (no K)
};
PerturbedEnergies perturbed_energies(const LinkField& U, const HolonomyPerturbation& pert);

// Relative Chern-Simons of an interpolating cylinder field, reported
// normalization: -(1/2) int <G ^ G> with G = F_clover - K; equals minus
// kappa of the interpolation, integer-valued up to discretization.
double relative_chern_simons(const LinkField& interp, const HolonomyPerturbation& pert);

// --- covariant difference calculus (adjoint representation) ---

// (d_A phi)_mu(x) = Ad(U_mu(x)) phi(x+mu) - phi(x); zero over frozen links
// if mask_frozen is set.
LinkAlgebraField dcov0(const LinkField& U, const std::vector<Alg>& phi, bool mask_frozen);

// exact adjoint of dcov0: (div v)(x) = sum_mu Ad(U_mu(x-mu)^-1) v_mu(x-mu) - v_mu(x)
std::vector<Alg> dcov0_adjoint(const LinkField& U, const LinkAlgebraField& v,
                               bool mask_frozen);

// (d_A v)_{mu nu}(x) = D_mu v_nu - D_nu v_mu with forward covariant D
CurvatureField dcov1(const LinkField& U, const LinkAlgebraField& v);

// d_A on 2-forms, returned as the dual 1-form of the 3-form (the Riesz
// representer of v -> int <d_A W ^ v>).
LinkAlgebraField dcov2_dual(const LinkField& U, const CurvatureField& W);

// dual 1-form of the extended dK on 2-forms: representer of
// v -> -int <W ^ dK(v)>
LinkAlgebraField dk2_dual(const LinkField& U, const HolonomyPerturbation& pert,
                          const CurvatureField& W);

} // namespace ymflow
