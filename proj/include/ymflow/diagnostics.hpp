#pragma once

#include "ymflow/flow.hpp"
#include "ymflow/functionals.hpp"

#include <array>
#include <vector>

namespace ymflow {

struct Peak {
    int site = -1;
    double mass = 0.0; // ball-summed energy of |F - K|^2 density
};

// Ball sums of the energy density sum_{mu<nu} |F-K|^2(x); returns peaks in
// descending mass with greedy suppression of balls overlapping a reported
// center (separation > radius).
std::vector<Peak> concentration_scan(const LinkField& U, const HolonomyPerturbation& pert,
                                     double radius, int max_peaks = 8);

// Track the top peak across a snapshot sequence; each entry is the peak site
// and mass at that snapshot.  Matching is by nearest site to the previous
// entry.
std::vector<Peak> track_peaks(const std::vector<LinkField>& snapshots,
                              const HolonomyPerturbation& pert, double radius);

struct BubbleProfile {
    std::vector<double> radius;
    std::vector<double> cumulative; // energy inside each radius
    double plateau = 0.0;           // cumulative at the largest radius
    double quantization = 0.0;      // plateau / (8 pi^2)
};
BubbleProfile bubble_profile(const LinkField& U, const HolonomyPerturbation& pert,
                             int center, double max_radius);

struct ConvergenceFit {
    double rate = 0.0;      // fitted decay rate of fplus_sq ~ exp(-rate tau)
    double r2 = 0.0;        // coefficient of determination of the log fit
    double decades = 0.0;   // decades of decay covered by the window
};
// Log-linear fit of fplus_sq over samples with tau in [tau_lo, tau_hi].
ConvergenceFit convergence_fit(const FlowTrace& trace, double tau_lo, double tau_hi);

// Frobenius distance between two link fields (not gauge invariant; zero iff
// the fields agree link by link).
double field_distance(const LinkField& a, const LinkField& b);

struct AxiomAudit {
    double hessian_symmetry = 0.0;  // fd-linearized dK symmetry violation
    double k_sup = 0.0;             // sup |K| over sites
    double k_bound = 0.0;           // analytic bound 2 beta
    double k_wedge_k = 0.0;         // int <K ^ K>
    double axiom2_ii = 0.0;         // |<K ^ dK(v)>| over unit random v
    double axiom2_iv = 0.0;         // |<(d_A K + dK(F)) ^ v>| over unit random v
    double bianchi_perturbed = 0.0; // ||d_{A,K} (F - K)||
    double bianchi_plain = 0.0;     // ||d_A F||
};
AxiomAudit axiom_audit(const LinkField& U, const HolonomyPerturbation& pert,
                       std::uint64_t seed = 2026);

struct PoincareProbe {
    double fplus_norm = 0.0;  // ||F+_{A,K}||
    double dfplus_norm = 0.0; // ||d_{A,K} F+||
    double ratio = 0.0;       // fplus / dfplus  (lower bound probe for C_PI)
};
PoincareProbe poincare_probe(const LinkField& U, const HolonomyPerturbation& pert);

} // namespace ymflow
