#include "ymflow/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace ymflow {

namespace {

std::vector<double> perturbed_density(const LinkField& U, const HolonomyPerturbation& pert) {
    CurvatureField F = clover_field(U);
    CurvatureField G = pert.trivial() ? F : F - pert.form(U);
    return energy_density(G);
}

double site_distance(const LatticeGeometry& geo, int a, int b) {
    auto ca = geo.site_coords(a), cb = geo.site_coords(b);
    double r2 = 0.0;
    for (int d = 0; d < 4; ++d) {
        double dd = ca[d] - cb[d];
        if (d > 0) {
            double L = geo.dims()[d];
            dd -= L * std::round(dd / L);
        }
        r2 += dd * dd;
    }
    return std::sqrt(r2);
}

LinkAlgebraField unit_random_field(const LatticeGeometry& geo, std::uint64_t seed) {
    LinkAlgebraField v(geo);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (auto& a : v.v) a = Alg{gauss(rng), gauss(rng), gauss(rng)};
    double n = std::sqrt(inner_int(v, v));
    for (auto& a : v.v) a *= 1.0 / n;
    return v;
}

} // namespace

std::vector<Peak> concentration_scan(const LinkField& U, const HolonomyPerturbation& pert,
                                     double radius, int max_peaks) {
    const LatticeGeometry& geo = *U.geo;
    std::vector<double> e = perturbed_density(U, pert);
    std::vector<Peak> balls;
    balls.reserve(static_cast<size_t>(geo.n_sites()));
    for (int s = 0; s < geo.n_sites(); ++s) {
        double m = 0.0;
        for (int t : geo.ball_sites(s, radius)) m += e[static_cast<size_t>(t)];
        balls.push_back(Peak{s, m});
    }
    std::sort(balls.begin(), balls.end(),
              [](const Peak& a, const Peak& b) { return a.mass > b.mass; });
    std::vector<Peak> out;
    for (const auto& p : balls) {
        bool overlaps = false;
        for (const auto& q : out)
            if (site_distance(geo, p.site, q.site) <= radius) overlaps = true;
        if (!overlaps) out.push_back(p);
        if (static_cast<int>(out.size()) >= max_peaks) break;
    }
    return out;
}

std::vector<Peak> track_peaks(const std::vector<LinkField>& snapshots,
                              const HolonomyPerturbation& pert, double radius) {
    std::vector<Peak> traj;
    for (const auto& U : snapshots) {
        auto peaks = concentration_scan(U, pert, radius, 4);
        if (peaks.empty()) { traj.push_back(Peak{}); continue; }
        if (traj.empty() || traj.back().site < 0) {
            traj.push_back(peaks.front());
            continue;
        }
        // nearest peak to the previous position
        const LatticeGeometry& geo = *U.geo;
        const Peak* best = &peaks.front();
        double bd = site_distance(geo, peaks.front().site, traj.back().site);
        for (const auto& p : peaks) {
            double d = site_distance(geo, p.site, traj.back().site);
            if (d < bd) { bd = d; best = &p; }
        }
        traj.push_back(*best);
    }
    return traj;
}

BubbleProfile bubble_profile(const LinkField& U, const HolonomyPerturbation& pert,
                             int center, double max_radius) {
    const LatticeGeometry& geo = *U.geo;
    std::vector<double> e = perturbed_density(U, pert);
    BubbleProfile out;
    for (double r = 1.0; r <= max_radius + 1e-9; r += 1.0) {
        double m = 0.0;
        for (int t : geo.ball_sites(center, r)) m += e[static_cast<size_t>(t)];
        out.radius.push_back(r);
        out.cumulative.push_back(m);
    }
    if (out.cumulative.empty()) throw std::invalid_argument("max_radius too small");
    out.plateau = out.cumulative.back();
    out.quantization = out.plateau / (8.0 * M_PI * M_PI);
    return out;
}

ConvergenceFit convergence_fit(const FlowTrace& trace, double tau_lo, double tau_hi) {
    std::vector<double> xs, ys;
    for (const auto& s : trace.samples) {
        if (s.tau < tau_lo || s.tau > tau_hi) continue;
        if (s.fplus_sq <= 0.0) continue;
        xs.push_back(s.tau);
        ys.push_back(std::log(s.fplus_sq));
    }
    if (xs.size() < 3) throw std::invalid_argument("not enough samples in fit window");
    size_t n = xs.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < n; ++i) {
        sx += xs[i]; sy += ys[i]; sxx += xs[i] * xs[i]; sxy += xs[i] * ys[i];
    }
    double denom = n * sxx - sx * sx;
    double slope = (n * sxy - sx * sy) / denom;
    double inter = (sy - slope * sx) / n;
    double ss_res = 0, ss_tot = 0, ymean = sy / n;
    for (size_t i = 0; i < n; ++i) {
        double fit = slope * xs[i] + inter;
        ss_res += (ys[i] - fit) * (ys[i] - fit);
        ss_tot += (ys[i] - ymean) * (ys[i] - ymean);
    }
    ConvergenceFit out;
    out.rate = -slope;
    out.r2 = (ss_tot > 0.0) ? 1.0 - ss_res / ss_tot : 1.0;
    out.decades = (ys.front() - ys.back()) / std::log(10.0);
    return out;
}

double field_distance(const LinkField& a, const LinkField& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.u.size(); ++i) {
        Quat d = a.u[i] - b.u[i];
        s += d.w * d.w + d.x * d.x + d.y * d.y + d.z * d.z;
    }
    return std::sqrt(s);
}

AxiomAudit axiom_audit(const LinkField& U, const HolonomyPerturbation& pert,
                       std::uint64_t seed) {
    const LatticeGeometry& geo = *U.geo;
    AxiomAudit out;
    out.k_sup = pert.form_sup(U);
    out.k_bound = pert.form_bound();

    CurvatureField K = pert.form(U);
    out.k_wedge_k = wedge_int(K, K);

    LinkAlgebraField v = unit_random_field(geo, seed);
    LinkAlgebraField w = unit_random_field(geo, seed + 1);

    // Axiom 2(ii): <K, dK(v)> pairing = int <K ^ dK(v)>
    CurvatureField dKv = pert.dk_apply(U, v);
    out.axiom2_ii = std::abs(wedge_int(K, dKv));

    // Axiom 2(iv): residual of d_A K = -dK(F_{A}); evaluated through dual
    // pairings against a unit 1-form: int <d_A K ^ v> = -int <K ^ d_A v>,
    // int <dK(F) ^ v> = -int <F ^ dK(v)>.
    CurvatureField F = clover_field(U);
    double t1 = -wedge_int(K, dcov1(U, v));
    double t2 = -wedge_int(F, dKv);
    out.axiom2_iv = std::abs(t1 + t2);

    // Hessian symmetry: defect of the exact second-variation operator on a
    // random pair of unit directions
    LinkAlgebraField hv(geo), hw(geo);
    pert.hess_apply(U, v, hv);
    pert.hess_apply(U, w, hw);
    out.hessian_symmetry = std::abs(inner_int(hv, w) - inner_int(hw, v));

    // Bianchi residuals
    CurvatureField G = F - K;
    LinkAlgebraField rp = dcov2_dual(U, G);
    LinkAlgebraField rk = dk2_dual(U, pert, G);
    for (size_t i = 0; i < rp.v.size(); ++i) rp.v[i] -= rk.v[i];
    out.bianchi_perturbed = std::sqrt(inner_int(rp, rp));
    LinkAlgebraField r0 = dcov2_dual(U, F);
    out.bianchi_plain = std::sqrt(inner_int(r0, r0));
    return out;
}

PoincareProbe poincare_probe(const LinkField& U, const HolonomyPerturbation& pert) {
    CurvatureField F = clover_field(U);
    CurvatureField G = pert.trivial() ? F : F - pert.form(U);
    SelfdualSplit sd = selfdual_split(G);
    PoincareProbe out;
    out.fplus_norm = std::sqrt(norm2_int(sd.plus));
    LinkAlgebraField d = dcov2_dual(U, sd.plus);
    LinkAlgebraField dk = dk2_dual(U, pert, sd.plus);
    for (size_t i = 0; i < d.v.size(); ++i) d.v[i] -= dk.v[i];
    out.dfplus_norm = std::sqrt(inner_int(d, d));
    out.ratio = (out.dfplus_norm > 0.0) ? out.fplus_norm / out.dfplus_norm : 0.0;
    return out;
}

} // namespace ymflow
