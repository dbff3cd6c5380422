#include "ymflow/perturbation.hpp"

#include <cmath>
#include <stdexcept>

namespace ymflow {

std::vector<double> default_profile(const LatticeGeometry& geo) {
    int L0 = geo.dims()[0];
    int fd = geo.frozen_depth();
    int lo = (geo.low_mode() == BoundaryMode::Frozen) ? fd : 0;
    int hi = (geo.high_mode() == BoundaryMode::Frozen) ? L0 - fd : L0;
    std::vector<double> f(static_cast<size_t>(L0), 0.0);
    int n = hi - lo;
    for (int s = lo; s < hi; ++s) {
        double x = (s - lo + 0.5) / n;
        f[static_cast<size_t>(s)] = std::sin(M_PI * x) * std::sin(M_PI * x);
    }
    return f;
}

HolonomyPerturbation::HolonomyPerturbation(const LatticeGeometry& geo,
                                           const PerturbationSpec& spec)
    : geo_(&geo), spec_(spec) {
    if (spec_.mu0 < 1 || spec_.nu0 > 3 || spec_.mu0 >= spec_.nu0)
        throw std::invalid_argument("perturbation plane must be spatial with mu0 < nu0");
    if (spec_.beta < 0.0) throw std::invalid_argument("beta must be >= 0");
    profile_ = spec_.profile.empty() ? default_profile(geo) : spec_.profile;
    if (static_cast<int>(profile_.size()) != geo.dims()[0])
        throw std::invalid_argument("profile length must equal the axis extent");
    // the weight profile must be constant (zero) on the frozen end slabs
    for (int s = 0; s < geo.dims()[0]; ++s) {
        bool fr_lo = geo.low_mode() == BoundaryMode::Frozen && s < geo.frozen_depth();
        bool fr_hi =
            geo.high_mode() == BoundaryMode::Frozen && s >= geo.dims()[0] - geo.frozen_depth();
        if ((fr_lo || fr_hi) && profile_[static_cast<size_t>(s)] != 0.0)
            throw std::invalid_argument("profile must vanish on the frozen end region");
    }
    if (spec_.beta == 0.0) return;
    for (int site = 0; site < geo.n_sites(); ++site) {
        double f = profile_[static_cast<size_t>(geo.site_coords(site)[0])];
        if (f == 0.0) continue;
        Loop lp;
        lp.base = site;
        lp.steps = {LoopStep{spec_.mu0, +1}, LoopStep{spec_.nu0, +1},
                    LoopStep{spec_.mu0, -1}, LoopStep{spec_.nu0, -1}};
        lp.weight = f;
        // marked columns flip the plaquette holonomy trace; compensate so the
        // class function is gauge invariant and vanishes at flat connections
        lp.sign = geo.plaquette_weight(
            geo.plaquette_index(site, LatticeGeometry::plane_index(spec_.mu0, spec_.nu0)));
        loops_.push_back(lp);
    }
}

int HolonomyPerturbation::plane_index() const {
    return LatticeGeometry::plane_index(spec_.mu0, spec_.nu0);
}

double HolonomyPerturbation::value(const LinkField& U) const {
    if (trivial()) return 0.0;
    Acc acc{&U};
    double total = 0.0;
    for (const auto& lp : loops_) {
        LoopWork<Acc> work(acc, lp);
        double d = lp.sign * work.w - spec_.w0;
        total += lp.weight * spec_.beta * d * d;
    }
    return total;
}

void HolonomyPerturbation::add_gradient(const LinkField& U, LinkAlgebraField& out) const {
    if (trivial()) return;
    Acc acc{&U};
    for (const auto& lp : loops_) {
        LoopWork<Acc> work(acc, lp);
        double c1 = lp.weight * 2.0 * spec_.beta * lp.sign * (lp.sign * work.w - spec_.w0);
        for (int k = 0; k < work.n(); ++k) {
            Alg g = work.grad(k);
            out.at(work.pos[static_cast<size_t>(k)].site,
                   work.pos[static_cast<size_t>(k)].dir) += c1 * g;
        }
    }
}

CurvatureField HolonomyPerturbation::form(const LinkField& U) const {
    CurvatureField K(*geo_);
    if (trivial()) return K;
    Acc acc{&U};
    int p = plane_index();
    for (const auto& lp : loops_) {
        LoopWork<Acc> work(acc, lp);
        double c1 = lp.weight * 2.0 * spec_.beta * lp.sign * (lp.sign * work.w - spec_.w0);
        K.at(lp.base, p) += (-0.5 * c1) * proj_ah(work.P);
    }
    return K;
}

CurvatureField HolonomyPerturbation::dk_apply(const LinkField& U,
                                              const LinkAlgebraField& v) const {
    CurvatureField out(*geo_);
    if (trivial()) return out;
    Acc acc{&U};
    int p = plane_index();
    auto vat = [&](int site, int dir) { return v.at(site, dir); };
    for (const auto& lp : loops_) {
        LoopWork<Acc> work(acc, lp);
        double c1 = lp.weight * 2.0 * spec_.beta * lp.sign * (lp.sign * work.w - spec_.w0);
        double c2 = lp.weight * 2.0 * spec_.beta;
        double dw = work.dw(vat);
        Quat dP = work.dP(vat);
        out.at(lp.base, p) +=
            (-0.5) * (c2 * dw * proj_ah(work.P) + c1 * proj_ah(dP));
    }
    return out;
}

LinkAlgebraField HolonomyPerturbation::dk_adjoint(const LinkField& U,
                                                  const std::vector<Alg>& Z) const {
    LinkAlgebraField rho(*geo_);
    if (trivial()) return rho;
    Acc acc{&U};
    for (const auto& lp : loops_) {
        const Alg& z = Z[static_cast<size_t>(lp.base)];
        LoopWork<Acc> work(acc, lp);
        double c1 = lp.weight * 2.0 * spec_.beta * lp.sign * (lp.sign * work.w - spec_.w0);
        double c2 = lp.weight * 2.0 * spec_.beta;
        // term 1: <Z, -c2/2 dw(v) proj P> = sum_k <v_k, -c2/2 <Z, projP>_int g_k>
        double zp = inner_int(z, proj_ah(work.P));
        // term 2: <Z, -c1/2 proj(dP(v))>; adjoint of xi -> proj(M1 xi M2)
        for (int k = 0; k < work.n(); ++k) {
            Alg g = work.grad(k);
            Alg acc_a = (-0.5 * c2 * zp) * g;
            Quat m1, m2;
            int sgn;
            work.insertion(k, m1, m2, sgn);
            acc_a += (-0.5 * c1 * sgn) * proj_ah((m2 * Quat{0.0, z}) * m1);
            rho.at(work.pos[static_cast<size_t>(k)].site,
                   work.pos[static_cast<size_t>(k)].dir) += acc_a;
        }
    }
    return rho;
}

void HolonomyPerturbation::hess_apply(const LinkField& U, const LinkAlgebraField& v,
                                      LinkAlgebraField& out) const {
    if (trivial()) return;
    Acc acc{&U};
    auto vat = [&](int site, int dir) { return v.at(site, dir); };
    for (const auto& lp : loops_) {
        LoopWork<Acc> work(acc, lp);
        double c1 = lp.weight * 2.0 * spec_.beta * lp.sign * (lp.sign * work.w - spec_.w0);
        double c2 = lp.weight * 2.0 * spec_.beta;
        double dw = work.dw(vat);
        for (int k = 0; k < work.n(); ++k) {
            Alg g = work.grad(k);
            Alg dg = work.dgrad(vat, k);
            // dgrad is the mixed left-trivialized second derivative; the
            // symmetric Hessian needs the correction -1/2 <g,[.,.]>,
            // which is cross(v_k, g) in vector coordinates
            const auto& lr = work.pos[static_cast<size_t>(k)];
            Alg corr = cross(vat(lr.site, lr.dir), g);
            out.at(lr.site, lr.dir) += c2 * dw * g + c1 * (dg + corr);
        }
    }
}

double HolonomyPerturbation::form_sup(const LinkField& U) const {
    CurvatureField K = form(U);
    double sup = 0.0;
    for (const auto& a : K.f) sup = std::max(sup, std::sqrt(dot(a, a)));
    return sup;
}

} // namespace ymflow
