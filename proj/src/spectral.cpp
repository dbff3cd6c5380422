#include "ymflow/spectral.hpp"

#include "ymflow/loops.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ymflow {

SliceGeometry::SliceGeometry(std::array<int, 3> dims, std::array<int, 3> twist)
    : dims_(dims), twist_(twist) {
    for (int d : dims_)
        if (d < 4) throw std::invalid_argument("dimension too small (need >= 4)");
    for (int b : twist_)
        if (b != 0 && b != 1) throw std::invalid_argument("twist bits must be 0 or 1");
    n_sites_ = dims_[0] * dims_[1] * dims_[2];
}

int SliceGeometry::site_index(const std::array<int, 3>& c) const {
    int idx = 0;
    for (int d = 0; d < 3; ++d) idx = idx * dims_[d] + c[d];
    return idx;
}

std::array<int, 3> SliceGeometry::site_coords(int s) const {
    std::array<int, 3> c;
    for (int d = 2; d >= 0; --d) {
        c[d] = s % dims_[d];
        s /= dims_[d];
    }
    return c;
}

int SliceGeometry::shift(int site, int dir, int step) const {
    auto c = site_coords(site);
    int v = (c[dir] + step) % dims_[dir];
    if (v < 0) v += dims_[dir];
    c[dir] = v;
    return site_index(c);
}

SliceLinks::SliceLinks(const SliceGeometry& g, const FlatConnectionSpec& spec) : geo(&g) {
    // verify the twist commutation pattern
    const int pairs[3][2] = {{0, 1}, {0, 2}, {1, 2}};
    for (int k = 0; k < 3; ++k) {
        const Quat& a = spec.h[pairs[k][0]];
        const Quat& b = spec.h[pairs[k][1]];
        double sgn = g.twist()[k] ? -1.0 : 1.0;
        Quat r = (a * b) - sgn * (b * a);
        if (quat_norm(Quat{r.w, r.x, r.y, r.z}) > 1e-12)
            throw std::invalid_argument(
                "slice holonomies do not satisfy the twist commutation pattern");
    }
    u.assign(static_cast<size_t>(3 * g.n_sites()), identity_q());
    for (int s = 0; s < g.n_sites(); ++s) {
        auto c = g.site_coords(s);
        for (int d = 0; d < 3; ++d)
            if (c[d] == g.dims()[d] - 1) u[static_cast<size_t>(3 * s + d)] = spec.h[d];
    }
}

namespace {

struct SliceAcc {
    const SliceLinks* L;
    Quat link(int site, int dir) const { return L->link(site, dir); }
    int shift(int site, int dir, int sgn) const { return L->shift(site, dir, sgn); }
};

std::vector<Loop> build_slice_loops(const SliceGeometry& geo, const SlicePerturbationSpec& p) {
    std::vector<Loop> loops;
    if (p.beta == 0.0) return loops;
    if (p.plaquette_loops)
        for (int s = 0; s < geo.n_sites(); ++s) {
            Loop lp;
            lp.base = s;
            lp.steps = {LoopStep{0, +1}, LoopStep{1, +1}, LoopStep{0, -1}, LoopStep{1, -1}};
            // compensate the holonomy flip on the marked corner column of the
            // (0,1) plane when that twist bit is set
            auto c = geo.site_coords(s);
            if (geo.twist()[0] && c[0] == geo.dims()[0] - 1 && c[1] == geo.dims()[1] - 1)
                lp.sign = -1.0;
            loops.push_back(lp);
        }
    if (p.winding_loops) {
        // one straight winding loop per line, in each of the two plane dirs
        for (int dir = 0; dir < 2; ++dir)
            for (int s = 0; s < geo.n_sites(); ++s) {
                if (geo.site_coords(s)[dir] != 0) continue; // one base per line
                Loop lp;
                lp.base = s;
                lp.steps.assign(static_cast<size_t>(geo.dims()[dir]), LoopStep{dir, +1});
                loops.push_back(lp);
            }
    }
    return loops;
}

// covariant forward difference of a site field along dir
Alg dphi(const SliceLinks& L, const std::vector<Alg>& phi, int s, int d) {
    return adjoint(L.link(s, d), phi[static_cast<size_t>(L.shift(s, d, 1))]) -
           phi[static_cast<size_t>(s)];
}

// curl(v)_k = (d_a v)_{ij} with (k,i,j) cyclic
void curl_apply(const SliceLinks& L, const std::vector<Alg>& v, std::vector<Alg>& out) {
    const SliceGeometry& g = *L.geo;
    const int cyc[3][2] = {{1, 2}, {2, 0}, {0, 1}};
    out.assign(v.size(), Alg{});
    for (int s = 0; s < g.n_sites(); ++s)
        for (int k = 0; k < 3; ++k) {
            int i = cyc[k][0], j = cyc[k][1];
            Alg di_vj = adjoint(L.link(s, i), v[static_cast<size_t>(3 * g.shift(s, i, 1) + j)]) -
                        v[static_cast<size_t>(3 * s + j)];
            Alg dj_vi = adjoint(L.link(s, j), v[static_cast<size_t>(3 * g.shift(s, j, 1) + i)]) -
                        v[static_cast<size_t>(3 * s + i)];
            out[static_cast<size_t>(3 * s + k)] = di_vj - dj_vi;
        }
}

// exact adjoint of curl_apply
void curl_adjoint_apply(const SliceLinks& L, const std::vector<Alg>& y, std::vector<Alg>& out) {
    const SliceGeometry& g = *L.geo;
    const int cyc[3][2] = {{1, 2}, {2, 0}, {0, 1}};
    out.assign(y.size(), Alg{});
    for (int s = 0; s < g.n_sites(); ++s)
        for (int k = 0; k < 3; ++k) {
            const Alg& yk = y[static_cast<size_t>(3 * s + k)];
            int i = cyc[k][0], j = cyc[k][1];
            // from + Ad(U_i(s)) v_j(s+i):
            out[static_cast<size_t>(3 * g.shift(s, i, 1) + j)] +=
                adjoint(dagger(L.link(s, i)), yk);
            // from - v_j(s):
            out[static_cast<size_t>(3 * s + j)] -= yk;
            // from - Ad(U_j(s)) v_i(s+j):
            out[static_cast<size_t>(3 * g.shift(s, j, 1) + i)] -=
                adjoint(dagger(L.link(s, j)), yk);
            // from + v_i(s):
            out[static_cast<size_t>(3 * s + i)] += yk;
        }
}

} // namespace

SlicePair extended_hessian_apply(const SliceLinks& links, const SlicePerturbationSpec& pert,
                                 const SlicePair& x) {
    const SliceGeometry& g = *links.geo;
    int n = g.n_sites();
    SlicePair y(n);

    // symmetrized covariant curl
    std::vector<Alg> c1, c2;
    curl_apply(links, x.v, c1);
    curl_adjoint_apply(links, x.v, c2);
    for (size_t i = 0; i < y.v.size(); ++i) y.v[i] = 0.5 * (c1[i] + c2[i]);

    // exact Hessian of the slice holonomy function
    if (pert.beta != 0.0) {
        SliceAcc acc{&links};
        auto vat = [&](int site, int dir) { return x.v[static_cast<size_t>(3 * site + dir)]; };
        for (const auto& lp : build_slice_loops(g, pert)) {
            LoopWork<SliceAcc> work(acc, lp);
            double c1c = 2.0 * pert.beta * lp.sign * (lp.sign * work.w - pert.w0);
            double c2c = 2.0 * pert.beta;
            double dw = work.dw(vat);
            for (int k = 0; k < work.n(); ++k) {
                Alg gk = work.grad(k);
                Alg dgk = work.dgrad(vat, k);
                // dgrad is the mixed second derivative; cross(v_k, g) makes
                // the loop Hessian exactly symmetric
                const auto& lr = work.pos[static_cast<size_t>(k)];
                Alg corr = cross(vat(lr.site, lr.dir), gk);
                y.v[static_cast<size_t>(3 * lr.site + lr.dir)] -=
                    c2c * dw * gk + c1c * (dgk + corr);
            }
        }
    }

    // -d_a phi  and  -d_a^* v
    for (int s = 0; s < n; ++s) {
        for (int d = 0; d < 3; ++d) {
            y.v[static_cast<size_t>(3 * s + d)] -= dphi(links, x.phi, s, d);
            // adjoint accumulation of -d_a^* v:
            // (d^* v)(x) = sum_d Ad(U_d(x-d)^-1) v_d(x-d) - v_d(x)
            int sm = g.shift(s, d, -1);
            y.phi[static_cast<size_t>(s)] -=
                adjoint(dagger(links.link(sm, d)), x.v[static_cast<size_t>(3 * sm + d)]) -
                x.v[static_cast<size_t>(3 * s + d)];
        }
    }
    return y;
}

SpectrumReport smallest_eigenvalues(const SliceLinks& links,
                                    const SlicePerturbationSpec& pert, int k, double tol) {
    const SliceGeometry& g = *links.geo;
    int n_sites = g.n_sites();
    int dim = 3 * (3 * n_sites + n_sites); // 3 algebra coords per form component
    Eigen::MatrixXd H(dim, dim);

    auto pack = [&](const SlicePair& p, Eigen::VectorXd& col) {
        int idx = 0;
        for (const auto& a : p.v) {
            col[idx++] = a.x;
            col[idx++] = a.y;
            col[idx++] = a.z;
        }
        for (const auto& a : p.phi) {
            col[idx++] = a.x;
            col[idx++] = a.y;
            col[idx++] = a.z;
        }
    };

    SlicePair basis(n_sites);
    Eigen::VectorXd col(dim);
    for (int j = 0; j < dim; ++j) {
        // unit basis vector j
        for (auto& a : basis.v) a = Alg{};
        for (auto& a : basis.phi) a = Alg{};
        int comp = j % 3;
        int slot = j / 3;
        double* tgt;
        if (slot < 3 * n_sites)
            tgt = comp == 0 ? &basis.v[static_cast<size_t>(slot)].x
                            : (comp == 1 ? &basis.v[static_cast<size_t>(slot)].y
                                         : &basis.v[static_cast<size_t>(slot)].z);
        else {
            int ss = slot - 3 * n_sites;
            tgt = comp == 0 ? &basis.phi[static_cast<size_t>(ss)].x
                            : (comp == 1 ? &basis.phi[static_cast<size_t>(ss)].y
                                         : &basis.phi[static_cast<size_t>(ss)].z);
        }
        *tgt = 1.0;
        SlicePair out = extended_hessian_apply(links, pert, basis);
        pack(out, col);
        H.col(j) = col;
    }

    // the operator is self-adjoint; symmetrize away roundoff
    Eigen::MatrixXd Hs = 0.5 * (H + H.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(Hs);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("eigensolver failed to converge");
    Eigen::VectorXd ev = solver.eigenvalues();

    std::vector<double> all(ev.data(), ev.data() + ev.size());
    std::sort(all.begin(), all.end(),
              [](double a, double b) { return std::abs(a) < std::abs(b); });

    SpectrumReport rep;
    rep.gap = std::abs(all.front());
    rep.acyclic = rep.gap > tol;
    for (double lam : all) {
        if (static_cast<int>(rep.eigenvalues.size()) < k) rep.eigenvalues.push_back(lam);
        if (std::abs(lam) < tol) ++rep.n_zero_modes;
    }
    // residual of the reported pairs against the symmetrized matrix
    double worst = 0.0;
    const auto& vecs = solver.eigenvectors();
    Eigen::VectorXd evs = solver.eigenvalues();
    for (int j = 0; j < dim; ++j) {
        bool reported = false;
        for (double lam : rep.eigenvalues)
            if (std::abs(lam - evs[j]) < 1e-14) reported = true;
        if (!reported) continue;
        double r = (Hs * vecs.col(j) - evs[j] * vecs.col(j)).norm();
        worst = std::max(worst, r);
    }
    rep.max_residual = worst;
    return rep;
}

} // namespace ymflow
