#include "ymflow/functionals.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ymflow {

double wilson_action(const LinkField& U) {
    const LatticeGeometry& geo = *U.geo;
    double s = 0.0;
    for (int q = 0; q < geo.n_plaquettes(); ++q) {
        double w = geo.plaquette_weight(q);
        if (w == 0.0) continue;
        s += 2.0 - w * re_trace(U.plaquette(q));
    }
    return s;
}

double total_action(const LinkField& U, const HolonomyPerturbation& pert) {
    return wilson_action(U) + pert.value(U);
}

CurvatureField clover_field(const LinkField& U) {
    const LatticeGeometry& geo = *U.geo;
    CurvatureField F(geo);
    for (int x = 0; x < geo.n_sites(); ++x) {
        for (int p = 0; p < 6; ++p) {
            auto mn = LatticeGeometry::plane_dirs(p);
            int mu = mn[0], nu = mn[1];
            int xmm = geo.shift(x, mu, -1);
            int xmn = geo.shift(x, nu, -1);
            int xmmn = geo.shift(xmm, nu, -1);
            // leaf traversals, all counterclockwise in the (mu, nu) plane,
            // with the weight of the underlying plaquette
            struct LeafDef {
                int base_for_weight;
                LoopStep st[4];
            } leaves[4] = {
                {x, {{mu, +1}, {nu, +1}, {mu, -1}, {nu, -1}}},
                {xmm, {{nu, +1}, {mu, -1}, {nu, -1}, {mu, +1}}},
                {xmmn, {{mu, -1}, {nu, -1}, {mu, +1}, {nu, +1}}},
                {xmn, {{nu, -1}, {mu, +1}, {nu, +1}, {mu, -1}}},
            };
            Alg sum{};
            int count = 0;
            for (const auto& lf : leaves) {
                double w = geo.plaquette_weight(geo.plaquette_index(lf.base_for_weight, p));
                if (w == 0.0) continue;
                Quat hol = identity_q();
                int s = x;
                for (const auto& st : lf.st) {
                    if (st.sign > 0) {
                        hol = hol * U.link(s, st.dir);
                        s = geo.shift(s, st.dir, 1);
                    } else {
                        s = geo.shift(s, st.dir, -1);
                        hol = hol * dagger(U.link(s, st.dir));
                    }
                }
                sum += w * proj_ah(hol);
                ++count;
            }
            F.at(x, p) = (count > 0) ? (1.0 / count) * sum : Alg{};
        }
    }
    return F;
}

namespace {

// n x n clover average at every site, normalized by the leaf area n^2.
// A leaf's weight is the product of the weights of the n^2 plaquettes it
// encloses; leaves touching a zero-weight (seam) plaquette are skipped and
// the average renormalized.
CurvatureField clover_field_n(const LinkField& U, int n) {
    const LatticeGeometry& geo = *U.geo;
    CurvatureField F(geo);
    for (int x = 0; x < geo.n_sites(); ++x) {
        for (int p = 0; p < 6; ++p) {
            auto mn = LatticeGeometry::plane_dirs(p);
            int mu = mn[0], nu = mn[1];
            // four quadrant orientations, all counterclockwise: the step
            // pattern and the (i, j) offsets of the enclosed plaquettes
            struct QuadDef {
                int step_dirs[4];
                int step_signs[4];
                int ilo, jlo;
            } quads[4] = {
                {{mu, nu, mu, nu}, {+1, +1, -1, -1}, 0, 0},
                {{nu, mu, nu, mu}, {+1, -1, -1, +1}, -n, 0},
                {{mu, nu, mu, nu}, {-1, -1, +1, +1}, -n, -n},
                {{nu, mu, nu, mu}, {-1, +1, +1, -1}, 0, -n},
            };
            Alg sum{};
            int count = 0;
            for (const auto& qd : quads) {
                double w = 1.0;
                for (int i = 0; i < n && w != 0.0; ++i)
                    for (int j = 0; j < n && w != 0.0; ++j) {
                        int b = geo.shift(geo.shift(x, mu, qd.ilo + i), nu, qd.jlo + j);
                        w *= geo.plaquette_weight(geo.plaquette_index(b, p));
                    }
                if (w == 0.0) continue;
                Quat hol = identity_q();
                int s = x;
                for (int leg = 0; leg < 4; ++leg) {
                    for (int rep = 0; rep < n; ++rep) {
                        if (qd.step_signs[leg] > 0) {
                            hol = hol * U.link(s, qd.step_dirs[leg]);
                            s = geo.shift(s, qd.step_dirs[leg], 1);
                        } else {
                            s = geo.shift(s, qd.step_dirs[leg], -1);
                            hol = hol * dagger(U.link(s, qd.step_dirs[leg]));
                        }
                    }
                }
                sum += w * proj_ah(hol);
                ++count;
            }
            F.at(x, p) = (count > 0) ? (1.0 / (count * n * n)) * sum : Alg{};
        }
    }
    return F;
}

} // namespace

CurvatureField clover_field_improved(const LinkField& U) {
    CurvatureField c1 = clover_field_n(U, 1);
    CurvatureField c2 = clover_field_n(U, 2);
    return (4.0 / 3.0) * c1 - (1.0 / 3.0) * c2;
}

LinkAlgebraField force(const LinkField& U, const HolonomyPerturbation& pert) {
    const LatticeGeometry& geo = *U.geo;
    LinkAlgebraField g(geo);
    for (int x = 0; x < geo.n_sites(); ++x) {
        for (int mu = 0; mu < 4; ++mu) {
            Alg acc{};
            for (int nu = 0; nu < 4; ++nu) {
                if (nu == mu) continue;
                int plane = (mu < nu) ? LatticeGeometry::plane_index(mu, nu)
                                      : LatticeGeometry::plane_index(nu, mu);
                int x_mu = geo.shift(x, mu, 1);
                int x_nu = geo.shift(x, nu, 1);
                double w_up = geo.plaquette_weight(geo.plaquette_index(x, plane));
                if (w_up != 0.0) {
                    // P = U_mu(x) U_nu(x+mu) U_mu(x+nu)^ U_nu(x)^
                    Quat P = U.link(x, mu) * U.link(x_mu, nu) *
                             dagger(U.link(x_nu, mu)) * dagger(U.link(x, nu));
                    acc += w_up * proj_ah(P);
                }
                int x_dn = geo.shift(x, nu, -1);
                double w_dn = geo.plaquette_weight(geo.plaquette_index(x_dn, plane));
                if (w_dn != 0.0) {
                    int x_dn_mu = geo.shift(x_dn, mu, 1);
                    // R U_mu(x)^ with R = U_nu(x-nu)^ U_mu(x-nu) U_nu(x-nu+mu)
                    Quat R = dagger(U.link(x_dn, nu)) * U.link(x_dn, mu) * U.link(x_dn_mu, nu);
                    acc -= w_dn * proj_ah(R * dagger(U.link(x, mu)));
                }
            }
            g.at(x, mu) = acc;
        }
    }
    pert.add_gradient(U, g);
    for (int l = 0; l < geo.n_links(); ++l)
        if (geo.link_frozen(l)) g.v[static_cast<size_t>(l)] = Alg{};
    for (int l = 0; l < geo.n_links(); ++l) {
        const Alg& a = g.v[static_cast<size_t>(l)];
        if (!std::isfinite(a.x) || !std::isfinite(a.y) || !std::isfinite(a.z))
            throw std::runtime_error("non-finite force at link " + std::to_string(l) +
                                     " (site " + std::to_string(geo.link_site(l)) + ")");
    }
    return g;
}

double topological_charge(const CurvatureField& F) {
    // Q = (1/8 pi^2) sum <F, *F>_int; sign fixed so the self-dual seed
    // orientation carries positive charge.
    return wedge_int(F, F) / (8.0 * M_PI * M_PI);
}

double kappa_charge(const CurvatureField& F) { return 2.0 * topological_charge(F); }

PerturbedEnergies perturbed_energies(const LinkField& U, const HolonomyPerturbation& pert) {
    PerturbedEnergies out{};
    out.action = wilson_action(U);
    out.ym_k = out.action + pert.value(U);
    CurvatureField F = clover_field(U);
    out.q_charge = topological_charge(F);
    CurvatureField G = pert.trivial() ? F : F - pert.form(U);
    SelfdualSplit sd = selfdual_split(G);
    out.fplus_sq = norm2_int(sd.plus);
    double fminus_sq = norm2_int(sd.minus);
    out.cs_estimate = 0.5 * (fminus_sq - out.fplus_sq);
    return out;
}

double relative_chern_simons(const LinkField& interp, const HolonomyPerturbation& pert) {
    CurvatureField F = clover_field(interp);
    CurvatureField G = pert.trivial() ? F : F - pert.form(interp);
    // -(1/2) int <G ^ G> in reported normalization (internal / 2 pi^2)
    return -0.5 * wedge_int(G, G) / (2.0 * M_PI * M_PI);
}

LinkAlgebraField dcov0(const LinkField& U, const std::vector<Alg>& phi, bool mask_frozen) {
    const LatticeGeometry& geo = *U.geo;
    LinkAlgebraField out(geo);
    for (int x = 0; x < geo.n_sites(); ++x)
        for (int mu = 0; mu < 4; ++mu) {
            if (mask_frozen && geo.link_frozen(x, mu)) continue;
            int y = geo.shift(x, mu, 1);
            out.at(x, mu) =
                adjoint(U.link(x, mu), phi[static_cast<size_t>(y)]) - phi[static_cast<size_t>(x)];
        }
    return out;
}

std::vector<Alg> dcov0_adjoint(const LinkField& U, const LinkAlgebraField& v,
                               bool mask_frozen) {
    const LatticeGeometry& geo = *U.geo;
    std::vector<Alg> out(static_cast<size_t>(geo.n_sites()));
    for (int x = 0; x < geo.n_sites(); ++x)
        for (int mu = 0; mu < 4; ++mu) {
            if (mask_frozen && geo.link_frozen(x, mu)) continue;
            int y = geo.shift(x, mu, 1);
            const Alg& vl = v.at(x, mu);
            out[static_cast<size_t>(y)] += adjoint(dagger(U.link(x, mu)), vl);
            out[static_cast<size_t>(x)] -= vl;
        }
    return out;
}

CurvatureField dcov1(const LinkField& U, const LinkAlgebraField& v) {
    const LatticeGeometry& geo = *U.geo;
    CurvatureField out(geo);
    for (int x = 0; x < geo.n_sites(); ++x)
        for (int p = 0; p < 6; ++p) {
            auto mn = LatticeGeometry::plane_dirs(p);
            int mu = mn[0], nu = mn[1];
            Alg dmu_vnu = adjoint(U.link(x, mu), v.at(geo.shift(x, mu, 1), nu)) - v.at(x, nu);
            Alg dnu_vmu = adjoint(U.link(x, nu), v.at(geo.shift(x, nu, 1), mu)) - v.at(x, mu);
            out.at(x, p) = dmu_vnu - dnu_vmu;
        }
    return out;
}

namespace {
// triple ordering (0,1,2),(0,1,3),(0,2,3),(1,2,3)
constexpr int kTriples[4][3] = {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}};
} // namespace

LinkAlgebraField dcov2_dual(const LinkField& U, const CurvatureField& W) {
    const LatticeGeometry& geo = *U.geo;
    LinkAlgebraField out(geo);
    for (int x = 0; x < geo.n_sites(); ++x) {
        Alg T[4]; // 3-form components per triple
        for (int t = 0; t < 4; ++t) {
            int mu = kTriples[t][0], nu = kTriples[t][1], rh = kTriples[t][2];
            auto D = [&](int d, int a, int b) {
                int p = LatticeGeometry::plane_index(a, b);
                return adjoint(U.link(x, d), W.at(geo.shift(x, d, 1), p)) - W.at(x, p);
            };
            T[t] = D(mu, nu, rh) - D(nu, mu, rh) + D(rh, mu, nu);
        }
        // dual 1-form: <T ^ v> = <d1_3, v_3> - ... -> d1 = (-T_123, T_023, -T_013, T_012)
        out.at(x, 0) = -1.0 * T[3];
        out.at(x, 1) = T[2];
        out.at(x, 2) = -1.0 * T[1];
        out.at(x, 3) = T[0];
    }
    return out;
}

LinkAlgebraField dk2_dual(const LinkField& U, const HolonomyPerturbation& pert,
                          const CurvatureField& W) {
    const LatticeGeometry& geo = *U.geo;
    if (pert.trivial()) return LinkAlgebraField(geo);
    CurvatureField sW = hodge_star(W);
    int p0 = pert.plane_index();
    std::vector<Alg> Z(static_cast<size_t>(geo.n_sites()));
    for (int x = 0; x < geo.n_sites(); ++x) Z[static_cast<size_t>(x)] = -1.0 * sW.at(x, p0);
    return pert.dk_adjoint(U, Z);
}

} // namespace ymflow
