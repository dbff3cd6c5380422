#include "ymflow/lattice.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ymflow {

LatticeGeometry::LatticeGeometry(std::array<int, 4> dims, BoundaryMode low,
                                 BoundaryMode high, int frozen_depth,
                                 std::array<int, 3> twist)
    : dims_(dims), low_(low), high_(high), frozen_depth_(frozen_depth), twist_(twist) {
    for (int d = 0; d < 4; ++d)
        if (dims_[d] < 4)
            throw std::invalid_argument("dimension too small (need >= 4 in every direction)");
    for (int b : twist_)
        if (b != 0 && b != 1) throw std::invalid_argument("twist bits must be 0 or 1");
    bool any_frozen = (low_ == BoundaryMode::Frozen) || (high_ == BoundaryMode::Frozen);
    if (any_frozen && frozen_depth_ < 1)
        throw std::invalid_argument("frozen boundary requires frozen_depth >= 1");
    if (frozen_depth_ < 0 || 2 * frozen_depth_ >= dims_[0])
        throw std::invalid_argument("frozen_depth too large for axis extent");

    n_sites_ = dims_[0] * dims_[1] * dims_[2] * dims_[3];

    frozen_site_.assign(n_sites_, 0);
    for (int s = 0; s < n_sites_; ++s) {
        int a = site_coords(s)[0];
        bool fr = false;
        if (low_ == BoundaryMode::Frozen && a < frozen_depth_) fr = true;
        if (high_ == BoundaryMode::Frozen && a >= dims_[0] - frozen_depth_) fr = true;
        frozen_site_[s] = fr ? 1 : 0;
    }

    weight_.assign(6 * n_sites_, 1.0);
    for (int s = 0; s < n_sites_; ++s) {
        auto c = site_coords(s);
        for (int p = 0; p < 6; ++p) {
            auto mn = plane_dirs(p);
            double w = 1.0;
            // seam plaquettes: the axis is an open interval, so plaquettes
            // that wrap around direction 0 are excluded from all functionals
            if (mn[0] == 0 && c[0] == dims_[0] - 1) w = 0.0;
            // marked twisted column: one plaquette per periodic 2-torus
            if (mn[0] >= 1) {
                int bit = twist_bit(mn[0], mn[1]);
                if (bit && c[mn[0]] == dims_[mn[0]] - 1 && c[mn[1]] == dims_[mn[1]] - 1)
                    w = -1.0;
            }
            weight_[6 * s + p] = w;
        }
    }
}

int LatticeGeometry::twist_bit(int mu, int nu) const {
    if (mu == 1 && nu == 2) return twist_[0];
    if (mu == 1 && nu == 3) return twist_[1];
    if (mu == 2 && nu == 3) return twist_[2];
    throw std::invalid_argument("twist_bit: plane must be spatial with mu < nu");
}

int LatticeGeometry::site_index(const std::array<int, 4>& c) const {
    int idx = 0;
    for (int d = 0; d < 4; ++d) {
        if (c[d] < 0 || c[d] >= dims_[d]) throw std::out_of_range("site coordinate out of range");
        idx = idx * dims_[d] + c[d];
    }
    return idx;
}

std::array<int, 4> LatticeGeometry::site_coords(int s) const {
    std::array<int, 4> c;
    for (int d = 3; d >= 0; --d) {
        c[d] = s % dims_[d];
        s /= dims_[d];
    }
    return c;
}

int LatticeGeometry::shift(int site, int dir, int step) const {
    auto c = site_coords(site);
    int v = c[dir] + step;
    v %= dims_[dir];
    if (v < 0) v += dims_[dir];
    c[dir] = v;
    return site_index(c);
}

std::array<int, 2> LatticeGeometry::plane_dirs(int p) {
    switch (p) {
        case 0: return {0, 1};
        case 1: return {0, 2};
        case 2: return {0, 3};
        case 3: return {1, 2};
        case 4: return {1, 3};
        case 5: return {2, 3};
    }
    throw std::out_of_range("plane index out of range");
}

int LatticeGeometry::plane_index(int mu, int nu) {
    if (mu == 0) return nu - 1;
    if (mu == 1) return nu + 1;
    if (mu == 2 && nu == 3) return 5;
    throw std::invalid_argument("plane_index: need 0 <= mu < nu <= 3");
}

std::array<LinkRef, 4> LatticeGeometry::plaquette_links(int q) const {
    int s = plaquette_site(q);
    auto mn = plane_dirs(plaquette_plane(q));
    int mu = mn[0], nu = mn[1];
    int s_mu = shift(s, mu, 1);
    int s_nu = shift(s, nu, 1);
    return {LinkRef{s, mu, +1}, LinkRef{s_mu, nu, +1}, LinkRef{s_nu, mu, -1},
            LinkRef{s, nu, -1}};
}

std::array<int, 6> LatticeGeometry::plaquettes_of_link(int l) const {
    int s = link_site(l);
    int mu = link_dir(l);
    std::array<int, 6> out;
    int k = 0;
    for (int nu = 0; nu < 4; ++nu) {
        if (nu == mu) continue;
        int p = (mu < nu) ? plane_index(mu, nu) : plane_index(nu, mu);
        out[k++] = plaquette_index(s, p);
        out[k++] = plaquette_index(shift(s, nu, -1), p);
    }
    return out;
}

std::vector<int> LatticeGeometry::ball_sites(int center, double radius) const {
    if (radius < 1.0) throw std::invalid_argument("ball radius must be >= 1");
    auto c0 = site_coords(center);
    int r = static_cast<int>(std::floor(radius));
    std::vector<int> out;
    std::array<int, 4> d{};
    for (d[0] = -r; d[0] <= r; ++d[0]) {
        int a = c0[0] + d[0];
        if (a < 0 || a >= dims_[0]) continue; // axis does not wrap
        for (d[1] = -r; d[1] <= r; ++d[1])
            for (d[2] = -r; d[2] <= r; ++d[2])
                for (d[3] = -r; d[3] <= r; ++d[3]) {
                    double rr = 0.0;
                    bool dup = false;
                    for (int k = 0; k < 4; ++k) {
                        double dk = d[k];
                        if (k > 0 && 2 * std::abs(d[k]) > dims_[k]) dup = true;
                        if (k > 0 && 2 * std::abs(d[k]) == dims_[k] && d[k] < 0) dup = true;
                        rr += dk * dk;
                    }
                    if (dup) continue; // beyond the minimal periodic image
                    if (rr > radius * radius + 1e-12) continue;
                    std::array<int, 4> c;
                    c[0] = a;
                    for (int k = 1; k < 4; ++k) {
                        int v = (c0[k] + d[k]) % dims_[k];
                        if (v < 0) v += dims_[k];
                        c[k] = v;
                    }
                    out.push_back(site_index(c));
                }
    }
    return out;
}

int LatticeGeometry::n_marked_plaquettes() const {
    int n = 0;
    for (int q = 0; q < n_plaquettes(); ++q)
        if (plaquette_marked(q)) ++n;
    return n;
}

} // namespace ymflow
