#pragma once

#include "ymflow/su2.hpp"

#include <vector>

namespace ymflow {

// A closed loop on the lattice: a base site and a sequence of unit steps.
// sign=+1 walks forward along direction `dir`, sign=-1 walks backward
// (traversing the link at the shifted site against its orientation).
struct LoopStep {
    int dir;
    int sign;
};

struct Loop {
    int base = 0;
    std::vector<LoopStep> steps;
    double weight = 1.0; // multiplies the class function (profile weight)
    double sign = 1.0;   // holonomy compensation (+1, or -1 on marked columns)
};

// Exact first/second variation machinery for w = (1/2) Re tr Hol(loop).
// The accessor Acc must provide:
//   Quat link(int site, int dir) const;
//   int shift(int site, int dir, int sgn) const;
template <class Acc>
struct LoopWork {
    struct Pos {
        int site;   // site owning the traversed link
        int dir;
        int sgn;    // traversal orientation
        Quat V;     // factor value: U (forward) or U^dag (backward)
    };
    std::vector<Pos> pos;
    Quat P;     // holonomy (product of factors)
    double w;   // (1/2) Re tr P

    LoopWork(const Acc& acc, const Loop& loop) {
        int s = loop.base;
        pos.reserve(loop.steps.size());
        P = identity_q();
        for (const auto& st : loop.steps) {
            Pos p;
            p.dir = st.dir;
            p.sgn = st.sign;
            if (st.sign > 0) {
                p.site = s;
                p.V = acc.link(s, st.dir);
                s = acc.shift(s, st.dir, 1);
            } else {
                s = acc.shift(s, st.dir, -1);
                p.site = s;
                p.V = dagger(acc.link(s, st.dir));
            }
            P = P * p.V;
            pos.push_back(p);
        }
        w = 0.5 * re_trace(P);
    }

    int n() const { return static_cast<int>(pos.size()); }

    // derivative replacement for factor k under U -> exp(eps xi) U:
    // forward factor U -> xi U ; backward factor U^dag -> -U^dag xi
    Quat replaced(int k, const Alg& xi) const {
        Quat x{0.0, xi};
        if (pos[k].sgn > 0) return x * pos[k].V;
        Quat r = pos[k].V * x;
        r *= -1.0;
        return r;
    }

    Quat prefix(int k) const { // V_0 ... V_{k-1}
        Quat a = identity_q();
        for (int j = 0; j < k; ++j) a = a * pos[j].V;
        return a;
    }
    Quat suffix(int k) const { // V_{k+1} ... V_{n-1}
        Quat b = identity_q();
        for (int j = k + 1; j < n(); ++j) b = b * pos[j].V;
        return b;
    }

    // Insertion pair for position k: delta P (xi at k) = sgn_k * M1 xi M2.
    void insertion(int k, Quat& m1, Quat& m2, int& sgn) const {
        if (pos[k].sgn > 0) {
            m1 = prefix(k);
            m2 = pos[k].V * suffix(k);
            sgn = +1;
        } else {
            m1 = prefix(k) * pos[k].V;
            m2 = suffix(k);
            sgn = -1;
        }
    }

    // gradient of w with respect to the link at position k:
    // dw(xi at k) = <xi, grad_k>_int
    Alg grad(int k) const {
        Quat m1, m2;
        int sgn;
        insertion(k, m1, m2, sgn);
        return (-0.5 * sgn) * proj_ah(m2 * m1);
    }

    // first variation of the holonomy along a tangent field
    // (vat(site, dir) returns the tangent at that link)
    template <class VAt>
    Quat dP(const VAt& vat) const {
        Quat out{0.0, 0.0, 0.0, 0.0};
        for (int k = 0; k < n(); ++k) {
            Quat a = prefix(k);
            Quat r = replaced(k, vat(pos[k].site, pos[k].dir));
            Quat b = suffix(k);
            out += a * (r * b);
        }
        return out;
    }

    // first variation of w along a tangent field
    template <class VAt>
    double dw(const VAt& vat) const {
        return 0.5 * re_trace(dP(vat));
    }

    // directional derivative of grad(k) along a tangent field (exact)
    template <class VAt>
    Alg dgrad(const VAt& vat, int k) const {
        // grad_k = -(sgn_k/2) proj(C_k) with C_k the cyclic product of all
        // factors starting right after the xi slot; differentiate factorwise.
        int start = (pos[k].sgn > 0) ? k : k + 1;
        int nn = n();
        Quat dC{0.0, 0.0, 0.0, 0.0};
        for (int j = 0; j < nn; ++j) {
            Quat prod = identity_q();
            for (int i = 0; i < nn; ++i) {
                int idx = (start + i) % nn;
                if (i == j)
                    prod = prod * replaced(idx, vat(pos[idx].site, pos[idx].dir));
                else
                    prod = prod * pos[idx].V;
            }
            dC += prod;
        }
        double sgn = (pos[k].sgn > 0) ? 1.0 : -1.0;
        return (-0.5 * sgn) * proj_ah(dC);
    }
};

} // namespace ymflow
