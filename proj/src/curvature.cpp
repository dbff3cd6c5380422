#include "ymflow/curvature.hpp"

#include <stdexcept>

namespace ymflow {

CurvatureField hodge_star(const CurvatureField& F) {
    CurvatureField out(*F.geo);
    int n = F.geo->n_sites();
    for (int s = 0; s < n; ++s) {
        out.at(s, 0) = F.at(s, 5);          // (*F)_01 = F_23
        out.at(s, 1) = -1.0 * F.at(s, 4);   // (*F)_02 = -F_13
        out.at(s, 2) = F.at(s, 3);          // (*F)_03 = F_12
        out.at(s, 3) = F.at(s, 2);          // (*F)_12 = F_03
        out.at(s, 4) = -1.0 * F.at(s, 1);   // (*F)_13 = -F_02
        out.at(s, 5) = F.at(s, 0);          // (*F)_23 = F_01
    }
    return out;
}

CurvatureField operator+(const CurvatureField& a, const CurvatureField& b) {
    CurvatureField out = a;
    for (size_t i = 0; i < out.f.size(); ++i) out.f[i] += b.f[i];
    return out;
}

CurvatureField operator-(const CurvatureField& a, const CurvatureField& b) {
    CurvatureField out = a;
    for (size_t i = 0; i < out.f.size(); ++i) out.f[i] -= b.f[i];
    return out;
}

CurvatureField operator*(double c, const CurvatureField& a) {
    CurvatureField out = a;
    for (auto& v : out.f) v *= c;
    return out;
}

SelfdualSplit selfdual_split(const CurvatureField& F) {
    CurvatureField sF = hodge_star(F);
    SelfdualSplit out;
    out.plus = 0.5 * (F + sF);
    out.minus = 0.5 * (F - sF);
    return out;
}

double norm2_int(const CurvatureField& F) {
    double s = 0.0;
    for (const auto& v : F.f) s += inner_int(v, v);
    return s;
}

double wedge_int(const CurvatureField& A, const CurvatureField& B) {
    CurvatureField sB = hodge_star(B);
    double s = 0.0;
    for (size_t i = 0; i < A.f.size(); ++i) s += inner_int(A.f[i], sB.f[i]);
    return s;
}

std::vector<double> energy_density(const CurvatureField& F) {
    int n = F.geo->n_sites();
    std::vector<double> e(static_cast<size_t>(n), 0.0);
    for (int s = 0; s < n; ++s)
        for (int p = 0; p < 6; ++p) e[static_cast<size_t>(s)] += inner_int(F.at(s, p), F.at(s, p));
    return e;
}

} // namespace ymflow
