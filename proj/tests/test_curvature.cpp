#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "ymflow/curvature.hpp"

using namespace ymflow;

namespace {
LatticeGeometry make_geo() {
    return LatticeGeometry({4, 4, 4, 4}, BoundaryMode::Frozen, BoundaryMode::Frozen, 1,
                           {0, 0, 0});
}

CurvatureField random_curv(const LatticeGeometry& geo, std::uint64_t seed) {
    CurvatureField F(geo);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    for (auto& a : F.f) a = Alg{g(rng), g(rng), g(rng)};
    return F;
}
} // namespace

TEST_CASE("hodge star is an involution on 2-forms") {
    LatticeGeometry geo = make_geo();
    CurvatureField F = random_curv(geo, 1);
    CurvatureField FF = hodge_star(hodge_star(F));
    for (size_t i = 0; i < F.f.size(); ++i) CHECK(norm_int(FF.f[i] - F.f[i]) < 1e-14);
}

TEST_CASE("hodge star component table") {
    LatticeGeometry geo = make_geo();
    CurvatureField F(geo);
    // plane order (01),(02),(03),(12),(13),(23)
    for (int p = 0; p < 6; ++p) F.at(0, p) = Alg{double(p + 1), 0, 0};
    CurvatureField S = hodge_star(F);
    CHECK(S.at(0, 0).x == doctest::Approx(6.0));   // *F_01 = F_23
    CHECK(S.at(0, 1).x == doctest::Approx(-5.0));  // *F_02 = -F_13
    CHECK(S.at(0, 2).x == doctest::Approx(4.0));   // *F_03 = F_12
    CHECK(S.at(0, 3).x == doctest::Approx(3.0));   // *F_12 = F_03
    CHECK(S.at(0, 4).x == doctest::Approx(-2.0));  // *F_13 = -F_02
    CHECK(S.at(0, 5).x == doctest::Approx(1.0));   // *F_23 = F_01
}

TEST_CASE("selfdual split is an orthogonal decomposition") {
    LatticeGeometry geo = make_geo();
    CurvatureField F = random_curv(geo, 2);
    SelfdualSplit sd = selfdual_split(F);
    // F+ + F- = F
    for (size_t i = 0; i < F.f.size(); ++i)
        CHECK(norm_int(sd.plus.f[i] + sd.minus.f[i] - F.f[i]) < 1e-13);
    // *F+ = F+, *F- = -F-
    CurvatureField sp = hodge_star(sd.plus), sm = hodge_star(sd.minus);
    for (size_t i = 0; i < F.f.size(); ++i) {
        CHECK(norm_int(sp.f[i] - sd.plus.f[i]) < 1e-13);
        CHECK(norm_int(sm.f[i] + sd.minus.f[i]) < 1e-13);
    }
    // Pythagoras
    CHECK(norm2_int(F) ==
          doctest::Approx(norm2_int(sd.plus) + norm2_int(sd.minus)).epsilon(1e-12));
}

TEST_CASE("wedge pairing identities") {
    LatticeGeometry geo = make_geo();
    CurvatureField A = random_curv(geo, 3);
    CurvatureField B = random_curv(geo, 4);
    // symmetry of <A ^ B> for 2-forms
    CHECK(wedge_int(A, B) == doctest::Approx(wedge_int(B, A)).epsilon(1e-12));
    // <A ^ A> = ||A+||^2 - ||A-||^2
    SelfdualSplit sd = selfdual_split(A);
    CHECK(wedge_int(A, A) ==
          doctest::Approx(norm2_int(sd.plus) - norm2_int(sd.minus)).epsilon(1e-12));
    // <A ^ *A> = ||A||^2
    CHECK(wedge_int(A, hodge_star(A)) == doctest::Approx(norm2_int(A)).epsilon(1e-12));
}

TEST_CASE("energy density sums to the total norm") {
    LatticeGeometry geo = make_geo();
    CurvatureField F = random_curv(geo, 5);
    auto e = energy_density(F);
    double total = 0.0;
    for (double d : e) {
        CHECK(d >= 0.0);
        total += d;
    }
    CHECK(total == doctest::Approx(norm2_int(F)).epsilon(1e-12));
}

TEST_CASE("field arithmetic") {
    LatticeGeometry geo = make_geo();
    CurvatureField A = random_curv(geo, 6);
    CurvatureField B = random_curv(geo, 7);
    CurvatureField C = 2.0 * A - B + B;
    for (size_t i = 0; i < A.f.size(); ++i) CHECK(norm_int(C.f[i] - 2.0 * A.f[i]) < 1e-13);
}
