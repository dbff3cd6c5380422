#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace ymflow {

struct branch_error : std::runtime_error {
    explicit branch_error(const std::string& msg) : std::runtime_error(msg) {}
};

// su(2) element X = i (x s1 + y s2 + z s3), with s_a the Pauli matrices.
// Anti-hermitian and traceless by construction; three real coordinates.
struct Alg {
    double x = 0.0, y = 0.0, z = 0.0;

    Alg() = default;
    Alg(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

    Alg& operator+=(const Alg& o) { x += o.x; y += o.y; z += o.z; return *this; }
    Alg& operator-=(const Alg& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
    Alg& operator*=(double c) { x *= c; y *= c; z *= c; return *this; }
};

inline Alg operator+(Alg a, const Alg& b) { a += b; return a; }
inline Alg operator-(Alg a, const Alg& b) { a -= b; return a; }
inline Alg operator*(double c, Alg a) { a *= c; return a; }
inline Alg operator*(Alg a, double c) { a *= c; return a; }
inline Alg operator-(const Alg& a) { return Alg{-a.x, -a.y, -a.z}; }

inline double dot(const Alg& a, const Alg& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

// Internal inner product <X,Y> = -tr(XY) = 2 (x.y).  All kernels use this.
inline double inner_int(const Alg& a, const Alg& b) { return 2.0 * dot(a, b); }

// Reported inner product -(1/2 pi^2) tr(XY); only used when quoting
// normalized quantities (charge, Chern-Simons values).
inline double inner_report(const Alg& a, const Alg& b) {
    return dot(a, b) / (M_PI * M_PI);
}

inline double norm_int(const Alg& a) { return std::sqrt(inner_int(a, a)); }

inline Alg cross(const Alg& a, const Alg& b) {
    return Alg{a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

// Commutator [X,Y] for X = i x.s, Y = i y.s:  [X,Y] = i (-2 x cross y).s
inline Alg commutator(const Alg& a, const Alg& b) { return -2.0 * cross(a, b); }

// Element of the real quaternion algebra spanned by {1, i s1, i s2, i s3}:
// M = w I + i (x s1 + y s2 + z s3).  Group elements are the unit-norm ones;
// sums of group elements (staples) live here too.
struct Quat {
    double w = 1.0, x = 0.0, y = 0.0, z = 0.0;

    Quat() = default;
    Quat(double w_, double x_, double y_, double z_) : w(w_), x(x_), y(y_), z(z_) {}
    Quat(double w_, const Alg& v) : w(w_), x(v.x), y(v.y), z(v.z) {}

    Quat& operator+=(const Quat& o) { w += o.w; x += o.x; y += o.y; z += o.z; return *this; }
    Quat& operator-=(const Quat& o) { w -= o.w; x -= o.x; y -= o.y; z -= o.z; return *this; }
    Quat& operator*=(double c) { w *= c; x *= c; y *= c; z *= c; return *this; }
};

inline Quat operator+(Quat a, const Quat& b) { a += b; return a; }
inline Quat operator-(Quat a, const Quat& b) { a -= b; return a; }
inline Quat operator*(double c, Quat a) { a *= c; return a; }

// (a0 + i a.s)(b0 + i b.s) = (a0 b0 - a.b) + i (a0 b + b0 a - a x b).s
inline Quat operator*(const Quat& a, const Quat& b) {
    return Quat{
        a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
        a.w * b.x + b.w * a.x - (a.y * b.z - a.z * b.y),
        a.w * b.y + b.w * a.y - (a.z * b.x - a.x * b.z),
        a.w * b.z + b.w * a.z - (a.x * b.y - a.y * b.x)};
}

inline Quat dagger(const Quat& a) { return Quat{a.w, -a.x, -a.y, -a.z}; }

inline double re_trace(const Quat& a) { return 2.0 * a.w; }

inline double quat_norm(const Quat& a) {
    return std::sqrt(a.w * a.w + a.x * a.x + a.y * a.y + a.z * a.z);
}

// Anti-hermitian traceless projection (M - M^dag)/2 - (trace part); for
// elements of the real quaternion span this is just the vector part.
inline Alg proj_ah(const Quat& a) { return Alg{a.x, a.y, a.z}; }

inline Quat identity_q() { return Quat{1.0, 0.0, 0.0, 0.0}; }

// exp of an algebra element, closed form: exp(i t n.s) = cos t + i sin t n.s
inline Quat exp_alg(const Alg& v) {
    double t2 = dot(v, v);
    double t = std::sqrt(t2);
    double c, k; // k = sin t / t
    if (t < 1e-8) {
        c = 1.0 - t2 / 2.0 + t2 * t2 / 24.0;
        k = 1.0 - t2 / 6.0 + t2 * t2 / 120.0;
    } else {
        c = std::cos(t);
        k = std::sin(t) / t;
    }
    return Quat{c, k * v.x, k * v.y, k * v.z};
}

// Principal logarithm of a unit quaternion.  The rotation half-angle must be
// below pi - 1e-6 or the branch is ambiguous and we refuse.
inline Alg log_group(const Quat& u) {
    double s = std::sqrt(u.x * u.x + u.y * u.y + u.z * u.z);
    double t = std::atan2(s, u.w);
    if (t > M_PI - 1e-6)
        throw branch_error("log branch failure: rotation angle too close to pi");
    double k; // t / sin t
    if (s < 1e-8) {
        // u.w ~ +-1; t ~ s / u.w for u.w > 0
        if (u.w <= 0.0)
            throw branch_error("log branch failure: rotation angle too close to pi");
        double r = s / u.w;
        k = (1.0 + r * r / 6.0) / u.w;
    } else {
        k = t / s;
    }
    return Alg{k * u.x, k * u.y, k * u.z};
}

// Adjoint action Ad(u) X = u X u^dag.
inline Alg adjoint(const Quat& u, const Alg& v) {
    Quat p{0.0, v.x, v.y, v.z};
    Quat r = (u * p) * dagger(u);
    return Alg{r.x, r.y, r.z};
}

inline Quat renormalize(const Quat& a) {
    double n = quat_norm(a);
    if (!(n > 0.0)) throw std::runtime_error("cannot renormalize zero quaternion");
    Quat r = a;
    r *= 1.0 / n;
    return r;
}

// --- dense 2x2 complex bridge, used by tests and the generic projection ---

using C2x2 = std::array<std::complex<double>, 4>; // row-major m00 m01 m10 m11

inline C2x2 to_matrix(const Quat& q) {
    const std::complex<double> I(0.0, 1.0);
    return C2x2{std::complex<double>(q.w) + I * q.z, I * q.x + q.y,
                I * q.x - q.y, std::complex<double>(q.w) - I * q.z};
}

inline C2x2 to_matrix(const Alg& a) { return to_matrix(Quat{0.0, a}); }

// Projection of an arbitrary complex 2x2 matrix onto su(2):
// (M - M^dag)/2 minus the trace part, returned in algebra coordinates.
inline Alg project_antihermitian_traceless(const C2x2& m) {
    std::complex<double> a00 = 0.5 * (m[0] - std::conj(m[0]));
    std::complex<double> a01 = 0.5 * (m[1] - std::conj(m[2]));
    std::complex<double> a11 = 0.5 * (m[3] - std::conj(m[3]));
    // remove the (purely imaginary) trace, then read off
    // A = [[i z, i x + y], [i x - y, -i z]]
    std::complex<double> d = 0.5 * (a00 - a11);
    return Alg{a01.imag(), a01.real(), d.imag()};
}

} // namespace ymflow
