#pragma once

#include <complex>

namespace uclab {

using cplx = std::complex<double>;

// Second order jet in the polar variables (r, phi).
struct Jet {
    cplx v{}, r{}, p{}, rr{}, pp{}, rp{};

    Jet() = default;
    Jet(cplx c) : v(c) {}
    Jet(double c) : v(c) {}

    static Jet radius(double r0) {
        Jet j(r0);
        j.r = 1.0;
        return j;
    }
    static Jet angle(double p0) {
        Jet j(p0);
        j.p = 1.0;
        return j;
    }
    // Lift a radial 1D jet (value, d/dr, d2/dr2).
    static Jet radial(cplx f, cplx f1, cplx f2) {
        Jet j(f);
        j.r = f1;
        j.rr = f2;
        return j;
    }
    static Jet angular(cplx f, cplx f1, cplx f2) {
        Jet j(f);
        j.p = f1;
        j.pp = f2;
        return j;
    }

    // Chain rule with g = F(u), F' = d1, F'' = d2 at u.v.
    Jet apply(cplx f0, cplx d1, cplx d2) const {
        Jet g;
        g.v = f0;
        g.r = d1 * r;
        g.p = d1 * p;
        g.rr = d2 * r * r + d1 * rr;
        g.pp = d2 * p * p + d1 * pp;
        g.rp = d2 * r * p + d1 * rp;
        return g;
    }

    Jet& operator+=(const Jet& o) {
        v += o.v; r += o.r; p += o.p; rr += o.rr; pp += o.pp; rp += o.rp;
        return *this;
    }
    Jet& operator-=(const Jet& o) {
        v -= o.v; r -= o.r; p -= o.p; rr -= o.rr; pp -= o.pp; rp -= o.rp;
        return *this;
    }
    Jet& operator*=(cplx c) {
        v *= c; r *= c; p *= c; rr *= c; pp *= c; rp *= c;
        return *this;
    }
};

inline Jet operator+(Jet a, const Jet& b) { return a += b; }
inline Jet operator-(Jet a, const Jet& b) { return a -= b; }
inline Jet operator-(const Jet& a) { Jet z; return z -= a; }
inline Jet operator*(Jet a, cplx c) { return a *= c; }
inline Jet operator*(cplx c, Jet a) { return a *= c; }
inline Jet operator*(Jet a, double c) { return a *= cplx(c); }
inline Jet operator*(double c, Jet a) { return a *= cplx(c); }

inline Jet operator*(const Jet& a, const Jet& b) {
    Jet c;
    c.v = a.v * b.v;
    c.r = a.r * b.v + a.v * b.r;
    c.p = a.p * b.v + a.v * b.p;
    c.rr = a.rr * b.v + 2.0 * a.r * b.r + a.v * b.rr;
    c.pp = a.pp * b.v + 2.0 * a.p * b.p + a.v * b.pp;
    c.rp = a.rp * b.v + a.r * b.p + a.p * b.r + a.v * b.rp;
    return c;
}

inline Jet inv(const Jet& a) {
    cplx i = 1.0 / a.v;
    return a.apply(i, -i * i, 2.0 * i * i * i);
}
inline Jet operator/(const Jet& a, const Jet& b) { return a * inv(b); }

inline Jet exp(const Jet& a) {
    cplx e = std::exp(a.v);
    return a.apply(e, e, e);
}
inline Jet log(const Jet& a) {
    cplx i = 1.0 / a.v;
    return a.apply(std::log(a.v), i, -i * i);
}
inline Jet sqrt(const Jet& a) {
    cplx s = std::sqrt(a.v);
    return a.apply(s, 0.5 / s, -0.25 / (s * a.v));
}

// Polar Laplacian u_rr + u_r / r + u_pp / r^2 at radius r0.
inline cplx laplacian(const Jet& u, double r0) {
    return u.rr + u.r / r0 + u.pp / (r0 * r0);
}

}  // namespace uclab
