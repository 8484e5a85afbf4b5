#pragma once

#include <cassert>
#include <cmath>
#include <complex>

namespace sdl {

using cx = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kTwoPi = 2.0 * kPi;

// Point on the Riemann sphere. Infinity is a tagged value, never a large
// finite sentinel; arithmetic near it goes through the chart u = 1/w.
struct SpherePoint {
    cx z{0.0, 0.0};
    bool inf = false;

    SpherePoint() = default;
    SpherePoint(double re, double im = 0.0) : z(re, im) {}
    SpherePoint(cx v) : z(v) {}  // NOLINT: implicit by design

    static SpherePoint infinity() {
        SpherePoint p;
        p.inf = true;
        return p;
    }

    bool is_inf() const { return inf; }
    cx value() const {
        assert(!inf);
        return z;
    }
};

inline bool sphere_close(const SpherePoint& a, const SpherePoint& b, double tol) {
    if (a.inf || b.inf) {
        if (a.inf && b.inf) return true;
        const cx f = a.inf ? b.z : a.z;
        return 1.0 / (1.0 + std::abs(f)) < tol;  // chart distance to infinity
    }
    return std::abs(a.z - b.z) <= tol * (1.0 + std::abs(a.z));
}

// Angle of z as a fraction of a full turn, normalized to [0, 1).
inline double angle_of(cx z) {
    double t = std::arg(z) / kTwoPi;
    t -= std::floor(t);
    if (t >= 1.0) t = 0.0;
    return t;
}

inline cx unit(double theta_turns) {
    return std::polar(1.0, kTwoPi * theta_turns);
}

// Circular distance on R/Z.
inline double circ_dist(double a, double b) {
    double d = a - b;
    d -= std::floor(d);
    return std::min(d, 1.0 - d);
}

inline double frac(double x) {
    double f = x - std::floor(x);
    if (f >= 1.0) f = 0.0;
    return f;
}

}  // namespace sdl
