#include "sdl/cardioid.hpp"

#include <algorithm>
#include <array>
#include <vector>

namespace sdl::cardioid {

cx phi(cx lambda) { return lambda * 0.5 - lambda * lambda * 0.25; }

cx phi_derivative(cx lambda) { return 0.5 - lambda * 0.5; }

SpherePoint phi(const SpherePoint& lambda) {
    if (lambda.is_inf()) return SpherePoint::infinity();
    return SpherePoint(phi(lambda.value()));
}

std::optional<cx> phi_inverse(cx w, double tol) {
    // Roots of lambda^2 - 2 lambda + 4w: 1 +/- sqrt(1 - 4w). Form the larger
    // root without cancellation, recover the other from the product 4w.
    const cx s = std::sqrt(1.0 - 4.0 * w);
    const cx big = (s.real() >= 0.0) ? 1.0 + s : 1.0 - s;
    cx small;
    if (std::abs(big) < 1e-300) {
        small = big;  // w ~ 0.25 + eps, double root near 1
    } else {
        small = 4.0 * w / big;
    }
    const cx cands[2] = {small, big};
    const double mags[2] = {std::abs(small), std::abs(big)};
    int best = -1;
    for (int i = 0; i < 2; ++i) {
        if (mags[i] <= 1.0 + tol && (best < 0 || mags[i] < mags[best])) best = i;
    }
    if (best < 0) return std::nullopt;
    return cands[best];
}

SpherePoint schwarz_sigma(cx w, double tol) {
    const auto lam = phi_inverse(w, tol);
    if (!lam) throw OutsideCardioid();
    const cx lb = std::conj(*lam);
    if (std::abs(lb) < 1e-12) return SpherePoint::infinity();
    return SpherePoint((2.0 * lb - 1.0) / (4.0 * lb * lb));
}

cx sigma_wirtinger(cx w) {
    const auto lam = phi_inverse(w);
    if (!lam) throw OutsideCardioid();
    const cx l = *lam;
    if (std::abs(l) < 1e-9) throw CriticalPointError(3);
    const cx lb = std::conj(l);
    return -phi_derivative(1.0 / lb) / (lb * lb * std::conj(phi_derivative(l)));
}

namespace {

// Squared distance from a to the cardioid boundary point at angle theta.
double dist2(cx a, double theta) {
    const cx p = phi(std::polar(1.0, theta));
    const cx d = p - a;
    return d.real() * d.real() + d.imag() * d.imag();
}

// d/dtheta of dist2, analytic: 2 Re( conj(phi(e^it) - a) * i e^it phi'(e^it) ).
double dist2_deriv(cx a, double theta) {
    const cx e = std::polar(1.0, theta);
    const cx p = phi(e);
    const cx v = cx(0.0, 1.0) * e * phi_derivative(e);
    return 2.0 * (std::conj(p - a) * v).real();
}

double dist2_deriv2(cx a, double theta, double h = 1e-6) {
    return (dist2_deriv(a, theta + h) - dist2_deriv(a, theta - h)) / (2.0 * h);
}

struct Maximizer {
    double theta;
    double d2;  // squared distance
};

// All polished local maxima of dist2 on the 512-point grid. The boundary
// samples are parameter-independent and cached.
std::vector<Maximizer> local_maxima(cx a, const Tolerances& tol) {
    constexpr int n = 512;
    static const std::array<cx, n> boundary = [] {
        std::array<cx, n> b{};
        for (int i = 0; i < n; ++i) b[i] = phi(std::polar(1.0, kTwoPi * i / n));
        return b;
    }();
    std::array<double, n> val{};
    for (int i = 0; i < n; ++i) val[i] = std::norm(boundary[i] - a);

    std::vector<Maximizer> out;
    for (int i = 0; i < n; ++i) {
        const double prev = val[(i + n - 1) % n], next = val[(i + 1) % n];
        if (val[i] < prev || val[i] < next) continue;
        if (val[i] == prev && i > 0) continue;  // plateau: keep one representative
        double th = kTwoPi * i / n;
        // Newton on the derivative; fall back to golden-section when the
        // second derivative degenerates (a near -1/12).
        bool ok = false;
        double t = th;
        for (int it = 0; it < 30; ++it) {
            const double g = dist2_deriv(a, t);
            const double h = dist2_deriv2(a, t);
            if (std::abs(h) < 1e-14) break;
            const double step = g / h;
            t -= step;
            if (std::abs(step) < tol.newton_theta) {
                ok = true;
                break;
            }
        }
        if (!ok || dist2(a, t) < val[i]) {
            double lo = th - kTwoPi / n, hi = th + kTwoPi / n;
            for (int it = 0; it < 200; ++it) {
                const double m1 = lo + 0.381966011250105 * (hi - lo);
                const double m2 = hi - 0.381966011250105 * (hi - lo);
                if (dist2(a, m1) < dist2(a, m2)) lo = m1; else hi = m2;
            }
            t = 0.5 * (lo + hi);
        }
        out.push_back({t, dist2(a, t)});
    }
    // Deduplicate maximizers that polished onto the same angle.
    std::sort(out.begin(), out.end(), [](auto& x, auto& y) { return x.theta < y.theta; });
    std::vector<Maximizer> dedup;
    for (const auto& m : out) {
        bool dup = false;
        for (const auto& d : dedup) {
            double dt = std::abs(m.theta - d.theta);
            dt = std::min(dt, kTwoPi - dt);
            if (dt < tol.slit_theta) dup = true;
        }
        if (!dup) dedup.push_back(m);
    }
    return dedup;
}

DropletGeometry geometry_from(cx a, const Maximizer& top) {
    DropletGeometry g;
    g.a = a;
    g.r = std::sqrt(top.d2);
    double t = top.theta / kTwoPi;
    t -= std::floor(t);
    g.t_alpha = t;
    g.alpha = phi(std::polar(1.0, kTwoPi * t));
    g.alpha_prime = phi(1.0 / std::conj(2.0 - std::polar(1.0, kTwoPi * t)));
    g.degenerate_tangency = std::abs(a - cx(-1.0 / 12.0, 0.0)) < 1e-9;
    return g;
}

}  // namespace

DropletGeometry circumcircle(cx a, const Tolerances& tol) {
    auto maxima = local_maxima(a, tol);
    auto top = *std::max_element(maxima.begin(), maxima.end(),
                                 [](auto& x, auto& y) { return x.d2 < y.d2; });
    const double rmax = std::sqrt(top.d2);
    std::vector<Maximizer> ties;
    for (const auto& m : maxima) {
        if (std::abs(std::sqrt(m.d2) - rmax) <= tol.slit_value * std::max(1.0, rmax))
            ties.push_back(m);
    }
    if (ties.size() > 1) throw SlitError(ties[0].theta, ties[1].theta);
    return geometry_from(a, top);
}

DropletGeometry circumcircle_allow_slit(cx a, const Tolerances& tol) {
    auto maxima = local_maxima(a, tol);
    auto top = *std::max_element(maxima.begin(), maxima.end(),
                                 [](auto& x, auto& y) { return x.d2 < y.d2; });
    return geometry_from(a, top);
}

SpherePoint circle_reflect(const DropletGeometry& g, const SpherePoint& w) {
    if (w.is_inf()) return SpherePoint(g.a);
    const cx d = w.value() - g.a;
    if (std::abs(d) < 1e-14) return SpherePoint::infinity();
    return SpherePoint(g.a + g.r * g.r / std::conj(d));
}

Region droplet_contains(const DropletGeometry& g, const SpherePoint& w, const Tolerances& tol) {
    if (w.is_inf()) return Region::Outside;
    const cx z = w.value();
    if (std::abs(z - g.alpha) < tol.sing_collar || std::abs(z - cx(DropletGeometry::cusp, 0.0)) < tol.sing_collar)
        return Region::Singular;

    const double dc = std::abs(z - g.a) - g.r;  // signed distance to the circle
    if (dc > tol.boundary) return Region::Outside;

    const auto lam = phi_inverse(z, tol.boundary);
    if (lam) {
        const double m = std::abs(*lam);
        if (m < 1.0 - tol.boundary) {
            // Strictly inside the open cardioid, unless within the collar of
            // its boundary curve.
            if (m < 1e-8) return Region::Outside;  // deep interior
            const cx bd = phi(*lam / m);
            if (std::abs(z - bd) > tol.boundary) return Region::Outside;
        }
        return Region::BoundaryRegular;
    }
    if (std::abs(dc) <= tol.boundary) return Region::BoundaryRegular;
    return Region::Interior;
}

cx droplet_interior_point(const DropletGeometry& g, const Tolerances& tol) {
    const cx dir = (g.a - g.alpha) / std::abs(g.a - g.alpha);  // away from the tangency
    const double base = std::atan2(dir.imag(), dir.real());
    for (double s : {0.995, 0.98, 0.95, 0.9, 0.8, 0.6}) {
        for (double rot : {0.0, 0.2, -0.2, 0.5, -0.5, 1.0, -1.0, 2.0, -2.0, 3.0}) {
            const cx w = g.a + g.r * s * std::polar(1.0, base + rot);
            if (droplet_contains(g, SpherePoint(w), tol) == Region::Interior) return w;
        }
    }
    throw Error("no droplet interior point found");
}

}  // namespace sdl::cardioid
