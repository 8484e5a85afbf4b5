#include "sdl/tricorn.hpp"

#include <algorithm>
#include <cmath>

#include "sdl/errors.hpp"

namespace sdl::tricorn {

std::optional<int> escape_time(cx c, cx z, double R_esc, int max_iter) {
    for (int n = 0; n <= max_iter; ++n) {
        if (std::abs(z) > R_esc) return n;
        z = f_apply(c, z);
    }
    return std::nullopt;
}

cx phi_big(cx c, int max_iter) {
    const double R0 = std::sqrt(4.0 + 3.0 * std::abs(c));
    std::vector<cx> orbit{c};
    while (std::abs(orbit.back()) < 1e10) {
        if (int(orbit.size()) > max_iter) throw InsideTricorn();
        orbit.push_back(f_apply(c, orbit.back()));
    }
    const int N = int(orbit.size()) - 1;

    // Green modulus: log|Phi| = log|w_N| / 2^N plus nothing further (|w_N| is
    // already huge, the tail correction is below double precision).
    const double logmod = std::log(std::abs(orbit[N])) / std::ldexp(1.0, N);

    // Argument by backward square roots, predictor = the orbit point itself.
    // Reliable once |w_n| >= R0; below that the branch is best-effort.
    cx B = orbit[N];
    for (int n = N - 1; n >= 0; --n) {
        cx r = std::sqrt(B);
        // phi(w_{n+1}) = conj(phi(w_n))^2, so phi(w_n) = conj(+-sqrt(B)).
        cx cand1 = std::conj(r), cand2 = std::conj(-r);
        const cx pred = orbit[n];
        B = (std::abs(cand1 / std::abs(cand1) - pred / std::abs(pred)) <
             std::abs(cand2 / std::abs(cand2) - pred / std::abs(pred)))
                ? cand1
                : cand2;
    }
    (void)R0;
    return std::polar(std::exp(logmod), std::arg(B));
}

namespace {

struct DerivPair {
    cx u{1.0, 0.0};  // d z / d p
    cx v{0.0, 0.0};  // d z / d conj(p)
};

// One anti-holomorphic step z -> conj(z)^2 + c. `dc` = 1 when differentiating
// w.r.t. the parameter, 0 when w.r.t. the initial point.
void step_deriv(cx z, DerivPair& d, double dc) {
    const cx zb = std::conj(z);
    const cx nu = 2.0 * zb * std::conj(d.v) + dc;
    const cx nv = 2.0 * zb * std::conj(d.u);
    d.u = nu;
    d.v = nv;
}

// Solve u dz + v conj(dz) = rhs for dz.
std::optional<cx> solve_linear(const DerivPair& d, cx rhs) {
    const double det = std::norm(d.u) - std::norm(d.v);
    if (std::abs(det) < 1e-300) return std::nullopt;
    return (std::conj(d.u) * rhs - d.v * std::conj(rhs)) / det;
}

// Exact Boettcher target s^n(r e^{2 pi i theta}) via the m2 orbit of theta.
cx boettcher_target(double logr, const angles::Rational& theta, int n) {
    angles::Rational t = theta;
    for (int i = 0; i < n; ++i) t = t.m2();
    return std::polar(std::exp(std::ldexp(logr, n)), kTwoPi * t.value());
}

constexpr double kLogBig = 18.0;  // aim the escaped reference at e^18 ~ 6.6e7

}  // namespace

RayPath trace_dynamical_ray(cx c, const angles::Rational& theta, int levels, const Tolerances& tol) {
    RayPath out;
    out.angle = theta;
    const double G0 = std::log(64.0);
    cx z = std::polar(std::exp(G0), kTwoPi * theta.value());  // level-0 seed

    // Newton solve for the ray point at potential g, seeded at *z.
    auto try_solve = [&](double g, cx& point) -> bool {
        // Fixed reference modulus: 2^n g stays within [kLogBig, 2 kLogBig], so
        // the equation is one or two squarings above its seed and Newton needs
        // O(10) steps regardless of depth.
        const int n = std::max(1, int(std::ceil(std::log2(kLogBig / g))));
        const cx target = boettcher_target(g, theta, n);
        cx w = point;
        double best = 1e300;
        int since_best = 0;
        for (int it = 0; it < 200; ++it) {
            cx q = w;
            DerivPair d;  // w.r.t. the point
            for (int j = 0; j < n; ++j) {
                step_deriv(q, d, 0.0);
                q = f_apply(c, q);
            }
            const cx res = q - target;
            const double r = std::abs(res);
            if (r < 1e-9 * (1.0 + std::abs(target))) {
                point = w;
                return true;
            }
            if (r < best * (1.0 - 1e-3)) {
                best = r;
                since_best = 0;
            } else if (++since_best > 50) {
                return false;
            }
            auto dz = solve_linear(d, -res);
            if (!dz) return false;
            // Clamp through the folds of the real-analytic iterate, where the
            // Jacobian degenerates and raw Newton steps explode.
            const double cap = 0.25 * (1.0 + std::abs(w));
            if (std::abs(*dz) > cap) *dz *= cap / std::abs(*dz);
            w += *dz;
        }
        return false;
    };

    if (!try_solve(G0, z)) throw NewtonStall(-1);
    out.points.push_back(z);
    out.potentials.push_back(G0);
    out.levels_done = 1;

    // Adaptive descent: halve the potential, sub-stepping geometrically when a
    // Newton solve misses (rays near the fixed angles turn sharply).
    double g_cur = G0;
    const double g_min = std::ldexp(G0, -(levels - 1));
    int solves = 1;
    while (g_cur > g_min * 1.0000001 && solves < 6 * levels) {
        bool advanced = false;
        double fac = 0.5;
        for (int split = 0; split < 6; ++split) {
            cx znew = z;
            ++solves;
            if (try_solve(std::max(g_cur * fac, g_min), znew)) {
                g_cur = std::max(g_cur * fac, g_min);
                z = znew;
                out.points.push_back(z);
                out.potentials.push_back(g_cur);
                out.levels_done++;
                advanced = true;
                break;
            }
            fac = std::sqrt(fac);  // smaller step
        }
        if (!advanced) {
            // Double-precision floor of the long-orbit solves; the periodic
            // tail refinement below takes over from here.
            if (out.levels_done >= 10) break;
            throw NewtonStall(out.levels_done);
        }
    }
    out.landing = out.points.back();
    out.cauchy_gap = out.points.size() > 1
                         ? std::abs(out.points.back() - out.points[out.points.size() - 2])
                         : 1.0;

    // Landing polish: the ray at a (pre)periodic angle lands on a (pre)periodic
    // point; refine it by Newton on the holomorphic displacement
    // f^{a+P}(z) - f^{a}(z) with both exponents even.
    const auto [pre, per] = theta.orbit_shape();
    bool polished = false;
    {
        const int a = pre + (pre % 2);
        const int P = (per % 2 == 0) ? per : 2 * per;
        cx w = out.landing;
        auto disp = [&](cx z) {
            cx qa = z;
            for (int i = 0; i < a; ++i) qa = f_apply(c, qa);
            cx qb = qa;
            for (int i = 0; i < P; ++i) qb = f_apply(c, qb);
            return qb - qa;
        };
        for (int it = 0; it < 16; ++it) {
            const cx g0 = disp(w);
            const double h = 1e-7 * (1.0 + std::abs(w));
            const cx dg = (disp(w + cx(h, 0)) - disp(w - cx(h, 0))) / (2.0 * h);
            if (std::abs(dg) < 1e-14) break;
            const cx step = g0 / dg;
            // The displacement has a noise floor of |dg| * eps, so convergence
            // is judged by the positional step.
            if (std::abs(step) < 1e-12 * (1.0 + std::abs(w))) {
                polished = true;
                break;
            }
            if (std::abs(step) > 1e4 * (out.cauchy_gap + 1e-9)) break;  // stay near the estimate
            w -= step;
        }
        if (polished && std::abs(w - out.landing) < 1e3 * (out.cauchy_gap + 1e-9)) out.landing = w;
        else polished = false;
    }

    // Tail refinement for periodic angles: once near the (repelling) landing
    // point, continue the ray by the local inverse branch of f^p. Short orbits
    // avoid the precision floor of the deep Boettcher targets.
    if (polished && pre == 0 && out.cauchy_gap > 1e-8) {
        const int p = per;
        const cx zstar = out.landing;
        std::vector<cx> cyc;
        cx qq = zstar;
        for (int i = 0; i < p; ++i) {
            cyc.push_back(qq);
            qq = f_apply(c, qq);
        }
        const auto lam = cycle_multiplier(c, cyc);
        if (std::abs(lam.value) > 1.0 + 1e-9) {
            cx wj = out.points.back();
            double tj = out.potentials.empty() ? 1e-12 : out.potentials.back();
            for (int extra = 0; extra < 2000 && out.cauchy_gap > 1e-8; ++extra) {
                // Linear predictor through the (anti-)multiplier, then Newton.
                cx delta = (wj - zstar) / lam.value;
                cx w = zstar + (lam.anti ? std::conj(delta) : delta);
                bool ok = false;
                for (int it = 0; it < 20; ++it) {
                    cx q = w;
                    DerivPair d;
                    for (int j = 0; j < p; ++j) {
                        step_deriv(q, d, 0.0);
                        q = f_apply(c, q);
                    }
                    const cx res = q - wj;
                    // The residual floor is |lambda| * eps; positional accuracy
                    // is a factor |lambda| better than the residual.
                    if (std::abs(res) < 1e-12 * (1.0 + std::abs(wj))) {
                        ok = true;
                        break;
                    }
                    const auto dz = solve_linear(d, -res);
                    if (!dz) break;
                    w += *dz;
                }
                if (!ok || std::abs(w - zstar) > std::abs(wj - zstar) * 1.0001 + 1e-15) break;
                tj = std::ldexp(tj, -p);
                out.points.push_back(w);
                out.potentials.push_back(tj);
                out.cauchy_gap = std::abs(w - wj);
                wj = w;
            }
        }
    }
    (void)tol;
    return out;
}

RayPath trace_parameter_ray(const angles::Rational& theta, int levels, double r_end,
                            const Tolerances& tol) {
    RayPath out;
    out.angle = theta;
    std::vector<double> logr;
    {
        const double g_start = std::log(4.0), g_end = std::log(r_end);
        double g = g_start;
        while (int(logr.size()) < levels && g > g_end) {
            logr.push_back(g);
            g *= 0.78;
        }
        logr.push_back(std::max(g_end, 1e-12));
    }
    cx cpar = std::polar(4.0, kTwoPi * theta.value());
    for (size_t k = 0; k < logr.size(); ++k) {
        const double g = logr[k];
        const int n = std::max(1, int(std::ceil(std::log2(kLogBig / g))));
        const cx target = boettcher_target(g, theta, n);
        bool ok = false;
        cx w = cpar;
        for (int it = 0; it < 80; ++it) {
            cx q = w;
            DerivPair d;
            d.u = cx(1.0, 0.0);  // z0 = c
            d.v = cx(0.0, 0.0);
            for (int j = 0; j < n; ++j) {
                step_deriv(q, d, 1.0);
                q = f_apply(w, q);
            }
            const cx res = q - target;
            if (std::abs(res) < 1e-9 * (1.0 + std::abs(target))) {
                ok = true;
                break;
            }
            const auto dc = solve_linear(d, -res);
            if (!dc) break;
            cx step = *dc;
            if (std::abs(step) > 0.5 * (1.0 + std::abs(w))) step *= 0.5 * (1.0 + std::abs(w)) / std::abs(step);
            w += step;
        }
        if (!ok) throw ContinuationStall(std::exp(g));
        cpar = w;
        out.points.push_back(cpar);
        out.potentials.push_back(g);
        out.levels_done = int(k) + 1;
    }
    out.landing = out.points.back();
    out.cauchy_gap = out.points.size() > 1
                         ? std::abs(out.points.back() - out.points[out.points.size() - 2])
                         : 1.0;
    (void)tol;
    return out;
}

cx find_center(int period, cx seed, const Tolerances& tol) {
    cx c = seed;
    auto residual = [&](cx p) {
        cx z(0.0, 0.0);
        for (int i = 0; i < period; ++i) z = f_apply(p, z);
        return z;
    };
    cx g0 = residual(c);
    for (int it = 0; it < 100; ++it) {
        if (std::abs(g0) < tol.center_residual) return c;
        cx z(0.0, 0.0);
        DerivPair d;
        d.u = cx(0.0, 0.0);
        d.v = cx(0.0, 0.0);
        for (int i = 0; i < period; ++i) {
            step_deriv(z, d, 1.0);
            z = f_apply(c, z);
        }
        const auto dc = solve_linear(d, -g0);
        if (!dc) throw NoConvergence("singular center Jacobian");
        double scale = 1.0;
        bool moved = false;
        for (int h = 0; h < 12; ++h) {
            const cx trial = c + scale * *dc;
            const cx gt = residual(trial);
            if (std::abs(gt) < std::abs(g0)) {
                c = trial;
                g0 = gt;
                moved = true;
                break;
            }
            scale *= 0.5;
        }
        if (!moved) throw NoConvergence("tricorn center damping exhausted");
    }
    throw NoConvergence("tricorn center iteration limit");
}

std::vector<cx> find_all_centers(int period, cx lo, cx hi, int grid_n, const Tolerances& tol) {
    std::vector<cx> out;
    auto orbit_zero = [&](cx c, int p) {
        cx z(0.0, 0.0);
        for (int i = 0; i < p; ++i) z = f_apply(c, z);
        return z;
    };
    for (int i = 0; i < grid_n; ++i)
        for (int j = 0; j < grid_n; ++j) {
            const cx seed(lo.real() + (hi.real() - lo.real()) * (i + 0.5) / grid_n,
                          lo.imag() + (hi.imag() - lo.imag()) * (j + 0.5) / grid_n);
            cx c;
            try {
                c = find_center(period, seed, tol);
            } catch (const Error&) {
                continue;
            }
            bool minimal = true;
            for (int q = 1; q < period; ++q)
                if (period % q == 0 && std::abs(orbit_zero(c, q)) < 1e-7) minimal = false;
            if (!minimal) continue;
            bool dup = false;
            for (const cx& u : out)
                if (std::abs(u - c) < 1e-7) dup = true;
            if (!dup) out.push_back(c);
        }
    std::sort(out.begin(), out.end(), [](cx x, cx y) {
        return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
    });
    return out;
}

WirtingerValue cycle_multiplier(cx c, const std::vector<cx>& cycle) {
    for (cx p : cycle)
        if (std::abs(p) < 1e-9) return {cx(0.0, 0.0), cycle.size() % 2 == 1};
    cx v(1.0, 0.0);
    for (cx p : cycle) v = 2.0 * std::conj(p) * std::conj(v);
    return {v, cycle.size() % 2 == 1};
}

std::optional<std::vector<cx>> locate_cycle(cx c, int period, cx seed, const Tolerances& tol) {
    const int N = (period % 2 == 0) ? period : 2 * period;
    cx w = seed;
    bool ok = false;
    for (int it = 0; it < 80; ++it) {
        cx q = w;
        DerivPair d;
        for (int j = 0; j < N; ++j) {
            step_deriv(q, d, 0.0);
            q = f_apply(c, q);
        }
        const cx res = q - w;
        if (std::abs(res) < 0.01 * tol.cycle_residual) {
            ok = true;
            break;
        }
        DerivPair dd = d;  // derivative of f^N(w) - w
        dd.u -= 1.0;
        const auto dz = solve_linear(dd, -res);
        if (!dz || std::abs(*dz) > 4.0) return std::nullopt;
        w += *dz;
    }
    if (!ok) return std::nullopt;
    std::vector<cx> orbit;
    cx q = w;
    for (int i = 0; i < period; ++i) {
        orbit.push_back(q);
        q = f_apply(c, q);
    }
    if (std::abs(q - orbit.front()) > tol.cycle_residual * (1.0 + std::abs(q))) return std::nullopt;
    for (int d = 1; d < period; ++d) {
        if (period % d != 0) continue;
        if (std::abs(orbit[size_t(d)] - orbit.front()) < tol.cycle_residual * (1.0 + std::abs(q)))
            return std::nullopt;  // not minimal
    }
    return orbit;
}

cx parabolic_index(cx c, cx fixed_point, int return_period, const Tolerances& tol) {
    constexpr int M = 4096;
    auto ring = [&](double delta) {
        cx acc(0.0, 0.0);
        for (int j = 0; j < M; ++j) {
            const cx e = std::polar(delta, kTwoPi * j / M);
            const cx z = fixed_point + e;
            cx q = z;
            for (int i = 0; i < return_period; ++i) q = f_apply(c, q);
            const cx den = z - q;
            if (std::abs(den) < 1e-14 * (1.0 + std::abs(z))) throw ContourThroughZero();
            acc += e / den;
        }
        return acc / double(M);
    };
    double delta = 1e-2;
    cx prev = ring(delta);
    for (int halvings = 0; halvings < 7; ++halvings) {
        delta *= 0.5;
        const cx cur = ring(delta);
        if (std::abs(cur - prev) < tol.index_agree) return cur;
        prev = cur;
    }
    throw NoConvergence("tricorn contour index did not stabilize");
}

int fixed_point_multiplicity(cx c, cx fixed_point, int return_period, double delta) {
    constexpr int M = 4096;
    double winding = 0.0, prev_arg = 0.0;
    bool first = true;
    for (int j = 0; j <= M; ++j) {
        const cx e = std::polar(delta, kTwoPi * j / M);
        const cx z = fixed_point + e;
        cx q = z;
        for (int i = 0; i < return_period; ++i) q = f_apply(c, q);
        const cx den = z - q;
        const double a = std::arg(den);
        if (!first) {
            double d = a - prev_arg;
            while (d > kPi) d -= kTwoPi;
            while (d < -kPi) d += kTwoPi;
            winding += d;
        }
        prev_arg = a;
        first = false;
    }
    return int(std::lround(winding / kTwoPi));
}

namespace {

// (F^{2k}(w) - w, mu(F^{2k}) - 1) for the real cycle point w at real c.
std::optional<std::pair<double, double>> real_cycle_state(double c, double w, int k) {
    std::vector<cx> orbit;
    cx q(w, 0.0);
    for (int i = 0; i < 2 * k; ++i) {
        orbit.push_back(q);
        q = f_apply(cx(c, 0.0), q);
        if (std::abs(q) > 1e8) return std::nullopt;
    }
    const double residual = q.real() - w;
    const cx mu = cycle_multiplier(cx(c, 0.0), orbit).value;
    return std::make_pair(residual, mu.real() - 1.0);
}

}  // namespace

double find_real_parabolic_boundary(int odd_period, double lo, double hi, const Tolerances& tol) {
    const int k = odd_period;
    cx seed(0.0, 0.0);
    bool have_seed = false;
    auto mu_at = [&](double c) -> std::optional<double> {
        if (!have_seed) {
            double x = 0.0;
            for (int i = 0; i < 4000; ++i) x = x * x + c;
            seed = cx(x, 0.0);
        }
        auto orbit = locate_cycle(cx(c, 0.0), k, seed, tol);
        if (!orbit) return std::nullopt;
        seed = orbit->front();
        have_seed = true;
        std::vector<cx> twice = *orbit;
        for (cx p : *orbit) twice.push_back(p);
        return cycle_multiplier(cx(c, 0.0), twice).value.real();
    };
    auto g = [&](double c) {
        const auto mu = mu_at(c);
        return mu ? *mu - 1.0 : 2.0;
    };
    double glo = g(lo), ghi = g(hi);
    if (glo * ghi > 0.0) throw NoBracketedCrossing();
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double gm = g(mid);
        if ((gm < 0.0) == (glo < 0.0)) {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
            ghi = gm;
        }
        if (hi - lo < 1e-10 * (1.0 + std::abs(lo))) break;
    }
    double c = (glo < 0.0) ? lo : hi;

    // Newton refinement of the parabolic system in (c, w).
    double w = 0.0;
    {
        double x = 0.0;
        for (int i = 0; i < 200000; ++i) x = x * x + c;
        double best = 1e300;
        for (int i = 0; i < k; ++i) {
            x = x * x + c;
            if (std::abs(x) < best) {
                best = std::abs(x);
                w = x;
            }
        }
    }
    for (int it = 0; it < 60; ++it) {
        const auto h0 = real_cycle_state(c, w, k);
        if (!h0) break;
        if (std::abs(h0->first) < 1e-12 * (1.0 + std::abs(w)) &&
            std::abs(h0->second) < 0.1 * tol.parabolic_crossing)
            return c;
        const double hc = 1e-9 * (1.0 + std::abs(c));
        const double hw = 1e-8 * (1.0 + std::abs(w));
        const auto gc = real_cycle_state(c + hc, w, k);
        const auto gmc = real_cycle_state(c - hc, w, k);
        const auto gw = real_cycle_state(c, w + hw, k);
        const auto gmw = real_cycle_state(c, w - hw, k);
        if (!gc || !gmc || !gw || !gmw) break;
        const double j11 = (gw->first - gmw->first) / (2 * hw);
        const double j12 = (gc->first - gmc->first) / (2 * hc);
        const double j21 = (gw->second - gmw->second) / (2 * hw);
        const double j22 = (gc->second - gmc->second) / (2 * hc);
        const double det = j11 * j22 - j12 * j21;
        if (std::abs(det) < 1e-18) break;
        w -= (j22 * h0->first - j12 * h0->second) / det;
        c -= (-j21 * h0->first + j11 * h0->second) / det;
    }
    const auto fin = real_cycle_state(c, w, k);
    if (fin && std::abs(fin->second) < tol.parabolic_crossing) return c;
    throw NoConvergence("tricorn parabolic boundary refinement did not reach multiplier 1");
}

LandingClasses rational_lamination(cx c, int max_period, int levels, int preperiod,
                                   const Tolerances& tol) {
    using angles::Rational;
    std::vector<Rational> angle_set;
    for (int n = 1; n <= max_period; ++n)
        for (const auto& a : angles::angles_of_period(n)) angle_set.push_back(a);
    // Low-preperiod preimages.
    std::vector<Rational> frontier = angle_set;
    for (int p = 0; p < preperiod; ++p) {
        std::vector<Rational> next;
        for (const auto& a : frontier)
            for (const auto& q : a.m2_preimages())
                if (std::find(angle_set.begin(), angle_set.end(), q) == angle_set.end()) {
                    angle_set.push_back(q);
                    next.push_back(q);
                }
        frontier = next;
    }
    std::sort(angle_set.begin(), angle_set.end());
    angle_set.erase(std::unique(angle_set.begin(), angle_set.end()), angle_set.end());

    std::vector<cx> landings(angle_set.size());
    std::vector<bool> good(angle_set.size(), false);
    for (size_t i = 0; i < angle_set.size(); ++i) {
        try {
            const auto ray = trace_dynamical_ray(c, angle_set[i], levels, tol);
            landings[i] = ray.landing;
            good[i] = true;
        } catch (const Error&) {
        }
    }

    // Hierarchical single-link clustering at the landing tolerance.
    std::vector<int> cls(angle_set.size(), -1);
    int nc = 0;
    for (size_t i = 0; i < angle_set.size(); ++i) {
        if (!good[i] || cls[i] >= 0) continue;
        cls[i] = nc;
        bool grew = true;
        while (grew) {
            grew = false;
            for (size_t j = 0; j < angle_set.size(); ++j) {
                if (!good[j] || cls[j] >= 0) continue;
                for (size_t k = 0; k < angle_set.size(); ++k) {
                    if (cls[k] != nc) continue;
                    if (std::abs(landings[j] - landings[k]) < tol.landing_cluster) {
                        cls[j] = nc;
                        grew = true;
                        break;
                    }
                }
            }
        }
        ++nc;
    }

    LandingClasses out;
    out.classes.resize(nc);
    out.landing_points.resize(nc);
    std::vector<int> counts(nc, 0);
    for (size_t i = 0; i < angle_set.size(); ++i) {
        if (!good[i]) continue;
        out.classes[cls[i]].push_back(angle_set[i]);
        out.landing_points[cls[i]] += landings[i];
        counts[cls[i]]++;
    }
    for (int k = 0; k < nc; ++k)
        if (counts[k] > 0) out.landing_points[k] /= double(counts[k]);
    double res = 1e300;
    for (int i = 0; i < nc; ++i)
        for (int j = i + 1; j < nc; ++j)
            res = std::min(res, std::abs(out.landing_points[i] - out.landing_points[j]));
    out.resolution = (nc > 1) ? res : 0.0;
    for (auto& cl : out.classes) std::sort(cl.begin(), cl.end());
    return out;
}

}  // namespace sdl::tricorn
