#include "sdl/schwarz.hpp"

#include <algorithm>
#include <cmath>

namespace sdl::schwarz {

using cardioid::DropletGeometry;
using cardioid::Region;

SchwarzMap SchwarzMap::create(cx a, const Tolerances& tol) {
    SchwarzMap m;
    m.a = a;
    m.tol = tol;
    m.geom = cardioid::circumcircle(a, tol);
    return m;
}

std::optional<SpherePoint> F_apply(const SchwarzMap& m, const SpherePoint& w) {
    if (w.is_inf()) return SpherePoint(m.a);
    const cx z = w.value();
    if (std::abs(z - m.geom.alpha) < m.tol.sing_collar ||
        std::abs(z - cx(DropletGeometry::cusp, 0.0)) < m.tol.sing_collar)
        throw SingularPointError();
    if (cardioid::phi_inverse(z, m.tol.boundary)) return cardioid::schwarz_sigma(z, m.tol.boundary);
    if (std::abs(z - m.geom.a) >= m.geom.r - m.tol.boundary)
        return cardioid::circle_reflect(m.geom, w);
    return std::nullopt;  // open droplet
}

cx F_wirtinger(const SchwarzMap& m, const SpherePoint& w) {
    if (w.is_inf()) throw Error("Wirtinger derivative requested at infinity");
    const cx z = w.value();
    if (cardioid::phi_inverse(z, m.tol.boundary)) return cardioid::sigma_wirtinger(z);
    const cx d = std::conj(z - m.geom.a);
    return -m.geom.r * m.geom.r / (d * d);
}

int sector_symbol(const SchwarzMap& m, const SpherePoint& w) {
    if (w.is_inf()) return 2;
    const cx z = w.value();
    const auto lam = cardioid::phi_inverse(z, m.tol.boundary);
    if (!lam) return 2;
    const double t = angle_of(*lam);
    return (t > 0.0 && t < m.geom.t_alpha) ? 1 : 3;
}

EscapeRecord classify_point(const SchwarzMap& m, const SpherePoint& w, int max_iter) {
    EscapeRecord rec;
    SpherePoint cur = w;
    for (int it = 0; it <= max_iter; ++it) {
        const Region reg = cardioid::droplet_contains(m.geom, cur, m.tol);
        if (reg == Region::Singular) {
            rec.hit_singular = true;
            rec.rank = it;
            rec.terminal = cur;
            return rec;
        }
        if (reg == Region::Interior || reg == Region::BoundaryRegular) {
            rec.escapes = true;
            rec.rank = it;
            rec.terminal = cur;
            return rec;
        }
        if (it == max_iter) break;
        int sym = sector_symbol(m, cur);
        // The exact tile itinerary never repeats a symbol; where the collar
        // rule disagrees with that constraint the other cardioid sector is the
        // consistent label.
        if (sym != 2 && !rec.address.symbols.empty() && sym == rec.address.symbols.back())
            sym = (sym == 1) ? 3 : 1;
        rec.address.symbols.push_back(uint8_t(sym));
        std::optional<SpherePoint> next;
        try {
            next = F_apply(m, cur);
        } catch (const SingularPointError&) {
            rec.hit_singular = true;
            rec.rank = it;
            rec.terminal = cur;
            rec.address.symbols.pop_back();
            return rec;
        }
        if (!next) {  // cannot happen: droplet interior was handled above
            rec.escapes = true;
            rec.rank = it;
            rec.terminal = cur;
            rec.address.symbols.pop_back();
            return rec;
        }
        cur = *next;
    }
    rec.escapes = false;
    rec.rank = max_iter;
    rec.terminal = cur;
    return rec;
}

std::optional<int> depth(cx a, int max_iter, const Tolerances& tol) {
    const SchwarzMap m = SchwarzMap::create(a, tol);
    const EscapeRecord rec = classify_point(m, SpherePoint::infinity(), max_iter);
    if (!rec.escapes) return std::nullopt;
    return rec.rank;
}

std::vector<PreimageBranch> inverse_branches(const SchwarzMap& m, const SpherePoint& z) {
    std::vector<PreimageBranch> out;
    if (z.is_inf()) {
        out.push_back({SpherePoint(cx(0.0, 0.0)), 0});  // critical preimage
        return out;
    }
    const cx zz = z.value();
    if (std::abs(zz - m.geom.a) < m.geom.r - m.tol.boundary)
        out.push_back({cardioid::circle_reflect(m.geom, z), 2});
    // Cardioid preimages: roots nu of nu^2 - 2 nu + 4z with |nu| > 1.
    const cx s = std::sqrt(1.0 - 4.0 * zz);
    const cx big = (s.real() >= 0.0) ? 1.0 + s : 1.0 - s;
    const cx other = (std::abs(big) < 1e-300) ? big : 4.0 * zz / big;
    for (const cx nu : {big, other}) {
        if (std::abs(nu) <= 1.0 + m.tol.boundary) continue;
        const cx lam = 1.0 / std::conj(nu);
        const SpherePoint w(cardioid::phi(lam));
        out.push_back({w, sector_symbol(m, w)});
    }
    return out;
}

namespace {

// Inverse branch with a chosen symbol. The predictor (previous pullback pass)
// resolves the 1-vs-3 choice when present; otherwise the collar label does.
cx apply_inverse_branch(const SchwarzMap& m, int sym, cx z, const cx* predictor) {
    if (sym == 2) return cardioid::circle_reflect(m.geom, SpherePoint(z)).value();

    const cx s = std::sqrt(1.0 - 4.0 * z);
    const cx big = (s.real() >= 0.0) ? 1.0 + s : 1.0 - s;
    const cx other = (std::abs(big) < 1e-300) ? big : 4.0 * z / big;
    cx cand[2];
    int ncand = 0;
    for (const cx nu : {big, other}) {
        if (std::abs(nu) <= 1.0 + 1e-13) continue;
        cand[ncand++] = cardioid::phi(1.0 / std::conj(nu));
    }
    if (ncand == 0) throw BranchAmbiguity("no cardioid preimage");
    if (ncand == 1) return cand[0];
    // The collar label decides when it separates the candidates (exact for
    // real parameters, where the sectors are mirror images across the axis).
    const int l0 = sector_symbol(m, SpherePoint(cand[0]));
    const int l1 = sector_symbol(m, SpherePoint(cand[1]));
    if (l0 == sym && l1 != sym) return cand[0];
    if (l1 == sym && l0 != sym) return cand[1];
    // Label collision: the nesting predictor breaks the tie.
    if (predictor) {
        const double d0 = std::abs(cand[0] - *predictor), d1 = std::abs(cand[1] - *predictor);
        if (std::abs(d0 - d1) < m.tol.branch_ambiguity * (1.0 + std::min(d0, d1)))
            throw BranchAmbiguity();
        return d0 < d1 ? cand[0] : cand[1];
    }
    // No predictor either: the boundary-parameter distance.
    auto arc_dist = [&](cx w) {
        const auto lam = cardioid::phi_inverse(w, 1e-9);
        const double t = lam ? angle_of(*lam) : 0.5;
        const double mid = (sym == 1) ? 0.5 * m.geom.t_alpha : 0.5 * (m.geom.t_alpha + 1.0);
        return circ_dist(t, mid);
    };
    return arc_dist(cand[0]) < arc_dist(cand[1]) ? cand[0] : cand[1];
}

bool verify_forward_itinerary(const SchwarzMap& m, const SpherePoint& w0,
                              const angles::Itinerary& it, int count) {
    SpherePoint w = w0;
    for (int i = 0; i < count; ++i) {
        int sym;
        bool boundary_ambiguous = false;
        try {
            sym = sector_symbol(m, w);
            if (sym != 2) {
                // On the sector boundary the coding is one-sided: points on
                // the separatrix carry both cardioid symbols.
                const auto lam = cardioid::phi_inverse(w.value(), m.tol.boundary);
                if (lam) {
                    const double t = angle_of(*lam);
                    if (circ_dist(t, 0.0) < 1e-9 || circ_dist(t, m.geom.t_alpha) < 1e-9)
                        boundary_ambiguous = true;
                }
            }
        } catch (const Error&) {
            return false;
        }
        if (sym != 2 && i > 0 && sym == it.symbol_at(i - 1)) sym = (sym == 1) ? 3 : 1;
        const int want = it.symbol_at(i);
        if (sym != want && !(boundary_ambiguous && want != 2)) return false;
        std::optional<SpherePoint> next;
        try {
            next = F_apply(m, w);
        } catch (const SingularPointError&) {
            return i > 0;  // reached the boundary orbit; prefix already matched
        }
        if (!next) return false;
        w = *next;
    }
    return true;
}

}  // namespace

RayTrace trace_dynamical_ray(const SchwarzMap& m, const angles::Itinerary& raw, int depth) {
    angles::Itinerary it = raw;
    it.normalize();
    if (!it.admissible()) throw InadmissibleWord();

    RayTrace out;
    const size_t pre = it.pre.size();
    const size_t n = it.per.size();
    const angles::Rational tail_angle =
        angles::rational_from_itinerary(angles::Itinerary{{}, it.per});
    const bool vertex_tail = tail_angle.is_vertex();

    // Rank-1 representative: the cardioid branches of a droplet-interior
    // basepoint land in tiles attached to the full boundary arcs, where the
    // collar rule is exact.
    const cx q0 = cardioid::droplet_interior_point(m.geom, m.tol);
    auto rank1_rep = [&](int sym) { return apply_inverse_branch(m, sym, q0, nullptr); };

    // Depth continuation: chains[j] = representative of the tile coded by
    // symbols j-1 .. k-1; each deeper chain uses the previous one as the
    // predictor, so every 1-vs-3 branch choice is locked by nesting.
    const int blocks = std::max<size_t>(4, (24 + n - 1) / n);
    const int D0 = int(pre + size_t(blocks) * n);
    std::vector<cx> prev_chain, chain;
    for (int k = 1; k <= D0; ++k) {
        chain.assign(size_t(k) + 1, cx{});
        chain[size_t(k)] = rank1_rep(it.symbol_at(size_t(k) - 1));
        for (int j = k - 1; j >= 1; --j)
            chain[size_t(j)] =
                apply_inverse_branch(m, it.symbol_at(size_t(j) - 1), chain[size_t(j) + 1],
                                     &prev_chain[size_t(j)]);
        // chain[k] had no predictor; positions 1..k-1 did.
        out.points.push_back(chain[1]);
        if (out.points.size() > 1)
            out.cauchy_gap = std::abs(out.points.back() - out.points[out.points.size() - 2]);
        prev_chain = chain;
    }

    // Landing of the periodic suffix.
    cx tail_landing;
    if (vertex_tail) {
        out.vertex_ray = true;
        tail_landing =
            (tail_angle.vertex_index() == 0) ? cx(DropletGeometry::cusp, 0.0) : m.geom.alpha;
    } else {
        // Cyclic passes of the composed inverse branch over one period,
        // seeded with the deepest suffix representatives of the depth chain.
        std::vector<cx> ypred(n + 1), ycur(n + 1);
        for (size_t j = 0; j < n; ++j) ypred[j] = prev_chain[pre + j + 1];
        cx x = prev_chain[pre + 1];
        double gap = out.cauchy_gap;
        int pass = 0;
        for (; pass < depth; ++pass) {
            ycur[n] = x;
            for (size_t j = n; j-- > 0;)
                ycur[j] = apply_inverse_branch(m, it.per[j], ycur[j + 1], &ypred[j]);
            gap = std::abs(ycur[0] - x);
            x = ycur[0];
            ypred = ycur;
            if (pre == 0) out.points.push_back(x);
            if (pass > 0 && gap < 0.5 * m.tol.ray_gap) break;
        }
        out.passes = pass + 1;

        // Newton polish on the holomorphic even iterate.
        const int N = (n % 2 == 0) ? int(n) : int(2 * n);
        cx w = x;
        for (int itn = 0; itn < 12; ++itn) {
            auto G = [&](cx p) -> std::optional<cx> {
                SpherePoint q(p);
                for (int i = 0; i < N; ++i) {
                    auto nx = F_apply(m, q);
                    if (!nx || nx->is_inf()) return std::nullopt;
                    q = *nx;
                }
                return q.value() - p;
            };
            const auto g0 = G(w);
            if (!g0) break;
            const double h = 1e-7 * (1.0 + std::abs(w));
            const auto gp = G(w + cx(h, 0.0)), gm = G(w - cx(h, 0.0));
            if (!gp || !gm) break;
            const cx dg = (*gp - *gm) / (2.0 * h);
            if (std::abs(dg) < 1e-14) break;
            const cx step = *g0 / dg;
            if (std::abs(step) > 10.0 * (std::abs(w) + 1.0)) break;
            w -= step;
            if (std::abs(step) < 1e-13 * (1.0 + std::abs(w))) break;
        }
        tail_landing = (std::abs(w - x) < 10.0 * (gap + 1e-9)) ? w : x;

        // Periodic-suffix trace gap (the depth-chain gap tracks the full word
        // including the preperiod; the pass gap is the sharper tail bound).
        out.cauchy_gap = std::min(out.cauchy_gap, gap);
    }

    // Pull the tail landing back through the preperiod, predictors from the
    // depth chains.
    cx land = tail_landing;
    for (size_t i = pre; i-- > 0;) {
        land = apply_inverse_branch(m, it.pre[i], land, &prev_chain[i + 1]);
        out.points.push_back(land);
    }
    out.landing = SpherePoint(land);
    if (out.vertex_ray && pre == 0) {
        out.points.push_back(land);
        out.cauchy_gap = 0.0;
        out.itinerary_verified = true;
    } else {
        out.itinerary_verified = verify_forward_itinerary(
            m, out.landing, it, int(std::min<size_t>(20, pre + n)));
        if (out.vertex_ray) out.cauchy_gap = 0.0;  // analytic landing, exact
    }
    return out;
}

RayTrace trace_ray(const SchwarzMap& m, const angles::RhoAngle& angle, int depth) {
    if (angle.vertex) {
        RayTrace out;
        out.vertex_ray = true;
        out.itinerary_verified = true;
        out.landing = SpherePoint(angle.vertex_k == 0 ? cx(DropletGeometry::cusp, 0.0) : m.geom.alpha);
        out.points.push_back(out.landing.value());
        return out;
    }
    return trace_dynamical_ray(m, angle.itin, depth);
}

WirtingerValue cycle_multiplier(const SchwarzMap& m, const std::vector<SpherePoint>& cycle) {
    for (const auto& p : cycle) {
        if (p.is_inf() || std::abs(p.value()) < 1e-9)
            return {cx(0.0, 0.0), cycle.size() % 2 == 1};  // superattracting
    }
    cx v(1.0, 0.0);
    for (const auto& p : cycle) v = F_wirtinger(m, p) * std::conj(v);
    return {v, cycle.size() % 2 == 1};
}

namespace {

std::optional<SpherePoint> iterate_n(const SchwarzMap& m, SpherePoint w, int n) {
    for (int i = 0; i < n; ++i) {
        std::optional<SpherePoint> nx;
        try {
            nx = F_apply(m, w);
        } catch (const SingularPointError&) {
            return std::nullopt;
        }
        if (!nx) return std::nullopt;
        w = *nx;
    }
    return w;
}

std::optional<cx> even_iterate_displacement(const SchwarzMap& m, cx w, int N) {
    auto q = iterate_n(m, SpherePoint(w), N);
    if (!q || q->is_inf()) return std::nullopt;
    return q->value() - w;
}

std::optional<cx> newton_even_cycle(const SchwarzMap& m, cx seed, int N, double tol_res) {
    cx w = seed;
    for (int it = 0; it < 60; ++it) {
        const auto g0 = even_iterate_displacement(m, w, N);
        if (!g0) return std::nullopt;
        if (std::abs(*g0) < tol_res) return w;
        const double h = 1e-6 * (1.0 + std::abs(w));
        const auto gp = even_iterate_displacement(m, w + cx(h, 0.0), N);
        const auto gm = even_iterate_displacement(m, w - cx(h, 0.0), N);
        if (!gp || !gm) return std::nullopt;
        const cx dg = (*gp - *gm) / (2.0 * h);
        if (std::abs(dg) < 1e-13) return std::nullopt;
        const cx step = *g0 / dg;
        if (std::abs(step) > 3.0) return std::nullopt;
        w -= step;
    }
    return std::nullopt;
}

}  // namespace

std::optional<std::vector<SpherePoint>> locate_cycle(const SchwarzMap& m, int period, cx seed) {
    const int N = (period % 2 == 0) ? period : 2 * period;
    const auto root = newton_even_cycle(m, seed, N, 0.01 * m.tol.cycle_residual);
    if (!root) return std::nullopt;
    std::vector<SpherePoint> orbit;
    SpherePoint w(*root);
    for (int i = 0; i < period; ++i) {
        orbit.push_back(w);
        auto nx = iterate_n(m, w, 1);
        if (!nx) return std::nullopt;
        w = *nx;
    }
    if (!sphere_close(w, orbit.front(), m.tol.cycle_residual)) return std::nullopt;
    // Minimal period check.
    for (int q = 1; q < period; ++q) {
        if (period % q != 0) continue;
        if (sphere_close(orbit[size_t(q)], orbit.front(), m.tol.cycle_residual)) return std::nullopt;
    }
    return orbit;
}

std::vector<CycleRecord> find_cycles(const SchwarzMap& m, int period, int grid_n) {
    std::vector<CycleRecord> out;
    const double R = m.geom.r * 1.2;
    auto try_seed = [&](cx seed) {
        auto orbit = locate_cycle(m, period, seed);
        if (!orbit) return;
        // Reflection-fixed boundary curves and escaped points are not cycles
        // of the dynamics on the non-escaping set.
        for (const auto& p : *orbit) {
            const Region reg = cardioid::droplet_contains(m.geom, p, m.tol);
            if (reg != Region::Outside) return;
        }
        for (const auto& rec : out)
            for (const auto& p : rec.points)
                if (sphere_close(p, orbit->front(), 1e-6)) return;
        CycleRecord rec;
        rec.points = *orbit;
        rec.period = period;
        rec.multiplier = cycle_multiplier(m, *orbit);
        const double mod = std::abs(rec.multiplier.value);
        if (mod < 1e-9)
            rec.cls = CycleClass::Superattracting;
        else if (mod < 1.0 - m.tol.multiplier_neutral)
            rec.cls = CycleClass::Attracting;
        else if (mod > 1.0 + m.tol.multiplier_neutral)
            rec.cls = CycleClass::Repelling;
        else
            rec.cls = CycleClass::Parabolic;
        out.push_back(std::move(rec));
    };
    try_seed(cx(0.0, 0.0));  // critical cycles
    // Attracting cycles: the critical orbit converges to them.
    {
        SpherePoint w = SpherePoint::infinity();
        for (int i = 0; i < 600; ++i) {
            auto nx = iterate_n(m, w, 1);
            if (!nx) break;
            w = *nx;
            if (i > 500 && !w.is_inf()) try_seed(w.value());
        }
    }
    for (int i = 0; i < grid_n; ++i)
        for (int j = 0; j < grid_n; ++j) {
            const double x = m.geom.a.real() + R * (2.0 * (i + 0.5) / grid_n - 1.0);
            const double y = m.geom.a.imag() + R * (2.0 * (j + 0.5) / grid_n - 1.0);
            try_seed(cx(x, y));
        }
    return out;
}

cx koenigs_ratio(cx a, int k, const Tolerances& tol) {
    if (k % 2 == 0) throw NotOddAttracting("period must be odd");
    const SchwarzMap m = SchwarzMap::create(a, tol);

    // Settle the critical orbit onto the attracting cycle of F^{2k}.
    SpherePoint w = SpherePoint::infinity();
    SpherePoint prev = w;
    int settle = -1;
    std::vector<SpherePoint> history;
    for (int i = 0; i < 4000; ++i) {
        history.push_back(w);
        auto nx = iterate_n(m, w, 2 * k);
        if (!nx) throw NotOddAttracting("critical orbit escapes");
        prev = w;
        w = *nx;
        if (i > 2 && w.is_inf() && prev.is_inf()) return cx(0.0, 0.0);  // superattracting center
        if (i > 2 && !w.is_inf() && !prev.is_inf() &&
            std::abs(w.value() - prev.value()) < 1e-13 * (1.0 + std::abs(w.value()))) {
            settle = i;
            break;
        }
    }
    if (settle < 0) throw NotOddAttracting("critical orbit does not settle at period " + std::to_string(k));
    const cx z_a = w.value();

    // Cycle and multiplier of F^{2k}.
    std::vector<SpherePoint> cyc2k;
    {
        SpherePoint q(z_a);
        for (int i = 0; i < 2 * k; ++i) {
            cyc2k.push_back(q);
            auto nx = iterate_n(m, q, 1);
            if (!nx) throw NotOddAttracting("cycle leaves the domain");
            q = *nx;
        }
    }
    const cx lambda = cycle_multiplier(m, cyc2k).value;
    if (std::abs(lambda) < 1e-10) return cx(0.0, 0.0);  // superattracting center
    if (std::abs(lambda) >= 1.0) throw NotOddAttracting("cycle not attracting");

    // The Koenigs ratio is a conformal invariant; compute the coordinate in
    // the sphere chart u = 1/w when the cycle point is large (it continues
    // the superattracting infinity, so |z_a| can be thousands), where the
    // w-chart subtractions lose all precision.
    const bool use_chart = std::abs(z_a) > 10.0;
    auto chart = [&](cx z) { return use_chart ? 1.0 / z : z; };
    const cx za_c = chart(z_a);
    const double scale = 1.0 + std::abs(za_c);

    auto kappa = [&](cx z) -> cx {
        cx q = z;
        cx val = chart(q) - za_c;
        cx lp = 1.0;
        double prev_delta = 1e300;
        for (int n = 1; n <= 300; ++n) {
            auto nx = iterate_n(m, SpherePoint(q), 2 * k);
            if (!nx || nx->is_inf()) throw LinearizationDiverged();
            q = nx->value();
            lp *= lambda;
            const cx next = (chart(q) - za_c) / lp;
            const double delta = std::abs(next - val) / (1.0 + std::abs(next));
            if (delta < tol.koenigs_increment) return next;
            if (delta > prev_delta && prev_delta < 1e-6) return val;  // noise floor
            prev_delta = delta;
            val = next;
        }
        throw LinearizationDiverged();
    };

    // A critical-orbit representative in the linearization domain: chart
    // distance near the geometric middle between the noise floor and the
    // nonlinearity scale.
    const double floor_c = 1e3 * 2.2e-16 * scale;
    const double sweet = std::sqrt(floor_c * 0.01 * scale);
    cx v{};
    bool have_v = false;
    double best = 1e300;
    {
        SpherePoint q = SpherePoint::infinity();
        for (int i = 0; i < 4000; ++i) {
            auto nx = iterate_n(m, q, 2 * k);
            if (!nx) break;
            q = *nx;
            if (q.is_inf()) continue;
            const double d = std::abs(chart(q.value()) - za_c);
            if (d <= floor_c) break;
            if (d < 0.05 * scale) {
                const double badness = std::abs(std::log(d / sweet));
                if (badness < best) {
                    best = badness;
                    v = q.value();
                    have_v = true;
                }
            }
        }
    }
    if (!have_v) throw LinearizationDiverged();

    auto half = iterate_n(m, SpherePoint(v), k);
    if (!half || half->is_inf()) throw LinearizationDiverged();
    const cx kv = kappa(v);
    if (std::abs(kv) < 1e-300) throw LinearizationDiverged();
    return kappa(half->value()) / kv;
}

namespace {

// Displacement u - g(u) in a chart adapted to the fixed point: the identity
// chart for moderate points, u = 1/w on the sphere when the point is large
// (cycles here continue the superattracting infinity). The index is a
// conformal invariant, so any local chart gives the same value.
struct ChartedReturn {
    const SchwarzMap& m;
    int period;
    bool chart;
    cx center;  // fixed point in chart coordinates

    static ChartedReturn make(const SchwarzMap& m, cx fixed_point, int period) {
        const bool big = std::abs(fixed_point) > 10.0;
        return {m, period, big, big ? 1.0 / fixed_point : fixed_point};
    }
    // u in chart coordinates -> u - g(u); nullopt when the orbit leaves the
    // domain.
    std::optional<cx> displacement(cx u) const {
        const cx w = chart ? 1.0 / u : u;
        auto g = iterate_n(m, SpherePoint(w), period);
        if (!g) return std::nullopt;
        cx gu;
        if (chart) {
            if (g->is_inf()) gu = cx(0.0, 0.0);
            else if (std::abs(g->value()) < 1e-300) return std::nullopt;
            else gu = 1.0 / g->value();
        } else {
            if (g->is_inf()) return std::nullopt;
            gu = g->value();
        }
        return u - gu;
    }
    // Large enough to enclose the split pair of a boundary-resolution
    // parabolic cluster, small enough to exclude the rest of the cycle.
    double radius0() const { return 1e-2 * (chart ? std::abs(center) : 1.0); }
};

cx ring_index(const ChartedReturn& cr, double delta, int M) {
    cx acc(0.0, 0.0);
    for (int j = 0; j < M; ++j) {
        const cx e = std::polar(delta, kTwoPi * j / M);
        const auto den = cr.displacement(cr.center + e);
        if (!den) throw ContourThroughZero();
        if (std::abs(*den) < 1e-15 * (1.0 + std::abs(cr.center))) throw ContourThroughZero();
        acc += e / *den;
    }
    return acc / double(M);
}

}  // namespace

cx parabolic_index(const SchwarzMap& m, cx fixed_point, int return_period) {
    const auto cr = ChartedReturn::make(m, fixed_point, return_period);
    double delta = cr.radius0();
    cx prev = ring_index(cr, delta, 4096);
    for (int halvings = 0; halvings < 7; ++halvings) {
        delta *= 0.5;
        const cx cur = ring_index(cr, delta, 4096);
        if (std::abs(cur - prev) < m.tol.index_agree) return cur;
        prev = cur;
    }
    throw NoConvergence("contour index did not stabilize");
}

int fixed_point_multiplicity(const SchwarzMap& m, cx fixed_point, int return_period, double delta) {
    const auto cr = ChartedReturn::make(m, fixed_point, return_period);
    const double radius = delta * (cr.chart ? std::abs(cr.center) : 1.0);
    constexpr int M = 4096;
    double winding = 0.0, prev_arg = 0.0;
    bool first = true;
    for (int j = 0; j <= M; ++j) {
        const cx e = std::polar(radius, kTwoPi * j / M);
        const auto den = cr.displacement(cr.center + e);
        if (!den) throw ContourThroughZero();
        const double a = std::arg(*den);
        if (!first) {
            double dd = a - prev_arg;
            while (dd > kPi) dd -= kTwoPi;
            while (dd < -kPi) dd += kTwoPi;
            winding += dd;
        }
        prev_arg = a;
        first = false;
    }
    return int(std::lround(winding / kTwoPi));
}

namespace {

std::optional<cx> critical_orbit_point(cx a, int period, const Tolerances& tol) {
    try {
        const SchwarzMap m = SchwarzMap::create(a, tol);
        auto w = iterate_n(m, SpherePoint(cx(0.0, 0.0)), period);
        if (!w) return std::nullopt;
        if (w->is_inf()) return cx(1e9, 0.0);  // far from zero in the residual sense
        return w->value();
    } catch (const Error&) {
        return std::nullopt;
    }
}

}  // namespace

cx find_center(int period, cx seed, const Tolerances& tol) {
    cx a = seed;
    auto G = [&](cx p) { return critical_orbit_point(p, period, tol); };
    auto g0 = G(a);
    if (!g0) throw NoConvergence("center seed infeasible");
    for (int it = 0; it < 80; ++it) {
        if (std::abs(*g0) < tol.center_residual) return a;
        const double h = 1e-7 * (1.0 + std::abs(a));
        const auto gx = G(a + cx(h, 0)), gmx = G(a - cx(h, 0));
        const auto gy = G(a + cx(0, h)), gmy = G(a - cx(0, h));
        if (!gx || !gmx || !gy || !gmy) throw NoConvergence("center Jacobian infeasible");
        // 2x2 real Jacobian of (Re G, Im G) w.r.t. (Re a, Im a).
        const double j11 = (gx->real() - gmx->real()) / (2 * h);
        const double j21 = (gx->imag() - gmx->imag()) / (2 * h);
        const double j12 = (gy->real() - gmy->real()) / (2 * h);
        const double j22 = (gy->imag() - gmy->imag()) / (2 * h);
        const double det = j11 * j22 - j12 * j21;
        if (std::abs(det) < 1e-16) throw NoConvergence("singular Jacobian");
        const double rx = g0->real(), ry = g0->imag();
        cx step((j22 * rx - j12 * ry) / det, (-j21 * rx + j11 * ry) / det);
        // Damping.
        double scale = 1.0;
        for (int d = 0; d < 10; ++d) {
            const auto trial = G(a - scale * step);
            if (trial && std::abs(*trial) < std::abs(*g0)) {
                a -= scale * step;
                g0 = trial;
                break;
            }
            scale *= 0.5;
            if (d == 9) throw NoConvergence("damping exhausted");
        }
    }
    throw NoConvergence("center iteration limit");
}

std::vector<cx> find_all_centers(int period, cx lo, cx hi, int grid_n, const Tolerances& tol) {
    std::vector<cx> out;
    for (int i = 0; i < grid_n; ++i)
        for (int j = 0; j < grid_n; ++j) {
            const cx seed(lo.real() + (hi.real() - lo.real()) * (i + 0.5) / grid_n,
                          lo.imag() + (hi.imag() - lo.imag()) * (j + 0.5) / grid_n);
            cx a;
            try {
                a = find_center(period, seed, tol);
            } catch (const Error&) {
                continue;
            }
            // Minimal period of the critical orbit.
            bool minimal = true;
            for (int q = 1; q < period; ++q) {
                if (period % q != 0) continue;
                const auto w = critical_orbit_point(a, q, tol);
                if (w && std::abs(*w) < 1e-7) minimal = false;
            }
            if (!minimal) continue;
            bool dup = false;
            for (const cx& c : out)
                if (std::abs(c - a) < 1e-7) dup = true;
            if (!dup) out.push_back(a);
        }
    std::sort(out.begin(), out.end(), [](cx x, cx y) {
        return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
    });
    return out;
}

namespace {

// Second-iterate multiplier of the real period-k cycle at real parameter a,
// with a continuation seed. nullopt when the cycle cannot be located.
std::optional<double> real_cycle_mu(double a, int k, cx& seed, const Tolerances& tol) {
    try {
        const SchwarzMap m = SchwarzMap::create(cx(a, 0.0), tol);
        auto orbit = locate_cycle(m, k, seed);
        if (!orbit) {
            // Retry from the attracting critical orbit.
            SpherePoint w = SpherePoint::infinity();
            for (int i = 0; i < 600; ++i) {
                auto nx = iterate_n(m, w, 1);
                if (!nx) return std::nullopt;
                w = *nx;
            }
            if (w.is_inf()) return std::nullopt;
            orbit = locate_cycle(m, k, w.value());
            if (!orbit) return std::nullopt;
        }
        seed = orbit->front().is_inf() ? seed : orbit->front().value();
        std::vector<SpherePoint> twice = *orbit;
        for (const auto& p : *orbit) twice.push_back(p);
        const cx mu = cycle_multiplier(m, twice).value;
        return mu.real();
    } catch (const Error&) {
        return std::nullopt;
    }
}

}  // namespace

namespace {

// Second-iterate multiplier of the period-k real cycle through the real point
// w at real parameter a; nullopt when an iterate leaves the domain.
std::optional<std::pair<double, double>> real_cycle_state(double a, double w, int k,
                                                          const Tolerances& tol) {
    SchwarzMap m;
    try {
        m = SchwarzMap::create(cx(a, 0.0), tol);
    } catch (const Error&) {
        return std::nullopt;
    }
    std::vector<SpherePoint> orbit;
    SpherePoint q(cx(w, 0.0));
    for (int i = 0; i < 2 * k; ++i) {
        orbit.push_back(q);
        std::optional<SpherePoint> nx;
        try {
            nx = F_apply(m, q);
        } catch (const SingularPointError&) {
            return std::nullopt;
        }
        if (!nx) return std::nullopt;
        q = *nx;
    }
    if (q.is_inf()) return std::nullopt;
    const double residual = q.value().real() - w;
    const cx mu = cycle_multiplier(m, orbit).value;
    return std::make_pair(residual, mu.real() - 1.0);
}

}  // namespace

double find_real_parabolic_boundary(int odd_period, double lo, double hi, const Tolerances& tol) {
    const int k = odd_period;
    cx seed(0.5 * (lo + hi), 0.0);
    auto g = [&](double a) -> double {
        const auto mu = real_cycle_mu(a, k, seed, tol);
        if (!mu) return 2.0;  // cycle gone or not locatable: outside
        return *mu - 1.0;
    };
    // Coarse bisection for a seed (its resolution is limited by how far into
    // the component the cycle can still be located).
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
    double a = (glo < 0.0) ? lo : hi;

    // Newton on the parabolic system: unknowns (a, w), equations
    // F^{2k}(w) - w = 0 and mu(F^{2k}) - 1 = 0. The real-symmetric cycle
    // point is real, so the system is 2x2 real. Seed w: a small real cycle
    // point at the bisected parameter.
    const auto m0 = SchwarzMap::create(cx(a, 0.0), tol);
    double w = 0.0;
    {
        SpherePoint q = SpherePoint::infinity();
        for (int i = 0; i < 200000; ++i) {
            auto nx = F_apply(m0, q);
            if (!nx) throw NoBracketedCrossing();
            q = *nx;
        }
        // Walk the cycle and take the smallest-|w| representative.
        double best = 1e300;
        for (int i = 0; i < k; ++i) {
            auto nx = F_apply(m0, q);
            q = *nx;
            if (!q.is_inf() && std::abs(q.value()) < best) {
                best = std::abs(q.value());
                w = q.value().real();
            }
        }
    }
    for (int it = 0; it < 60; ++it) {
        const auto h0 = real_cycle_state(a, w, k, tol);
        if (!h0) break;
        if (std::abs(h0->first) < 1e-12 * (1.0 + std::abs(w)) &&
            std::abs(h0->second) < 0.1 * tol.parabolic_crossing)
            return a;
        const double ha = 1e-9 * (1.0 + std::abs(a));
        const double hw = 1e-8 * (1.0 + std::abs(w));
        const auto ga = real_cycle_state(a + ha, w, k, tol);
        const auto gma = real_cycle_state(a - ha, w, k, tol);
        const auto gw = real_cycle_state(a, w + hw, k, tol);
        const auto gmw = real_cycle_state(a, w - hw, k, tol);
        if (!ga || !gma || !gw || !gmw) break;
        const double j11 = (gw->first - gmw->first) / (2 * hw);   // d residual / d w
        const double j12 = (ga->first - gma->first) / (2 * ha);   // d residual / d a
        const double j21 = (gw->second - gmw->second) / (2 * hw); // d (mu-1) / d w
        const double j22 = (ga->second - gma->second) / (2 * ha); // d (mu-1) / d a
        const double det = j11 * j22 - j12 * j21;
        if (std::abs(det) < 1e-18) break;
        const double dw = (j22 * h0->first - j12 * h0->second) / det;
        const double da = (-j21 * h0->first + j11 * h0->second) / det;
        w -= dw;
        a -= da;
    }
    const auto fin = real_cycle_state(a, w, k, tol);
    if (fin && std::abs(fin->second) < tol.parabolic_crossing) return a;
    throw NoConvergence("parabolic boundary refinement did not reach multiplier 1");
}

bool slit_orbit_check(double a, int n) {
    if (a >= -1.0 / 12.0) throw Error("slit check requires a < -1/12");
    const auto geom = cardioid::circumcircle_allow_slit(cx(a, 0.0));
    const double r = geom.r;
    const double q_a = a - r;
    double x = a;  // first iterate of infinity under the circle reflection
    for (int i = 0; i < n; ++i) {
        if (x >= 0.0) return false;
        if (x >= -0.75 && x <= 0.0) {
            const double lam = 1.0 - std::sqrt(1.0 - 4.0 * x);
            if (lam == 0.0) return true;  // hits the critical point (never on the slit)
            x = (2.0 * lam - 1.0) / (4.0 * lam * lam);
        } else if (x <= q_a) {
            x = a + r * r / (x - a);
        } else {
            return true;  // orbit leaves the interval domain: no further iterate defined
        }
    }
    return true;
}

}  // namespace sdl::schwarz
