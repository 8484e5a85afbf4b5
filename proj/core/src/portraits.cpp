#include "sdl/portraits.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "sdl/triangle.hpp"

namespace sdl::portraits {

using angles::Itinerary;
using angles::Rational;
using angles::RhoAngle;

std::vector<AngleKey> AngleKey::preimages() const {
    std::vector<AngleKey> out;
    if (kind == MapKind::M2) {
        for (const auto& p : q.m2_preimages()) out.push_back(of(p));
        return out;
    }
    if (r.vertex) {
        // A vertex is fixed; its second preimage is the reflection from the
        // non-adjacent arc, coded by prepending that arc's symbol to the
        // canonical vertex coding.
        static const uint8_t nonadj[3] = {2, 3, 1};
        static const uint8_t tails[3][2] = {{1, 3}, {1, 2}, {2, 3}};
        const int k = r.vertex_k;
        out.push_back(*this);
        Itinerary it;
        it.pre = {nonadj[k]};
        it.per = {tails[k][0], tails[k][1]};
        out.push_back(of(RhoAngle::from_itinerary(it)));
        return out;
    }
    const uint8_t first = r.itin.symbol_at(0);
    for (uint8_t j = 1; j <= 3; ++j) {
        if (j == first) continue;
        out.push_back(of(RhoAngle::from_itinerary(r.itin.prepended(j))));
    }
    return out;
}

namespace {

bool rational_in_open_arc(const Rational& x, const Rational& a, const Rational& b) {
    if (x == a || x == b) return false;
    if (a < b) return a < x && x < b;
    return a < x || x < b;
}

bool pos_in_open_arc(double x, double a, double b, double eps = 1e-11) {
    auto wrap = [](double t) { return t - std::floor(t); };
    const double len = wrap(b - a);
    const double off = wrap(x - a);
    return off > eps && off < len - eps;
}

}  // namespace

bool in_open_arc(const AngleKey& x, const AngleKey& a, const AngleKey& b) {
    if (x.kind == MapKind::M2 && a.kind == MapKind::M2 && b.kind == MapKind::M2)
        return rational_in_open_arc(x.q, a.q, b.q);
    if (x == a || x == b) return false;
    return pos_in_open_arc(x.pos(), a.pos(), b.pos());
}

bool leaves_cross(const Leaf& x, const Leaf& y) {
    if (x.a == y.a || x.a == y.b || x.b == y.a || x.b == y.b) return false;
    const bool a_in = in_open_arc(y.a, x.a, x.b);
    const bool b_in = in_open_arc(y.b, x.a, x.b);
    return a_in != b_in;
}

namespace {

void sort_circular(AngleClass& c) {
    std::sort(c.begin(), c.end(), [](const AngleKey& u, const AngleKey& v) { return u.pos() < v.pos(); });
}

int angle_period(const AngleKey& k) {
    if (k.kind == MapKind::M2) return k.q.period_under_m2();
    if (k.r.vertex) return 1;
    if (!k.r.itin.pre.empty()) return 0;  // strictly preperiodic
    return int(k.r.itin.per.size());
}

bool strictly_preperiodic(const AngleKey& k) {
    if (k.kind == MapKind::M2) return k.q.orbit_shape().first > 0;
    return !k.r.vertex && !k.r.itin.pre.empty();
}

bool classes_unlinked(const AngleClass& A, const AngleClass& B) {
    if (A.size() < 2) return true;
    // All of B must fall in a single complementary gap of A.
    for (size_t g = 0; g < A.size(); ++g) {
        const AngleKey& lo = A[g];
        const AngleKey& hi = A[(g + 1) % A.size()];
        bool all = true;
        for (const auto& b : B)
            if (!in_open_arc(b, lo, hi)) {
                all = false;
                break;
            }
        if (all) return true;
    }
    return false;
}

}  // namespace

std::vector<std::string> validate_fop(const OrbitPortrait& p) {
    std::vector<std::string> bad;
    const size_t np = p.classes.size();
    if (np == 0) {
        bad.push_back("empty portrait");
        return bad;
    }
    for (const auto& c : p.classes) {
        if (c.empty()) bad.push_back("empty class");
        if (c.size() < 2) bad.push_back("trivial class (|A| < 2)");
    }
    if (!bad.empty()) return bad;

    // Bijectivity with reversed cyclic order.
    for (size_t j = 0; j < np; ++j) {
        AngleClass src = p.classes[j];
        AngleClass dst = p.classes[(j + 1) % np];
        sort_circular(src);
        sort_circular(dst);
        if (src.size() != dst.size()) {
            bad.push_back("class sizes differ");
            continue;
        }
        std::vector<int> idx;
        bool all_found = true;
        for (const auto& x : src) {
            const AngleKey img = x.map();
            auto it = std::find(dst.begin(), dst.end(), img);
            if (it == dst.end()) {
                all_found = false;
                break;
            }
            idx.push_back(int(it - dst.begin()));
        }
        if (!all_found) {
            bad.push_back("map does not send class " + std::to_string(j) + " onto its successor");
            continue;
        }
        std::set<int> uniq(idx.begin(), idx.end());
        if (uniq.size() != idx.size()) {
            bad.push_back("map not injective on class " + std::to_string(j));
            continue;
        }
        const int k = int(idx.size());
        if (k > 2) {
            bool reversed = true;
            for (int i = 0; i + 1 < k; ++i)
                if ((idx[i] - idx[i + 1] + k) % k != 1) reversed = false;
            if (!reversed) bad.push_back("map does not reverse cyclic order on class " + std::to_string(j));
        }
    }

    // Pairwise unlinked.
    for (size_t i = 0; i < np; ++i)
        for (size_t j = i + 1; j < np; ++j) {
            AngleClass A = p.classes[i], B = p.classes[j];
            sort_circular(A);
            sort_circular(B);
            if (!classes_unlinked(A, B) || !classes_unlinked(B, A))
                bad.push_back("classes " + std::to_string(i) + " and " + std::to_string(j) + " are linked");
        }

    // Period structure.
    std::vector<int> periods;
    for (const auto& c : p.classes)
        for (const auto& x : c) {
            const int pd = angle_period(x);
            if (pd == 0) bad.push_back("angle " + x.str() + " is not periodic");
            periods.push_back(pd);
        }
    if (bad.empty()) {
        const int op = int(np);
        if (op % 2 == 0) {
            for (int pd : periods)
                if (pd != periods.front() || pd % op != 0) {
                    bad.push_back("even orbit period: angle periods must all equal a common multiple of p");
                    break;
                }
        } else {
            const size_t sz = p.classes.front().size();
            if (sz == 2) {
                for (const auto& c : p.classes) {
                    const int p0 = angle_period(c[0]), p1 = angle_period(c[1]);
                    if (!((p0 == op && p1 == op) || (p0 == 2 * op && p1 == 2 * op)))
                        bad.push_back("odd orbit period, |A|=2: angle periods must be both p or both 2p");
                }
            } else if (sz == 3) {
                for (const auto& c : p.classes) {
                    int np_ = 0, n2p = 0;
                    for (const auto& x : c) {
                        if (angle_period(x) == op) ++np_;
                        if (angle_period(x) == 2 * op) ++n2p;
                    }
                    if (np_ != 1 || n2p != 2)
                        bad.push_back("odd orbit period, |A|=3: periods must be {p, 2p, 2p}");
                }
            } else {
                bad.push_back("odd orbit period: |A| must be 2 or 3");
            }
        }
    }
    return bad;
}

OrbitPortrait portrait_from_class(const AngleClass& cls) {
    if (cls.size() < 2) throw NoPortrait("class has fewer than two angles");
    const MapKind kind = cls.front().kind;

    // Forward orbit closure.
    std::vector<AngleKey> orbit;
    auto find_idx = [&](const AngleKey& k) -> int {
        for (size_t i = 0; i < orbit.size(); ++i)
            if (orbit[i] == k) return int(i);
        return -1;
    };
    std::vector<AngleKey> frontier = cls;
    for (const auto& k : cls)
        if (find_idx(k) < 0) orbit.push_back(k);
    while (!frontier.empty()) {
        if (orbit.size() > 4096) throw NoPortrait("orbit closure does not stabilize");
        std::vector<AngleKey> next;
        for (const auto& k : frontier) {
            const AngleKey img = k.map();
            if (find_idx(img) < 0) {
                orbit.push_back(img);
                next.push_back(img);
            }
        }
        frontier = next;
    }

    // Union-find closed under the map.
    std::vector<int> parent(orbit.size());
    for (size_t i = 0; i < parent.size(); ++i) parent[i] = int(i);
    std::function<int(int)> find = [&](int i) { return parent[i] == i ? i : parent[i] = find(parent[i]); };
    auto unite = [&](int i, int j) { parent[find(i)] = find(j); };
    for (size_t i = 1; i < cls.size(); ++i) unite(find_idx(cls[0]), find_idx(cls[i]));
    bool changed = true;
    while (changed) {
        changed = false;
        for (size_t i = 0; i < orbit.size(); ++i)
            for (size_t j = 0; j < orbit.size(); ++j) {
                if (find(int(i)) != find(int(j))) continue;
                const int mi = find_idx(orbit[i].map());
                const int mj = find_idx(orbit[j].map());
                if (find(mi) != find(mj)) {
                    unite(mi, mj);
                    changed = true;
                }
            }
    }

    // Classes in orbit order starting from the class of the input.
    std::map<int, AngleClass> groups;
    for (size_t i = 0; i < orbit.size(); ++i) groups[find(int(i))].push_back(orbit[i]);
    OrbitPortrait out;
    out.kind = kind;
    int cur = find(find_idx(cls[0]));
    std::set<int> used;
    while (used.find(cur) == used.end()) {
        used.insert(cur);
        AngleClass c = groups[cur];
        sort_circular(c);
        out.classes.push_back(c);
        cur = find(find_idx(groups[cur].front().map()));
    }
    if (used.size() != groups.size())
        throw NoPortrait("orbit closure has classes off the main cycle");

    const auto bad = validate_fop(out);
    if (!bad.empty()) throw NoPortrait(bad.front());
    return out;
}

OrbitPortrait generate_portrait_from_pair(const AngleKey& tminus, const AngleKey& tplus) {
    if (tminus == tplus) throw NoPortrait("equal angles");
    return portrait_from_class({tminus, tplus});
}

CharacteristicArc characteristic_arc(const OrbitPortrait& p) {
    CharacteristicArc out;
    double best = 2.0, second = 2.0;
    for (const auto& cls : p.classes) {
        AngleClass c = cls;
        sort_circular(c);
        for (size_t g = 0; g < c.size(); ++g) {
            const AngleKey& lo = c[g];
            const AngleKey& hi = c[(g + 1) % c.size()];
            double len = hi.pos() - lo.pos();
            if (len <= 0.0) len += 1.0;
            if (len < best) {
                second = best;
                best = len;
                out.t_minus = lo;
                out.t_plus = hi;
            } else if (len < second) {
                second = len;
            }
        }
    }
    out.length = best;
    out.unique = (second - best) > 1e-12;
    return out;
}

OrbitPortrait push_forward_E(const OrbitPortrait& m2_portrait) {
    OrbitPortrait out;
    out.kind = MapKind::Rho;
    for (const auto& c : m2_portrait.classes) {
        AngleClass nc;
        for (const auto& k : c) nc.push_back(AngleKey::of(angles::E_inverse(k.q)));
        sort_circular(nc);
        out.classes.push_back(nc);
    }
    return out;
}

OrbitPortrait pull_back_E(const OrbitPortrait& rho_portrait) {
    OrbitPortrait out;
    out.kind = MapKind::M2;
    for (const auto& c : rho_portrait.classes) {
        AngleClass nc;
        for (const auto& k : c) nc.push_back(AngleKey::of(angles::E_of(k.r)));
        sort_circular(nc);
        out.classes.push_back(nc);
    }
    return out;
}

namespace {

// Reference cut for preimage-leaf pairing: an angle strictly inside the
// characteristic arc, avoiding the finite set of angles the pullback visits.
struct PartitionCut {
    // The two preimage positions of the reference angle; halves are the arcs
    // between them. Exact rationals on the m2 side.
    bool exact;
    Rational d1q, d2q;
    double d1p = 0.0, d2p = 0.0;

    bool side(const AngleKey& x) const {
        if (exact) return rational_in_open_arc(x.q, d1q, d2q);
        return pos_in_open_arc(x.pos(), d1p, d2p, 1e-12);
    }
};

PartitionCut make_cut_m2(const Rational& tm, const Rational& tp, const std::set<std::pair<long long, long long>>& avoid) {
    auto inside = [&](const Rational& v) { return rational_in_open_arc(v, tm, tp); };
    std::vector<Rational> trials;
    auto blend = [&](long long wa, long long wb) {
        // Weighted point on the positively-oriented arc from tm to tp.
        const long long den = tm.den() * tp.den() * (wa + wb);
        long long num = wa * tm.num() * tp.den() + wb * tp.num() * tm.den();
        if (!(tm < tp)) num += wb * tp.den() * tm.den();  // arc wraps through 0
        return Rational(num, den);
    };
    trials.push_back(blend(1, 1));
    trials.push_back(blend(2, 1));
    trials.push_back(blend(1, 2));
    trials.push_back(blend(3, 1));
    trials.push_back(blend(1, 3));
    for (const auto& v : trials) {
        if (!inside(v)) continue;
        if (avoid.count({v.num(), v.den()})) continue;
        PartitionCut cut;
        cut.exact = true;
        const auto pre = v.m2_preimages();
        cut.d1q = pre[0];
        cut.d2q = pre[1];
        if (!(cut.d1q < cut.d2q)) std::swap(cut.d1q, cut.d2q);
        return cut;
    }
    throw Error("no usable partition reference angle");
}

PartitionCut make_cut_rho(double tm_pos, double tp_pos, const std::vector<double>& avoid) {
    double len = tp_pos - tm_pos;
    if (len <= 0.0) len += 1.0;
    for (double w : {0.5, 0.375, 0.625, 0.25, 0.75, 0.4375, 0.5625}) {
        double v = tm_pos + w * len;
        v -= std::floor(v);
        bool clash = false;
        for (double a : avoid)
            if (circ_dist(v, a) < 1e-9) clash = true;
        if (clash) continue;
        // Two rho-preimages of the position: reflections from the two arcs
        // other than the one containing v.
        int arc;
        try {
            arc = triangle::arc_symbol(v, 1e-9);
        } catch (const OnVertex&) {
            continue;
        }
        std::vector<double> ds;
        for (int j = 1; j <= 3; ++j) {
            if (j == arc) continue;
            cx w2 = triangle::side_reflection(j, unit(v));
            w2 /= std::abs(w2);
            ds.push_back(angle_of(w2));
        }
        PartitionCut cut;
        cut.exact = false;
        cut.d1p = std::min(ds[0], ds[1]);
        cut.d2p = std::max(ds[0], ds[1]);
        bool dclash = false;
        for (double a : avoid)
            if (circ_dist(cut.d1p, a) < 1e-9 || circ_dist(cut.d2p, a) < 1e-9) dclash = true;
        if (dclash) continue;
        return cut;
    }
    throw Error("no usable rho partition reference angle");
}

}  // namespace

Lamination pullback_lamination(const AngleKey& tminus, const AngleKey& tplus, int depth) {
    // Validate that the pair is characteristic for its own portrait.
    OrbitPortrait p = generate_portrait_from_pair(tminus, tplus);
    const auto arc = characteristic_arc(p);
    const bool matches = (arc.t_minus == tminus && arc.t_plus == tplus) ||
                         (arc.t_minus == tplus && arc.t_plus == tminus);
    if (!matches) throw NoPortrait("pair is not the characteristic pair of its portrait");

    Lamination lam;
    lam.kind = tminus.kind;
    lam.classes = p.classes;
    Leaf root{arc.t_minus, arc.t_plus};
    lam.leaves.push_back(root);
    lam.leaf_depth.push_back(0);

    // Build the partition cut, avoiding every angle the pullback will visit
    // (a reference collision would put a preimage angle exactly on the cut).
    std::vector<AngleKey> tree{arc.t_minus, arc.t_plus};
    {
        std::vector<AngleKey> frontier = tree;
        for (int d = 0; d < depth; ++d) {
            std::vector<AngleKey> next;
            for (const auto& k : frontier)
                for (const auto& q : k.preimages()) {
                    if (std::find(tree.begin(), tree.end(), q) == tree.end()) {
                        tree.push_back(q);
                        next.push_back(q);
                    }
                }
            frontier = next;
        }
        for (const auto& c : p.classes)
            for (const auto& k : c)
                if (std::find(tree.begin(), tree.end(), k) == tree.end()) tree.push_back(k);
    }
    PartitionCut cut;
    if (lam.kind == MapKind::M2) {
        std::set<std::pair<long long, long long>> avoid;
        for (const auto& k : tree) {
            AngleKey x = k;
            for (int i = 0; i < 64; ++i) {
                avoid.insert({x.q.num(), x.q.den()});
                x = x.map();
            }
        }
        cut = make_cut_m2(arc.t_minus.q, arc.t_plus.q, avoid);
    } else {
        std::vector<double> avoid;
        for (const auto& k : tree) avoid.push_back(k.pos());
        cut = make_cut_rho(arc.t_minus.pos(), arc.t_plus.pos(), avoid);
    }

    std::vector<Leaf> level{root};
    for (int d = 1; d <= depth; ++d) {
        std::vector<Leaf> next;
        for (const auto& leaf : level) {
            auto xs = leaf.a.preimages();
            auto ys = leaf.b.preimages();
            if (xs.size() != 2 || ys.size() != 2) throw Error("degenerate preimage count");
            const bool xa = cut.side(xs[0]);
            const bool ya = cut.side(ys[0]);
            if (xa == cut.side(xs[1]) || ya == cut.side(ys[1]))
                throw Error("partition cut fails to separate preimages");
            // Pair within the same half of the cut.
            const AngleKey& x1 = xs[0];
            const AngleKey& x2 = xs[1];
            const AngleKey& y1 = (xa == ya) ? ys[0] : ys[1];
            const AngleKey& y2 = (xa == ya) ? ys[1] : ys[0];
            for (auto pr : {std::make_pair(x1, y1), std::make_pair(x2, y2)}) {
                Leaf nl{pr.first, pr.second};
                if (nl.b.pos() < nl.a.pos()) std::swap(nl.a, nl.b);
                next.push_back(nl);
            }
        }
        for (const auto& nl : next) {
            for (const auto& ol : lam.leaves)
                if (leaves_cross(nl, ol))
                    throw Error("pullback produced crossing leaves at depth " + std::to_string(d));
            lam.leaves.push_back(nl);
            lam.leaf_depth.push_back(d);
        }
        level = next;
    }
    return lam;
}

bool is_misiurewicz_type(const Lamination& lam) {
    if (lam.classes.empty()) return false;
    int collapsing = 0;
    bool all_pre = true;
    for (const auto& c : lam.classes) {
        std::vector<AngleKey> images;
        for (const auto& x : c) {
            const AngleKey img = x.map();
            if (std::find(images.begin(), images.end(), img) == images.end()) images.push_back(img);
        }
        if (2 * images.size() == c.size()) {
            ++collapsing;
            for (const auto& x : c)
                if (!strictly_preperiodic(x)) all_pre = false;
        }
    }
    return collapsing == 1 && all_pre;
}

Lamination parameter_lamination(int max_period, ParameterModel which) {
    using angles::Rational;
    const Rational third(1, 3), two_thirds(2, 3);
    std::vector<Rational> interior;
    for (int n = 1; n <= max_period; ++n)
        for (const auto& a : angles::angles_of_period(n))
            if (third < a && a < two_thirds) interior.push_back(a);
    std::sort(interior.begin(), interior.end());

    Lamination lam;
    lam.kind = (which == ParameterModel::L_model) ? MapKind::M2 : MapKind::Rho;
    for (size_t i = 0; i < interior.size(); ++i)
        for (size_t j = i + 1; j < interior.size(); ++j) {
            OrbitPortrait p;
            try {
                p = generate_portrait_from_pair(AngleKey::of(interior[i]), AngleKey::of(interior[j]));
            } catch (const NoPortrait&) {
                continue;
            }
            const auto arc = characteristic_arc(p);
            if (!arc.unique) continue;
            if (!(arc.t_minus == AngleKey::of(interior[i]) && arc.t_plus == AngleKey::of(interior[j])))
                continue;
            Leaf leaf;
            if (which == ParameterModel::L_model) {
                leaf = Leaf{AngleKey::of(interior[i]), AngleKey::of(interior[j])};
            } else {
                leaf = Leaf{AngleKey::of(angles::E_inverse(interior[i])),
                            AngleKey::of(angles::E_inverse(interior[j]))};
                if (leaf.b.pos() < leaf.a.pos()) std::swap(leaf.a, leaf.b);
            }
            lam.leaves.push_back(leaf);
            lam.leaf_depth.push_back(interior[i].period_under_m2());
        }
    return lam;
}

bool leaf_order_isomorphic(const std::vector<Leaf>& cs, const std::vector<Leaf>& l) {
    if (cs.size() != l.size()) return false;
    // Endpoint ids sorted by position must induce identical sequences.
    struct End {
        double pos;
        int leaf;
        int side;
    };
    auto ends = [](const std::vector<Leaf>& v) {
        std::vector<End> e;
        for (size_t i = 0; i < v.size(); ++i) {
            e.push_back({v[i].a.pos(), int(i), 0});
            e.push_back({v[i].b.pos(), int(i), 1});
        }
        std::sort(e.begin(), e.end(), [](const End& x, const End& y) { return x.pos < y.pos; });
        return e;
    };
    const auto ea = ends(cs), eb = ends(l);
    for (size_t i = 0; i < ea.size(); ++i)
        if (ea[i].leaf != eb[i].leaf || ea[i].side != eb[i].side) return false;
    return true;
}

ModelIsoReport model_isomorphism_check(int max_period) {
    ModelIsoReport rep;
    const Lamination lmod = parameter_lamination(max_period, ParameterModel::L_model);
    const Lamination csmod = parameter_lamination(max_period, ParameterModel::CS_model);
    rep.leaf_count = int(lmod.leaves.size());
    rep.no_crossings_l = !lmod.any_crossing();
    rep.no_crossings_cs = !csmod.any_crossing();
    rep.order_preserved = leaf_order_isomorphic(csmod.leaves, lmod.leaves);
    std::map<int, int> per;
    for (size_t i = 0; i < lmod.leaves.size(); ++i) per[lmod.leaf_depth[i]]++;
    for (const auto& kv : per) rep.leaves_per_period.push_back(kv);
    rep.ok = rep.order_preserved && rep.no_crossings_l && rep.no_crossings_cs &&
             lmod.leaves.size() == csmod.leaves.size();
    return rep;
}

std::string to_json(const OrbitPortrait& p) {
    std::ostringstream os;
    os << "{\"schema\":\"sdl-1\",\"kind\":\"" << (p.kind == MapKind::M2 ? "m2" : "rho")
       << "\",\"classes\":[";
    for (size_t i = 0; i < p.classes.size(); ++i) {
        os << (i ? "," : "") << "[";
        for (size_t j = 0; j < p.classes[i].size(); ++j)
            os << (j ? "," : "") << "\"" << p.classes[i][j].str() << "\"";
        os << "]";
    }
    os << "]}";
    return os.str();
}

std::string to_json(const Lamination& lam) {
    std::vector<size_t> order(lam.leaves.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](size_t i, size_t j) {
        const double ai = lam.leaves[i].a.pos(), aj = lam.leaves[j].a.pos();
        if (ai != aj) return ai < aj;
        return lam.leaves[i].b.pos() < lam.leaves[j].b.pos();
    });
    std::ostringstream os;
    os << "{\"schema\":\"sdl-1\",\"kind\":\"" << (lam.kind == MapKind::M2 ? "m2" : "rho")
       << "\",\"leaves\":[";
    for (size_t k = 0; k < order.size(); ++k) {
        const auto& lf = lam.leaves[order[k]];
        os << (k ? "," : "") << "[\"" << lf.a.str() << "\",\"" << lf.b.str() << "\","
           << lam.leaf_depth[order[k]] << "]";
    }
    os << "]}";
    return os.str();
}

}  // namespace sdl::portraits
