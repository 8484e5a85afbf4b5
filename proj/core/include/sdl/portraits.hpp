#pragma once

#include <string>
#include <utility>
#include <vector>

#include "sdl/angles.hpp"

namespace sdl::portraits {

enum class MapKind { M2, Rho };

// Uniform handle for an angle under either circle map. Equality and the
// forward map are symbolic; the circular position is exact for rationals and
// high-precision numeric for rho-angles.
struct AngleKey {
    MapKind kind = MapKind::M2;
    angles::Rational q;  // valid when kind == M2
    angles::RhoAngle r;  // valid when kind == Rho

    static AngleKey of(const angles::Rational& a) {
        AngleKey k;
        k.kind = MapKind::M2;
        k.q = a;
        return k;
    }
    static AngleKey of(const angles::RhoAngle& a) {
        AngleKey k;
        k.kind = MapKind::Rho;
        k.r = a;
        return k;
    }

    double pos() const { return kind == MapKind::M2 ? q.value() : (r.vertex ? r.vertex_k / 3.0 : r.numeric); }
    AngleKey map() const {
        return kind == MapKind::M2 ? of(q.m2()) : of(r.shifted());
    }
    bool operator==(const AngleKey& o) const {
        if (kind != o.kind) return false;
        return kind == MapKind::M2 ? q == o.q : r == o.r;
    }
    bool operator<(const AngleKey& o) const {
        if (kind == MapKind::M2) return q < o.q;
        return r < o.r;
    }
    std::string str() const { return kind == MapKind::M2 ? q.str() : r.str(); }

    // The two preimages under the circle map, symbolically exact.
    std::vector<AngleKey> preimages() const;
};

// Does x lie strictly inside the positively-oriented open arc (a, b)?
// Exact on the M2 side; position-based (1e-12 scale) on the Rho side.
bool in_open_arc(const AngleKey& x, const AngleKey& a, const AngleKey& b);

using AngleClass = std::vector<AngleKey>;  // stored in increasing circular position

struct OrbitPortrait {
    MapKind kind = MapKind::M2;
    std::vector<AngleClass> classes;  // class j maps onto class j+1 (mod p)

    int orbit_period() const { return int(classes.size()); }
};

// All violated clauses of the formal-orbit-portrait axioms (empty = valid):
// nonempty finite classes with |A_i| >= 2, bijective map reversing cyclic
// order, pairwise unlinked classes, and the period structure (even orbit
// period: one common angle period; odd p: |A|=2 with period p, |A|=2 with
// period 2p, or |A|=3 with periods {p, 2p, 2p}).
std::vector<std::string> validate_fop(const OrbitPortrait& p);

// Forward-saturate a characteristic pair into a portrait (union-closure under
// the map of the co-landing relation). Throws NoPortrait when the closure
// violates the axioms.
OrbitPortrait generate_portrait_from_pair(const AngleKey& tminus, const AngleKey& tplus);

// Build a portrait from externally observed co-landing classes (one class per
// landing point); validates.
OrbitPortrait portrait_from_class(const AngleClass& cls);

struct CharacteristicArc {
    AngleKey t_minus, t_plus;  // endpoints, positively-oriented short side
    double length = 0.0;
    bool unique = true;  // false when another complementary arc ties
};

CharacteristicArc characteristic_arc(const OrbitPortrait& p);

// E-transport of whole portraits: push_forward takes an m2-portrait to a
// rho-portrait (elementwise E^-1), pull_back inverts it.
OrbitPortrait push_forward_E(const OrbitPortrait& m2_portrait);
OrbitPortrait pull_back_E(const OrbitPortrait& rho_portrait);

struct Leaf {
    AngleKey a, b;  // unordered pair, stored with pos(a) <= pos(b)
    std::string str() const { return a.str() + "~" + b.str(); }
    bool operator==(const Leaf& o) const {
        return (a == o.a && b == o.b) || (a == o.b && b == o.a);
    }
};

bool leaves_cross(const Leaf& x, const Leaf& y);

struct Lamination {
    MapKind kind = MapKind::M2;
    std::vector<Leaf> leaves;
    std::vector<AngleClass> classes;  // finite polygon classes, when known
    std::vector<int> leaf_depth;      // pullback level per leaf (parallel to leaves)

    bool any_crossing() const {
        for (size_t i = 0; i < leaves.size(); ++i)
            for (size_t j = i + 1; j < leaves.size(); ++j)
                if (leaves_cross(leaves[i], leaves[j])) return true;
        return false;
    }
};

// All iterated preimage leaves of the characteristic leaf up to `depth`
// (level 0 = the characteristic leaf alone). Pairing cuts the circle at the
// preimages of a reference angle interior to the characteristic arc. Throws
// NoPortrait when the pair is not characteristic, Error on unresolvable
// pairing collisions.
Lamination pullback_lamination(const AngleKey& tminus, const AngleKey& tplus, int depth);

// Misiurewicz-type test on finite class data: exactly one class maps
// two-to-one onto its image and all its angles are strictly preperiodic.
bool is_misiurewicz_type(const Lamination& lam);

enum class ParameterModel { CS_model, L_model };

// Finite-depth parameter-plane lamination: one leaf per valid characteristic
// pair with angles of period <= max_period inside (1/3, 2/3); the CS model is
// the same leaf set transported by E^-1.
Lamination parameter_lamination(int max_period, ParameterModel which);

struct ModelIsoReport {
    bool ok = false;
    bool order_preserved = false;
    bool no_crossings_cs = false;
    bool no_crossings_l = false;
    int leaf_count = 0;
    std::vector<std::pair<int, int>> leaves_per_period;  // (angle period, count)
};

// Finite-depth check that E induces a leaf bijection between the two models
// preserving cyclic order (the CS side is ordered by independent numeric
// rho-angle positions).
ModelIsoReport model_isomorphism_check(int max_period);

// Order-isomorphism test used by the model check and its negative control.
bool leaf_order_isomorphic(const std::vector<Leaf>& cs, const std::vector<Leaf>& l);

// Stable JSON serialization (golden-file friendly).
std::string to_json(const OrbitPortrait& p);
std::string to_json(const Lamination& lam);

}  // namespace sdl::portraits
