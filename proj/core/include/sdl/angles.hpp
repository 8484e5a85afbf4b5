#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sdl/complexpt.hpp"
#include "sdl/errors.hpp"

namespace sdl::angles {

// Exact rational angle in [0, 1), reduced. Arithmetic uses 128-bit
// intermediates; denominators stay well inside 64 bits at the depths this
// library enumerates.
class Rational {
public:
    Rational() : num_(0), den_(1) {}
    Rational(long long num, long long den);

    static Rational parse(const std::string& s);  // "p/q" or "p"

    long long num() const { return num_; }
    long long den() const { return den_; }
    double value() const { return double(num_) / double(den_); }
    std::string str() const;

    bool operator==(const Rational& o) const { return num_ == o.num_ && den_ == o.den_; }
    bool operator!=(const Rational& o) const { return !(*this == o); }
    bool operator<(const Rational& o) const;
    bool operator<=(const Rational& o) const { return *this == o || *this < o; }

    Rational m2() const;                        // -2 theta mod 1
    std::array<Rational, 2> m2_preimages() const;
    Rational reflected() const;                 // -theta mod 1 (conjugation)

    bool is_vertex() const;  // in {0, 1/3, 2/3}
    int vertex_index() const;  // 0,1,2 for 0,1/3,2/3; -1 otherwise

    // Arc of the fixed-point partition containing the angle: 1, 2 or 3.
    // Throws OnVertex at the partition endpoints.
    int arc() const;

    // Minimal n >= 1 with m2^n(theta) = theta, or 0 if strictly preperiodic.
    int period_under_m2() const;
    // (preperiod, period) of the m2 orbit.
    std::pair<int, int> orbit_shape() const;

private:
    long long num_, den_;
    void reduce();
};

Rational m2_map(const Rational& theta);

// All angles of exact m2-period n (denominator 2^n - (-1)^n).
std::vector<Rational> angles_of_period(int n);
// All angles with m2-period dividing n.
std::vector<Rational> angles_of_period_dividing(int n);

// Symbolic itinerary w.r.t. the partition arcs (0,1/3), (1/3,2/3), (2/3,1);
// "pre|per" in string form, e.g. "2|132".
struct Itinerary {
    std::vector<uint8_t> pre;
    std::vector<uint8_t> per;

    bool admissible() const;
    void normalize();             // primitive period, minimal preperiod
    Itinerary shifted() const;    // drop one leading symbol (rho-action)
    Itinerary prepended(uint8_t symbol) const;
    std::string str() const;
    static Itinerary parse(const std::string& s);
    bool operator==(const Itinerary& o) const { return pre == o.pre && per == o.per; }
    bool operator<(const Itinerary& o) const {
        return pre != o.pre ? pre < o.pre : per < o.per;
    }
    uint8_t symbol_at(size_t i) const {
        if (i < pre.size()) return pre[i];
        return per[(i - pre.size()) % per.size()];
    }
};

// Coding of a rational angle under m2. Throws HitsFixedPoint when the forward
// orbit meets {0, 1/3, 2/3}.
Itinerary itinerary_of_rational(const Rational& theta);

// Exact inverse coding: the unique angle with the given itinerary, via the
// affine fixed-point solve for the periodic part and branch pullback through
// the preperiod. Throws NoRealization when no angle realizes the word (this
// includes inadmissible words). Vertex codings such as (12)^inf resolve to the
// vertex angle itself.
Rational rational_from_itinerary(const Itinerary& it);

// Angle of the reflection map rho, represented symbolically. The three
// parabolic fixed angles {0, 1/3, 2/3} carry a vertex tag instead of an
// itinerary.
struct RhoAngle {
    bool vertex = false;
    int vertex_k = -1;     // 0,1,2 for angles 0, 1/3, 2/3
    Itinerary itin;        // valid when !vertex
    double numeric = 0.0;  // position on the circle
    double precision = 0.0;

    static RhoAngle at_vertex(int k);
    static RhoAngle from_itinerary(Itinerary it);

    RhoAngle shifted() const;  // rho-action
    bool operator==(const RhoAngle& o) const {
        if (vertex != o.vertex) return false;
        return vertex ? vertex_k == o.vertex_k : itin == o.itin;
    }
    bool operator<(const RhoAngle& o) const {
        if (vertex != o.vertex) return vertex;
        return vertex ? vertex_k < o.vertex_k : itin < o.itin;
    }
    std::string str() const { return vertex ? "v" + std::to_string(vertex_k) : itin.str(); }
};

// The circle conjugacy E with m2 o E = E o rho, by itinerary transport.
Rational E_of(const RhoAngle& x);      // may throw NoRealization
RhoAngle E_inverse(const Rational& theta);  // may throw HitsFixedPoint

// Nested-arc enclosure of the rho-angle with the given itinerary prefix:
// returns (midpoint, radius) after `depth` pullbacks.
std::pair<double, double> rho_angle_position(const Itinerary& it, int depth);

// High-precision position of an eventually periodic rho-angle via the fixed
// point of the composed reflection (Moebius) matrix.
double rho_angle_value(const Itinerary& it);

}  // namespace sdl::angles
