#include <doctest.h>

#include <random>

#include "sdl/angles.hpp"
#include "sdl/triangle.hpp"

using namespace sdl;
using namespace sdl::angles;

TEST_CASE("m2 map exact values") {
    CHECK(Rational(1, 3).m2() == Rational(1, 3));
    CHECK(Rational(1, 9).m2() == Rational(7, 9));
    CHECK(Rational(0, 1).m2() == Rational(0, 1));
}

TEST_CASE("itineraries of the worked rationals") {
    CHECK(itinerary_of_rational(Rational(1, 9)).str() == "|132");
    CHECK(itinerary_of_rational(Rational(1, 5)).str() == "|1232");
    CHECK_THROWS_AS(itinerary_of_rational(Rational(1, 6)), HitsFixedPoint);
    try {
        itinerary_of_rational(Rational(1, 6));
    } catch (const HitsFixedPoint& e) {
        CHECK(e.iterate == 1);  // 1/6 -> 2/3
    }
}

TEST_CASE("inverse coding: affine solve with forced branches") {
    CHECK(rational_from_itinerary(Itinerary::parse("|132")) == Rational(1, 9));
    // No two-cycles exist under m2: the period-2 words code the vertices.
    CHECK(rational_from_itinerary(Itinerary::parse("|12")) == Rational(1, 3));
    CHECK(rational_from_itinerary(Itinerary::parse("|23")) == Rational(2, 3));
    CHECK(rational_from_itinerary(Itinerary::parse("|13")) == Rational(0, 1));
    CHECK_THROWS_AS(rational_from_itinerary(Itinerary::parse("|2")), NoRealization);
}

TEST_CASE("round trips on all realizable itineraries with denominator <= 2^16") {
    // Denominators of periodic angles: 2^n -(-1)^n for n <= 16 stays < 2^16+2.
    for (int n : {3, 4, 5, 6}) {
        for (const auto& th : angles_of_period(n)) {
            Itinerary it;
            try {
                it = itinerary_of_rational(th);
            } catch (const HitsFixedPoint&) {
                continue;
            }
            CHECK(rational_from_itinerary(it) == th);
            CHECK(itinerary_of_rational(rational_from_itinerary(it)) == it);
        }
    }
}

TEST_CASE("E fixes the vertices") {
    for (int k = 0; k < 3; ++k) {
        const Rational v(k, 3);
        const auto x = E_inverse(v);
        CHECK(x.vertex);
        CHECK(E_of(x) == v);
        CHECK(x.numeric == doctest::Approx(k / 3.0));
    }
}

TEST_CASE("E round trips for all reduced denominators <= 63") {
    int checked = 0;
    for (long long q = 2; q <= 63; ++q)
        for (long long p = 1; p < q; ++p) {
            const Rational th(p, q);
            if (th.den() != q) continue;  // not reduced
            const auto x = E_inverse(th);
            CHECK(E_of(x) == th);
            ++checked;
        }
    CHECK(checked > 1000);
}

TEST_CASE("exact equivariance m2 o E = E o rho on itineraries") {
    for (long long q = 2; q <= 63; ++q)
        for (long long p = 1; p < q; ++p) {
            const Rational th(p, q);
            if (th.den() != q) continue;
            const auto x = E_inverse(th);
            if (x.vertex) continue;
            CHECK(E_of(x.shifted()) == th.m2());
        }
}

TEST_CASE("numeric equivariance at depth 40") {
    std::mt19937_64 rng(41);
    int done = 0;
    double worst = 0.0;
    while (done < 1000) {
        const long long q = 5 + (long long)(rng() % 2000);
        const long long p = 1 + (long long)(rng() % (q - 1));
        const Rational th(p, q);
        RhoAngle x;
        try {
            x = E_inverse(th);
        } catch (const Error&) {
            continue;
        }
        if (x.vertex) continue;
        const auto [pos, rad] = rho_angle_position(x.itin, 40);
        // The numeric (Moebius) value lies in the depth-40 enclosure.
        CHECK(circ_dist(pos, x.numeric) <= rad + 1e-12);
        // rho applied numerically agrees with the shifted itinerary's value.
        const double lhs = triangle::rho_circle(x.numeric);
        const auto sh = x.shifted();
        const double rhs = sh.vertex ? sh.vertex_k / 3.0 : sh.numeric;
        const double err = circ_dist(lhs, rhs);
        worst = std::max(worst, err);
        ++done;
    }
    CHECK(worst < 1e-6);
}

TEST_CASE("E is monotone: circular order preserved") {
    std::mt19937_64 rng(43);
    std::vector<std::pair<double, double>> pairs;  // (rational value, rho position)
    int done = 0;
    while (done < 1000) {
        const long long q = 3 + (long long)(rng() % 4000);
        const long long p = 1 + (long long)(rng() % (q - 1));
        const Rational th(p, q);
        try {
            const auto x = E_inverse(th);
            pairs.emplace_back(th.value(), x.vertex ? x.vertex_k / 3.0 : x.numeric);
            ++done;
        } catch (const Error&) {
        }
    }
    std::sort(pairs.begin(), pairs.end());
    for (size_t i = 1; i < pairs.size(); ++i) {
        if (pairs[i].first == pairs[i - 1].first) continue;
        CHECK(pairs[i].second >= pairs[i - 1].second - 1e-12);
    }
}

TEST_CASE("nested enclosures shrink monotonically") {
    const auto it = itinerary_of_rational(Rational(3, 7));
    const auto r10 = rho_angle_position(it, 10).second;
    const auto r30 = rho_angle_position(it, 30).second;
    CHECK(r30 <= r10 + 1e-15);
    // Parabolic neighborhoods refine subgeometrically but still refine.
    Itinerary slow = Itinerary::parse("2|13");  // tail at the vertex 0
    const auto s10 = rho_angle_position(slow, 10).second;
    const auto s40 = rho_angle_position(slow, 40).second;
    CHECK(s40 < s10);
}

TEST_CASE("itinerary normalization: primitivity and vertex phases") {
    Itinerary it = Itinerary::parse("|132132");
    CHECK(it.per.size() == 3);  // primitive root
    Itinerary v = Itinerary::parse("|21");
    CHECK(v.per[0] == 1);  // canonical phase
    Itinerary pre = Itinerary::parse("31|21");
    CHECK(pre.admissible());
}

TEST_CASE("serialization round trip") {
    // "2|132" is the purely periodic sequence (213)^inf; normalization makes
    // that canonical.
    CHECK(Itinerary::parse("2|132").str() == "|213");
    const Itinerary it = Itinerary::parse("1|213");
    CHECK(it.str() == "1|213");
    CHECK(Rational::parse("7/9") == Rational(7, 9));
    CHECK(Rational(7, 9).str() == "7/9");
}
