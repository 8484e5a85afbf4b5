#include <doctest.h>

#include "sdl/straightening.hpp"

using namespace sdl;
using namespace sdl::straightening;
using angles::Rational;

TEST_CASE("period detection at the known centers") {
    CHECK(detect_schwarz_center_period(cx(0, 0)) == 2);
    CHECK(detect_schwarz_center_period(cx(3.0 / 16, 0)) == 3);
    CHECK(detect_tricorn_center_period(cx(0, 0)) == 1);
    CHECK(detect_tricorn_center_period(cx(-1, 0)) == 2);
}

TEST_CASE("characteristic angles of the period-2 schwarz center are the alpha pair") {
    const auto pair = characteristic_angles_schwarz(cx(0, 0), 2);
    CHECK(pair.t_minus.vertex);
    CHECK(pair.t_plus.vertex);
    CHECK(pair.t_minus.vertex_k == 1);
    CHECK(pair.t_plus.vertex_k == 2);
}

TEST_CASE("characteristic angles of the period-3 schwarz center have itinerary period 6") {
    const auto pair = characteristic_angles_schwarz(cx(3.0 / 16, 0), 3);
    REQUIRE(!pair.t_minus.vertex);
    REQUIRE(!pair.t_plus.vertex);
    CHECK(pair.t_minus.itin.pre.empty());
    CHECK(pair.t_minus.itin.per.size() == 6);
    CHECK(pair.t_plus.itin.per.size() == 6);
    // The landing point separates: it is fixed by F^3 (checked inside), and
    // the pair is strictly inside (1/3, 2/3) in rho positions.
    CHECK(pair.t_minus.numeric > 1.0 / 3);
    CHECK(pair.t_plus.numeric < 2.0 / 3);
}

TEST_CASE("characteristic angles on the tricorn side at c = -1") {
    const auto pair = characteristic_angles_tricorn(cx(-1, 0), 2);
    CHECK(pair.t_minus == Rational(1, 3));
    CHECK(pair.t_plus == Rational(2, 3));
}

TEST_CASE("chi maps 0 to -1") {
    const auto res = chi_center(cx(0, 0), 2);
    CHECK(std::abs(res.c - cx(-1, 0)) < 1e-8);
    CHECK(res.verified);
}

TEST_CASE("chi maps 3/16 to the real period-3 tricorn center") {
    const auto res = chi_center(cx(3.0 / 16, 0), 3);
    const double airplane = -1.7548776662466928;
    CHECK(std::abs(res.c - cx(airplane, 0)) < 1e-8);
}

TEST_CASE("chi inverse round trips") {
    const auto res = chi_inverse_center(cx(-1, 0), 2);
    CHECK(std::abs(res.a) < 1e-8);
    const auto res3 = chi_inverse_center(cx(-1.7548776662466928, 0), 3);
    CHECK(std::abs(res3.a - cx(3.0 / 16, 0)) < 1e-8);
}

TEST_CASE("verify_straightening passes on the genuine pairs and fails the control") {
    const auto ok2 = verify_straightening(cx(0, 0), cx(-1, 0), 8);
    CHECK(ok2.ok);
    CHECK(ok2.mismatches == 0);
    const auto ok3 = verify_straightening(cx(3.0 / 16, 0), cx(-1.7548776662466928, 0), 6);
    CHECK(ok3.ok);
    const auto bad = verify_straightening(cx(3.0 / 16, 0), cx(-1, 0), 6);
    CHECK(!bad.ok);
}

TEST_CASE("chi is injective on the period <= 4 centers") {
    const double satellite = (std::sqrt(52.0) - 5.0) / 36.0;
    std::vector<std::pair<cx, int>> centers = {
        {cx(0, 0), 2}, {cx(3.0 / 16, 0), 3}, {cx(2.0 / 9, 0), 4}, {cx(satellite, 0), 4}};
    std::vector<cx> images;
    for (const auto& [a, k] : centers) {
        const auto res = chi_center(a, k);
        // Period preserved.
        CHECK(detect_tricorn_center_period(res.c, 8) == k);
        // Conjugation symmetry: real centers map to real centers.
        CHECK(std::abs(res.c.imag()) < 1e-7);
        images.push_back(res.c);
    }
    for (size_t i = 0; i < images.size(); ++i)
        for (size_t j = i + 1; j < images.size(); ++j)
            CHECK(std::abs(images[i] - images[j]) > 1e-4);
}
