#include <doctest.h>

#include <random>

#include "sdl/triangle.hpp"

using namespace sdl;
using namespace sdl::triangle;

TEST_CASE("side circles are orthogonal to the unit circle and pass through their vertices") {
    for (int j = 1; j <= 3; ++j) {
        const cx c = side_center(j);
        CHECK(std::abs(std::norm(c) - (1.0 + side_radius() * side_radius())) < 1e-12);
    }
    CHECK(std::abs(std::abs(vertex(1) - side_center(2)) - side_radius()) < 1e-12);
    CHECK(std::abs(std::abs(vertex(2) - side_center(2)) - side_radius()) < 1e-12);
    CHECK(std::abs(std::abs(vertex(0) - side_center(1)) - side_radius()) < 1e-12);
    CHECK(std::abs(std::abs(vertex(1) - side_center(1)) - side_radius()) < 1e-12);
    CHECK(std::abs(std::abs(vertex(2) - side_center(3)) - side_radius()) < 1e-12);
    CHECK(std::abs(std::abs(vertex(0) - side_center(3)) - side_radius()) < 1e-12);
}

TEST_CASE("side reflection fixes its vertices and evaluates exactly") {
    CHECK(std::abs(side_reflection(2, vertex(1)) - vertex(1)) < 1e-12);
    CHECK(std::abs(side_reflection(2, cx(0, 0)) - cx(-0.5, 0)) < 1e-14);
}

TEST_CASE("side reflections preserve the unit circle and are involutions") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> ur(0.0, 1.0);
    for (int i = 0; i < 10000; ++i) {
        const double t = ur(rng);
        const int j = 1 + int(ur(rng) * 3);
        CHECK(std::abs(std::abs(side_reflection(j, unit(t))) - 1.0) < 1e-12);
        const double r = std::sqrt(ur(rng));
        const cx z = std::polar(r, kTwoPi * ur(rng));
        CHECK(std::abs(side_reflection(j, side_reflection(j, z)) - z) < 1e-12);
    }
}

TEST_CASE("rho_disk acts by the region reflection") {
    CHECK(std::abs(rho_disk(cx(-0.9, 0)) - cx(-2.0 + 3.0 / 1.1, 0)) < 1e-12);
    CHECK(std::abs(rho_disk(vertex(1)) - vertex(1)) < 1e-12);
    CHECK_THROWS_AS(rho_disk(cx(0, 0)), InteriorOfPi);
    // Points on a side circle are fixed.
    const cx on_side = side_center(2) + side_radius() * std::polar(1.0, 0.31);
    if (std::abs(on_side) < 1.0) CHECK(std::abs(rho_disk(on_side) - on_side) < 1e-9);
}

TEST_CASE("rho_circle fixed points and the worked example") {
    CHECK(rho_circle(0.0) == 0.0);
    CHECK(rho_circle(1.0 / 3.0) == 1.0 / 3.0);
    CHECK(rho_circle(2.0 / 3.0) == 2.0 / 3.0);
    CHECK(std::abs(rho_circle(0.5) - 0.0) < 1e-12);  // rho_2(-1) = 1
}

TEST_CASE("rho_circle has exactly the three vertex fixed points") {
    for (int i = 1; i < 2000; ++i) {
        const double t = i / 2000.0;
        if (circ_dist(t, 0.0) < 1e-9 || circ_dist(t, 1.0 / 3) < 1e-9 || circ_dist(t, 2.0 / 3) < 1e-9)
            continue;
        CHECK(circ_dist(rho_circle(t), t) > 1e-12);
    }
}

TEST_CASE("arc symbols") {
    CHECK(arc_symbol(1.0 / 9) == 1);
    CHECK(arc_symbol(0.5) == 2);
    CHECK(arc_symbol(0.99) == 3);
    CHECK_THROWS_AS(arc_symbol(1.0 / 3), OnVertex);
}

TEST_CASE("rho_circle is a two-to-one covering") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> ur(0.0, 1.0);
    int done = 0;
    while (done < 1000) {
        const double t = ur(rng);
        int s;
        try {
            s = arc_symbol(t);
        } catch (const OnVertex&) {
            continue;
        }
        int preimages = 0;
        for (int j = 1; j <= 3; ++j) {
            cx w = side_reflection(j, unit(t));
            w /= std::abs(w);
            const double u = angle_of(w);
            int su;
            try {
                su = arc_symbol(u);
            } catch (const OnVertex&) {
                continue;
            }
            if (su == j && circ_dist(rho_circle(u), t) < 1e-10) ++preimages;
        }
        CHECK(preimages == 2);
        CHECK(s >= 1);
        ++done;
    }
}

TEST_CASE("iterated itineraries are admissible") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> ur(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        double t = ur(rng);
        int prev = 0;
        for (int k = 0; k < 40; ++k) {
            int s;
            try {
                s = arc_symbol(t);
            } catch (const OnVertex&) {
                break;
            }
            if (prev) CHECK(s != prev);
            prev = s;
            t = rho_circle(t);
        }
    }
}

TEST_CASE("tile_for_word shift property and admissibility") {
    Word w21{{2, 1}};
    const auto t21 = tile_for_word(w21);
    const auto t1 = tile_for_word(Word{{1}});
    // rho maps tile(2,1) onto tile(1): reflecting back by rho_2 recovers it.
    for (int k = 0; k < 3; ++k)
        CHECK(std::abs(side_reflection(2, t21.vertices[k]) - t1.vertices[k]) < 1e-12);
    CHECK_THROWS_AS(tile_for_word(Word{{1, 1}}), InadmissibleWord);
}

TEST_CASE("tile diameters decrease with rank") {
    double prev_max = 10.0;
    std::vector<Word> level{Word{{1}}, Word{{2}}, Word{{3}}};
    for (int rank = 1; rank <= 10; ++rank) {
        double mx = 0.0;
        for (const auto& w : level) mx = std::max(mx, tile_for_word(w).diameter());
        CHECK(mx <= prev_max + 1e-12);
        prev_max = mx;
        std::vector<Word> next;
        for (const auto& w : level)
            for (uint8_t s = 1; s <= 3; ++s) {
                if (s == w.symbols.front()) continue;
                Word nw;
                nw.symbols.push_back(s);
                nw.symbols.insert(nw.symbols.end(), w.symbols.begin(), w.symbols.end());
                next.push_back(nw);
            }
        level = next;
    }
}
