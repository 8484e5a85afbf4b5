#include <doctest.h>

#include <random>

#include "sdl/schwarz.hpp"

using namespace sdl;
using namespace sdl::schwarz;
using angles::Itinerary;
using angles::Rational;

TEST_CASE("critical orbits at the named centers") {
    // a = 0: 0 <-> infinity.
    auto m0 = SchwarzMap::create(cx(0, 0));
    auto w = F_apply(m0, SpherePoint(cx(0, 0)));
    REQUIRE(w.has_value());
    CHECK(w->is_inf());
    w = F_apply(m0, *w);
    REQUIRE(w.has_value());
    CHECK(std::abs(w->value()) < 1e-12);

    // a = 3/16: 0 -> inf -> 3/16 -> 0.
    auto m3 = SchwarzMap::create(cx(3.0 / 16, 0));
    SpherePoint z(cx(0, 0));
    std::vector<SpherePoint> orbit;
    for (int i = 0; i < 3; ++i) {
        auto nx = F_apply(m3, z);
        REQUIRE(nx.has_value());
        orbit.push_back(*nx);
        z = *nx;
    }
    CHECK(orbit[0].is_inf());
    CHECK(std::abs(orbit[1].value() - cx(3.0 / 16, 0)) < 1e-12);
    CHECK(std::abs(orbit[2].value()) < 1e-12);

    // a = 2/9: period 4.
    auto m4 = SchwarzMap::create(cx(2.0 / 9, 0));
    z = SpherePoint(cx(0, 0));
    for (int i = 0; i < 4; ++i) {
        auto nx = F_apply(m4, z);
        REQUIRE(nx.has_value());
        z = *nx;
    }
    CHECK(std::abs(z.value()) < 1e-12);
}

TEST_CASE("classify_point and depth") {
    // a = 10: F(inf) = 10 lies in its own fundamental tile.
    auto m = SchwarzMap::create(cx(10, 0));
    const auto rec = classify_point(m, SpherePoint::infinity(), 64);
    CHECK(rec.escapes);
    CHECK(rec.rank == 1);
    REQUIRE(rec.address.symbols.size() == 1);
    CHECK(rec.address.symbols[0] == 2);
    CHECK(*depth(cx(10, 0), 64) == 1);

    CHECK(!depth(cx(0, 0), 128).has_value());
    CHECK(!depth(cx(3.0 / 16, 0), 128).has_value());
}

TEST_CASE("classify_point self-consistency against direct replay") {
    auto m = SchwarzMap::create(cx(3.0 / 16, 0));
    const SpherePoint w0(cx(0.7, 0.0));
    const auto rec = classify_point(m, w0, 64);
    SpherePoint w = w0;
    for (int i = 0; i < rec.rank; ++i) {
        auto nx = F_apply(m, w);
        REQUIRE(nx.has_value());
        w = *nx;
    }
    if (rec.escapes && !rec.terminal.is_inf() && !w.is_inf())
        CHECK(std::abs(w.value() - rec.terminal.value()) < 1e-9);
    CHECK(rec.address.admissible());
}

TEST_CASE("inverse branches section property") {
    auto m = SchwarzMap::create(cx(0.1875, 0));
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> ur(-1.0, 1.0);
    int tested = 0;
    while (tested < 1000) {
        const cx z(ur(rng), ur(rng));
        const auto reg = cardioid::droplet_contains(m.geom, SpherePoint(z), m.tol);
        if (reg == cardioid::Region::Singular) continue;
        const auto branches = inverse_branches(m, SpherePoint(z));
        for (const auto& br : branches) {
            auto img = F_apply(m, br.w);
            if (!img) continue;
            if (!img->is_inf()) CHECK(std::abs(img->value() - z) < 1e-10 * (1.0 + std::abs(z)));
        }
        ++tested;
    }
    // A droplet-interior point has three preimages.
    const cx q = cardioid::droplet_interior_point(m.geom);
    CHECK(inverse_branches(m, SpherePoint(q)).size() == 3);
    // infinity has the single critical preimage 0.
    const auto pre_inf = inverse_branches(m, SpherePoint::infinity());
    REQUIRE(pre_inf.size() == 1);
    CHECK(std::abs(pre_inf[0].w.value()) < 1e-14);
}

TEST_CASE("dynamical rays land on periodic points") {
    auto m = SchwarzMap::create(cx(3.0 / 16, 0));

    // Fixed itinerary (2)^inf is inadmissible; the simplest genuine periodic
    // word has period 3.
    const auto ray = trace_dynamical_ray(m, Itinerary::parse("|123"), 2000);
    CHECK(ray.cauchy_gap < 1e-6);
    REQUIRE(!ray.landing.is_inf());
    // Landing is fixed by F^3.
    SpherePoint w = ray.landing;
    for (int i = 0; i < 3; ++i) {
        auto nx = F_apply(m, w);
        REQUIRE(nx.has_value());
        w = *nx;
    }
    CHECK(std::abs(w.value() - ray.landing.value()) < 1e-6);
    CHECK(ray.itinerary_verified);
}

TEST_CASE("vertex rays land at the singular fixed points") {
    auto m0 = SchwarzMap::create(cx(0, 0));
    const auto r = trace_ray(m0, angles::E_inverse(Rational(1, 3)), 100);
    CHECK(r.vertex_ray);
    CHECK(std::abs(r.landing.value() - m0.geom.alpha) < 1e-10);
    const auto r0 = trace_ray(m0, angles::E_inverse(Rational(0, 1)), 100);
    CHECK(std::abs(r0.landing.value() - cx(0.25, 0)) < 1e-10);
}

TEST_CASE("ray gap decreases along the tail") {
    auto m = SchwarzMap::create(cx(0.1875, 0));
    const auto ray = trace_dynamical_ray(m, Itinerary::parse("|1232"), 2000);
    REQUIRE(ray.points.size() >= 10);
    // Monotone on the tail up to the floating-point floor.
    const size_t n = ray.points.size();
    double late = 0.0, early = 0.0;
    for (size_t i = n - 3; i < n; ++i) late = std::max(late, std::abs(ray.points[i] - ray.points[i - 1]));
    for (size_t i = n - 9; i < n - 6; ++i) early = std::max(early, std::abs(ray.points[i] - ray.points[i - 1]));
    CHECK(late <= early + 1e-8);
}

TEST_CASE("find_cycles at the centers") {
    auto m0 = SchwarzMap::create(cx(0, 0));
    const auto c2 = find_cycles(m0, 2, 12);
    bool found_super = false;
    for (const auto& rec : c2) {
        bool has_zero = false, has_inf = false;
        for (const auto& p : rec.points) {
            if (p.is_inf()) has_inf = true;
            else if (std::abs(p.value()) < 1e-9) has_zero = true;
        }
        if (has_zero && has_inf) {
            found_super = true;
            CHECK(rec.cls == CycleClass::Superattracting);
            CHECK(std::abs(rec.multiplier.value) < 1e-12);
        }
    }
    CHECK(found_super);

    auto m3 = SchwarzMap::create(cx(3.0 / 16, 0));
    const auto c3 = find_cycles(m3, 3, 12);
    bool found3 = false;
    for (const auto& rec : c3)
        for (const auto& p : rec.points)
            if (!p.is_inf() && std::abs(p.value() - cx(3.0 / 16, 0)) < 1e-8) found3 = true;
    CHECK(found3);
}

TEST_CASE("attracting cycle inside the period-3 component") {
    // The component around 3/16 is tiny: real extent ~[0.18722, 0.18831].
    auto m = SchwarzMap::create(cx(0.1878, 0));
    const auto cycles = find_cycles(m, 3, 16);
    bool attracting = false;
    for (const auto& rec : cycles) {
        if (rec.cls != CycleClass::Attracting && rec.cls != CycleClass::Superattracting) continue;
        attracting = true;
        // Second-iterate multiplier is real and nonnegative.
        std::vector<SpherePoint> twice = rec.points;
        for (const auto& p : rec.points) twice.push_back(p);
        const auto mu2 = cycle_multiplier(m, twice);
        CHECK(!mu2.anti);
        CHECK(std::abs(mu2.value.imag()) < 1e-8);
        CHECK(mu2.value.real() >= -1e-12);
        CHECK(std::abs(mu2.value) < 1.0);
    }
    CHECK(attracting);
}

TEST_CASE("chain-rule multiplier matches finite differences of the even iterate") {
    auto m = SchwarzMap::create(cx(0.1878, 0));
    const auto cycles = find_cycles(m, 3, 16);
    for (const auto& rec : cycles) {
        if (rec.cls != CycleClass::Repelling) continue;
        bool usable = true;
        for (const auto& p : rec.points)
            if (p.is_inf()) usable = false;
        if (!usable) continue;
        std::vector<SpherePoint> twice = rec.points;
        for (const auto& p : rec.points) twice.push_back(p);
        const cx chain = cycle_multiplier(m, twice).value;
        // Centered finite difference of F^6 at the cycle point.
        const cx w0 = rec.points[0].value();
        const double h = 1e-6;
        auto F6 = [&](cx z) {
            SpherePoint q(z);
            for (int i = 0; i < 6; ++i) q = *F_apply(m, q);
            return q.value();
        };
        const cx fd = (F6(w0 + h) - F6(w0 - h)) / (2 * h);
        CHECK(std::abs(chain - fd) < 1e-5 * (1.0 + std::abs(chain)));
        break;
    }
}

TEST_CASE("find_center recovers the paper centers") {
    CHECK(std::abs(find_center(2, cx(0.05, 0.02))) < 1e-8);
    CHECK(std::abs(find_center(3, cx(0.2, 0)) - cx(3.0 / 16, 0)) < 1e-8);
    CHECK(std::abs(find_center(4, cx(0.23, 0)) - cx(2.0 / 9, 0)) < 1e-8);
    const double satellite = (std::sqrt(52.0) - 5.0) / 36.0;
    CHECK(std::abs(find_center(4, cx(0.06, 0)) - cx(satellite, 0)) < 1e-8);
}

TEST_CASE("real seeds give real centers") {
    for (int period : {2, 3, 4}) {
        for (double s : {0.05, 0.2, 0.23}) {
            try {
                const cx a = find_center(period, cx(s, 0.0));
                CHECK(std::abs(a.imag()) < 1e-10);
            } catch (const Error&) {
            }
        }
    }
}

TEST_CASE("koenigs ratio: center value, invariance, realness") {
    CHECK(std::abs(koenigs_ratio(cx(3.0 / 16, 0), 3)) < 1e-12);  // superattracting
    const cx z1 = koenigs_ratio(cx(0.1878, 0), 3);
    CHECK(std::abs(z1.imag()) < 1e-6);  // real parameter in the component
    CHECK(std::abs(z1) < 1.0);
    CHECK(std::abs(z1) > 0.0);
}

TEST_CASE("parabolic index equals 1/(1-lambda) at a repelling point") {
    auto m = SchwarzMap::create(cx(3.0 / 16, 0));
    const auto ray = trace_dynamical_ray(m, Itinerary::parse("|123"), 3000);
    REQUIRE(!ray.landing.is_inf());
    const cx w = ray.landing.value();
    std::vector<SpherePoint> orbit;
    SpherePoint q(w);
    for (int i = 0; i < 6; ++i) {
        orbit.push_back(q);
        q = *F_apply(m, q);
    }
    const cx lambda = cycle_multiplier(m, orbit).value;  // F^6 multiplier
    const cx idx = parabolic_index(m, w, 6);
    CHECK(std::abs(idx - 1.0 / (1.0 - lambda)) < 1e-8 * (1.0 + std::abs(idx)));
}

TEST_CASE("real parabolic boundary points of the period-3 component") {
    const double aR = find_real_parabolic_boundary(3, 0.1876, 0.32);
    CHECK(aR > 0.1876);
    CHECK(aR < 0.32);
    const double aL = find_real_parabolic_boundary(3, 0.05, 0.1874);
    CHECK(aL > 0.05);
    CHECK(aL < 0.1874);
    // Just inside: attracting.
    auto m = SchwarzMap::create(cx(0.5 * (aL + aR), 0));
    const auto cyc = locate_cycle(m, 3, cx(0, 0));
    REQUIRE(cyc.has_value());
}

TEST_CASE("slit orbit stays on the negative real axis") {
    CHECK(slit_orbit_check(-1.0));
    CHECK(slit_orbit_check(-0.5));
    CHECK(slit_orbit_check(-0.12));
    CHECK_THROWS_AS(slit_orbit_check(0.0), Error);
}

TEST_CASE("escape addresses are admissible with leading symbol 2") {
    std::mt19937_64 rng(71);
    std::uniform_real_distribution<double> ur(-0.6, 0.6);
    int scanned = 0;
    while (scanned < 60) {
        const cx a(ur(rng), ur(rng));
        SchwarzMap m;
        try {
            m = SchwarzMap::create(a);
        } catch (const SlitError&) {
            continue;
        }
        const auto rec = classify_point(m, SpherePoint::infinity(), 48);
        if (rec.escapes && rec.rank > 0) {
            CHECK(rec.address.admissible());
            CHECK(rec.address.symbols.front() == 2);
        }
        ++scanned;
    }
}

TEST_CASE("forward itinerary of a landing point reproduces the traced word") {
    auto m = SchwarzMap::create(cx(3.0 / 16, 0));
    for (const char* word : {"|123", "|1232", "|12132"}) {
        const auto ray = trace_dynamical_ray(m, Itinerary::parse(word), 2500);
        CHECK(ray.itinerary_verified);
    }
}
