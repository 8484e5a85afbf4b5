#include <doctest.h>

#include <random>

#include "sdl/cardioid.hpp"

using namespace sdl;
using namespace sdl::cardioid;

TEST_CASE("phi at the marked points") {
    CHECK(std::abs(phi(cx(0, 0))) == 0.0);
    CHECK(std::abs(phi(cx(1, 0)) - cx(0.25, 0)) < 1e-15);
    CHECK(std::abs(phi(cx(0.5, 0)) - cx(3.0 / 16, 0)) < 1e-15);
    CHECK(phi(SpherePoint::infinity()).is_inf());
}

TEST_CASE("phi_inverse picks the disk root") {
    auto l = phi_inverse(cx(3.0 / 16, 0));
    REQUIRE(l.has_value());
    CHECK(std::abs(*l - cx(0.5, 0)) < 1e-14);
    CHECK(std::abs(*phi_inverse(cx(0, 0))) < 1e-14);
    CHECK(!phi_inverse(cx(1.0, 0)).has_value());  // roots 1 +- i sqrt(3), |.| = 2
}

TEST_CASE("phi round trip on random cardioid points") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> ur(0.0, 1.0);
    for (int i = 0; i < 10000; ++i) {
        const double r = std::sqrt(ur(rng)), t = ur(rng);
        const cx lam = std::polar(r, kTwoPi * t);
        const cx w = phi(lam);
        auto back = phi_inverse(w);
        REQUIRE(back.has_value());
        CHECK(std::abs(phi(*back) - w) < 1e-12);
    }
}

TEST_CASE("schwarz reflection values from the critical orbit relations") {
    CHECK(schwarz_sigma(cx(0, 0)).is_inf());
    CHECK(std::abs(schwarz_sigma(cx(3.0 / 16, 0)).value()) < 1e-12);
    CHECK(std::abs(schwarz_sigma(cx(2.0 / 9, 0)).value() - cx(3.0 / 16, 0)) < 1e-12);
}

TEST_CASE("sigma fixes the cardioid boundary pointwise") {
    for (int k = 1; k < 48; ++k) {
        const double t = k / 48.0;
        if (std::abs(t - 0.0) < 1e-9) continue;
        const cx w = phi(unit(t));
        if (std::abs(w - cx(0.25, 0)) < 1e-6) continue;  // cusp
        CHECK(std::abs(schwarz_sigma(w).value() - w) < 1e-10);
    }
}

TEST_CASE("sigma_wirtinger matches centered finite differences") {
    auto fd = [](cx w) {
        const double h = 1e-6;
        // d sigma / d conj(w) = (d/dx + i d/dy)/2 applied to sigma (anti-holomorphic part).
        const cx sx = (schwarz_sigma(w + cx(h, 0)).value() - schwarz_sigma(w - cx(h, 0)).value()) / (2 * h);
        const cx sy = (schwarz_sigma(w + cx(0, h)).value() - schwarz_sigma(w - cx(0, h)).value()) / (2 * h);
        return 0.5 * (sx + cx(0, 1) * sy);
    };
    for (cx w : {cx(3.0 / 16, 0), cx(2.0 / 9, 0), cx(0.1, 0.05), cx(-0.2, 0.12)}) {
        const cx an = sigma_wirtinger(w);
        const cx nu = fd(w);
        CHECK(std::abs(an - nu) < 1e-6 * (1.0 + std::abs(an)));
    }
}

TEST_CASE("sigma_wirtinger has modulus 1 on the boundary") {
    for (int k = 1; k < 64; ++k) {
        const double t = k / 64.0;
        const cx w = phi(unit(t));
        if (std::abs(w - cx(0.25, 0)) < 1e-3) continue;
        CHECK(std::abs(std::abs(sigma_wirtinger(w)) - 1.0) < 1e-8);
    }
}

TEST_CASE("sigma_wirtinger pole at the critical point") {
    CHECK_THROWS_AS(sigma_wirtinger(cx(0, 0)), CriticalPointError);
}

TEST_CASE("circumcircle at a = 0: analytic oracle") {
    // |phi(e^{i t})|^2 = 5/16 - cos(t)/4, maximized at t = pi.
    const auto g = circumcircle(cx(0, 0));
    CHECK(std::abs(g.r - 0.75) < 1e-10);
    CHECK(std::abs(g.alpha - cx(-0.75, 0)) < 1e-10);
    CHECK(std::abs(g.t_alpha - 0.5) < 1e-10);
    CHECK(std::abs(g.alpha_prime - cx(5.0 / 36, 0)) < 1e-10);
    CHECK(std::abs(g.alpha - g.a) - g.r < 1e-10);
}

TEST_CASE("circumcircle on the slit raises SlitError") {
    CHECK_THROWS_AS(circumcircle(cx(-1.0, 0)), SlitError);
    CHECK_THROWS_AS(circumcircle(cx(-0.5, 0)), SlitError);
    // Brute grid oracle: the two maximizers are conjugate-symmetric.
    try {
        circumcircle(cx(-1.0, 0));
    } catch (const SlitError& e) {
        CHECK(std::abs(std::fmod(e.theta1 + e.theta2, kTwoPi)) < 1e-5);
    }
}

TEST_CASE("circumcircle far parameter: unique maximizer against grid oracle") {
    const cx a(10.0, 0.0);
    const auto g = circumcircle(a);
    double best = 0.0;
    for (int i = 0; i < 4096; ++i)
        best = std::max(best, std::abs(phi(unit(i / 4096.0)) - a));
    CHECK(std::abs(g.r - best) < 1e-6);
    CHECK(g.r >= best - 1e-12);
    // All cardioid points inside the closed disk.
    for (int i = 0; i < 512; ++i)
        CHECK(std::abs(phi(unit(i / 512.0)) - a) <= g.r + 1e-10);
}

TEST_CASE("degenerate tangency flag at a = -1/12") {
    const auto g = circumcircle_allow_slit(cx(-1.0 / 12, 0));
    CHECK(g.degenerate_tangency);
}

TEST_CASE("circle reflection basics") {
    const auto g = circumcircle(cx(0, 0));
    CHECK(std::abs(circle_reflect(g, SpherePoint::infinity()).value() - g.a) == 0.0);
    const cx on_circle = g.a + g.r;
    CHECK(std::abs(circle_reflect(g, SpherePoint(on_circle)).value() - on_circle) < 1e-14);
    CHECK(std::abs(circle_reflect(g, SpherePoint(cx(3, 0))).value() - cx(3.0 / 16, 0)) < 1e-14);
}

TEST_CASE("circle reflection is an involution") {
    const auto g = circumcircle(cx(0.1, 0.07));
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> ur(-2.0, 2.0);
    for (int i = 0; i < 10000; ++i) {
        const cx w(ur(rng), ur(rng));
        if (std::abs(w - g.a) < 1e-3) continue;
        const auto back = circle_reflect(g, circle_reflect(g, SpherePoint(w)));
        CHECK(std::abs(back.value() - w) < 1e-12 * (1.0 + std::abs(w)));
    }
}

TEST_CASE("droplet classification") {
    const auto g = circumcircle(cx(0, 0));
    CHECK(droplet_contains(g, SpherePoint(cx(0.7, 0))) == Region::Interior);
    CHECK(droplet_contains(g, SpherePoint(g.alpha)) == Region::Singular);
    CHECK(droplet_contains(g, SpherePoint(cx(0.25, 0))) == Region::Singular);
    CHECK(droplet_contains(g, SpherePoint(cx(0, 0))) == Region::Outside);       // inside cardioid
    CHECK(droplet_contains(g, SpherePoint(cx(2.0, 0))) == Region::Outside);     // outside disk
    CHECK(droplet_contains(g, SpherePoint::infinity()) == Region::Outside);

    const auto g10 = circumcircle(cx(10, 0));
    CHECK(droplet_contains(g10, SpherePoint(cx(10, 0))) == Region::Interior);  // a outside cardioid
}

TEST_CASE("droplet boundary points lie on exactly one bounding curve") {
    const auto g = circumcircle(cx(0.12, 0.05));
    for (int i = 0; i < 256; ++i) {
        const cx w = g.a + g.r * unit(i / 256.0);
        if (std::abs(w - g.alpha) < 1e-6) continue;
        CHECK(droplet_contains(g, SpherePoint(w)) == Region::BoundaryRegular);
        CHECK(!phi_inverse(w, 1e-9).has_value());  // not on the cardioid too
    }
}

TEST_CASE("sigma preimages of alpha are alpha and alpha_prime") {
    for (cx a : {cx(0, 0), cx(0.1875, 0), cx(0.05, 0.2)}) {
        const auto g = circumcircle(a);
        CHECK(std::abs(schwarz_sigma(g.alpha_prime).value() - g.alpha) < 1e-10);
        CHECK(std::abs(schwarz_sigma(g.alpha).value() - g.alpha) < 1e-8);
        // alpha_prime is inside the cardioid.
        auto lam = phi_inverse(g.alpha_prime);
        REQUIRE(lam.has_value());
        CHECK(std::abs(*lam) < 1.0);
    }
}
