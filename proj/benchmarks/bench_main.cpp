#include <benchmark/benchmark.h>

#include "sdl/angles.hpp"
#include "sdl/cardioid.hpp"
#include "sdl/schwarz.hpp"
#include "sdl/tricorn.hpp"

using namespace sdl;

static void BM_Circumcircle(benchmark::State& state) {
    const cx a(0.11, 0.07);
    for (auto _ : state) {
        auto g = cardioid::circumcircle(a);
        benchmark::DoNotOptimize(g.r);
    }
}
BENCHMARK(BM_Circumcircle);

static void BM_SchwarzStep(benchmark::State& state) {
    const auto m = schwarz::SchwarzMap::create(cx(0.1875, 0));
    SpherePoint w(cx(0.7, 0.05));
    for (auto _ : state) {
        auto nx = schwarz::F_apply(m, w);
        benchmark::DoNotOptimize(nx);
    }
}
BENCHMARK(BM_SchwarzStep);

static void BM_ClassifyPoint(benchmark::State& state) {
    const auto m = schwarz::SchwarzMap::create(cx(0.05, 0.21));
    for (auto _ : state) {
        auto rec = schwarz::classify_point(m, SpherePoint::infinity(), 64);
        benchmark::DoNotOptimize(rec.rank);
    }
}
BENCHMARK(BM_ClassifyPoint);

static void BM_TricornEscapeRow(benchmark::State& state) {
    for (auto _ : state) {
        int total = 0;
        for (int i = 0; i < 256; ++i) {
            const cx c(-2.0 + 4.0 * i / 256.0, 0.37);
            auto n = tricorn::escape_time(c, cx(0, 0), 4.0, 128);
            total += n ? *n : 0;
        }
        benchmark::DoNotOptimize(total);
    }
}
BENCHMARK(BM_TricornEscapeRow);

static void BM_ItineraryRoundTrip(benchmark::State& state) {
    const angles::Rational th(11, 63);
    for (auto _ : state) {
        auto it = angles::itinerary_of_rational(th);
        auto back = angles::rational_from_itinerary(it);
        benchmark::DoNotOptimize(back.num());
    }
}
BENCHMARK(BM_ItineraryRoundTrip);

static void BM_RhoAngleValue(benchmark::State& state) {
    const auto it = angles::itinerary_of_rational(angles::Rational(11, 63));
    for (auto _ : state) {
        auto v = angles::rho_angle_value(it);
        benchmark::DoNotOptimize(v);
    }
}
BENCHMARK(BM_RhoAngleValue);

static void BM_SchwarzRay(benchmark::State& state) {
    const auto m = schwarz::SchwarzMap::create(cx(0.1875, 0));
    const auto it = angles::Itinerary::parse("|123");
    for (auto _ : state) {
        auto ray = schwarz::trace_dynamical_ray(m, it, 600);
        benchmark::DoNotOptimize(ray.cauchy_gap);
    }
}
BENCHMARK(BM_SchwarzRay);

BENCHMARK_MAIN();
