#pragma once

#include <functional>
#include <string>
#include <vector>

#include "sdl/angles.hpp"
#include "sdl/complexpt.hpp"
#include "sdl/image.hpp"
#include "sdl/portraits.hpp"
#include "sdl/tolerances.hpp"

namespace sdl::render {

// Pixel-to-plane mapping: pixel centers, y axis upward. Pixel (i, j) maps to
// center + width * ((i + 0.5)/px_w - 0.5) + i * height * (0.5 - (j + 0.5)/px_h).
struct Window {
    cx center{0.0, 0.0};
    double width = 1.0;
    double height = 1.0;
};

struct RenderJob {
    Window win;
    int px_w = 512, px_h = 512;
    int max_iter = 64;
    int threads = 0;  // 0: SDL_THREADS env or hardware concurrency
    Tolerances tol;
};

cx pixel_to_plane(const RenderJob& job, int i, int j);

struct ScanRow {
    double re_a, im_a;
    int depth;  // -1 = bounded (non-escaping), -2 = slit, -3 = singular collar
    std::string address;
    double hue;
};

// Address hue: fixed base-3 positional encoding of the first 8 symbols.
double address_hue(const std::string& address);

// Parameter-plane scan of the connectedness locus: per-pixel slit test, then
// depth and address of the critical value orbit. Deterministic.
img::Image render_cs_locus(const RenderJob& job, std::vector<ScanRow>* rows_out = nullptr);

img::Image render_dynamical_plane(cx a, const RenderJob& job);

// Escape-time renders of the Tricorn and its real basilica limb, with
// optional parameter-ray overlays at the given angles.
img::Image render_tricorn(const RenderJob& job,
                          const std::vector<angles::Rational>& ray_overlays = {});
img::Image render_basilica_limb(const RenderJob& job,
                                const std::vector<angles::Rational>& ray_overlays = {});

// Lamination disk: leaves drawn as circular arcs orthogonal to the unit
// circle. Also emits deterministic SVG.
img::Image render_lamination_disk(const portraits::Lamination& lam, const RenderJob& job);
std::string lamination_svg(const portraits::Lamination& lam, int size_px = 800);

std::string scan_csv(const std::vector<ScanRow>& rows);

// Row-parallel map with disjoint output; thread count from the job, the
// SDL_THREADS environment variable, or hardware concurrency.
void parallel_rows(int height, int threads, const std::function<void(int)>& fn);
int resolve_threads(int requested);

}  // namespace sdl::render
