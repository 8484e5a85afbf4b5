#include "sdl/render.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <sstream>
#include <thread>

#include "sdl/cardioid.hpp"
#include "sdl/schwarz.hpp"
#include "sdl/tricorn.hpp"
#include "sdl/triangle.hpp"

namespace sdl::render {

cx pixel_to_plane(const RenderJob& job, int i, int j) {
    const double x = job.win.center.real() + job.win.width * ((i + 0.5) / job.px_w - 0.5);
    const double y = job.win.center.imag() + job.win.height * (0.5 - (j + 0.5) / job.px_h);
    return {x, y};
}

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("SDL_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc ? int(hc) : 1;
}

void parallel_rows(int height, int threads, const std::function<void(int)>& fn) {
    const int n = std::min(resolve_threads(threads), height);
    if (n <= 1) {
        for (int y = 0; y < height; ++y) fn(y);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int t = 0; t < n; ++t)
        pool.emplace_back([&] {
            for (int y = next.fetch_add(1); y < height; y = next.fetch_add(1)) fn(y);
        });
    for (auto& th : pool) th.join();
}

double address_hue(const std::string& address) {
    double h = 0.0, w = 1.0 / 3.0;
    for (size_t i = 0; i < address.size() && i < 8; ++i) {
        h += (address[i] - '1') * w;
        w /= 3.0;
    }
    return h;
}

namespace {

const img::Rgb kLocusColor{24, 42, 96};
const img::Rgb kSlitColor{122, 82, 46};
const img::Rgb kSingularColor{128, 128, 128};

}  // namespace

img::Image render_cs_locus(const RenderJob& job, std::vector<ScanRow>* rows_out) {
    img::Image im(job.px_w, job.px_h);
    std::vector<ScanRow> rows;
    if (rows_out) rows.resize(size_t(job.px_w) * job.px_h);

    parallel_rows(job.px_h, job.threads, [&](int j) {
        for (int i = 0; i < job.px_w; ++i) {
            const cx a = pixel_to_plane(job, i, j);
            ScanRow row{a.real(), a.imag(), -1, "", 0.0};
            img::Rgb color = kLocusColor;
            try {
                const auto m = schwarz::SchwarzMap::create(a, job.tol);
                const auto rec = schwarz::classify_point(m, SpherePoint::infinity(), job.max_iter);
                if (rec.hit_singular) {
                    row.depth = -3;
                    color = kSingularColor;
                } else if (rec.escapes) {
                    row.depth = rec.rank;
                    row.address = rec.address.str();
                    row.hue = address_hue(row.address);
                    const double shade = 1.0 - 0.75 * std::min(rec.rank, 48) / 48.0;
                    color = img::hsv_to_rgb(row.hue, 0.85, 0.35 + 0.65 * shade);
                }
            } catch (const SlitError&) {
                row.depth = -2;
                color = kSlitColor;
            } catch (const Error&) {
                row.depth = -3;
                color = kSingularColor;
            }
            im.set(i, j, color);
            if (rows_out) rows[size_t(j) * job.px_w + i] = row;
        }
    });
    if (rows_out) *rows_out = std::move(rows);
    return im;
}

img::Image render_dynamical_plane(cx a, const RenderJob& job) {
    img::Image im(job.px_w, job.px_h);
    const auto m = schwarz::SchwarzMap::create(a, job.tol);
    parallel_rows(job.px_h, job.threads, [&](int j) {
        for (int i = 0; i < job.px_w; ++i) {
            const cx w = pixel_to_plane(job, i, j);
            img::Rgb color{12, 12, 20};  // non-escaping
            try {
                const auto reg = cardioid::droplet_contains(m.geom, SpherePoint(w), job.tol);
                if (reg == cardioid::Region::BoundaryRegular || reg == cardioid::Region::Singular) {
                    color = img::Rgb{235, 235, 235};  // droplet outline
                } else {
                    const auto rec = schwarz::classify_point(m, SpherePoint(w), job.max_iter);
                    if (rec.hit_singular) {
                        color = kSingularColor;
                    } else if (rec.escapes) {
                        const double hue = 0.58 + 0.11 * (rec.rank % 6);
                        const double shade = 1.0 - 0.8 * std::min(rec.rank, 40) / 40.0;
                        color = img::hsv_to_rgb(hue, 0.65, 0.25 + 0.75 * shade);
                        if (rec.rank == 0) color = img::Rgb{250, 245, 200};  // fundamental tile
                    }
                }
            } catch (const Error&) {
                color = kSingularColor;
            }
            im.set(i, j, color);
        }
    });
    return im;
}

namespace {

img::Image escape_render(const RenderJob& job, const std::vector<angles::Rational>& overlays) {
    img::Image im(job.px_w, job.px_h);
    parallel_rows(job.px_h, job.threads, [&](int j) {
        for (int i = 0; i < job.px_w; ++i) {
            const cx c = pixel_to_plane(job, i, j);
            const auto n = tricorn::escape_time(c, cx(0.0, 0.0), 4.0, job.max_iter);
            img::Rgb color{8, 10, 24};
            if (n) {
                const double t = std::min(*n, job.max_iter) / double(job.max_iter);
                color = img::hsv_to_rgb(0.61 - 0.5 * t, 0.8, 0.25 + 0.75 * std::pow(t, 0.35));
            }
            im.set(i, j, color);
        }
    });
    auto to_px = [&](cx z, double& x, double& y) {
        x = ((z.real() - job.win.center.real()) / job.win.width + 0.5) * job.px_w - 0.5;
        y = (0.5 - (z.imag() - job.win.center.imag()) / job.win.height) * job.px_h - 0.5;
    };
    for (const auto& th : overlays) {
        try {
            const auto ray = tricorn::trace_parameter_ray(th, 48, 1.0 + 1e-3, job.tol);
            for (size_t k = 1; k < ray.points.size(); ++k) {
                double x0, y0, x1, y1;
                to_px(ray.points[k - 1], x0, y0);
                to_px(ray.points[k], x1, y1);
                img::draw_line(im, x0, y0, x1, y1, img::Rgb{255, 255, 255});
            }
        } catch (const Error&) {
        }
    }
    return im;
}

}  // namespace

img::Image render_tricorn(const RenderJob& job, const std::vector<angles::Rational>& rays) {
    return escape_render(job, rays);
}

img::Image render_basilica_limb(const RenderJob& job, const std::vector<angles::Rational>& rays) {
    return escape_render(job, rays);
}

namespace {

// Circle orthogonal to the unit circle through boundary points p and q:
// solves Re(p conj(c)) = 1, Re(q conj(c)) = 1.
bool geodesic_circle(cx p, cx q, cx& center, double& radius) {
    const double det = p.real() * q.imag() - p.imag() * q.real();
    if (std::abs(det) < 1e-12) return false;  // diameter
    const double cxr = (q.imag() - p.imag()) / det;
    const double cyi = (p.real() - q.real()) / det;
    center = cx(cxr, cyi);
    radius = std::sqrt(std::max(0.0, std::norm(center) - 1.0));
    return true;
}

std::vector<cx> geodesic_points(double t1, double t2, int samples) {
    const cx p = unit(t1), q = unit(t2);
    std::vector<cx> pts;
    cx c;
    double r;
    if (!geodesic_circle(p, q, c, r)) {
        for (int s = 0; s <= samples; ++s) pts.push_back(p + (q - p) * (double(s) / samples));
        return pts;
    }
    double a1 = std::arg(p - c), a2 = std::arg(q - c);
    double d = a2 - a1;
    while (d > kPi) d -= kTwoPi;
    while (d < -kPi) d += kTwoPi;
    for (int s = 0; s <= samples; ++s) pts.push_back(c + std::polar(r, a1 + d * s / samples));
    return pts;
}

}  // namespace

img::Image render_lamination_disk(const portraits::Lamination& lam, const RenderJob& job) {
    img::Image im(job.px_w, job.px_h);
    for (int j = 0; j < job.px_h; ++j)
        for (int i = 0; i < job.px_w; ++i) im.set(i, j, img::Rgb{250, 250, 250});

    auto to_px = [&](cx z, double& x, double& y) {
        x = (z.real() / 2.2 + 0.5) * job.px_w - 0.5;
        y = (0.5 - z.imag() / 2.2) * job.px_h - 0.5;
    };
    // Unit circle.
    for (int s = 0; s <= 2048; ++s) {
        double x, y;
        to_px(unit(double(s) / 2048.0), x, y);
        im.set(int(std::lround(x)), int(std::lround(y)), img::Rgb{40, 40, 40});
    }
    for (const auto& leaf : lam.leaves) {
        const auto pts = geodesic_points(leaf.a.pos(), leaf.b.pos(), 256);
        for (size_t s = 1; s < pts.size(); ++s) {
            double x0, y0, x1, y1;
            to_px(pts[s - 1], x0, y0);
            to_px(pts[s], x1, y1);
            img::draw_line(im, x0, y0, x1, y1, img::Rgb{180, 30, 30});
        }
    }
    return im;
}

std::string lamination_svg(const portraits::Lamination& lam, int size_px) {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(6);
    const double s = size_px / 2.2;
    auto X = [&](cx z) { return size_px / 2.0 + s * z.real(); };
    auto Y = [&](cx z) { return size_px / 2.0 - s * z.imag(); };
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size_px << "\" height=\""
       << size_px << "\" viewBox=\"0 0 " << size_px << " " << size_px << "\">\n";
    os << "<circle cx=\"" << size_px / 2.0 << "\" cy=\"" << size_px / 2.0 << "\" r=\"" << s
       << "\" fill=\"none\" stroke=\"#282828\" stroke-width=\"1\"/>\n";
    // Stable leaf order.
    std::vector<size_t> order(lam.leaves.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](size_t i, size_t j) {
        const double ai = lam.leaves[i].a.pos(), aj = lam.leaves[j].a.pos();
        if (ai != aj) return ai < aj;
        return lam.leaves[i].b.pos() < lam.leaves[j].b.pos();
    });
    for (size_t k : order) {
        const auto& leaf = lam.leaves[k];
        const cx p = unit(leaf.a.pos()), q = unit(leaf.b.pos());
        cx c;
        double r;
        if (!geodesic_circle(p, q, c, r)) {
            os << "<line x1=\"" << X(p) << "\" y1=\"" << Y(p) << "\" x2=\"" << X(q) << "\" y2=\""
               << Y(q) << "\" stroke=\"#b41e1e\" stroke-width=\"1\"/>\n";
            continue;
        }
        // Short arc (the one inside the disk).
        double a1 = std::arg(p - c), a2 = std::arg(q - c);
        double d = a2 - a1;
        while (d > kPi) d -= kTwoPi;
        while (d < -kPi) d += kTwoPi;
        const int sweep = (d < 0 ? 0 : 1);
        os << "<path d=\"M " << X(p) << " " << Y(p) << " A " << r * s << " " << r * s
           << " 0 0 " << (sweep ? 0 : 1) << " " << X(q) << " " << Y(q)
           << "\" fill=\"none\" stroke=\"#b41e1e\" stroke-width=\"1\"/>\n";
    }
    os << "</svg>\n";
    return os.str();
}

std::string scan_csv(const std::vector<ScanRow>& rows) {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(12);
    os << "re_a,im_a,depth,address,hue\n";
    for (const auto& r : rows) {
        os << r.re_a << "," << r.im_a << ",";
        if (r.depth == -1) os << "bounded";
        else if (r.depth == -2) os << "slit";
        else if (r.depth == -3) os << "singular";
        else os << r.depth;
        os << "," << r.address << "," << r.hue << "\n";
    }
    return os.str();
}

}  // namespace sdl::render
