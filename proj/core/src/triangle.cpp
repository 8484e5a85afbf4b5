#include "sdl/triangle.hpp"

namespace sdl::triangle {

cx side_center(int j) {
    switch (j) {
        case 1: return 2.0 * std::polar(1.0, kPi / 3.0);
        case 2: return cx(-2.0, 0.0);
        case 3: return 2.0 * std::polar(1.0, 5.0 * kPi / 3.0);
        default: throw Error("side index must be 1, 2 or 3");
    }
}

cx vertex(int k) {
    switch (k % 3) {
        case 0: return cx(1.0, 0.0);
        case 1: return std::polar(1.0, kTwoPi / 3.0);
        default: return std::polar(1.0, 2.0 * kTwoPi / 3.0);
    }
}

cx side_reflection(int j, cx z) {
    const cx c = side_center(j);
    return c + 3.0 / std::conj(z - c);
}

cx rho_disk(cx z, double side_tol) {
    // z belongs to region D_j exactly when it lies inside side circle j; the
    // three regions are disjoint (the side circles are mutually tangent at the
    // vertices) and their complement in the disk is the triangle.
    int best = 0;
    double best_pen = side_tol;
    for (int j = 1; j <= 3; ++j) {
        const double pen = side_radius() - std::abs(z - side_center(j));
        if (pen > best_pen) {
            best_pen = pen;
            best = j;
        }
    }
    if (best == 0) {
        // On a side within tolerance: fixed. Strictly outside all side circles:
        // interior of Pi, where rho is undefined.
        for (int j = 1; j <= 3; ++j)
            if (std::abs(std::abs(z - side_center(j)) - side_radius()) < side_tol) return z;
        throw InteriorOfPi();
    }
    return side_reflection(best, z);
}

double rho_circle(double theta) {
    const double t = frac(theta);
    // Vertices are exactly fixed.
    if (t == 0.0 || t == 1.0 / 3.0 || t == 2.0 / 3.0) return t;
    int j = (t < 1.0 / 3.0) ? 1 : (t < 2.0 / 3.0 ? 2 : 3);
    cx w = side_reflection(j, unit(t));
    w /= std::abs(w);  // renormalize to the circle
    return angle_of(w);
}

int arc_symbol(double theta, double vertex_tol) {
    const double t = frac(theta);
    for (double v : {0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0})
        if (std::abs(t - v) < vertex_tol) throw OnVertex();
    if (t < 1.0 / 3.0) return 1;
    if (t < 2.0 / 3.0) return 2;
    return 3;
}

DiskTile tile_for_word(const Word& w) {
    if (!w.admissible()) throw InadmissibleWord();
    DiskTile t;
    t.word = w;
    t.vertices = {vertex(0), vertex(1), vertex(2)};
    for (auto it = w.symbols.rbegin(); it != w.symbols.rend(); ++it)
        for (auto& v : t.vertices) v = side_reflection(*it, v);
    return t;
}

}  // namespace sdl::triangle
