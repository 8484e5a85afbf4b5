#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "sdl/complexpt.hpp"
#include "sdl/errors.hpp"

namespace sdl::triangle {

// Ideal triangle in the unit disk with vertices at the cube roots of unity.
// Side j is the circle orthogonal to the unit circle subtending the boundary
// arc C~_j, with C~_1 = (0,1/3), C~_2 = (1/3,2/3), C~_3 = (2/3,1) in angle
// coordinates. Centers 2 e^{i pi/3}, -2, 2 e^{i 5pi/3}; radius sqrt(3).
cx side_center(int j);
inline double side_radius() { return 1.7320508075688772935; }
cx vertex(int k);  // k in {0,1,2}: e^{2 pi i k/3}

// Anti-Moebius inversion in side circle j; involution fixing side j pointwise
// and preserving the unit circle.
cx side_reflection(int j, cx z);

// The piecewise reflection rho on the closed disk minus the open triangle.
// Throws InteriorOfPi when z lies strictly inside Pi.
cx rho_disk(cx z, double side_tol = 1e-12);

// rho restricted to the circle, in angle coordinates (mod 1). Fixed points
// exactly {0, 1/3, 2/3}.
double rho_circle(double theta);

// Index of the arc C~_j containing theta; throws OnVertex near {0,1/3,2/3}.
int arc_symbol(double theta, double vertex_tol = 1e-12);

struct Word {
    std::vector<uint8_t> symbols;  // over {1,2,3}

    bool admissible() const {
        for (size_t i = 1; i < symbols.size(); ++i)
            if (symbols[i] == symbols[i - 1]) return false;
        for (uint8_t s : symbols)
            if (s < 1 || s > 3) return false;
        return true;
    }
    size_t rank() const { return symbols.size(); }
    std::string str() const {
        std::string s;
        for (uint8_t c : symbols) s.push_back(char('0' + c));
        return s;
    }
};

struct DiskTile {
    Word word;
    std::array<cx, 3> vertices;  // images of the triangle's ideal vertices

    double diameter() const {
        double d = 0.0;
        for (int i = 0; i < 3; ++i)
            for (int j = i + 1; j < 3; ++j) d = std::max(d, std::abs(vertices[i] - vertices[j]));
        return d;
    }
};

// tile(word) = rho_{i1} o ... o rho_{ik}(Pi). Throws InadmissibleWord.
DiskTile tile_for_word(const Word& w);

}  // namespace sdl::triangle
