#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace sdl::img {

struct Rgb {
    uint8_t r = 0, g = 0, b = 0;
};

struct Image {
    int width = 0, height = 0;
    std::vector<uint8_t> data;  // 8-bit RGB, row-major, no alpha

    Image() = default;
    Image(int w, int h) : width(w), height(h), data(size_t(w) * h * 3, 0) {}

    void set(int x, int y, Rgb c) {
        if (x < 0 || y < 0 || x >= width || y >= height) return;
        const size_t i = (size_t(y) * width + x) * 3;
        data[i] = c.r;
        data[i + 1] = c.g;
        data[i + 2] = c.b;
    }
    Rgb get(int x, int y) const {
        const size_t i = (size_t(y) * width + x) * 3;
        return {data[i], data[i + 1], data[i + 2]};
    }
};

// Deterministic PNG writer (zlib stream, filter 0 rows, fixed compression
// level; no timestamps or ancillary chunks).
void write_png(const std::string& path, const Image& im);

Rgb hsv_to_rgb(double h, double s, double v);

void draw_line(Image& im, double x0, double y0, double x1, double y1, Rgb c);

}  // namespace sdl::img
