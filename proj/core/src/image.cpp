#include "sdl/image.hpp"

#include <zlib.h>

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace sdl::img {

namespace {

void put_u32(std::vector<uint8_t>& v, uint32_t x) {
    v.push_back(uint8_t(x >> 24));
    v.push_back(uint8_t(x >> 16));
    v.push_back(uint8_t(x >> 8));
    v.push_back(uint8_t(x));
}

void write_chunk(FILE* f, const char type[4], const std::vector<uint8_t>& payload) {
    std::vector<uint8_t> head;
    put_u32(head, uint32_t(payload.size()));
    fwrite(head.data(), 1, 4, f);
    fwrite(type, 1, 4, f);
    if (!payload.empty()) fwrite(payload.data(), 1, payload.size(), f);
    uLong crc = crc32(0L, Z_NULL, 0);
    crc = crc32(crc, reinterpret_cast<const Bytef*>(type), 4);
    if (!payload.empty()) crc = crc32(crc, payload.data(), uInt(payload.size()));
    std::vector<uint8_t> tail;
    put_u32(tail, uint32_t(crc));
    fwrite(tail.data(), 1, 4, f);
}

}  // namespace

void write_png(const std::string& path, const Image& im) {
    FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw std::runtime_error("cannot open " + path);
    static const uint8_t sig[8] = {137, 80, 78, 71, 13, 10, 26, 10};
    fwrite(sig, 1, 8, f);

    std::vector<uint8_t> ihdr;
    put_u32(ihdr, uint32_t(im.width));
    put_u32(ihdr, uint32_t(im.height));
    ihdr.push_back(8);  // bit depth
    ihdr.push_back(2);  // truecolor
    ihdr.push_back(0);
    ihdr.push_back(0);
    ihdr.push_back(0);
    write_chunk(f, "IHDR", ihdr);

    // Filter byte 0 per scanline.
    std::vector<uint8_t> raw;
    raw.reserve(size_t(im.height) * (size_t(im.width) * 3 + 1));
    for (int y = 0; y < im.height; ++y) {
        raw.push_back(0);
        const uint8_t* row = im.data.data() + size_t(y) * im.width * 3;
        raw.insert(raw.end(), row, row + size_t(im.width) * 3);
    }
    uLongf bound = compressBound(uLong(raw.size()));
    std::vector<uint8_t> comp(bound);
    if (compress2(comp.data(), &bound, raw.data(), uLong(raw.size()), 6) != Z_OK) {
        std::fclose(f);
        throw std::runtime_error("zlib compression failed");
    }
    comp.resize(bound);
    write_chunk(f, "IDAT", comp);
    write_chunk(f, "IEND", {});
    std::fclose(f);
}

Rgb hsv_to_rgb(double h, double s, double v) {
    h -= std::floor(h);
    const double c = v * s;
    const double hp = h * 6.0;
    const double x = c * (1.0 - std::fabs(std::fmod(hp, 2.0) - 1.0));
    double r = 0, g = 0, b = 0;
    if (hp < 1) r = c, g = x;
    else if (hp < 2) r = x, g = c;
    else if (hp < 3) g = c, b = x;
    else if (hp < 4) g = x, b = c;
    else if (hp < 5) r = x, b = c;
    else r = c, b = x;
    const double m = v - c;
    auto q = [&](double t) { return uint8_t(std::lround(255.0 * std::min(1.0, std::max(0.0, t + m)))); };
    return {q(r), q(g), q(b)};
}

void draw_line(Image& im, double x0, double y0, double x1, double y1, Rgb c) {
    const double dx = x1 - x0, dy = y1 - y0;
    const int n = int(std::ceil(std::max(std::fabs(dx), std::fabs(dy)))) + 1;
    for (int i = 0; i <= n; ++i) {
        const double t = double(i) / n;
        im.set(int(std::lround(x0 + t * dx)), int(std::lround(y0 + t * dy)), c);
    }
}

}  // namespace sdl::img
