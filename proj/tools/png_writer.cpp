#include "png_writer.hpp"

#include <vcc/errors.hpp>

#include <zlib.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <limits>

namespace vcctools {

Canvas::Canvas(int w, int h, uint8_t r, uint8_t g, uint8_t b) : width(w), height(h) {
    rgb.resize(static_cast<size_t>(w) * h * 3);
    for (size_t p = 0; p < rgb.size(); p += 3) {
        rgb[p] = r;
        rgb[p + 1] = g;
        rgb[p + 2] = b;
    }
}

void Canvas::set(int x, int y, uint8_t r, uint8_t g, uint8_t b) {
    if (x < 0 || y < 0 || x >= width || y >= height) return;
    size_t p = (static_cast<size_t>(y) * width + x) * 3;
    rgb[p] = r;
    rgb[p + 1] = g;
    rgb[p + 2] = b;
}

void Canvas::dot(int x, int y, int radius, uint8_t r, uint8_t g, uint8_t b) {
    for (int dy = -radius; dy <= radius; ++dy)
        for (int dx = -radius; dx <= radius; ++dx) set(x + dx, y + dy, r, g, b);
}

namespace {

void put_be32(std::vector<uint8_t>& out, uint32_t v) {
    out.push_back(uint8_t(v >> 24));
    out.push_back(uint8_t(v >> 16));
    out.push_back(uint8_t(v >> 8));
    out.push_back(uint8_t(v));
}

void put_chunk(std::vector<uint8_t>& out, const char type[4], const uint8_t* data, size_t len) {
    put_be32(out, static_cast<uint32_t>(len));
    size_t start = out.size();
    out.insert(out.end(), type, type + 4);
    out.insert(out.end(), data, data + len);
    uint32_t crc = crc32(0L, Z_NULL, 0);
    crc = crc32(crc, out.data() + start, static_cast<uInt>(4 + len));
    put_be32(out, crc);
}

} // namespace

void write_png(const Canvas& canvas, const std::string& path) {
    // Raw image stream: one filter byte (0 = none) before each scanline.
    size_t stride = static_cast<size_t>(canvas.width) * 3;
    std::vector<uint8_t> raw((stride + 1) * canvas.height);
    for (int y = 0; y < canvas.height; ++y) {
        uint8_t* row = raw.data() + y * (stride + 1);
        row[0] = 0;
        std::memcpy(row + 1, canvas.rgb.data() + y * stride, stride);
    }
    uLongf zcap = compressBound(static_cast<uLong>(raw.size()));
    std::vector<uint8_t> z(zcap);
    if (compress2(z.data(), &zcap, raw.data(), static_cast<uLong>(raw.size()), 6) != Z_OK)
        throw vcc::IoError("png: zlib compression failed");
    z.resize(zcap);

    std::vector<uint8_t> out;
    static const uint8_t sig[8] = {137, 80, 78, 71, 13, 10, 26, 10};
    out.insert(out.end(), sig, sig + 8);
    uint8_t ihdr[13];
    ihdr[0] = uint8_t(canvas.width >> 24);
    ihdr[1] = uint8_t(canvas.width >> 16);
    ihdr[2] = uint8_t(canvas.width >> 8);
    ihdr[3] = uint8_t(canvas.width);
    ihdr[4] = uint8_t(canvas.height >> 24);
    ihdr[5] = uint8_t(canvas.height >> 16);
    ihdr[6] = uint8_t(canvas.height >> 8);
    ihdr[7] = uint8_t(canvas.height);
    ihdr[8] = 8;   // bit depth
    ihdr[9] = 2;   // truecolor
    ihdr[10] = 0;  // compression
    ihdr[11] = 0;  // filter
    ihdr[12] = 0;  // no interlace
    put_chunk(out, "IHDR", ihdr, sizeof ihdr);
    put_chunk(out, "IDAT", z.data(), z.size());
    put_chunk(out, "IEND", nullptr, 0);

    FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw vcc::IoError("png: cannot open " + path + " for writing");
    size_t wr = std::fwrite(out.data(), 1, out.size(), f);
    std::fclose(f);
    if (wr != out.size()) throw vcc::IoError("png: short write to " + path);
}

void render_scatter(const std::vector<double>& x, const std::vector<double>& y,
                    const std::vector<int>& cls, int size_px, const std::string& path) {
    static const uint8_t palette[][3] = {
        {31, 119, 180}, {255, 127, 14}, {44, 160, 44},  {214, 39, 40},
        {148, 103, 189}, {140, 86, 75}, {227, 119, 194}, {127, 127, 127},
        {188, 189, 34}, {23, 190, 207}, {0, 0, 0},       {255, 0, 255},
    };
    const int npal = sizeof(palette) / sizeof(palette[0]);

    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (size_t i = 0; i < x.size(); ++i) {
        xmin = std::min(xmin, x[i]);
        xmax = std::max(xmax, x[i]);
        ymin = std::min(ymin, y[i]);
        ymax = std::max(ymax, y[i]);
    }
    if (x.empty()) xmin = xmax = ymin = ymax = 0.0;
    double xr = xmax - xmin, yr = ymax - ymin;
    if (xr <= 0) xr = 1.0;
    if (yr <= 0) yr = 1.0;
    const int margin = 24;
    const int span = size_px - 2 * margin;

    Canvas canvas(size_px, size_px, 255, 255, 255);
    for (size_t i = 0; i < x.size(); ++i) {
        int px = margin + static_cast<int>(std::lround((x[i] - xmin) / xr * span));
        // y axis points up in data space, down in raster space
        int py = size_px - margin - static_cast<int>(std::lround((y[i] - ymin) / yr * span));
        int c = cls.empty() ? 0 : ((cls[i] % npal) + npal) % npal;
        canvas.dot(px, py, 2, palette[c][0], palette[c][1], palette[c][2]);
    }
    write_png(canvas, path);
}

} // namespace vcctools
