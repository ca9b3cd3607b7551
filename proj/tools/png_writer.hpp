#ifndef VCC_TOOLS_PNG_WRITER_HPP
#define VCC_TOOLS_PNG_WRITER_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace vcctools {

// Minimal in-memory RGB8 canvas.
struct Canvas {
    int width = 0, height = 0;
    std::vector<uint8_t> rgb;  // 3 * width * height, row major

    Canvas(int w, int h, uint8_t r, uint8_t g, uint8_t b);
    void set(int x, int y, uint8_t r, uint8_t g, uint8_t b);
    // Filled square of side 2*radius+1 centered on (x, y), clipped.
    void dot(int x, int y, int radius, uint8_t r, uint8_t g, uint8_t b);
};

// Encode the canvas as an 8-bit truecolor PNG (zlib-compressed, filter 0).
// Throws vcc::IoError when the file cannot be written.
void write_png(const Canvas& canvas, const std::string& path);

// Scatter plot of 2-D points colored by class id (cycling palette), with
// axes auto-scaled to the data's bounding box plus a margin.
void render_scatter(const std::vector<double>& x, const std::vector<double>& y,
                    const std::vector<int>& cls, int size_px, const std::string& path);

} // namespace vcctools

#endif
