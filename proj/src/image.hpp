#pragma once
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "geometry.hpp"
#include "minutia.hpp"

namespace ffv {

struct GrayImage {
    int width = 0, height = 0;
    std::vector<std::uint8_t> px; // row-major

    std::uint8_t at(int x, int y) const { return px[(std::size_t)y * width + x]; }
    std::uint8_t& at(int x, int y) { return px[(std::size_t)y * width + x]; }
    bool in_bounds(int x, int y) const { return x >= 0 && x < width && y >= 0 && y < height; }
};

GrayImage read_pgm(std::istream& in);
GrayImage read_pgm_file(const std::string& path);
void write_pgm(const GrayImage& img, std::ostream& out);
void write_pgm_file(const GrayImage& img, const std::string& path);

/// Rotate about the image center, nearest-neighbor sampling, white fill.
/// Uses the shared rotation convention from minutia.hpp.
GrayImage apply_rotation(const GrayImage& img, double deg);

/// White canvas with the ellipse interior painted black.
GrayImage render_ellipse_mask(int width, int height, const Ellipse& e);

/// White canvas with the filled convex hull of the points painted black;
/// each point is also stamped as a small disk so degenerate hulls still
/// leave foreground.
GrayImage render_hull_mask(const std::vector<Minutia>& pts, int width, int height);

} // namespace ffv
