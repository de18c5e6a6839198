#include "prealign.hpp"

#include <cmath>

#include "error.hpp"

namespace ffv {

namespace {

GrayImage downscale_mean(const GrayImage& img, int s) {
    if (s <= 1) return img;
    GrayImage out;
    out.width = img.width / s;
    out.height = img.height / s;
    if (out.width == 0 || out.height == 0)
        fail(errc::bad_argument, "image too small for downscale factor");
    out.px.resize((std::size_t)out.width * out.height);
    for (int y = 0; y < out.height; ++y)
        for (int x = 0; x < out.width; ++x) {
            int sum = 0;
            for (int dy = 0; dy < s; ++dy)
                for (int dx = 0; dx < s; ++dx) sum += img.at(x * s + dx, y * s + dy);
            out.at(x, y) = (std::uint8_t)(sum / (s * s));
        }
    return out;
}

GrayImage binarize(const GrayImage& img, int threshold) {
    GrayImage out = img;
    for (auto& p : out.px) p = p < threshold ? 0 : 255;
    return out;
}

GrayImage translate(const GrayImage& img, int dx, int dy) {
    GrayImage out;
    out.width = img.width;
    out.height = img.height;
    out.px.assign(img.px.size(), 255);
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) {
            int nx = x + dx, ny = y + dy;
            if (out.in_bounds(nx, ny)) out.at(nx, ny) = img.at(x, y);
        }
    return out;
}

// zero out columns that rotating by |deg| can sweep across the frame border
void crop_wedges(GrayImage& img, int deg) {
    const double rad = std::abs(deg) * std::numbers::pi / 180.0;
    int band = (int)std::ceil(img.height * std::tan(rad) / 2.0) + 1;
    band = std::min(band, img.width / 2);
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < band; ++x) {
            img.at(x, y) = 255;
            img.at(img.width - 1 - x, y) = 255;
        }
}

struct QuadCounts {
    long long ul = 0, ur = 0, ll = 0, lr = 0;
};

QuadCounts quadrants(const GrayImage& img) {
    QuadCounts q;
    const int cx = img.width / 2, cy = img.height / 2;
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) {
            if (img.at(x, y) != 0) continue;
            if (y < cy)
                (x < cx ? q.ul : q.ur)++;
            else
                (x < cx ? q.ll : q.lr)++;
        }
    return q;
}

} // namespace

AlignReport prealign(const GrayImage& img, const PrealignParams& pp) {
    GrayImage mask = binarize(downscale_mean(img, pp.downscale), pp.threshold);

    long long sum_x = 0, sum_y = 0, n = 0;
    for (int y = 0; y < mask.height; ++y)
        for (int x = 0; x < mask.width; ++x)
            if (mask.at(x, y) == 0) { sum_x += x; sum_y += y; ++n; }
    if (n == 0) fail(errc::empty_foreground, "no foreground below threshold");

    AlignReport rep;
    const int dx = mask.width / 2 - (int)std::lround((double)sum_x / n);
    const int dy = mask.height / 2 - (int)std::lround((double)sum_y / n);
    mask = translate(mask, dx, dy);
    rep.shift_dx = dx * pp.downscale;
    rep.shift_dy = dy * pp.downscale;

    // Re-render from the pristine centered mask at the accumulated angle each
    // step: chaining 1-degree nearest-neighbor rotations freezes every pixel
    // closer than ~1/(2 sin 0.5 deg) to the pivot, biasing the balance point.
    const GrayImage base = mask;
    int prev_dir = 0;
    while (rep.iterations < pp.cap_deg) {
        QuadCounts q = quadrants(mask);
        const int dir = (q.ul + q.lr > q.ll + q.ur) ? -1 : +1;
        rep.total_rotation_deg += dir;
        ++rep.iterations;
        mask = apply_rotation(base, rep.total_rotation_deg);
        crop_wedges(mask, rep.total_rotation_deg);
        if (prev_dir != 0 && dir != prev_dir) break;
        prev_dir = dir;
    }
    return rep;
}

double estimate_point_rotation(const std::vector<Minutia>& pts, const Ellipse& region,
                               int frame_w, int frame_h, const PrealignParams& pp) {
    // Quadrant balance only straightens portrait foregrounds; transpose when
    // the capture region is landscape.
    const bool transpose = region.A > region.B;
    std::vector<Minutia> work = pts;
    int w = frame_w, h = frame_h;
    if (transpose) {
        for (Minutia& m : work) std::swap(m.a, m.b);
        std::swap(w, h);
    }
    GrayImage mask = render_hull_mask(work, w, h);
    AlignReport rep = prealign(mask, pp);
    return transpose ? -(double)rep.total_rotation_deg : (double)rep.total_rotation_deg;
}

} // namespace ffv
