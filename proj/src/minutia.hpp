#pragma once
#include <cmath>
#include <numbers>
#include <vector>

namespace ffv {

/// Minutia location on the pixel grid. `quality` is in [0,1], negative when
/// the capture device reported none. `finger` is 1-based.
struct Minutia {
    int finger = 1;
    int a = 0;
    int b = 0;
    double quality = -1.0;
    bool has_quality() const { return quality >= 0.0; }
};

struct Vec2 {
    double x = 0, y = 0;
};

/// Rotation convention used everywhere (images and point sets share it):
/// positive angles turn the +a axis toward -b, i.e. a point right of the
/// pivot moves up in image coordinates.
inline Vec2 rotate_offset(Vec2 d, double deg) {
    const double r = deg * std::numbers::pi / 180.0;
    const double c = std::cos(r), s = std::sin(r);
    return {d.x * c + d.y * s, -d.x * s + d.y * c};
}

/// Angle (degrees) such that rotate_offset by phi maps direction alpha to
/// alpha + phi.
inline double direction_deg(Vec2 d) {
    return std::atan2(-d.y, d.x) * 180.0 / std::numbers::pi;
}

/// Normalize to (-180, 180].
inline double norm_angle_deg(double a) {
    a = std::fmod(a, 360.0);
    if (a <= -180.0) a += 360.0;
    if (a > 180.0) a -= 360.0;
    return a;
}

inline std::vector<Minutia> rotate_points(const std::vector<Minutia>& pts,
                                          double deg, double pivot_x, double pivot_y) {
    std::vector<Minutia> out;
    out.reserve(pts.size());
    for (const Minutia& m : pts) {
        Vec2 d = rotate_offset({m.a - pivot_x, m.b - pivot_y}, deg);
        Minutia r = m;
        r.a = (int)std::lround(pivot_x + d.x);
        r.b = (int)std::lround(pivot_y + d.y);
        out.push_back(r);
    }
    return out;
}

} // namespace ffv
