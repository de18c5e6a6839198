#pragma once
#include <cmath>
#include <cstdint>

namespace ffv {

/// Axis-aligned capture region: all minutiae and chaff live inside this
/// ellipse, centered in the image frame.
struct Ellipse {
    int cx = 256, cy = 256;
    int A = 208, B = 133; // semi-axis along a (x) and b (y)

    bool contains(int a, int b) const {
        const long long da = a - cx, db = b - cy;
        const long long A2 = (long long)A * A, B2 = (long long)B * B;
        return B2 * da * da + A2 * db * db <= A2 * B2;
    }

    /// Exact count of integer pixels inside the ellipse.
    long long area_px() const;

    bool operator==(const Ellipse&) const = default;
};

inline double dist(double ax, double ay, double bx, double by) {
    return std::hypot(ax - bx, ay - by);
}

/// Number of integer points strictly within distance delta of the origin:
/// closed form 1 + 4 * sum_{i=1}^{ceil(delta)-1} ceil(sqrt(delta^2 - i^2)).
long long v_delta_formula(double delta);

/// Same count by direct enumeration (the reference the formula is checked
/// against).
long long v_delta_bruteforce(double delta);

} // namespace ffv
