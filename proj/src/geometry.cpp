#include "geometry.hpp"

namespace ffv {

long long Ellipse::area_px() const {
    const long long A2 = (long long)A * A, B2 = (long long)B * B;
    long long total = 0;
    for (long long db = -B; db <= B; ++db) {
        const long long rhs = A2 * (B2 - db * db);
        long long dx = (long long)(std::sqrt((double)rhs) / B);
        while (B2 * dx * dx > rhs) --dx;
        while (B2 * (dx + 1) * (dx + 1) <= rhs) ++dx;
        total += 2 * dx + 1;
    }
    return total;
}

long long v_delta_formula(double delta) {
    const double d2 = delta * delta;
    long long sum = 0;
    for (long long i = 1; i < (long long)std::ceil(delta); ++i)
        sum += (long long)std::ceil(std::sqrt(d2 - (double)(i * i)));
    return 1 + 4 * sum;
}

long long v_delta_bruteforce(double delta) {
    const double d2 = delta * delta;
    const long long lim = (long long)std::ceil(delta);
    long long count = 0;
    for (long long x = -lim; x <= lim; ++x)
        for (long long y = -lim; y <= lim; ++y)
            if ((double)(x * x + y * y) < d2) ++count;
    return count;
}

} // namespace ffv
