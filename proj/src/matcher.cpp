#include "matcher.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>
#include <unordered_map>

#include "geometry.hpp"

namespace ffv {

namespace {

struct P {
    double x, y;
};

// Uniform grid over the reference points, cell size delta: any point within
// delta of a probe lies in the 3x3 neighborhood of the probe's cell.
struct RefGrid {
    double inv = 1.0;
    std::unordered_map<long long, std::vector<int>> buckets;

    static long long key(long long gx, long long gy) {
        return (gx << 32) ^ (long long)(unsigned int)(int)gy;
    }

    void build(const std::vector<P>& pts, double delta) {
        inv = 1.0 / delta;
        buckets.reserve(pts.size() * 2);
        for (int i = 0; i < (int)pts.size(); ++i) {
            long long gx = (long long)std::floor(pts[i].x * inv);
            long long gy = (long long)std::floor(pts[i].y * inv);
            buckets[key(gx, gy)].push_back(i);
        }
    }

    template <class F>
    void probe(P p, F&& f) const {
        long long gx = (long long)std::floor(p.x * inv);
        long long gy = (long long)std::floor(p.y * inv);
        for (long long dx = -1; dx <= 1; ++dx)
            for (long long dy = -1; dy <= 1; ++dy) {
                auto it = buckets.find(key(gx + dx, gy + dy));
                if (it == buckets.end()) continue;
                for (int i : it->second) f(i);
            }
    }
};

struct Candidate {
    int count = -1;
    double abs_phi = 0, vnorm = 0;
    Isometry iso;
    std::vector<std::pair<int, int>> pairs;
};

} // namespace

MatchResult match(std::span<const Minutia> reference, std::span<const Minutia> query,
                  const MatchParams& mp) {
    const int n = (int)reference.size(), m = (int)query.size();
    std::vector<P> ref(n), qry(m);
    for (int i = 0; i < n; ++i) ref[i] = {(double)reference[i].a, (double)reference[i].b};
    for (int j = 0; j < m; ++j) qry[j] = {(double)query[j].a, (double)query[j].b};

    const double delta2 = mp.delta * mp.delta;
    RefGrid grid;
    grid.build(ref, mp.delta);

    // Upper bound on the pair count of an isometry: queries with any
    // reference within delta. Cheap reject before the full greedy scoring.
    auto bound = [&](const Isometry& iso) {
        int c = 0;
        for (int j = 0; j < m; ++j) {
            Vec2 p = iso.apply({qry[j].x, qry[j].y});
            bool hit = false;
            grid.probe({p.x, p.y}, [&](int i) {
                if (hit) return;
                double dx = p.x - ref[i].x, dy = p.y - ref[i].y;
                if (dx * dx + dy * dy < delta2) hit = true;
            });
            c += hit;
        }
        return c;
    };

    // Greedy closest-first one-to-one pairing within delta.
    auto score = [&](const Isometry& iso) {
        std::vector<std::tuple<double, int, int>> cand;
        for (int j = 0; j < m; ++j) {
            Vec2 p = iso.apply({qry[j].x, qry[j].y});
            grid.probe({p.x, p.y}, [&](int i) {
                double dx = p.x - ref[i].x, dy = p.y - ref[i].y;
                double d2 = dx * dx + dy * dy;
                if (d2 < delta2) cand.emplace_back(d2, i, j);
            });
        }
        std::sort(cand.begin(), cand.end());
        std::vector<char> used_r(n, 0), used_q(m, 0);
        std::vector<std::pair<int, int>> pairs;
        for (auto& [d2, i, j] : cand) {
            (void)d2;
            if (used_r[i] || used_q[j]) continue;
            used_r[i] = used_q[j] = 1;
            pairs.emplace_back(i, j);
        }
        return pairs;
    };

    const int target = std::min(n, m);
    Candidate best;
    auto consider = [&](const Isometry& iso) {
        double abs_phi = std::fabs(norm_angle_deg(iso.phi_deg));
        double vnorm = std::hypot(iso.vx, iso.vy);
        if (bound(iso) < best.count) return;
        auto pairs = score(iso);
        int c = (int)pairs.size();
        bool take = c > best.count ||
                    (c == best.count && abs_phi < best.abs_phi) ||
                    (c == best.count && abs_phi == best.abs_phi && vnorm < best.vnorm);
        if (take) best = {c, abs_phi, vnorm, iso, std::move(pairs)};
    };

    // Seed isometries carry the two anchor points' jitter into phi; once the
    // winner is fixed, re-estimate (phi, v) by least squares over its whole
    // pair set. The refit is kept only when it respects the limits and pairs
    // no fewer points, so every returned pair still lies within delta.
    auto finish = [&]() -> MatchResult {
        if ((int)best.pairs.size() >= 2) {
            double rx = 0, ry = 0, qx = 0, qy = 0;
            const double inv = 1.0 / (double)best.pairs.size();
            for (auto [i, j] : best.pairs) {
                rx += ref[i].x;
                ry += ref[i].y;
                qx += qry[j].x;
                qy += qry[j].y;
            }
            rx *= inv, ry *= inv, qx *= inv, qy *= inv;
            double A = 0, B = 0;
            for (auto [i, j] : best.pairs) {
                const double xr = ref[i].x - rx, yr = ref[i].y - ry;
                const double xq = qry[j].x - qx, yq = qry[j].y - qy;
                A += xr * xq + yr * yq;
                B += xr * yq - yr * xq;
            }
            const double phi = std::atan2(B, A) * 180.0 / std::numbers::pi;
            const Vec2 rc = rotate_offset({qx, qy}, phi);
            const Isometry refit{phi, rx - rc.x, ry - rc.y};
            if (std::fabs(phi) < mp.omega_deg &&
                std::hypot(refit.vx, refit.vy) < mp.s_limit) {
                auto pairs = score(refit);
                if ((int)pairs.size() >= best.count) return {refit, std::move(pairs)};
            }
        }
        return {best.iso, std::move(best.pairs)};
    };

    consider(Isometry{}); // identity baseline
    if (mp.early_exit && best.count >= target) return finish();

    // Ordered query pairs indexed by length for the relative tolerance test.
    std::vector<std::tuple<double, int, int>> qpairs;
    qpairs.reserve((std::size_t)m * (m - 1) / 2);
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) {
            double d = dist(qry[i].x, qry[i].y, qry[j].x, qry[j].y);
            if (d > 0) qpairs.emplace_back(d, i, j);
        }
    std::sort(qpairs.begin(), qpairs.end());

    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double D = dist(ref[i].x, ref[i].y, ref[j].x, ref[j].y);
            if (D <= 0) continue;
            const double lo = D * (1 - mp.epsilon), hi = D * (1 + mp.epsilon);
            auto it = std::lower_bound(qpairs.begin(), qpairs.end(),
                                       std::make_tuple(lo, -1, -1));
            const double dir_ref = direction_deg({ref[j].x - ref[i].x, ref[j].y - ref[i].y});
            for (; it != qpairs.end() && std::get<0>(*it) <= hi; ++it) {
                auto [dq, qa, qb] = *it;
                (void)dq;
                // both orientations of the query pair
                for (int rep = 0; rep < 2; ++rep) {
                    int ia = rep ? qb : qa, ib = rep ? qa : qb;
                    double dir_q = direction_deg({qry[ib].x - qry[ia].x, qry[ib].y - qry[ia].y});
                    double phi = norm_angle_deg(dir_ref - dir_q);
                    if (std::fabs(phi) >= mp.omega_deg) continue;
                    Vec2 rq = rotate_offset({qry[ia].x, qry[ia].y}, phi);
                    Isometry iso{phi, ref[i].x - rq.x, ref[i].y - rq.y};
                    if (std::hypot(iso.vx, iso.vy) >= mp.s_limit) continue;
                    consider(iso);
                    if (mp.early_exit && best.count >= target) return finish();
                }
            }
        }
    }
    return finish();
}

bool rotation_gate(const MatchResult& r, double rho_deg) {
    return std::fabs(norm_angle_deg(r.iso.phi_deg)) <= rho_deg;
}

} // namespace ffv
