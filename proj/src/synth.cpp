#include "synth.hpp"

#include <cmath>

#include "error.hpp"

namespace ffv {

Minutia random_point_in_ellipse(const Ellipse& region, Rng& rng) {
    for (;;) {
        int a = (int)rng.range(region.cx - region.A, region.cx + region.A);
        int b = (int)rng.range(region.cy - region.B, region.cy + region.B);
        if (region.contains(a, b)) return Minutia{1, a, b, -1.0};
    }
}

std::vector<SyntheticUser> gen_population(int n_users, int f, int per_finger,
                                          int spacing, const Ellipse& region, Rng& rng) {
    if (n_users < 0 || f < 1 || per_finger < 0)
        fail(errc::bad_argument, "bad population shape");
    const long long s2 = (long long)spacing * spacing;
    std::vector<SyntheticUser> pop((std::size_t)n_users);
    for (auto& user : pop) {
        user.fingers.resize((std::size_t)f);
        for (int th = 1; th <= f; ++th) {
            SyntheticFinger& fp = user.fingers[(std::size_t)th - 1];
            fp.finger = th;
            int rejects = 0;
            while ((int)fp.truth.size() < per_finger) {
                Minutia m = random_point_in_ellipse(region, rng);
                m.finger = th;
                bool ok = true;
                for (const Minutia& o : fp.truth) {
                    long long da = m.a - o.a, db = m.b - o.b;
                    if (da * da + db * db < s2) { ok = false; break; }
                }
                if (ok) {
                    fp.truth.push_back(m);
                    rejects = 0;
                } else if (++rejects >= 10000) {
                    fail(errc::placement_failure, "cannot place minutiae at this spacing");
                }
            }
        }
    }
    return pop;
}

Impression sample_impression(const SyntheticFinger& fp, const NoiseModel& nm,
                             const Ellipse& region, int frame_w, int frame_h, Rng& rng) {
    Impression imp;
    const double rot = nm.rot_max_deg > 0 ? rng.uniform(-nm.rot_max_deg, nm.rot_max_deg) : 0.0;
    const double tx = nm.trans_max_px > 0 ? rng.uniform(-nm.trans_max_px, nm.trans_max_px) : 0.0;
    const double ty = nm.trans_max_px > 0 ? rng.uniform(-nm.trans_max_px, nm.trans_max_px) : 0.0;
    Vec2 rc = rotate_offset({(double)region.cx, (double)region.cy}, rot);
    imp.truth_iso = Isometry{rot, region.cx - rc.x + tx, region.cy - rc.y + ty};

    for (int i = 0; i < (int)fp.truth.size(); ++i) {
        if (nm.p_delete > 0 && rng.bernoulli(nm.p_delete)) continue;
        const Minutia& m = fp.truth[(std::size_t)i];
        Vec2 p = imp.truth_iso.apply({(double)m.a, (double)m.b});
        if (nm.jitter_radius > 0) {
            double jx, jy;
            do {
                jx = rng.uniform(-nm.jitter_radius, nm.jitter_radius);
                jy = rng.uniform(-nm.jitter_radius, nm.jitter_radius);
            } while (jx * jx + jy * jy > nm.jitter_radius * nm.jitter_radius);
            p.x += jx;
            p.y += jy;
        }
        Minutia out = m;
        out.a = (int)std::lround(p.x);
        out.b = (int)std::lround(p.y);
        out.quality = rng.uniform(nm.q_true_min, nm.q_true_max);
        if (out.a < 0 || out.a >= frame_w || out.b < 0 || out.b >= frame_h) continue;
        imp.points.push_back(out);
        imp.origin.push_back(i);
    }
    const int n_spur = nm.spurious_mean > 0 ? rng.poisson(nm.spurious_mean) : 0;
    for (int s = 0; s < n_spur; ++s) {
        Minutia m = random_point_in_ellipse(region, rng);
        m.finger = fp.finger;
        m.quality = rng.uniform(nm.q_spur_min, nm.q_spur_max);
        imp.points.push_back(m);
        imp.origin.push_back(-1);
    }
    return imp;
}

} // namespace ffv
