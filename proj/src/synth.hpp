#pragma once
#include <vector>

#include "geometry.hpp"
#include "matcher.hpp"
#include "minutia.hpp"
#include "rng.hpp"

namespace ffv {

struct NoiseModel {
    double jitter_radius = 3.0;  // uniform disk displacement per minutia
    double p_delete = 0.1;       // probability a true minutia is missed
    double spurious_mean = 10.0; // Poisson mean of spurious minutiae
    double rot_max_deg = 10.0;   // global rotation, uniform in +-rot_max
    double trans_max_px = 20.0;  // global translation, uniform per axis
    double q_true_min = 0.3, q_true_max = 1.0; // quality of true minutiae
    double q_spur_min = 0.0, q_spur_max = 0.6; // quality of spurious ones

    static NoiseModel none() {
        NoiseModel n;
        n.jitter_radius = n.p_delete = n.spurious_mean = 0;
        n.rot_max_deg = n.trans_max_px = 0;
        return n;
    }
};

struct SyntheticFinger {
    int finger = 1;
    std::vector<Minutia> truth;
};

struct SyntheticUser {
    std::vector<SyntheticFinger> fingers;
};

/// Uniform random point on the integer lattice inside the ellipse.
Minutia random_point_in_ellipse(const Ellipse& region, Rng& rng);

/// Independent users; per finger, rejection-sampled true minutiae pairwise
/// >= spacing apart inside the region. Throws errc::placement_failure when
/// the spacing cannot be met.
std::vector<SyntheticUser> gen_population(int n_users, int f, int per_finger,
                                          int spacing, const Ellipse& region, Rng& rng);

struct Impression {
    std::vector<Minutia> points;
    Isometry truth_iso;      // maps truth coordinates into this impression
    std::vector<int> origin; // per point: index into truth, or -1 if spurious
};

/// One noisy capture: global rotation about the region center plus
/// translation, per-minutia disk jitter, deletions, Poisson spurious points
/// uniform in the region, and quality draws (true and spurious minutiae get
/// different quality ranges). Points landing outside the frame are dropped.
Impression sample_impression(const SyntheticFinger& fp, const NoiseModel& nm,
                             const Ellipse& region, int frame_w, int frame_h, Rng& rng);

} // namespace ffv
