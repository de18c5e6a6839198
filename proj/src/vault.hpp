#pragma once
#include <string>
#include <vector>

#include "field.hpp"
#include "geometry.hpp"
#include "matcher.hpp"
#include "minutia.hpp"
#include "prealign.hpp"
#include "rng.hpp"

namespace ffv {

struct SystemParams {
    int f = 2;         // fingers
    int u = 2;         // impressions per finger at enrollment
    int t = 20;        // template size
    int r = 80;        // vault size
    int k = 8;         // polynomial length
    int chi = 5;       // per-finger minimum
    int d = 0;         // min distance px; 0 = auto floor(1.5 * delta_verify)
    u64 q = 0;         // field prime; 0 = auto smallest prime >= r
    double delta_enroll = 10.0;
    double delta_verify = 7.0;
    double quality_min = 0.3; // Q
    double rho_deg = 8.0;     // rotation gate
    double epsilon = 0.2, omega_deg = 45.0, s_limit = 200.0;
    Ellipse region;
    int frame_w = 512, frame_h = 512;
    bool prealign_points = false; // hull pre-alignment of point-set queries
    PrealignParams prealign;
    int chaff_budget = 10000;      // consecutive rejections before giving up
    u64 decode_budget = 100000;    // stage-2 subset trials
    int mc_estimate = 0;           // expected correct matches; 0 = use k

    int min_dist() const { return d > 0 ? d : (int)(1.5 * delta_verify); }
    u64 field_q() const { return q > 0 ? q : next_prime_at_least((u64)r); }
    MatchParams matcher_params(double delta) const {
        return MatchParams{delta, epsilon, omega_deg, s_limit, true};
    }
    /// Throws errc::bad_argument on violated invariants
    /// (k < t < r <= q, chi <= t/f, d >= 1, chaff capacity).
    void validate() const;
};

struct VaultPoint {
    Minutia m; // quality never stored
    u64 y = 0;
};

struct Vault {
    u64 q = 0;
    int f = 0, r = 0, k = 0, d = 0;
    Ellipse region;
    std::vector<VaultPoint> points; // strictly increasing lex (finger, a, b)
    Commitment commitment;

    std::string serialize() const;
    static Vault parse(const std::string& text);
    /// Ordering / distance / header invariants; throws errc::malformed_vault.
    void check_invariants() const;
};

/// E(i) = i mod q for 1-based vault position i.
inline u64 index_encode(int position, u64 q) { return (u64)position % q; }

/// Reliable minutiae of one finger across u impressions: impression 1 is the
/// reference; a minutia is kept when it matches in every other impression.
/// Kept locations are the rounded mean of the matched locations mapped into
/// impression 1's frame, then ellipse-filtered and thinned to pairwise
/// min-distance d (random victim per violating pair).
std::vector<Minutia> reliable_minutiae(const std::vector<std::vector<Minutia>>& impressions,
                                       const SystemParams& sp, Rng& rng);

/// Uniform random t-subset of the pooled reliable minutiae, rejection-sampled
/// until every finger keeps >= chi. Throws errc::finger_below_chi (with the
/// finger index) or errc::not_enough_reliable.
std::vector<Minutia> select_template(const std::vector<std::vector<Minutia>>& per_finger_pool,
                                     const SystemParams& sp, Rng& rng);

/// r - t chaff points: uniform finger, uniform lattice point in the region,
/// re-drawn until >= d away from all same-finger points already placed.
/// Throws errc::placement_failure after chaff_budget consecutive rejections.
std::vector<Minutia> add_chaff(const std::vector<Minutia>& tmpl, const SystemParams& sp,
                               Rng& rng);

/// Lex-sort genuine and chaff points; genuine positions carry y = P(E(i)),
/// chaff carries uniform y != P(E(i)); attaches commit(P).
Vault build_vault(const std::vector<Minutia>& tmpl, const std::vector<Minutia>& chaff,
                  const FieldPoly& P, const SystemParams& sp, Rng& rng);

struct EnrollResult {
    Vault vault;
    FieldPoly secret;
};

/// Full enrollment: optional point pre-alignment, reliable-minutiae
/// extraction per finger, template selection, random secret, chaff, vault.
/// impressions[finger][impression] in capture order; impressions[*][0] is the
/// reference.
EnrollResult enroll(const std::vector<std::vector<std::vector<Minutia>>>& impressions,
                    const SystemParams& sp, Rng& rng);

} // namespace ffv
