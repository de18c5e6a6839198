#pragma once
#include <span>
#include <utility>
#include <vector>

#include "minutia.hpp"

namespace ffv {

struct MatchParams {
    double delta = 7.0;      // pairing tolerance (strict)
    double epsilon = 0.2;    // relative length tolerance for seed pairs
    double omega_deg = 45.0; // max |rotation| considered (strict)
    double s_limit = 200.0;  // max |translation| considered (strict)
    bool early_exit = true;  // stop once every point is paired
};

/// Rigid motion mapping query coordinates into the reference frame:
/// p -> rotate_offset(p, phi_deg) + v.
struct Isometry {
    double phi_deg = 0, vx = 0, vy = 0;
    Vec2 apply(Vec2 p) const {
        Vec2 r = rotate_offset(p, phi_deg);
        return {r.x + vx, r.y + vy};
    }
};

struct MatchResult {
    Isometry iso;
    std::vector<std::pair<int, int>> pairs; // (reference index, query index)
};

/// Point-set matcher. Seeds candidate isometries from pairs of reference
/// points and distance-compatible ordered pairs of query points, scores each
/// by greedy closest-first one-to-one pairing within delta, and returns the
/// isometry with the most pairs (ties: smaller |phi|, then smaller |v|, then
/// first found). The identity is always evaluated as a baseline candidate.
MatchResult match(std::span<const Minutia> reference, std::span<const Minutia> query,
                  const MatchParams& mp);

/// Gate on the recovered rotation: true when |phi| <= rho_deg.
bool rotation_gate(const MatchResult& r, double rho_deg);

} // namespace ffv
