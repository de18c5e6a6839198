#pragma once
#include <optional>
#include <vector>

#include "vault.hpp"

namespace ffv {

struct FingerMatchInfo {
    int finger = 0;
    int n_matches = 0;
    double phi_deg = 0;
    bool gated = false; // true: rotation gate rejected this finger
};

struct VerifyOutcome {
    bool success = false;
    std::optional<FieldPoly> recovered;
    std::vector<FingerMatchInfo> per_finger;
    u64 decode_trials = 0;
    std::vector<int> matched_positions; // vault positions collected into I
};

/// Keep minutiae with quality >= Q; unqualified minutiae only pass at Q = 0.
std::vector<Minutia> quality_filter(const std::vector<Minutia>& query, double Q);

struct IndexedPoint {
    int position = 0; // 1-based vault position
    u64 x = 0, y = 0;
};

/// Per finger: quality-filter the query, match against that finger's vault
/// points with tolerance delta_verify, drop fingers failing the rotation
/// gate, and collect the matched vault positions with their (E(i), y_i).
std::vector<IndexedPoint> collect_matches(const Vault& vault,
                                          const std::vector<std::vector<Minutia>>& queries,
                                          const SystemParams& sp,
                                          std::vector<FingerMatchInfo>* info = nullptr);

/// Two-stage recovery. Stage 1 decodes all of I (tolerates wrong points up to
/// the unique-decoding radius). Stage 2 draws up to decode_budget random
/// subsets of size w = min(|I|, max(k, 2*mc_estimate - k)). Every candidate
/// is accepted only if it hashes to the commitment. Failure is a normal
/// outcome, not an error.
VerifyOutcome recover(const std::vector<IndexedPoint>& I, int k, u64 q,
                      const Commitment& commitment, const SystemParams& sp, Rng& rng);

/// Full verification: optional query pre-alignment, then collect_matches and
/// recover against the vault's commitment.
VerifyOutcome verify(const Vault& vault, const std::vector<std::vector<Minutia>>& queries,
                     const SystemParams& sp, Rng& rng);

} // namespace ffv
