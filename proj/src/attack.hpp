#pragma once
#include <optional>

#include "vault.hpp"

namespace ffv {

struct AttackRun {
    u64 trials = 0;
    bool success = false;
    std::optional<FieldPoly> recovered;
    double elapsed_s = 0;
    u64 seed = 0;
};

/// Brute-force recovery: draw uniform k-subsets of vault positions,
/// interpolate, test against the commitment. Stops at the first hit or after
/// max_trials. k must equal the vault's k.
AttackRun brute_force(const Vault& vault, int k, u64 max_trials, Rng& rng, u64 seed_label = 0);

struct AttackComparison {
    AttackRun run;
    double measured_trials_log2 = 0;
    double measured_ops_log2 = 0; // trials times the per-trial op estimate
    double predicted_bits = 0;
    double per_trial_ops = 0;
};

/// Runs brute_force to completion and compares the measured cost to the
/// predicted attack_cost_bits. t and chi are not stored in the vault and are
/// supplied out of band. Refuses (errc::infeasible) when the prediction
/// exceeds 40 bits.
AttackComparison attack_cost_measured_vs_predicted(const Vault& vault, int t, int chi,
                                                   Rng& rng, u64 seed_label = 0,
                                                   double log_base = 2.0);

} // namespace ffv
