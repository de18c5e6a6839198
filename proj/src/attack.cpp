#include "attack.hpp"

#include <chrono>
#include <cmath>

#include "error.hpp"
#include "security.hpp"

namespace ffv {

AttackRun brute_force(const Vault& vault, int k, u64 max_trials, Rng& rng, u64 seed_label) {
    if (k != vault.k) fail(errc::bad_argument, "k must match the vault");
    if (max_trials < 1) fail(errc::bad_argument, "need max_trials >= 1");
    const auto start = std::chrono::steady_clock::now();

    std::vector<FieldPoint> coded((std::size_t)vault.r);
    for (int i = 0; i < vault.r; ++i)
        coded[(std::size_t)i] = {index_encode(i + 1, vault.q), vault.points[(std::size_t)i].y};

    AttackRun run;
    run.seed = seed_label;
    std::vector<int> idx((std::size_t)vault.r);
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = (int)i;
    std::vector<FieldPoint> sub((std::size_t)k);
    while (run.trials < max_trials) {
        ++run.trials;
        for (int i = 0; i < k; ++i) {
            std::size_t j = (std::size_t)i + (std::size_t)rng.below(idx.size() - (std::size_t)i);
            std::swap(idx[(std::size_t)i], idx[j]);
            sub[(std::size_t)i] = coded[(std::size_t)idx[(std::size_t)i]];
        }
        FieldPoly cand = lagrange_interpolate(sub, k, vault.q);
        if (verify_commit(cand, vault.commitment)) {
            run.success = true;
            run.recovered = std::move(cand);
            break;
        }
    }
    run.elapsed_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return run;
}

AttackComparison attack_cost_measured_vs_predicted(const Vault& vault, int t, int chi,
                                                   Rng& rng, u64 seed_label, double log_base) {
    AttackComparison cmp;
    cmp.predicted_bits = attack_cost_bits(t, vault.r, vault.k, chi, vault.f, log_base);
    if (cmp.predicted_bits > 40.0)
        fail(errc::infeasible, "predicted cost above 40 bits; refusing the full run");
    cmp.run = brute_force(vault, vault.k, UINT64_MAX, rng, seed_label);
    const double logk = std::log((double)vault.k) / std::log(log_base);
    cmp.per_trial_ops = 6.5 * 18.0 * vault.k * logk * logk;
    cmp.measured_trials_log2 = std::log2((double)cmp.run.trials);
    cmp.measured_ops_log2 = cmp.measured_trials_log2 + std::log2(cmp.per_trial_ops);
    return cmp;
}

} // namespace ffv
