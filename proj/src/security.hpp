#pragma once
#include <string>
#include <vector>

#include "geometry.hpp"
#include "vault.hpp"

namespace ffv {

/// Empirical reference tables: reliable minutiae per finger M_r(u, delta_e),
/// match rate mu(u, delta_v), and expected query size tau(Q) after quality
/// filtering. Shipped as data (data/reference_tables.txt) with identical
/// built-in defaults; lookups interpolate linearly between columns and clamp
/// at the edges.
struct ReferenceTables {
    std::vector<double> de_cols, dv_cols;          // column headers
    std::vector<std::vector<double>> m_r;          // [u-1][col]
    std::vector<std::vector<double>> mu_percent;   // [u-1][col]
    std::vector<std::pair<double, double>> tau_q;  // (Q, tau)

    double reliable_per_finger(int u, double delta_e) const;
    double match_rate(int u, double delta_v) const; // fraction in (0,1]
    double query_size_after_filter(double Q) const;

    static const ReferenceTables& builtin();
    static ReferenceTables parse(const std::string& text);
    static ReferenceTables load(const std::string& path);
};

/// Probability that t minutiae assigned independently and uniformly to f
/// fingers give every finger at least chi. Exact dynamic program.
double zeta(int t, int chi, int f);

/// Same quantity by inclusion-exclusion over underfilled fingers (inner sums
/// run to chi-1). Kept as an independent cross-check of the DP.
double zeta_closed_form(int t, int chi, int f);

/// log2 of the brute-force attack cost 129 * zeta * k * log^2(k) * (r/t)^k.
/// The base of the log^2(k) factor is configurable (default 2).
double attack_cost_bits(int t, int r, int k, int chi, int f, double log_base = 2.0);

struct MatchEstimate {
    double m_c = 0, m_f = 0;
};

/// Expected correct matches m_c = mu*t and false matches
/// m_f = 1.4*(r-t)*max(0, tau - mu*t/f)*V_delta / area.
MatchEstimate expected_matches(int f, int t, int r, double delta_v, double mu, double tau,
                               const Ellipse& region);

struct ChaffCapacity {
    long long max_per_finger = 0;    // 0.45 packing-density bound
    long long safe_r_per_finger = 0; // 0.2 bound against free-area analysis
};

ChaffCapacity chaff_capacity(int d, const Ellipse& region);

struct ParamRow {
    double delta_e = 0, delta_v = 0;
    int t = 0, r = 0, k = 0, chi = 0, d = 0;
    double quality_min = 0.3;
    double bits = 0, m_c = 0, m_f = 0;
};

/// Parameter selection sweep: delta_e over the table columns, delta_v in
/// {5,6,7}, d = floor(1.5*delta_v), t up to f*M_r(u, delta_e), r up to the
/// safe per-finger bound, k 10-25% below m_c - m_f, chi = 9 escalating
/// toward 15 as m_c/m_f falls from 2.7 to the hard floor 2. Returns every
/// feasible row reaching target_bits, sorted by bits descending.
/// Throws errc::no_feasible_params when none qualifies.
std::vector<ParamRow> param_search(int f, int u, double target_bits,
                                   const ReferenceTables& tables, const Ellipse& region);

struct SecurityReport {
    double zeta = 0, zeta_cross_check = 0;
    double attack_ops_log2 = 0;
    double m_c = 0, m_f = 0;
    double mu = 0, tau = 0;
    long long max_chaff_per_finger = 0;
    long long safe_r_per_finger = 0;
};

SecurityReport security_report(const SystemParams& sp, const ReferenceTables& tables,
                               double mu_override = -1, double tau_override = -1,
                               double log_base = 2.0);

/// Expected-correct estimate driving the verifier's stage-2 subset size:
/// an explicit positive sp.mc_estimate wins, otherwise round(mu(u, delta_v) * t).
int resolve_mc_estimate(const SystemParams& sp, const ReferenceTables& tables,
                        double mu_override = -1);

} // namespace ffv
