#include "security.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "error.hpp"

namespace ffv {

// ---- reference tables ------------------------------------------------------

namespace {

double interp_cols(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
    if (xs.empty()) fail(errc::bad_argument, "empty table");
    if (x <= xs.front()) return ys.front();
    if (x >= xs.back()) return ys.back();
    for (std::size_t i = 1; i < xs.size(); ++i) {
        if (x <= xs[i]) {
            double w = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
            return ys[i - 1] + w * (ys[i] - ys[i - 1]);
        }
    }
    return ys.back();
}

} // namespace

double ReferenceTables::reliable_per_finger(int u, double delta_e) const {
    if (u < 1 || u > (int)m_r.size())
        fail(errc::bad_argument, "u outside table range");
    return interp_cols(de_cols, m_r[(std::size_t)u - 1], delta_e);
}

double ReferenceTables::match_rate(int u, double delta_v) const {
    if (u < 1 || u > (int)mu_percent.size())
        fail(errc::bad_argument, "u outside table range");
    return interp_cols(dv_cols, mu_percent[(std::size_t)u - 1], delta_v) / 100.0;
}

double ReferenceTables::query_size_after_filter(double Q) const {
    std::vector<double> xs, ys;
    xs.reserve(tau_q.size());
    ys.reserve(tau_q.size());
    for (auto& [q, tau] : tau_q) {
        xs.push_back(q);
        ys.push_back(tau);
    }
    return interp_cols(xs, ys, Q);
}

const ReferenceTables& ReferenceTables::builtin() {
    static const ReferenceTables t = [] {
        ReferenceTables rt;
        rt.de_cols = {5, 7, 10, 15};
        rt.dv_cols = {5, 7, 10, 15};
        rt.m_r = {{63, 63, 63, 63},
                  {23, 32, 39, 43},
                  {18, 24, 31, 35},
                  {9, 16, 22, 27},
                  {6, 9, 15, 18}};
        rt.mu_percent = {{40, 50, 58, 64},
                         {66, 72, 78, 82},
                         {75, 81, 84, 87},
                         {81, 85, 88, 90},
                         {85, 89, 91, 92}};
        rt.tau_q = {{0.0, 70}, {0.1, 67}, {0.2, 52}, {0.3, 48},
                    {0.4, 41}, {0.5, 33}, {0.6, 32}};
        return rt;
    }();
    return t;
}

ReferenceTables ReferenceTables::parse(const std::string& text) {
    ReferenceTables rt;
    std::istringstream is(text);
    std::string line, section;
    while (std::getline(is, line)) {
        if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok)) continue;
        if (tok.front() == '[') {
            section = tok;
            continue;
        }
        if (section == "[reliable_minutiae]" || section == "[match_rate_percent]") {
            auto& cols = section == "[reliable_minutiae]" ? rt.de_cols : rt.dv_cols;
            auto& rows = section == "[reliable_minutiae]" ? rt.m_r : rt.mu_percent;
            std::vector<double> vals;
            double v;
            while (ls >> v) vals.push_back(v);
            if (tok == "cols") {
                cols = vals;
            } else if (tok[0] == 'u') {
                if (vals.size() != cols.size())
                    fail(errc::malformed_config, "table row width mismatch");
                if (std::stoul(tok.substr(1)) != rows.size() + 1)
                    fail(errc::malformed_config, "table rows out of order");
                rows.push_back(vals);
            } else {
                fail(errc::malformed_config, "unknown table row: " + tok);
            }
        } else if (section == "[query_size_after_filter]") {
            double q = std::stod(tok), tau;
            if (!(ls >> tau)) fail(errc::malformed_config, "bad tau row");
            rt.tau_q.emplace_back(q, tau);
        } else {
            fail(errc::malformed_config, "data outside a known section");
        }
    }
    if (rt.m_r.empty() || rt.mu_percent.empty() || rt.tau_q.empty())
        fail(errc::malformed_config, "incomplete reference tables");
    return rt;
}

ReferenceTables ReferenceTables::load(const std::string& path) {
    std::ifstream f(path);
    if (!f) fail(errc::io_error, "cannot open " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse(ss.str());
}

// ---- zeta -------------------------------------------------------------------

namespace {

double binom_pmf(int n, int c, double p) {
    if (c < 0 || c > n) return 0.0;
    double lg = std::lgamma(n + 1.0) - std::lgamma(c + 1.0) - std::lgamma(n - c + 1.0);
    double lp = c * std::log(p) + (n - c) * std::log1p(-p);
    return std::exp(lg + lp);
}

} // namespace

double zeta(int t, int chi, int f) {
    if (f < 1 || t < 0) fail(errc::bad_argument, "bad zeta arguments");
    if (chi <= 0) return 1.0;
    if ((long long)chi * f > t) return 0.0;
    // dp[m][n]: probability n minutiae uniform over m fingers fill each to chi
    std::vector<std::vector<double>> dp((std::size_t)f + 1,
                                        std::vector<double>((std::size_t)t + 1, 0.0));
    for (int n = chi; n <= t; ++n) dp[1][(std::size_t)n] = 1.0;
    for (int m = 2; m <= f; ++m) {
        const double p = 1.0 / m;
        for (int n = chi * m; n <= t; ++n) {
            double acc = 0.0;
            for (int c = chi; c <= n - chi * (m - 1); ++c)
                acc += binom_pmf(n, c, p) * dp[(std::size_t)m - 1][(std::size_t)(n - c)];
            dp[(std::size_t)m][(std::size_t)n] = acc;
        }
    }
    return dp[(std::size_t)f][(std::size_t)t];
}

double zeta_closed_form(int t, int chi, int f) {
    if (f < 1 || t < 0) fail(errc::bad_argument, "bad zeta arguments");
    if (chi <= 0) return 1.0;
    // gamma(i, j): assignments of j labeled minutiae to i fingers, each
    // finger below chi: j! [x^j] (sum_{c<chi} x^c / c!)^i
    const int jmax = f * (chi - 1);
    std::vector<double> unit((std::size_t)chi, 0.0);
    for (int c = 0; c < chi; ++c) unit[(std::size_t)c] = std::exp(-std::lgamma(c + 1.0));

    double total = 0.0;
    double sign = 1.0;
    std::vector<double> pw{1.0}; // (unit)^i, coefficient list
    for (int i = 0; i <= f; ++i) {
        double fi = std::exp(std::lgamma(f + 1.0) - std::lgamma(i + 1.0) -
                             std::lgamma(f - i + 1.0));
        double inner = 0.0;
        const int lim = std::min(t, i * (chi - 1));
        for (int j = 0; j <= lim; ++j) {
            if (j >= (int)pw.size()) break;
            const double gamma_ij = pw[(std::size_t)j] * std::exp(std::lgamma(j + 1.0));
            const double choose_tj = std::exp(std::lgamma(t + 1.0) - std::lgamma(j + 1.0) -
                                              std::lgamma(t - j + 1.0));
            inner += choose_tj * gamma_ij * std::pow((double)(f - i), (double)(t - j));
        }
        total += sign * fi * inner;
        sign = -sign;
        if (i < f) { // extend power series for next i
            std::vector<double> next(std::min((std::size_t)jmax + 1, pw.size() + unit.size() - 1), 0.0);
            for (std::size_t a = 0; a < pw.size(); ++a)
                for (std::size_t b = 0; b < unit.size() && a + b < next.size(); ++b)
                    next[a + b] += pw[a] * unit[b];
            pw = std::move(next);
        }
    }
    return total / std::pow((double)f, (double)t);
}

// ---- attack cost, match estimates, capacity --------------------------------

double attack_cost_bits(int t, int r, int k, int chi, int f, double log_base) {
    if (k < 2 || t < 1 || r <= t) fail(errc::bad_argument, "need k >= 2 and r > t");
    if (log_base <= 1.0) fail(errc::bad_argument, "log base must exceed 1");
    const double z = zeta(t, chi, f);
    const double logk = std::log((double)k) / std::log(log_base);
    return std::log2(129.0) + std::log2(z) + std::log2((double)k) + 2.0 * std::log2(logk) +
           k * std::log2((double)r / t);
}

MatchEstimate expected_matches(int f, int t, int r, double delta_v, double mu, double tau,
                               const Ellipse& region) {
    if (mu <= 0 || mu > 1 || tau <= 0) fail(errc::bad_argument, "need mu in (0,1], tau > 0");
    MatchEstimate e;
    e.m_c = mu * t;
    const double surplus = std::max(0.0, tau - mu * t / f);
    e.m_f = 1.4 * (r - t) * surplus * (double)v_delta_bruteforce(delta_v) /
            (double)region.area_px();
    return e;
}

ChaffCapacity chaff_capacity(int d, const Ellipse& region) {
    if (d < 1) fail(errc::bad_argument, "need d >= 1");
    const double a = (double)region.area_px();
    const double v = (double)v_delta_bruteforce((double)d);
    return {(long long)std::floor(0.45 * a / v), (long long)std::floor(0.2 * a / v)};
}

// ---- parameter search --------------------------------------------------------

std::vector<ParamRow> param_search(int f, int u, double target_bits,
                                   const ReferenceTables& tables, const Ellipse& region) {
    if (target_bits <= 0) fail(errc::bad_argument, "target must be positive");
    if (f < 2) fail(errc::bad_argument, "need f >= 2");
    const double tau = 50.0; // query-size estimate used by the selection method
    const double area = (double)region.area_px();

    std::map<std::pair<int, int>, double> zeta_cache;
    auto zeta_of = [&](int t, int chi) {
        auto key = std::make_pair(t, chi);
        auto it = zeta_cache.find(key);
        if (it == zeta_cache.end()) it = zeta_cache.emplace(key, zeta(t, chi, f)).first;
        return it->second;
    };

    std::vector<ParamRow> rows;
    for (double de : tables.de_cols) {
        const int t_max = (int)(f * tables.reliable_per_finger(u, de));
        for (int dv = 5; dv <= 7; ++dv) {
            const int d = (int)(1.5 * dv);
            const double V_d = (double)v_delta_bruteforce((double)d);
            const double V_dv = (double)v_delta_bruteforce((double)dv);
            const int r_max = f * (int)std::floor(0.2 * area / V_d);
            const double mu = tables.match_rate(u, (double)dv);
            for (int t = 2; t <= t_max; ++t) {
                const double m_c = mu * t;
                const double surplus = std::max(0.0, tau - mu * t / f);
                for (int r = t + 1; r <= r_max; ++r) {
                    const double m_f = 1.4 * (r - t) * surplus * V_dv / area;
                    const double diff = m_c - m_f;
                    if (diff <= 0) continue;
                    const double ratio = m_f > 0 ? m_c / m_f : 1e9;
                    if (ratio < 2.0) continue;
                    const int chi =
                        ratio >= 2.7 ? 9 : (int)std::lround(9.0 + 6.0 * (2.7 - ratio) / 0.7);
                    if ((long long)chi * f > t) continue;
                    const int k_lo = (int)std::ceil(0.75 * diff);
                    const int k_hi = (int)std::floor(0.90 * diff);
                    for (int k = std::max(2, k_lo); k <= k_hi && k < t; ++k) {
                        const double z = zeta_of(t, chi);
                        if (z <= 0) continue;
                        const double logk = std::log2((double)k);
                        const double bits = std::log2(129.0) + std::log2(z) + std::log2((double)k) +
                                            2.0 * std::log2(logk) + k * std::log2((double)r / t);
                        if (bits < target_bits) continue;
                        ParamRow row;
                        row.delta_e = de;
                        row.delta_v = dv;
                        row.t = t;
                        row.r = r;
                        row.k = k;
                        row.chi = chi;
                        row.d = d;
                        row.quality_min = 0.3;
                        row.bits = bits;
                        row.m_c = m_c;
                        row.m_f = m_f;
                        rows.push_back(row);
                    }
                }
            }
        }
    }
    if (rows.empty()) fail(errc::no_feasible_params, "no configuration reaches the target");
    std::sort(rows.begin(), rows.end(), [](const ParamRow& a, const ParamRow& b) {
        if (a.bits != b.bits) return a.bits > b.bits;
        if (a.r != b.r) return a.r < b.r;
        if (a.t != b.t) return a.t < b.t;
        return a.k < b.k;
    });
    return rows;
}

SecurityReport security_report(const SystemParams& sp, const ReferenceTables& tables,
                               double mu_override, double tau_override, double log_base) {
    SecurityReport rep;
    rep.mu = mu_override > 0 ? mu_override : tables.match_rate(sp.u, sp.delta_verify);
    rep.tau = tau_override > 0 ? tau_override : tables.query_size_after_filter(sp.quality_min);
    rep.zeta = zeta(sp.t, sp.chi, sp.f);
    rep.zeta_cross_check = zeta_closed_form(sp.t, sp.chi, sp.f);
    rep.attack_ops_log2 = attack_cost_bits(sp.t, sp.r, sp.k, sp.chi, sp.f, log_base);
    MatchEstimate e =
        expected_matches(sp.f, sp.t, sp.r, sp.delta_verify, rep.mu, rep.tau, sp.region);
    rep.m_c = e.m_c;
    rep.m_f = e.m_f;
    ChaffCapacity cap = chaff_capacity(sp.min_dist(), sp.region);
    rep.max_chaff_per_finger = cap.max_per_finger;
    rep.safe_r_per_finger = cap.safe_r_per_finger;
    return rep;
}

int resolve_mc_estimate(const SystemParams& sp, const ReferenceTables& tables,
                        double mu_override) {
    if (sp.mc_estimate > 0) return sp.mc_estimate;
    const double mu =
        mu_override > 0 ? mu_override : tables.match_rate(sp.u, sp.delta_verify);
    return (int)std::llround(mu * sp.t);
}

} // namespace ffv
