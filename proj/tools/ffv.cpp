// ffv command line: experiment drivers over the shared-library C API.
#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "ffv.h"

namespace {

int exit_code(ffv_status st) {
    switch (st) {
        case FFV_OK: return 0;
        case FFV_E_BELOW_CHI:
        case FFV_E_NOT_ENOUGH:
        case FFV_E_PLACEMENT:
        case FFV_E_EMPTY_FOREGROUND:
        case FFV_E_INFEASIBLE:
        case FFV_E_NO_PARAMS: return 3;
        default: return 2;
    }
}

[[noreturn]] void die(const char* op, ffv_status st) {
    std::fprintf(stderr, "ffv %s: %s\n", op, ffv_last_error());
    std::exit(exit_code(st));
}

void check(const char* op, ffv_status st) {
    if (st != FFV_OK) die(op, st);
}

template <class T, void (*Free)(T*)>
class Handle {
public:
    Handle() = default;
    explicit Handle(T* p) : p_(p) {}
    Handle(Handle&& o) noexcept : p_(std::exchange(o.p_, nullptr)) {}
    Handle& operator=(Handle&& o) noexcept {
        if (this != &o) {
            Free(p_);
            p_ = std::exchange(o.p_, nullptr);
        }
        return *this;
    }
    Handle(const Handle&) = delete;
    Handle& operator=(const Handle&) = delete;
    ~Handle() { Free(p_); }
    T** out() {
        *this = Handle();
        return &p_;
    }
    operator T*() const { return p_; }
    explicit operator bool() const { return p_ != nullptr; }

private:
    T* p_ = nullptr;
};

using ConfigH = Handle<ffv_config, ffv_config_free>;
using PointsH = Handle<ffv_pointset, ffv_pointset_free>;
using PopH = Handle<ffv_population, ffv_population_free>;
using VaultH = Handle<ffv_vault, ffv_vault_free>;
using SecretH = Handle<ffv_secret, ffv_secret_free>;
using RowsH = Handle<ffv_param_rows, ffv_param_rows_free>;

std::string take_string(char* s) {
    std::string out = s ? s : "";
    ffv_string_free(s);
    return out;
}

ConfigH load_config(const std::string& path, const std::vector<std::string>& sets) {
    ConfigH cfg;
    if (path.empty()) {
        cfg = ConfigH(ffv_config_new());
    } else {
        check("config", ffv_config_load(path.c_str(), cfg.out()));
    }
    for (const std::string& kv : sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) {
            std::fprintf(stderr, "ffv config: --set expects key=value, got \"%s\"\n",
                         kv.c_str());
            std::exit(2);
        }
        check("config", ffv_config_set(cfg, kv.substr(0, eq).c_str(),
                                       kv.substr(eq + 1).c_str()));
    }
    check("config", ffv_config_validate(cfg));
    return cfg;
}

long long cfg_int(const ffv_config* cfg, const char* key) {
    long long v = 0;
    check("config", ffv_config_get_int(cfg, key, &v));
    return v;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << content).flush()) {
        std::fprintf(stderr, "ffv: cannot write %s\n", path.c_str());
        std::exit(2);
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        std::fprintf(stderr, "ffv: cannot read %s\n", path.c_str());
        std::exit(2);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

PointsH load_points(const std::string& path) {
    PointsH p;
    check("pointset", ffv_pointset_load(path.c_str(), p.out()));
    return p;
}

// Seed tags: small namespaced labels so every draw in a run is independent.
enum : uint64_t {
    TAG_POPULATION = 1,
    TAG_GEN_ENROLL = 2,
    TAG_GEN_QUERY = 3,
    TAG_ENROLL_CAPTURE = 4,
    TAG_ENROLL_RUN = 5,
    TAG_VERIFY_RUN = 6,
    TAG_BENCH_ENROLL = 7,
    TAG_BENCH_QUERY = 8,
    TAG_BENCH_VERIFY = 9,
    TAG_BENCH_IMPOSTOR = 10,
};

uint64_t tag4(uint64_t label, uint64_t a, uint64_t b, uint64_t c) {
    return (label << 48) | (a << 32) | (b << 16) | c;
}

struct EnrollAttempt {
    VaultH vault;
    SecretH secret;
    bool ok = false;
};

// Enrollment with the capped re-capture protocol: a finger reported below
// chi is re-sampled (fresh captures) up to 3 attempts. Exhausted attempts
// return ok=false when allow_fte, otherwise exit with the failure.
EnrollAttempt enroll_with_recapture(const ffv_config* cfg, const ffv_population* pop,
                                    int user, uint64_t seed, uint64_t capture_tag,
                                    bool quiet, bool allow_fte) {
    const int f = (int)cfg_int(cfg, "f");
    const int u = (int)cfg_int(cfg, "u");
    std::vector<PointsH> caps((size_t)f * u);
    std::vector<int> attempt((size_t)f + 1, 1);
    for (int g = 1; g <= f; ++g)
        for (int j = 0; j < u; ++j)
            check("gen", ffv_sample_impression(
                             cfg, pop, user, g,
                             ffv_derive_seed(seed, tag4(capture_tag, (uint64_t)user,
                                                        (uint64_t)g, (uint64_t)(j + 1))),
                             caps[(size_t)(g - 1) * u + j].out()));
    for (;;) {
        std::vector<const ffv_pointset*> arr;
        arr.reserve(caps.size());
        for (const PointsH& h : caps) arr.push_back(h);
        EnrollAttempt out;
        int failed = 0;
        const ffv_status st =
            ffv_enroll(cfg, arr.data(), (int)arr.size(),
                       ffv_derive_seed(seed, tag4(TAG_ENROLL_RUN, (uint64_t)user, 0, 0)),
                       out.vault.out(), out.secret.out(), &failed);
        if (st == FFV_OK) {
            out.ok = true;
            return out;
        }
        if (st != FFV_E_BELOW_CHI || failed < 1 || failed > f) die("enroll", st);
        if (++attempt[(size_t)failed] > 3) {
            if (allow_fte) return {};
            die("enroll", st);
        }
        if (!quiet)
            std::fprintf(stderr, "finger %d below chi, re-capturing (attempt %d of 3)\n",
                         failed, attempt[(size_t)failed]);
        for (int j = 0; j < u; ++j)
            check("gen",
                  ffv_sample_impression(
                      cfg, pop, user, failed,
                      ffv_derive_seed(seed, tag4(capture_tag, (uint64_t)user,
                                                 (uint64_t)(failed + 100 * attempt[(size_t)failed]),
                                                 (uint64_t)(j + 1))),
                      caps[(size_t)(failed - 1) * u + j].out()));
    }
}

std::string secret_line(const ffv_secret* s) {
    std::string line;
    for (int i = 0; i < ffv_secret_len(s); ++i) {
        if (i) line += ' ';
        line += std::to_string((unsigned long long)ffv_secret_coeff(s, i));
    }
    line += '\n';
    return line;
}

struct VerifyStats {
    ffv_verify_result res{};
    int correct = 0, wrong = 0; // matched positions on / off the secret polynomial
};

VerifyStats run_verify(const ffv_config* cfg, const ffv_vault* vault,
                       const std::vector<PointsH>& queries, uint64_t seed,
                       const ffv_secret* truth) {
    uint64_t q = 0;
    int f = 0, r = 0;
    check("verify", ffv_vault_params(vault, &q, &f, &r, nullptr, nullptr));
    std::vector<const ffv_pointset*> arr;
    for (const PointsH& h : queries) arr.push_back(h);
    std::vector<int> positions((size_t)r, 0);
    VerifyStats out;
    check("verify", ffv_verify(cfg, vault, arr.data(), (int)arr.size(), seed, &out.res,
                               nullptr, nullptr, nullptr, positions.data(), nullptr));
    if (truth) {
        for (int i = 0; i < out.res.collected; ++i) {
            const int pos = positions[(size_t)i];
            uint64_t y = 0, expect = 0;
            check("verify", ffv_vault_point(vault, pos, nullptr, nullptr, nullptr, &y));
            check("verify", ffv_secret_eval(truth, (uint64_t)pos % q, &expect));
            (y == expect ? out.correct : out.wrong)++;
        }
    }
    return out;
}

int cmd_gen(const std::string& cfg_path, const std::vector<std::string>& sets,
            uint64_t seed, const std::string& out_dir, int users) {
    ConfigH cfg = load_config(cfg_path, sets);
    const int f = (int)cfg_int(cfg, "f");
    const int u = (int)cfg_int(cfg, "u");
    std::filesystem::create_directories(out_dir);
    PopH pop;
    check("gen", ffv_population_gen(cfg, users, ffv_derive_seed(seed, TAG_POPULATION),
                                    pop.out()));
    char name[128];
    for (int usr = 0; usr < users; ++usr) {
        std::snprintf(name, sizeof name, "%s/user%03d.truth", out_dir.c_str(), usr);
        write_file(name, take_string(ffv_population_user_text(pop, usr)));
        for (int g = 1; g <= f; ++g) {
            for (int j = 1; j <= u; ++j) {
                PointsH imp;
                check("gen", ffv_sample_impression(
                                 cfg, pop, usr, g,
                                 ffv_derive_seed(seed, tag4(TAG_GEN_ENROLL, (uint64_t)usr,
                                                            (uint64_t)g, (uint64_t)j)),
                                 imp.out()));
                std::snprintf(name, sizeof name, "%s/user%03d_f%d_enroll%d.pts",
                              out_dir.c_str(), usr, g, j);
                write_file(name, take_string(ffv_pointset_serialize(imp)));
            }
            PointsH query;
            check("gen", ffv_sample_impression(
                             cfg, pop, usr, g,
                             ffv_derive_seed(seed, tag4(TAG_GEN_QUERY, (uint64_t)usr,
                                                        (uint64_t)g, 0)),
                             query.out()));
            std::snprintf(name, sizeof name, "%s/user%03d_f%d_query.pts", out_dir.c_str(),
                          usr, g);
            write_file(name, take_string(ffv_pointset_serialize(query)));
        }
    }
    std::printf("wrote %d user(s) (f=%d, u=%d captures + 1 query per finger) to %s\n",
                users, f, u, out_dir.c_str());
    return 0;
}

int cmd_enroll(const std::string& cfg_path, const std::vector<std::string>& sets,
               uint64_t seed, const std::string& out_path, const std::string& secret_out,
               const std::string& truth_path, const std::vector<std::string>& capture_files) {
    ConfigH cfg = load_config(cfg_path, sets);
    const int f = (int)cfg_int(cfg, "f");
    const int u = (int)cfg_int(cfg, "u");
    VaultH vault;
    SecretH secret;
    if (!truth_path.empty()) {
        if (!capture_files.empty()) {
            std::fprintf(stderr, "ffv enroll: give either --truth or capture files, not both\n");
            return 2;
        }
        PopH pop;
        check("enroll", ffv_population_parse_user(read_file(truth_path).c_str(), pop.out()));
        EnrollAttempt at =
            enroll_with_recapture(cfg, pop, 0, seed, TAG_ENROLL_CAPTURE, false, false);
        vault = std::move(at.vault);
        secret = std::move(at.secret);
    } else {
        if ((int)capture_files.size() != f * u) {
            std::fprintf(stderr,
                         "ffv enroll: expected %d capture files (f=%d fingers x u=%d "
                         "impressions, finger-major), got %zu\n",
                         f * u, f, u, capture_files.size());
            return 2;
        }
        std::vector<PointsH> caps;
        std::vector<const ffv_pointset*> arr;
        for (const std::string& path : capture_files) caps.push_back(load_points(path));
        for (const PointsH& h : caps) arr.push_back(h);
        int failed = 0;
        const ffv_status st = ffv_enroll(cfg, arr.data(), (int)arr.size(),
                                         ffv_derive_seed(seed, tag4(TAG_ENROLL_RUN, 0, 0, 0)),
                                         vault.out(), secret.out(), &failed);
        if (st == FFV_E_BELOW_CHI)
            std::fprintf(stderr, "finger %d has too few reliable minutiae\n", failed);
        if (st != FFV_OK) die("enroll", st);
    }
    write_file(out_path, take_string(ffv_vault_serialize(vault)));
    if (!secret_out.empty()) write_file(secret_out, secret_line(secret));
    uint64_t q = 0;
    int r = 0, k = 0, d = 0;
    check("enroll", ffv_vault_params(vault, &q, nullptr, &r, &k, &d));
    std::printf("enrolled: %s (f=%d r=%d k=%d d=%d q=%" PRIu64 ")\n", out_path.c_str(), f,
                r, k, d, q);
    return 0;
}

int cmd_verify(const std::string& cfg_path, const std::vector<std::string>& sets,
               uint64_t seed, const std::string& vault_path, bool reveal,
               const std::vector<std::string>& query_files) {
    ConfigH cfg = load_config(cfg_path, sets);
    VaultH vault;
    check("verify", ffv_vault_load(vault_path.c_str(), vault.out()));
    int f = 0, r = 0;
    check("verify", ffv_vault_params(vault, nullptr, &f, &r, nullptr, nullptr));
    if ((int)query_files.size() != f) {
        std::fprintf(stderr, "ffv verify: vault covers %d finger(s), got %zu query file(s)\n",
                     f, query_files.size());
        return 2;
    }
    std::vector<PointsH> queries;
    std::vector<const ffv_pointset*> arr;
    for (const std::string& path : query_files) queries.push_back(load_points(path));
    for (const PointsH& h : queries) arr.push_back(h);
    std::vector<int> matches((size_t)f, 0), gated((size_t)f, 0);
    std::vector<double> phi((size_t)f, 0.0);
    std::vector<int> positions((size_t)r, 0);
    ffv_verify_result res{};
    SecretH secret;
    check("verify", ffv_verify(cfg, vault, arr.data(), f,
                               ffv_derive_seed(seed, tag4(TAG_VERIFY_RUN, 0, 0, 0)), &res,
                               matches.data(), phi.data(), gated.data(), positions.data(),
                               secret.out()));
    for (int g = 0; g < f; ++g) {
        if (gated[(size_t)g])
            std::printf("finger %d: gated (rotation %.1f deg beyond limit)\n", g + 1,
                        phi[(size_t)g]);
        else
            std::printf("finger %d: %d match(es), rotation %.1f deg\n", g + 1,
                        matches[(size_t)g], phi[(size_t)g]);
    }
    std::printf("collected %d vault position(s), %" PRIu64 " decode trial(s)\n",
                res.collected, res.decode_trials);
    if (!res.success) {
        std::printf("Verification failed\n");
        return 1;
    }
    std::printf("Verification successful\n");
    if (reveal && secret) std::printf("key: %s", secret_line(secret).c_str());
    return 0;
}

int cmd_match(const std::string& cfg_path, const std::vector<std::string>& sets,
              double delta, const std::string& ref_path, const std::string& query_path) {
    ConfigH cfg = load_config(cfg_path, sets);
    PointsH ref = load_points(ref_path);
    PointsH query = load_points(query_path);
    ffv_match_result res{};
    check("match", ffv_match(cfg, ref, query, delta, &res));
    std::printf("pairs=%d rotation=%.2f deg shift=(%.2f, %.2f)\n", res.pairs, res.phi_deg,
                res.vx, res.vy);
    return 0;
}

int cmd_attack(const std::string& vault_path, uint64_t seed, uint64_t trials, int t, int chi,
               double log_base, const std::string& log_path) {
    VaultH vault;
    check("attack", ffv_vault_load(vault_path.c_str(), vault.out()));
    int k = 0;
    check("attack", ffv_vault_params(vault, nullptr, nullptr, nullptr, &k, nullptr));
    ffv_attack_result res{};
    const bool compare = t > 0;
    if (compare) {
        if (chi < 0) {
            std::fprintf(stderr, "ffv attack: --t requires --chi\n");
            return 2;
        }
        check("attack", ffv_attack_compare(vault, t, chi, log_base, seed, &res));
    } else {
        check("attack", ffv_attack(vault, trials, seed, &res));
    }
    std::printf("trials=%" PRIu64 " success=%s elapsed=%.3fs\n", res.trials,
                res.success ? "yes" : "no", res.elapsed_s);
    if (compare)
        std::printf("measured log2(trials)=%.2f  measured log2(ops)=%.2f  predicted=%.2f bits\n",
                    res.measured_trials_log2, res.measured_ops_log2, res.predicted_bits);
    if (!log_path.empty()) {
        std::ofstream log(log_path, std::ios::app);
        if (!log) {
            std::fprintf(stderr, "ffv attack: cannot append to %s\n", log_path.c_str());
            return 2;
        }
        char line[256];
        if (compare)
            std::snprintf(line, sizeof line,
                          "attack vault=%s seed=%" PRIu64 " k=%d trials=%" PRIu64
                          " success=%d elapsed_s=%.3f measured_ops_log2=%.2f "
                          "predicted_bits=%.2f\n",
                          vault_path.c_str(), seed, k, res.trials, res.success,
                          res.elapsed_s, res.measured_ops_log2, res.predicted_bits);
        else
            std::snprintf(line, sizeof line,
                          "attack vault=%s seed=%" PRIu64 " k=%d trials=%" PRIu64
                          " success=%d elapsed_s=%.3f\n",
                          vault_path.c_str(), seed, k, res.trials, res.success,
                          res.elapsed_s);
        log << line;
    }
    return 0;
}

int cmd_security(const std::string& cfg_path, const std::vector<std::string>& sets) {
    ConfigH cfg = load_config(cfg_path, sets);
    ffv_security_summary s{};
    check("security", ffv_security(cfg, &s));
    std::printf("zeta                 = %.6g\n", s.zeta);
    std::printf("zeta_cross_check     = %.6g\n", s.zeta_cross_check);
    std::printf("attack_cost_bits     = %.2f\n", s.attack_ops_log2);
    std::printf("m_c                  = %.2f\n", s.m_c);
    std::printf("m_f                  = %.2f\n", s.m_f);
    std::printf("mu                   = %.4f\n", s.mu);
    std::printf("tau                  = %.1f\n", s.tau);
    std::printf("max_chaff_per_finger = %lld\n", s.max_chaff_per_finger);
    std::printf("safe_r_per_finger    = %lld\n", s.safe_r_per_finger);
    return 0;
}

int cmd_params(const std::string& cfg_path, const std::vector<std::string>& sets,
               double target, int top, const std::string& out_path) {
    ConfigH cfg = load_config(cfg_path, sets);
    RowsH rows;
    check("params", ffv_param_search(cfg, target, rows.out()));
    const long long n = ffv_param_rows_count(rows);
    std::printf("%lld parameter set(s) reach %.1f bits\n", n, target);
    std::printf("%7s %7s %4s %4s %3s %4s %3s %5s %7s %7s %7s\n", "delta_e", "delta_v", "t",
                "r", "k", "chi", "d", "Q", "bits", "m_c", "m_f");
    auto fmt_row = [](const ffv_param_row& r, char* buf, size_t cap) {
        std::snprintf(buf, cap, "%7.1f %7.1f %4d %4d %3d %4d %3d %5.2f %7.2f %7.2f %7.2f\n",
                      r.delta_e, r.delta_v, r.t, r.r, r.k, r.chi, r.d, r.quality_min, r.bits,
                      r.m_c, r.m_f);
    };
    char buf[192];
    for (long long i = 0; i < n && i < top; ++i) {
        ffv_param_row r{};
        check("params", ffv_param_rows_get(rows, i, &r));
        fmt_row(r, buf, sizeof buf);
        std::fputs(buf, stdout);
    }
    if (n > top) std::printf("... (%lld more)\n", n - top);
    if (!out_path.empty()) {
        std::ofstream out(out_path);
        if (!out) {
            std::fprintf(stderr, "ffv params: cannot write %s\n", out_path.c_str());
            return 2;
        }
        out << "delta_e delta_v t r k chi d Q bits m_c m_f\n";
        for (long long i = 0; i < n; ++i) {
            ffv_param_row r{};
            check("params", ffv_param_rows_get(rows, i, &r));
            fmt_row(r, buf, sizeof buf);
            out << buf;
        }
    }
    return 0;
}

int cmd_bench(const std::string& cfg_path, const std::vector<std::string>& sets,
              uint64_t seed, int users) {
    ConfigH cfg = load_config(cfg_path, sets);
    const int f = (int)cfg_int(cfg, "f");
    PopH pop;
    check("bench", ffv_population_gen(cfg, users, ffv_derive_seed(seed, TAG_POPULATION),
                                      pop.out()));
    int enrolled = 0, genuine_ok = 0, impostor_tries = 0, impostor_ok = 0;
    long long sum_correct = 0;
    double sum_wrong = 0;
    VaultH prev_vault;
    for (int usr = 0; usr < users; ++usr) {
        EnrollAttempt at =
            enroll_with_recapture(cfg, pop, usr, seed, TAG_BENCH_ENROLL, true, true);
        if (!at.ok) continue;
        ++enrolled;
        std::vector<PointsH> queries;
        for (int g = 1; g <= f; ++g) {
            PointsH q;
            check("bench", ffv_sample_impression(
                               cfg, pop, usr, g,
                               ffv_derive_seed(seed, tag4(TAG_BENCH_QUERY, (uint64_t)usr,
                                                          (uint64_t)g, 0)),
                               q.out()));
            queries.push_back(std::move(q));
        }
        VerifyStats st = run_verify(cfg, at.vault, queries,
                                    ffv_derive_seed(seed, tag4(TAG_BENCH_VERIFY, (uint64_t)usr, 0, 0)),
                                    at.secret);
        if (st.res.success) ++genuine_ok;
        sum_correct += st.correct;
        sum_wrong += st.wrong;
        if (prev_vault) {
            ++impostor_tries;
            VerifyStats imp = run_verify(cfg, prev_vault, queries,
                                         ffv_derive_seed(seed, tag4(TAG_BENCH_IMPOSTOR,
                                                                    (uint64_t)usr, 0, 0)),
                                         nullptr);
            if (imp.res.success) ++impostor_ok;
        }
        prev_vault = std::move(at.vault);
    }
    const double fte_pct = 100.0 * (users - enrolled) / users;
    const double frr_pct = enrolled ? 100.0 * (enrolled - genuine_ok) / enrolled : 0.0;
    const double far_pct = impostor_tries ? 100.0 * impostor_ok / impostor_tries : 0.0;
    std::printf("users              %d\n", users);
    std::printf("enroll failures    %d (FTE %.1f%%)\n", users - enrolled, fte_pct);
    std::printf("genuine rejects    %d/%d (FRR %.1f%%)\n", enrolled - genuine_ok, enrolled,
                frr_pct);
    std::printf("impostor accepts   %d/%d (%.2f%%)\n", impostor_ok, impostor_tries, far_pct);
    std::printf("mean m_c           %.2f\n", enrolled ? (double)sum_correct / enrolled : 0.0);
    std::printf("mean m_f           %.2f\n", enrolled ? sum_wrong / enrolled : 0.0);
    std::printf("base seed          %" PRIu64 "\n", seed);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"multi-finger fuzzy vault toolkit"};
    app.require_subcommand(1);

    std::string cfg_path, out_path, vault_path, secret_out, truth_path, log_path;
    std::vector<std::string> sets, files;
    uint64_t seed = 1;
    uint64_t trials = 1000000;
    int users = 1, top = 10, t = 0, chi = -1;
    double delta = 0, target = 0, log_base = 2.0;

    auto add_common = [&](CLI::App* cmd, bool with_seed = true) {
        cmd->add_option("--config", cfg_path, "configuration file");
        cmd->add_option("--set", sets, "override a config key (key=value, repeatable)");
        if (with_seed) cmd->add_option("--seed", seed, "base RNG seed");
    };

    CLI::App* gen = app.add_subcommand("gen", "generate a synthetic population with captures");
    add_common(gen);
    gen->add_option("--out", out_path, "output directory")->required();
    gen->add_option("--users", users, "number of users");

    CLI::App* enroll = app.add_subcommand("enroll", "build a vault from enrollment captures");
    add_common(enroll);
    enroll->add_option("--out", out_path, "vault output path")->required();
    enroll->add_option("--secret-out", secret_out, "write the secret coefficients here");
    enroll->add_option("--truth", truth_path,
                       "sample captures from this truth file (enables re-capture)");
    enroll->add_option("captures", files, "f*u capture files, finger-major");

    CLI::App* verify = app.add_subcommand("verify", "verify query captures against a vault");
    add_common(verify);
    verify->add_option("--vault", vault_path, "vault file")->required();
    bool reveal = false;
    verify->add_flag("--reveal-key", reveal, "print recovered coefficients on success");
    verify->add_option("queries", files, "one query file per finger")->required();

    CLI::App* match = app.add_subcommand("match", "align two point sets (debug)");
    add_common(match, false);
    match->add_option("--delta", delta, "pairing tolerance (default: config delta_verify)");
    match->add_option("files", files, "reference and query point files")
        ->expected(2)
        ->required();

    CLI::App* attack = app.add_subcommand("attack", "brute-force a vault file");
    attack->add_option("--vault", vault_path, "vault file")->required();
    attack->add_option("--seed", seed, "base RNG seed");
    attack->add_option("--trials", trials, "trial budget (plain mode)");
    attack->add_option("--t", t, "true template size (enables measured-vs-predicted mode)");
    attack->add_option("--chi", chi, "per-finger minimum used at enrollment");
    attack->add_option("--log-base", log_base, "base of the log^2(k) cost factor");
    attack->add_option("--log", log_path, "append one result line to this file");

    CLI::App* security = app.add_subcommand("security", "report security estimates");
    add_common(security, false);

    CLI::App* params = app.add_subcommand("params", "search feasible parameter sets");
    add_common(params, false);
    params->add_option("--target", target, "required attack cost in bits")->required();
    params->add_option("--top", top, "rows to print");
    params->add_option("--out", out_path, "write the full table here");

    CLI::App* bench = app.add_subcommand("bench", "synthetic FTE/FRR/impostor experiment");
    add_common(bench);
    bench->add_option("--users", users, "number of users");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (gen->parsed()) return cmd_gen(cfg_path, sets, seed, out_path, users);
    if (enroll->parsed())
        return cmd_enroll(cfg_path, sets, seed, out_path, secret_out, truth_path, files);
    if (verify->parsed()) return cmd_verify(cfg_path, sets, seed, vault_path, reveal, files);
    if (match->parsed()) return cmd_match(cfg_path, sets, delta, files[0], files[1]);
    if (attack->parsed())
        return cmd_attack(vault_path, seed, trials, t, chi, log_base, log_path);
    if (security->parsed()) return cmd_security(cfg_path, sets);
    if (params->parsed()) return cmd_params(cfg_path, sets, target, top, out_path);
    if (bench->parsed()) return cmd_bench(cfg_path, sets, seed, users);
    return 2;
}
