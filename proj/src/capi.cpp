#include "ffv.h"

#include <cstdio>
#include <cstring>
#include <new>
#include <sstream>
#include <string>
#include <vector>

#include "attack.hpp"
#include "config.hpp"
#include "error.hpp"
#include "image.hpp"
#include "prealign.hpp"
#include "security.hpp"
#include "synth.hpp"
#include "vault.hpp"
#include "verifier.hpp"

struct ffv_config {
    ffv::Config c;
};
struct ffv_pointset {
    std::vector<ffv::Minutia> pts;
};
struct ffv_population {
    std::vector<ffv::SyntheticUser> users;
};
struct ffv_vault {
    ffv::Vault v;
};
struct ffv_secret {
    ffv::FieldPoly p;
};
struct ffv_param_rows {
    std::vector<ffv::ParamRow> rows;
};

namespace {

thread_local std::string g_err;

ffv_status status_of(ffv::errc c) {
    using ffv::errc;
    switch (c) {
        case errc::bad_argument: return FFV_E_ARGUMENT;
        case errc::io_error: return FFV_E_IO;
        case errc::malformed_config: return FFV_E_CONFIG;
        case errc::malformed_vault: return FFV_E_VAULT;
        case errc::malformed_image: return FFV_E_IMAGE;
        case errc::malformed_pointset: return FFV_E_POINTSET;
        case errc::duplicate_abscissa: return FFV_E_DUP_ABSCISSA;
        case errc::duplicate_point: return FFV_E_DUP_POINT;
        case errc::finger_below_chi: return FFV_E_BELOW_CHI;
        case errc::not_enough_reliable: return FFV_E_NOT_ENOUGH;
        case errc::placement_failure: return FFV_E_PLACEMENT;
        case errc::empty_foreground: return FFV_E_EMPTY_FOREGROUND;
        case errc::infeasible: return FFV_E_INFEASIBLE;
        case errc::no_feasible_params: return FFV_E_NO_PARAMS;
        case errc::internal: return FFV_E_INTERNAL;
    }
    return FFV_E_INTERNAL;
}

template <class F>
ffv_status wrap(F&& f) {
    try {
        f();
        return FFV_OK;
    } catch (const ffv::error& e) {
        g_err = e.what();
        return status_of(e.code);
    } catch (const std::exception& e) {
        g_err = e.what();
        return FFV_E_INTERNAL;
    }
}

char* dup_string(const std::string& s) {
    char* p = new char[s.size() + 1];
    std::memcpy(p, s.c_str(), s.size() + 1);
    return p;
}

void require(bool cond, const char* msg) {
    if (!cond) ffv::fail(ffv::errc::bad_argument, msg);
}

std::string format_quality(double q) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", q);
    return buf;
}

std::vector<ffv::Minutia> parse_points(const std::string& text) {
    std::vector<ffv::Minutia> pts;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        std::istringstream ls(line);
        ffv::Minutia m;
        if (!(ls >> m.a)) continue; // blank line
        double q;
        std::string extra;
        if (!(ls >> m.b))
            ffv::fail(ffv::errc::malformed_pointset,
                      "point line " + std::to_string(lineno) + ": expected \"a b [quality]\"");
        if (ls >> q) {
            if (!(q >= 0.0 && q <= 1.0))
                ffv::fail(ffv::errc::malformed_pointset,
                          "point line " + std::to_string(lineno) + ": quality outside [0,1]");
            m.quality = q;
        }
        if (ls >> extra)
            ffv::fail(ffv::errc::malformed_pointset,
                      "point line " + std::to_string(lineno) + ": trailing tokens");
        pts.push_back(m);
    }
    return pts;
}

std::string read_file(const std::string& path) {
    FILE* fp = std::fopen(path.c_str(), "rb");
    if (!fp) ffv::fail(ffv::errc::io_error, "cannot open " + path);
    std::string data;
    char buf[1 << 14];
    std::size_t n;
    while ((n = std::fread(buf, 1, sizeof buf, fp)) > 0) data.append(buf, n);
    const bool bad = std::ferror(fp);
    std::fclose(fp);
    if (bad) ffv::fail(ffv::errc::io_error, "read error on " + path);
    return data;
}

const ffv::ReferenceTables& tables_for(const ffv::Config& c, ffv::ReferenceTables& storage) {
    if (c.tables_file.empty()) return ffv::ReferenceTables::builtin();
    storage = ffv::ReferenceTables::load(c.tables_file);
    return storage;
}

} // namespace

extern "C" {

const char* ffv_last_error(void) { return g_err.c_str(); }

void ffv_string_free(char* s) { delete[] s; }

uint64_t ffv_derive_seed(uint64_t base, uint64_t tag) { return ffv::derive_seed(base, tag); }

/* ---- configuration ----------------------------------------------------- */

ffv_config* ffv_config_new(void) { return new (std::nothrow) ffv_config{}; }

ffv_status ffv_config_load(const char* path, ffv_config** out) {
    return wrap([&] {
        require(path && out, "null argument");
        auto* h = new ffv_config{ffv::load_config(path)};
        *out = h;
    });
}

ffv_status ffv_config_set(ffv_config* c, const char* key, const char* value) {
    return wrap([&] {
        require(c && key && value, "null argument");
        ffv::config_set(c->c, key, value);
    });
}

ffv_status ffv_config_get_int(const ffv_config* c, const char* key, long long* out) {
    return wrap([&] {
        require(c && key && out, "null argument");
        const ffv::SystemParams& sp = c->c.sp;
        const std::string k = key;
        if (k == "f") *out = sp.f;
        else if (k == "u") *out = sp.u;
        else if (k == "t") *out = sp.t;
        else if (k == "r") *out = sp.r;
        else if (k == "k") *out = sp.k;
        else if (k == "chi") *out = sp.chi;
        else if (k == "d") *out = sp.min_dist();
        else if (k == "q") *out = (long long)sp.field_q();
        else if (k == "frame_w") *out = sp.frame_w;
        else if (k == "frame_h") *out = sp.frame_h;
        else if (k == "gen_per_finger") *out = c->c.gen_per_finger;
        else if (k == "gen_spacing") *out = c->c.gen_spacing;
        else ffv::fail(ffv::errc::bad_argument, "no integer key named " + k);
    });
}

ffv_status ffv_config_validate(const ffv_config* c) {
    return wrap([&] {
        require(c != nullptr, "null argument");
        c->c.sp.validate();
    });
}

char* ffv_config_dump(const ffv_config* c) {
    if (!c) return nullptr;
    return dup_string(ffv::dump_config(c->c));
}

void ffv_config_free(ffv_config* c) { delete c; }

/* ---- minutiae point sets ------------------------------------------------ */

ffv_status ffv_pointset_parse(const char* text, ffv_pointset** out) {
    return wrap([&] {
        require(text && out, "null argument");
        *out = new ffv_pointset{parse_points(text)};
    });
}

ffv_status ffv_pointset_load(const char* path, ffv_pointset** out) {
    return wrap([&] {
        require(path && out, "null argument");
        *out = new ffv_pointset{parse_points(read_file(path))};
    });
}

char* ffv_pointset_serialize(const ffv_pointset* p) {
    if (!p) return nullptr;
    std::string s;
    for (const ffv::Minutia& m : p->pts) {
        s += std::to_string(m.a);
        s += ' ';
        s += std::to_string(m.b);
        if (m.has_quality()) {
            s += ' ';
            s += format_quality(m.quality);
        }
        s += '\n';
    }
    return dup_string(s);
}

int ffv_pointset_size(const ffv_pointset* p) { return p ? (int)p->pts.size() : 0; }

ffv_status ffv_pointset_get(const ffv_pointset* p, int i, int* a, int* b, double* quality) {
    return wrap([&] {
        require(p != nullptr, "null argument");
        require(i >= 0 && i < (int)p->pts.size(), "point index out of range");
        const ffv::Minutia& m = p->pts[(std::size_t)i];
        if (a) *a = m.a;
        if (b) *b = m.b;
        if (quality) *quality = m.quality;
    });
}

void ffv_pointset_free(ffv_pointset* p) { delete p; }

/* ---- synthetic population ------------------------------------------------ */

ffv_status ffv_population_gen(const ffv_config* c, int n_users, uint64_t seed,
                              ffv_population** out) {
    return wrap([&] {
        require(c && out, "null argument");
        require(n_users > 0, "n_users must be positive");
        ffv::Rng rng(seed);
        *out = new ffv_population{ffv::gen_population(n_users, c->c.sp.f, c->c.gen_per_finger,
                                                      c->c.gen_spacing, c->c.sp.region, rng)};
    });
}

int ffv_population_users(const ffv_population* p) { return p ? (int)p->users.size() : 0; }

char* ffv_population_user_text(const ffv_population* p, int user) {
    if (!p || user < 0 || user >= (int)p->users.size()) return nullptr;
    std::string s;
    for (const ffv::SyntheticFinger& fp : p->users[(std::size_t)user].fingers) {
        s += "finger " + std::to_string(fp.finger) + "\n";
        for (const ffv::Minutia& m : fp.truth)
            s += std::to_string(m.a) + " " + std::to_string(m.b) + "\n";
    }
    return dup_string(s);
}

ffv_status ffv_population_parse_user(const char* text, ffv_population** out) {
    return wrap([&] {
        require(text && out, "null argument");
        ffv::SyntheticUser user;
        std::istringstream in(text);
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
            std::istringstream ls(line);
            std::string first;
            if (!(ls >> first)) continue;
            if (first == "finger") {
                int idx;
                std::string extra;
                if (!(ls >> idx) || idx < 1 || (ls >> extra))
                    ffv::fail(ffv::errc::malformed_pointset,
                              "line " + std::to_string(lineno) + ": bad finger header");
                if (idx != (int)user.fingers.size() + 1)
                    ffv::fail(ffv::errc::malformed_pointset,
                              "line " + std::to_string(lineno) + ": fingers must be sequential");
                user.fingers.push_back({idx, {}});
                continue;
            }
            if (user.fingers.empty())
                ffv::fail(ffv::errc::malformed_pointset,
                          "line " + std::to_string(lineno) + ": point before any finger header");
            ffv::Minutia m;
            m.finger = user.fingers.back().finger;
            std::string extra;
            try {
                m.a = std::stoi(first);
            } catch (...) {
                ffv::fail(ffv::errc::malformed_pointset,
                          "line " + std::to_string(lineno) + ": expected \"a b\"");
            }
            if (!(ls >> m.b) || (ls >> extra))
                ffv::fail(ffv::errc::malformed_pointset,
                          "line " + std::to_string(lineno) + ": expected \"a b\"");
            user.fingers.back().truth.push_back(m);
        }
        if (user.fingers.empty())
            ffv::fail(ffv::errc::malformed_pointset, "no finger sections found");
        *out = new ffv_population{{user}};
    });
}

ffv_status ffv_population_truth(const ffv_population* p, int user, int finger,
                                ffv_pointset** out) {
    return wrap([&] {
        require(p && out, "null argument");
        require(user >= 0 && user < (int)p->users.size(), "user index out of range");
        const auto& fingers = p->users[(std::size_t)user].fingers;
        require(finger >= 1 && finger <= (int)fingers.size(), "finger index out of range");
        *out = new ffv_pointset{fingers[(std::size_t)(finger - 1)].truth};
    });
}

ffv_status ffv_sample_impression(const ffv_config* c, const ffv_population* p, int user,
                                 int finger, uint64_t seed, ffv_pointset** out) {
    return wrap([&] {
        require(c && p && out, "null argument");
        require(user >= 0 && user < (int)p->users.size(), "user index out of range");
        const auto& fingers = p->users[(std::size_t)user].fingers;
        require(finger >= 1 && finger <= (int)fingers.size(), "finger index out of range");
        ffv::Rng rng(seed);
        ffv::Impression imp =
            ffv::sample_impression(fingers[(std::size_t)(finger - 1)], c->c.noise,
                                   c->c.sp.region, c->c.sp.frame_w, c->c.sp.frame_h, rng);
        *out = new ffv_pointset{std::move(imp.points)};
    });
}

void ffv_population_free(ffv_population* p) { delete p; }

/* ---- vault and secret ---------------------------------------------------- */

ffv_status ffv_enroll(const ffv_config* c, const ffv_pointset* const* impressions, int count,
                      uint64_t seed, ffv_vault** out_vault, ffv_secret** out_secret,
                      int* failed_finger) {
    if (failed_finger) *failed_finger = 0;
    return wrap([&] {
        require(c && impressions && out_vault, "null argument");
        const ffv::SystemParams& sp = c->c.sp;
        require(count == sp.f * sp.u, "need exactly f*u impressions, finger-major");
        std::vector<std::vector<std::vector<ffv::Minutia>>> imps(
            (std::size_t)sp.f, std::vector<std::vector<ffv::Minutia>>((std::size_t)sp.u));
        for (int fi = 0; fi < sp.f; ++fi)
            for (int j = 0; j < sp.u; ++j) {
                const ffv_pointset* ps = impressions[fi * sp.u + j];
                require(ps != nullptr, "null impression");
                auto pts = ps->pts;
                for (ffv::Minutia& m : pts) m.finger = fi + 1;
                imps[(std::size_t)fi][(std::size_t)j] = std::move(pts);
            }
        ffv::Rng rng(seed);
        try {
            ffv::EnrollResult er = ffv::enroll(imps, sp, rng);
            *out_vault = new ffv_vault{std::move(er.vault)};
            if (out_secret) *out_secret = new ffv_secret{std::move(er.secret)};
        } catch (const ffv::error& e) {
            if (e.code == ffv::errc::finger_below_chi && failed_finger)
                *failed_finger = e.finger;
            throw;
        }
    });
}

ffv_status ffv_vault_parse(const char* text, ffv_vault** out) {
    return wrap([&] {
        require(text && out, "null argument");
        *out = new ffv_vault{ffv::Vault::parse(text)};
    });
}

ffv_status ffv_vault_load(const char* path, ffv_vault** out) {
    return wrap([&] {
        require(path && out, "null argument");
        *out = new ffv_vault{ffv::Vault::parse(read_file(path))};
    });
}

char* ffv_vault_serialize(const ffv_vault* v) {
    if (!v) return nullptr;
    return dup_string(v->v.serialize());
}

ffv_status ffv_vault_params(const ffv_vault* v, uint64_t* q, int* f, int* r, int* k, int* d) {
    return wrap([&] {
        require(v != nullptr, "null argument");
        if (q) *q = v->v.q;
        if (f) *f = v->v.f;
        if (r) *r = v->v.r;
        if (k) *k = v->v.k;
        if (d) *d = v->v.d;
    });
}

ffv_status ffv_vault_point(const ffv_vault* v, int i, int* finger, int* a, int* b,
                           uint64_t* y) {
    return wrap([&] {
        require(v != nullptr, "null argument");
        require(i >= 1 && i <= (int)v->v.points.size(), "vault position out of range");
        const ffv::VaultPoint& p = v->v.points[(std::size_t)(i - 1)];
        if (finger) *finger = p.m.finger;
        if (a) *a = p.m.a;
        if (b) *b = p.m.b;
        if (y) *y = p.y;
    });
}

void ffv_vault_free(ffv_vault* v) { delete v; }

int ffv_secret_len(const ffv_secret* s) { return s ? s->p.k() : 0; }

uint64_t ffv_secret_coeff(const ffv_secret* s, int i) {
    if (!s || i < 0 || i >= s->p.k()) return 0;
    return s->p.coeffs[(std::size_t)i];
}

ffv_status ffv_secret_eval(const ffv_secret* s, uint64_t x, uint64_t* y) {
    return wrap([&] {
        require(s && y, "null argument");
        *y = ffv::poly_eval(s->p, x % s->p.q);
    });
}

void ffv_secret_free(ffv_secret* s) { delete s; }

/* ---- verification --------------------------------------------------------- */

ffv_status ffv_verify(const ffv_config* c, const ffv_vault* v,
                      const ffv_pointset* const* queries, int n_queries, uint64_t seed,
                      ffv_verify_result* out, int* finger_matches, double* finger_phi,
                      int* finger_gated, int* matched_positions, ffv_secret** out_secret) {
    return wrap([&] {
        require(c && v && queries && out, "null argument");
        require(n_queries == v->v.f, "need one query point set per finger");
        std::vector<std::vector<ffv::Minutia>> qs((std::size_t)n_queries);
        for (int fi = 0; fi < n_queries; ++fi) {
            require(queries[fi] != nullptr, "null query");
            qs[(std::size_t)fi] = queries[fi]->pts;
            for (ffv::Minutia& m : qs[(std::size_t)fi]) m.finger = fi + 1;
        }
        ffv::Rng rng(seed);
        ffv::SystemParams sp = c->c.sp;
        ffv::ReferenceTables storage;
        sp.mc_estimate =
            ffv::resolve_mc_estimate(sp, tables_for(c->c, storage), c->c.mu_override);
        ffv::VerifyOutcome o = ffv::verify(v->v, qs, sp, rng);
        out->success = o.success ? 1 : 0;
        out->decode_trials = o.decode_trials;
        out->collected = (int)o.matched_positions.size();
        for (const ffv::FingerMatchInfo& info : o.per_finger) {
            const int idx = info.finger - 1;
            if (idx < 0 || idx >= n_queries) continue;
            if (finger_matches) finger_matches[idx] = info.n_matches;
            if (finger_phi) finger_phi[idx] = info.phi_deg;
            if (finger_gated) finger_gated[idx] = info.gated ? 1 : 0;
        }
        if (matched_positions)
            for (std::size_t i = 0; i < o.matched_positions.size(); ++i)
                matched_positions[i] = o.matched_positions[i];
        if (out_secret) *out_secret = nullptr;
        if (o.success && o.recovered && out_secret)
            *out_secret = new ffv_secret{std::move(*o.recovered)};
    });
}

/* ---- matcher (debug) ------------------------------------------------------- */

ffv_status ffv_match(const ffv_config* c, const ffv_pointset* reference,
                     const ffv_pointset* query, double delta, ffv_match_result* out) {
    return wrap([&] {
        require(c && reference && query && out, "null argument");
        const double del = delta > 0 ? delta : c->c.sp.delta_verify;
        ffv::MatchResult mr = ffv::match(reference->pts, query->pts,
                                         c->c.sp.matcher_params(del));
        out->phi_deg = mr.iso.phi_deg;
        out->vx = mr.iso.vx;
        out->vy = mr.iso.vy;
        out->pairs = (int)mr.pairs.size();
    });
}

/* ---- attack ----------------------------------------------------------------- */

ffv_status ffv_attack(const ffv_vault* v, uint64_t max_trials, uint64_t seed,
                      ffv_attack_result* out) {
    return wrap([&] {
        require(v && out, "null argument");
        ffv::Rng rng(seed);
        ffv::AttackRun run = ffv::brute_force(v->v, v->v.k, max_trials, rng, seed);
        *out = {};
        out->trials = run.trials;
        out->success = run.success ? 1 : 0;
        out->elapsed_s = run.elapsed_s;
    });
}

ffv_status ffv_attack_compare(const ffv_vault* v, int t, int chi, double log_base,
                              uint64_t seed, ffv_attack_result* out) {
    return wrap([&] {
        require(v && out, "null argument");
        ffv::Rng rng(seed);
        ffv::AttackComparison cmp =
            ffv::attack_cost_measured_vs_predicted(v->v, t, chi, rng, seed, log_base);
        out->trials = cmp.run.trials;
        out->success = cmp.run.success ? 1 : 0;
        out->elapsed_s = cmp.run.elapsed_s;
        out->measured_trials_log2 = cmp.measured_trials_log2;
        out->measured_ops_log2 = cmp.measured_ops_log2;
        out->predicted_bits = cmp.predicted_bits;
    });
}

/* ---- security calculations --------------------------------------------------- */

ffv_status ffv_security(const ffv_config* c, ffv_security_summary* out) {
    return wrap([&] {
        require(c && out, "null argument");
        ffv::ReferenceTables storage;
        const ffv::ReferenceTables& tables = tables_for(c->c, storage);
        ffv::SecurityReport rep = ffv::security_report(c->c.sp, tables, c->c.mu_override,
                                                       c->c.tau_override, c->c.log_base);
        out->zeta = rep.zeta;
        out->zeta_cross_check = rep.zeta_cross_check;
        out->attack_ops_log2 = rep.attack_ops_log2;
        out->m_c = rep.m_c;
        out->m_f = rep.m_f;
        out->mu = rep.mu;
        out->tau = rep.tau;
        out->max_chaff_per_finger = rep.max_chaff_per_finger;
        out->safe_r_per_finger = rep.safe_r_per_finger;
    });
}

ffv_status ffv_param_search(const ffv_config* c, double target_bits, ffv_param_rows** out) {
    return wrap([&] {
        require(c && out, "null argument");
        ffv::ReferenceTables storage;
        const ffv::ReferenceTables& tables = tables_for(c->c, storage);
        *out = new ffv_param_rows{
            ffv::param_search(c->c.sp.f, c->c.sp.u, target_bits, tables, c->c.sp.region)};
    });
}

long long ffv_param_rows_count(const ffv_param_rows* rows) {
    return rows ? (long long)rows->rows.size() : 0;
}

ffv_status ffv_param_rows_get(const ffv_param_rows* rows, long long i, ffv_param_row* out) {
    return wrap([&] {
        require(rows && out, "null argument");
        require(i >= 0 && i < (long long)rows->rows.size(), "row index out of range");
        const ffv::ParamRow& r = rows->rows[(std::size_t)i];
        out->delta_e = r.delta_e;
        out->delta_v = r.delta_v;
        out->t = r.t;
        out->r = r.r;
        out->k = r.k;
        out->chi = r.chi;
        out->d = r.d;
        out->quality_min = r.quality_min;
        out->bits = r.bits;
        out->m_c = r.m_c;
        out->m_f = r.m_f;
    });
}

void ffv_param_rows_free(ffv_param_rows* rows) { delete rows; }

/* ---- image utilities --------------------------------------------------------- */

ffv_status ffv_prealign_pgm(const char* in_path, const char* aligned_out_or_null,
                            int threshold, int downscale, int* total_rotation_deg,
                            int* iterations, int* shift_dx, int* shift_dy) {
    return wrap([&] {
        require(in_path != nullptr, "null argument");
        ffv::GrayImage img = ffv::read_pgm_file(in_path);
        ffv::PrealignParams pp;
        if (threshold > 0) pp.threshold = threshold;
        if (downscale > 0) pp.downscale = downscale;
        ffv::AlignReport rep = ffv::prealign(img, pp);
        if (total_rotation_deg) *total_rotation_deg = rep.total_rotation_deg;
        if (iterations) *iterations = rep.iterations;
        if (shift_dx) *shift_dx = rep.shift_dx;
        if (shift_dy) *shift_dy = rep.shift_dy;
        if (aligned_out_or_null) {
            // Reproduce the alignment on the full-resolution input: center,
            // then rotate by the recommended total.
            ffv::GrayImage shifted{img.width, img.height,
                                   std::vector<std::uint8_t>(img.px.size(), 255)};
            for (int y = 0; y < img.height; ++y)
                for (int x = 0; x < img.width; ++x) {
                    const int sx = x - rep.shift_dx, sy = y - rep.shift_dy;
                    if (img.in_bounds(sx, sy)) shifted.at(x, y) = img.at(sx, sy);
                }
            ffv::GrayImage aligned =
                ffv::apply_rotation(shifted, (double)rep.total_rotation_deg);
            ffv::write_pgm_file(aligned, aligned_out_or_null);
        }
    });
}

ffv_status ffv_rotate_pgm(const char* in_path, const char* out_path, double degrees) {
    return wrap([&] {
        require(in_path && out_path, "null argument");
        ffv::write_pgm_file(ffv::apply_rotation(ffv::read_pgm_file(in_path), degrees),
                            out_path);
    });
}

} // extern "C"
