#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "error.hpp"
#include "synth.hpp"
#include "verifier.hpp"

using namespace ffv;

namespace {

SystemParams mini_params() {
    SystemParams sp;
    sp.f = 2;
    sp.t = 8;
    sp.r = 30;
    sp.k = 3;
    sp.chi = 4;
    sp.d = 10;
    return sp;
}

struct Enrolled {
    EnrollResult er;
    SystemParams sp;
    std::vector<std::vector<Minutia>> tmpl_by_finger; // genuine points, quality 1.0
};

Enrolled enroll_user(u64 seed, SystemParams sp = mini_params()) {
    Rng rng(seed);
    auto pop = gen_population(1, sp.f, 20, 12, sp.region, rng);
    std::vector<std::vector<std::vector<Minutia>>> imps;
    for (const SyntheticFinger& fp : pop[0].fingers)
        imps.push_back(std::vector<std::vector<Minutia>>((std::size_t)sp.u, fp.truth));
    Enrolled out{enroll(imps, sp, rng), sp, {}};

    // recover the genuine points from the vault: y on the secret curve
    const Vault& v = out.er.vault;
    out.tmpl_by_finger.resize((std::size_t)sp.f);
    for (std::size_t i = 0; i < v.points.size(); ++i) {
        if (v.points[i].y == poly_eval(out.er.secret, index_encode((int)i + 1, v.q))) {
            Minutia m = v.points[i].m;
            m.quality = 1.0;
            out.tmpl_by_finger[(std::size_t)m.finger - 1].push_back(m);
        }
    }
    return out;
}

FieldPoly random_poly(u64 q, int k, Rng& rng) {
    std::vector<u64> c((std::size_t)k);
    for (u64& x : c) x = rng.below(q);
    return FieldPoly{q, c};
}

// c points on the curve, e points off it, distinct abscissas
std::vector<IndexedPoint> synth_set(const FieldPoly& P, int c, int e, Rng& rng) {
    std::vector<IndexedPoint> I;
    for (int i = 1; i <= c + e; ++i) {
        u64 y = poly_eval(P, (u64)i);
        if (i > c) y = (y + 1 + rng.below(P.q - 1)) % P.q;
        I.push_back({i, (u64)i, y});
    }
    return I;
}

} // namespace

TEST_CASE("quality filter keeps scores at or above the floor") {
    std::vector<Minutia> pts = {{1, 10, 10, 0.8}, {1, 20, 20, 0.5}, {1, 30, 30, 0.49},
                                {1, 40, 40, -1.0}, {1, 50, 50, 0.0}};
    auto kept = quality_filter(pts, 0.5);
    REQUIRE(kept.size() == 2);
    CHECK(kept[0].quality == 0.8);
    CHECK(kept[1].quality == 0.5);

    SUBCASE("unqualified minutiae only pass with no floor") {
        CHECK(quality_filter(pts, 0.0).size() == 5);
        CHECK(quality_filter(pts, 0.01).size() == 3);
    }
    SUBCASE("empty input") { CHECK(quality_filter({}, 0.5).empty()); }
}

TEST_CASE("quality filter retention rate tracks the threshold") {
    Rng rng(11);
    std::vector<Minutia> pts;
    const int N = 4000;
    for (int i = 0; i < N; ++i) pts.push_back({1, i, i, rng.uniform(0.0, 1.0)});
    const double Q = 0.4;
    auto kept = quality_filter(pts, Q);
    const double p = 1.0 - Q;
    const double sd = std::sqrt(N * p * (1 - p));
    CHECK(std::abs((double)kept.size() - N * p) < 3 * sd);
}

TEST_CASE("exact template queries collect exactly the genuine positions") {
    Enrolled u = enroll_user(501);
    std::vector<FingerMatchInfo> info;
    auto I = collect_matches(u.er.vault, u.tmpl_by_finger, u.sp, &info);

    REQUIRE((int)I.size() == u.sp.t);
    CHECK(std::is_sorted(I.begin(), I.end(),
                         [](const IndexedPoint& a, const IndexedPoint& b) {
                             return a.position < b.position;
                         }));
    for (const IndexedPoint& p : I) {
        REQUIRE(p.position >= 1);
        REQUIRE(p.position <= u.sp.r);
        const VaultPoint& vp = u.er.vault.points[(std::size_t)p.position - 1];
        CHECK(p.x == index_encode(p.position, u.er.vault.q));
        CHECK(p.y == vp.y);
        CHECK(vp.y == poly_eval(u.er.secret, p.x)); // every collected point genuine
    }
    REQUIRE(info.size() == 2);
    for (const FingerMatchInfo& fi : info) {
        CHECK(!fi.gated);
        CHECK(fi.n_matches == u.sp.t / 2);
        CHECK(std::abs(fi.phi_deg) < 1.0);
    }
}

TEST_CASE("empty queries fail without decode attempts") {
    Enrolled u = enroll_user(502);
    Rng rng(1);
    auto out = verify(u.er.vault, {{}, {}}, u.sp, rng);
    CHECK(!out.success);
    CHECK(!out.recovered.has_value());
    CHECK(out.decode_trials == 0);
    CHECK(out.matched_positions.empty());
}

TEST_CASE("full verification succeeds on exact queries and recovers the secret") {
    Enrolled u = enroll_user(503);
    Rng rng(2);
    auto out = verify(u.er.vault, u.tmpl_by_finger, u.sp, rng);
    REQUIRE(out.success);
    REQUIRE(out.recovered.has_value());
    CHECK(out.recovered->coeffs == u.er.secret.coeffs);
    CHECK(out.decode_trials == 1); // clean agreement decodes in one shot
    CHECK((int)out.matched_positions.size() == u.sp.t);
    CHECK(commit(*out.recovered).hex() == u.er.vault.commitment.hex());
}

TEST_CASE("verification is deterministic per seed") {
    Enrolled u = enroll_user(504);
    Rng r1(77), r2(77);
    auto a = verify(u.er.vault, u.tmpl_by_finger, u.sp, r1);
    auto b = verify(u.er.vault, u.tmpl_by_finger, u.sp, r2);
    CHECK(a.success == b.success);
    CHECK(a.decode_trials == b.decode_trials);
    CHECK(a.matched_positions == b.matched_positions);
}

TEST_CASE("a heavily rotated finger is gated while the rest carry recovery") {
    Enrolled u = enroll_user(505);
    auto queries = u.tmpl_by_finger;
    queries[1] = rotate_points(queries[1], 20.0, u.sp.region.cx, u.sp.region.cy);

    std::vector<FingerMatchInfo> info;
    auto I = collect_matches(u.er.vault, queries, u.sp, &info);
    REQUIRE(info.size() == 2);
    CHECK(!info[0].gated);
    CHECK(info[1].gated);
    CHECK(std::abs(std::abs(info[1].phi_deg) - 20.0) < 3.0);

    // only finger-1 positions remain, all genuine
    REQUIRE((int)I.size() == u.sp.t / 2);
    for (const IndexedPoint& p : I)
        CHECK(u.er.vault.points[(std::size_t)p.position - 1].m.finger == 1);

    Rng rng(3);
    auto out = verify(u.er.vault, queries, u.sp, rng);
    CHECK(out.success); // 4 clean points still beat the k=3 threshold
    CHECK(out.recovered->coeffs == u.er.secret.coeffs);
}

TEST_CASE("recovery needs at least k collected points") {
    SystemParams sp = mini_params();
    Rng rng(4);
    FieldPoly P = random_poly(31, 4, rng);
    auto out = recover(synth_set(P, 3, 0, rng), 4, 31, commit(P), sp, rng);
    CHECK(!out.success);
    CHECK(out.decode_trials == 0);
}

TEST_CASE("stage one tolerates wrong points up to the agreement threshold") {
    SystemParams sp = mini_params();
    sp.decode_budget = 100000;
    Rng rng(5);
    const u64 q = 97;
    const int k = 4;
    FieldPoly P = random_poly(q, k, rng);
    const Commitment com = commit(P);

    SUBCASE("agreement at the threshold decodes in one trial") {
        // c=10, e=5: need ceil((15+4)/2) = 10 agreeing points
        auto out = recover(synth_set(P, 10, 5, rng), k, q, com, sp, rng);
        REQUIRE(out.success);
        CHECK(out.decode_trials == 1);
        CHECK(out.recovered->coeffs == P.coeffs);
    }
    SUBCASE("one below the threshold falls through to subset search") {
        auto out = recover(synth_set(P, 9, 6, rng), k, q, com, sp, rng);
        REQUIRE(out.success); // random k-subsets eventually hit all-genuine
        CHECK(out.decode_trials > 1);
        CHECK(out.recovered->coeffs == P.coeffs);
    }
    SUBCASE("exactly k clean points interpolate directly") {
        auto out = recover(synth_set(P, k, 0, rng), k, q, com, sp, rng);
        REQUIRE(out.success);
        CHECK(out.decode_trials == 1);
    }
}

TEST_CASE("a wide correct-count estimate skips the subset stage") {
    SystemParams sp = mini_params();
    sp.mc_estimate = 10; // w = min(15, 2*10-4) = 15 = |I|: nothing new to try
    Rng rng(6);
    const u64 q = 97;
    FieldPoly P = random_poly(q, 4, rng);
    auto out = recover(synth_set(P, 9, 6, rng), 4, q, commit(P), sp, rng);
    CHECK(!out.success);
    CHECK(out.decode_trials == 1);
}

TEST_CASE("subset stage trial count matches the hypergeometric odds") {
    // c = k = 3 genuine among |I| = 12: success only when a drawn 3-subset is
    // all-genuine, probability 1/C(12,3) = 1/220, so mean trials ~ 221.
    SystemParams sp = mini_params();
    sp.decode_budget = 1000000;
    Rng rng(7);
    const u64 q = 131;
    const int k = 3;
    const int runs = 200;
    double total = 0;
    int successes = 0;
    for (int rep = 0; rep < runs; ++rep) {
        FieldPoly P = random_poly(q, k, rng);
        auto out = recover(synth_set(P, k, 9, rng), k, q, commit(P), sp, rng);
        if (out.success) {
            ++successes;
            total += (double)out.decode_trials;
        }
    }
    REQUIRE(successes == runs);
    const double mean = total / runs;
    CHECK(mean > 221.0 / 2);
    CHECK(mean < 221.0 * 2);
}

TEST_CASE("an exhausted budget fails without a false accept") {
    SystemParams sp = mini_params();
    sp.decode_budget = 50;
    Rng rng(8);
    const u64 q = 131;
    FieldPoly P = random_poly(q, 3, rng);
    // 3 genuine in 60: p = 1/C(60,3) per trial; 50 trials essentially never hit
    auto out = recover(synth_set(P, 3, 57, rng), 3, q, commit(P), sp, rng);
    CHECK(!out.success);
    CHECK(!out.recovered.has_value());
    CHECK(out.decode_trials <= 51);
}

TEST_CASE("success always means the committed polynomial was recovered") {
    SystemParams sp = mini_params();
    Rng rng(9);
    const u64 q = 101;
    for (int rep = 0; rep < 40; ++rep) {
        FieldPoly P = random_poly(q, 4, rng);
        const int c = 4 + (int)rng.below(8);
        const int e = (int)rng.below(12);
        auto out = recover(synth_set(P, c, e, rng), 4, q, commit(P), sp, rng);
        if (out.success) {
            REQUIRE(out.recovered.has_value());
            CHECK(out.recovered->coeffs == P.coeffs);
        }
    }
}

TEST_CASE("query points below the quality floor never reach the matcher") {
    Enrolled u = enroll_user(506);
    auto queries = u.tmpl_by_finger;
    for (auto& finger : queries)
        for (Minutia& m : finger) m.quality = 0.1; // below the 0.3 default floor
    auto I = collect_matches(u.er.vault, queries, u.sp, nullptr);
    CHECK(I.empty());
}
