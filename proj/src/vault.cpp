#include "vault.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "error.hpp"
#include "synth.hpp"

namespace ffv {

void SystemParams::validate() const {
    if (f < 1) fail(errc::bad_argument, "f must be >= 1");
    if (u < 1) fail(errc::bad_argument, "u must be >= 1");
    if (!(k >= 1 && k < t && t < r)) fail(errc::bad_argument, "need k < t < r");
    const u64 qq = field_q();
    if (!is_prime(qq) || (u64)r > qq) fail(errc::bad_argument, "need prime q >= r");
    if (chi < 0 || (long long)chi * f > t) fail(errc::bad_argument, "need chi <= t/f");
    if (min_dist() < 1) fail(errc::bad_argument, "need d >= 1");
    if (delta_enroll <= 0 || delta_verify <= 0) fail(errc::bad_argument, "tolerances must be positive");
    if (quality_min < 0 || quality_min > 1) fail(errc::bad_argument, "Q must be in [0,1]");
    if (region.A < 1 || region.B < 1) fail(errc::bad_argument, "degenerate ellipse");
    if (frame_w < 1 || frame_h < 1) fail(errc::bad_argument, "degenerate frame");
    // packing bound: each finger must stay clearly below random-packing density
    const double cap = 0.45 * (double)region.area_px() / (double)v_delta_bruteforce(min_dist());
    if ((double)r / f >= cap)
        fail(errc::bad_argument, "r/f exceeds chaff capacity for this d and region");
}

// ---- vault serialization ---------------------------------------------------

static bool lex_less(const Minutia& p, const Minutia& q) {
    if (p.finger != q.finger) return p.finger < q.finger;
    if (p.a != q.a) return p.a < q.a;
    return p.b < q.b;
}

std::string Vault::serialize() const {
    std::ostringstream os;
    os << "FFV1\n";
    os << "q=" << q << " f=" << f << " r=" << r << " k=" << k << " d=" << d
       << " ell=" << region.cx << "," << region.cy << "," << region.A << ","
       << region.B << "\n";
    for (const VaultPoint& p : points)
        os << p.m.finger << " " << p.m.a << " " << p.m.b << " " << p.y << "\n";
    os << "H=" << commitment.hex() << "\n";
    return os.str();
}

void Vault::check_invariants() const {
    if (q == 0 || !is_prime(q)) fail(errc::malformed_vault, "q is not prime");
    if (r < 1 || (u64)r > q) fail(errc::malformed_vault, "need 1 <= r <= q");
    if (f < 1) fail(errc::malformed_vault, "bad finger count");
    if (k < 1 || k >= r) fail(errc::malformed_vault, "need 1 <= k < r");
    if (d < 1) fail(errc::malformed_vault, "need d >= 1");
    if ((int)points.size() != r) fail(errc::malformed_vault, "point count != r");
    const long long d2 = (long long)d * d;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const Minutia& m = points[i].m;
        if (m.finger < 1 || m.finger > f) fail(errc::malformed_vault, "finger out of range");
        if (!region.contains(m.a, m.b)) fail(errc::malformed_vault, "point outside region");
        if (points[i].y >= q) fail(errc::malformed_vault, "y out of field");
        if (i > 0 && !lex_less(points[i - 1].m, m))
            fail(errc::malformed_vault, "points not in strict lexicographic order");
        for (std::size_t j = i + 1; j < points.size(); ++j) {
            if (points[j].m.finger != m.finger) break;
            long long da = points[j].m.a - m.a, db = points[j].m.b - m.b;
            if (da * da + db * db < d2)
                fail(errc::malformed_vault, "same-finger points closer than d");
        }
    }
}

Vault Vault::parse(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line) || line != "FFV1")
        fail(errc::malformed_vault, "missing FFV1 magic");
    if (!std::getline(is, line)) fail(errc::malformed_vault, "missing header line");

    Vault v;
    int cx, cy, A, B;
    char comma;
    {
        std::istringstream hs(line);
        std::string tok;
        auto want = [&](const char* key) {
            if (!(hs >> tok) || tok.rfind(key, 0) != 0)
                fail(errc::malformed_vault, std::string("expected ") + key + " in header");
            return tok.substr(std::string(key).size());
        };
        try {
            v.q = std::stoull(want("q="));
            v.f = std::stoi(want("f="));
            v.r = std::stoi(want("r="));
            v.k = std::stoi(want("k="));
            v.d = std::stoi(want("d="));
        } catch (const std::exception&) {
            fail(errc::malformed_vault, "bad header number");
        }
        std::string ell = want("ell=");
        std::istringstream es(ell);
        if (!(es >> cx >> comma >> cy >> comma >> A >> comma >> B) || comma != ',')
            fail(errc::malformed_vault, "bad ellipse spec");
        v.region = Ellipse{cx, cy, A, B};
        if (hs >> tok) fail(errc::malformed_vault, "trailing header tokens");
    }
    if (v.r < 1 || v.r > 1000000) fail(errc::malformed_vault, "unreasonable r");
    for (int i = 0; i < v.r; ++i) {
        if (!std::getline(is, line)) fail(errc::malformed_vault, "truncated point list");
        std::istringstream ps(line);
        VaultPoint p;
        long long y;
        if (!(ps >> p.m.finger >> p.m.a >> p.m.b >> y) || y < 0)
            fail(errc::malformed_vault, "bad point line");
        std::string rest;
        if (ps >> rest) fail(errc::malformed_vault, "trailing point tokens");
        p.y = (u64)y;
        v.points.push_back(p);
    }
    if (!std::getline(is, line) || line.rfind("H=", 0) != 0)
        fail(errc::malformed_vault, "missing commitment line");
    auto c = Commitment::from_hex(line.substr(2));
    if (!c) fail(errc::malformed_vault, "bad commitment hex");
    v.commitment = *c;
    if (std::getline(is, line) && !line.empty())
        fail(errc::malformed_vault, "trailing data after commitment");
    v.check_invariants();
    return v;
}

// ---- enrollment ------------------------------------------------------------

std::vector<Minutia> reliable_minutiae(const std::vector<std::vector<Minutia>>& impressions,
                                       const SystemParams& sp, Rng& rng) {
    if (impressions.empty()) fail(errc::bad_argument, "need at least one impression");
    const std::vector<Minutia>& ref = impressions[0];
    const MatchParams mp = sp.matcher_params(sp.delta_enroll);

    // sum of matched locations (mapped into impression 1's frame) per ref index
    std::vector<double> sx(ref.size()), sy(ref.size());
    std::vector<int> seen(ref.size(), 0);
    for (std::size_t i = 0; i < ref.size(); ++i) {
        sx[i] = ref[i].a;
        sy[i] = ref[i].b;
    }
    for (std::size_t j = 1; j < impressions.size(); ++j) {
        MatchResult res = match(ref, impressions[j], mp);
        for (auto [ri, qi] : res.pairs) {
            const Minutia& m = impressions[j][(std::size_t)qi];
            Vec2 p = res.iso.apply({(double)m.a, (double)m.b});
            sx[(std::size_t)ri] += p.x;
            sy[(std::size_t)ri] += p.y;
            seen[(std::size_t)ri]++;
        }
    }

    const int need = (int)impressions.size() - 1;
    std::vector<Minutia> out;
    for (std::size_t i = 0; i < ref.size(); ++i) {
        if (seen[i] != need) continue;
        Minutia m = ref[i];
        m.a = (int)std::lround(sx[i] / impressions.size());
        m.b = (int)std::lround(sy[i] / impressions.size());
        m.quality = -1.0;
        if (sp.region.contains(m.a, m.b)) out.push_back(m);
    }

    // thin to pairwise min distance, removing a random point of each
    // violating pair until clean
    const long long d2 = (long long)sp.min_dist() * sp.min_dist();
    for (bool dirty = true; dirty;) {
        dirty = false;
        for (std::size_t i = 0; i < out.size() && !dirty; ++i)
            for (std::size_t j = i + 1; j < out.size() && !dirty; ++j) {
                long long da = out[i].a - out[j].a, db = out[i].b - out[j].b;
                if (da * da + db * db < d2) {
                    out.erase(out.begin() + (std::ptrdiff_t)(rng.bernoulli(0.5) ? i : j));
                    dirty = true;
                }
            }
    }
    return out;
}

std::vector<Minutia> select_template(const std::vector<std::vector<Minutia>>& per_finger_pool,
                                     const SystemParams& sp, Rng& rng) {
    if ((int)per_finger_pool.size() != sp.f)
        fail(errc::bad_argument, "pool must have one entry per finger");
    std::vector<Minutia> pool;
    for (int th = 0; th < sp.f; ++th) {
        if ((int)per_finger_pool[(std::size_t)th].size() < sp.chi)
            fail(errc::finger_below_chi,
                 "finger " + std::to_string(th + 1) + " has fewer than chi reliable minutiae",
                 th + 1);
        for (const Minutia& m : per_finger_pool[(std::size_t)th]) {
            Minutia c = m;
            c.finger = th + 1;
            pool.push_back(c);
        }
    }
    if ((int)pool.size() < sp.t)
        fail(errc::not_enough_reliable, "not enough reliable minutiae");

    // uniform t-subset conditioned on >= chi per finger, by rejection
    std::vector<int> idx(pool.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = (int)i;
    std::vector<int> count((std::size_t)sp.f);
    for (long attempt = 0; attempt < 1000000; ++attempt) {
        // partial Fisher-Yates: first t entries are a uniform t-subset
        for (int i = 0; i < sp.t; ++i) {
            std::size_t j = (std::size_t)i + (std::size_t)rng.below(idx.size() - (std::size_t)i);
            std::swap(idx[(std::size_t)i], idx[j]);
        }
        std::fill(count.begin(), count.end(), 0);
        for (int i = 0; i < sp.t; ++i) count[(std::size_t)pool[(std::size_t)idx[(std::size_t)i]].finger - 1]++;
        if (std::all_of(count.begin(), count.end(), [&](int c) { return c >= sp.chi; })) {
            std::vector<Minutia> tmpl;
            tmpl.reserve((std::size_t)sp.t);
            for (int i = 0; i < sp.t; ++i) tmpl.push_back(pool[(std::size_t)idx[(std::size_t)i]]);
            std::sort(tmpl.begin(), tmpl.end(), lex_less);
            return tmpl;
        }
    }
    fail(errc::infeasible, "template selection rejection sampling exhausted");
}

std::vector<Minutia> add_chaff(const std::vector<Minutia>& tmpl, const SystemParams& sp,
                               Rng& rng) {
    const int want = sp.r - (int)tmpl.size();
    if (want < 0) fail(errc::bad_argument, "template larger than vault");
    const long long d2 = (long long)sp.min_dist() * sp.min_dist();
    std::vector<Minutia> placed = tmpl;
    std::vector<Minutia> chaff;
    int rejects = 0;
    while ((int)chaff.size() < want) {
        Minutia c = random_point_in_ellipse(sp.region, rng);
        c.finger = (int)rng.range(1, sp.f);
        bool ok = true;
        for (const Minutia& o : placed) {
            if (o.finger != c.finger) continue;
            long long da = c.a - o.a, db = c.b - o.b;
            if (da * da + db * db < d2) { ok = false; break; }
        }
        if (ok) {
            chaff.push_back(c);
            placed.push_back(c);
            rejects = 0;
        } else if (++rejects >= sp.chaff_budget) {
            fail(errc::placement_failure, "chaff placement exhausted rejection budget");
        }
    }
    return chaff;
}

Vault build_vault(const std::vector<Minutia>& tmpl, const std::vector<Minutia>& chaff,
                  const FieldPoly& P, const SystemParams& sp, Rng& rng) {
    if ((int)(tmpl.size() + chaff.size()) != sp.r)
        fail(errc::bad_argument, "template + chaff must have r points");
    const u64 q = sp.field_q();
    if (P.q != q || P.k() != sp.k) fail(errc::bad_argument, "polynomial does not fit params");

    struct Tagged {
        Minutia m;
        bool genuine;
    };
    std::vector<Tagged> all;
    all.reserve((std::size_t)sp.r);
    for (const Minutia& m : tmpl) all.push_back({m, true});
    for (const Minutia& m : chaff) all.push_back({m, false});
    std::sort(all.begin(), all.end(),
              [](const Tagged& x, const Tagged& y) { return lex_less(x.m, y.m); });
    for (std::size_t i = 1; i < all.size(); ++i) {
        const Minutia &p = all[i - 1].m, &c = all[i].m;
        if (p.finger == c.finger && p.a == c.a && p.b == c.b)
            fail(errc::duplicate_point, "two vault points share a location");
    }

    Vault v;
    v.q = q;
    v.f = sp.f;
    v.r = sp.r;
    v.k = sp.k;
    v.d = sp.min_dist();
    v.region = sp.region;
    v.points.reserve(all.size());
    for (std::size_t i = 0; i < all.size(); ++i) {
        const u64 px = poly_eval(P, index_encode((int)i + 1, q));
        VaultPoint vp;
        vp.m = all[i].m;
        vp.m.quality = -1.0;
        if (all[i].genuine) {
            vp.y = px;
        } else {
            u64 y = rng.below(q - 1); // uniform over F_q minus the curve point
            vp.y = y >= px ? y + 1 : y;
        }
        v.points.push_back(vp);
    }
    v.commitment = commit(P);
    return v;
}

EnrollResult enroll(const std::vector<std::vector<std::vector<Minutia>>>& impressions,
                    const SystemParams& sp, Rng& rng) {
    sp.validate();
    if ((int)impressions.size() != sp.f)
        fail(errc::bad_argument, "need impressions for every finger");

    std::vector<std::vector<Minutia>> pools;
    for (int th = 0; th < sp.f; ++th) {
        const auto& caps = impressions[(std::size_t)th];
        if ((int)caps.size() != sp.u)
            fail(errc::bad_argument, "need u impressions per finger");
        std::vector<std::vector<Minutia>> aligned = caps;
        if (sp.prealign_points) {
            for (auto& imp : aligned) {
                if (imp.empty()) continue;
                double rot = estimate_point_rotation(imp, sp.region, sp.frame_w, sp.frame_h,
                                                     sp.prealign);
                imp = rotate_points(imp, rot, sp.region.cx, sp.region.cy);
            }
        }
        pools.push_back(reliable_minutiae(aligned, sp, rng));
    }

    std::vector<Minutia> tmpl = select_template(pools, sp, rng);
    const u64 q = sp.field_q();
    FieldPoly P{q, {}};
    P.coeffs.resize((std::size_t)sp.k);
    for (auto& c : P.coeffs) c = rng.below(q);
    std::vector<Minutia> chaff = add_chaff(tmpl, sp, rng);
    Vault v = build_vault(tmpl, chaff, P, sp, rng);
    return {std::move(v), std::move(P)};
}

} // namespace ffv
