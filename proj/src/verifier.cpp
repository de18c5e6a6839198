#include "verifier.hpp"

#include <algorithm>

#include "error.hpp"

namespace ffv {

std::vector<Minutia> quality_filter(const std::vector<Minutia>& query, double Q) {
    std::vector<Minutia> out;
    for (const Minutia& m : query) {
        if (m.has_quality() ? m.quality >= Q : Q == 0.0) out.push_back(m);
    }
    return out;
}

std::vector<IndexedPoint> collect_matches(const Vault& vault,
                                          const std::vector<std::vector<Minutia>>& queries,
                                          const SystemParams& sp,
                                          std::vector<FingerMatchInfo>* info) {
    if ((int)queries.size() != vault.f)
        fail(errc::bad_argument, "need one query point set per finger");
    const MatchParams mp = sp.matcher_params(sp.delta_verify);

    std::vector<IndexedPoint> I;
    std::size_t lo = 0;
    for (int th = 1; th <= vault.f; ++th) {
        std::size_t hi = lo;
        while (hi < vault.points.size() && vault.points[hi].m.finger == th) ++hi;
        std::vector<Minutia> ref;
        ref.reserve(hi - lo);
        for (std::size_t i = lo; i < hi; ++i) ref.push_back(vault.points[i].m);

        std::vector<Minutia> qry = quality_filter(queries[(std::size_t)th - 1], sp.quality_min);
        MatchResult res = match(ref, qry, mp);
        const bool pass = rotation_gate(res, sp.rho_deg);
        if (info)
            info->push_back({th, (int)res.pairs.size(), norm_angle_deg(res.iso.phi_deg), !pass});
        if (pass) {
            for (auto [ri, qi] : res.pairs) {
                (void)qi;
                const int position = (int)(lo + (std::size_t)ri) + 1;
                I.push_back({position, index_encode(position, vault.q),
                             vault.points[lo + (std::size_t)ri].y});
            }
        }
        lo = hi;
    }
    std::sort(I.begin(), I.end(),
              [](const IndexedPoint& a, const IndexedPoint& b) { return a.position < b.position; });
    return I;
}

VerifyOutcome recover(const std::vector<IndexedPoint>& I, int k, u64 q,
                      const Commitment& commitment, const SystemParams& sp, Rng& rng) {
    VerifyOutcome out;
    if ((int)I.size() < k) return out;

    std::vector<FieldPoint> all;
    all.reserve(I.size());
    for (const IndexedPoint& p : I) all.push_back({p.x, p.y});

    // stage 1: decode everything at once
    out.decode_trials = 1;
    if (auto cand = rs_decode(all, k, q); cand && verify_commit(*cand, commitment)) {
        out.success = true;
        out.recovered = std::move(cand);
        return out;
    }

    // stage 2: random subsets of size w
    const int mc = sp.mc_estimate > 0 ? sp.mc_estimate : k;
    const int w = std::min((int)I.size(), std::max(k, 2 * mc - k));
    if (w == (int)I.size()) return out; // only one subset of this size, already tried

    std::vector<int> idx(I.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = (int)i;
    std::vector<FieldPoint> sub((std::size_t)w);
    for (u64 trial = 0; trial < sp.decode_budget; ++trial) {
        for (int i = 0; i < w; ++i) {
            std::size_t j = (std::size_t)i + (std::size_t)rng.below(idx.size() - (std::size_t)i);
            std::swap(idx[(std::size_t)i], idx[j]);
            sub[(std::size_t)i] = all[(std::size_t)idx[(std::size_t)i]];
        }
        ++out.decode_trials;
        if (auto cand = rs_decode(sub, k, q); cand && verify_commit(*cand, commitment)) {
            out.success = true;
            out.recovered = std::move(cand);
            return out;
        }
    }
    return out;
}

VerifyOutcome verify(const Vault& vault, const std::vector<std::vector<Minutia>>& queries,
                     const SystemParams& sp, Rng& rng) {
    std::vector<std::vector<Minutia>> aligned = queries;
    if (sp.prealign_points) {
        for (auto& qry : aligned) {
            if (qry.empty()) continue;
            double rot = estimate_point_rotation(qry, vault.region, sp.frame_w, sp.frame_h,
                                                 sp.prealign);
            qry = rotate_points(qry, rot, vault.region.cx, vault.region.cy);
        }
    }
    std::vector<FingerMatchInfo> info;
    std::vector<IndexedPoint> I = collect_matches(vault, aligned, sp, &info);
    VerifyOutcome out = recover(I, vault.k, vault.q, vault.commitment, sp, rng);
    out.per_finger = std::move(info);
    out.matched_positions.reserve(I.size());
    for (const IndexedPoint& p : I) out.matched_positions.push_back(p.position);
    return out;
}

} // namespace ffv
