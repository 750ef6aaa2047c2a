#pragma once

// Synchronization of schedule families: joint densities of shifted event sets
// and the greedy minimal-shift search. The search fixes l_0 = 0 and walks the
// stages in order, taking for each family the smallest shift whose running
// joint density stays above the acceptance threshold.

#include <cmath>
#include <vector>

#include "ergokit/common.hpp"
#include "ergokit/schedule.hpp"
#include "ergokit/schedules.hpp"
#include "ergokit/systems.hpp"

namespace ergokit {

// density of {n <= H' : n + shift_k in U_k for all k} at the shared window
// H' = min_k (horizon_k - shift_k); exact as a count over the window
inline Rational joint_density(const std::vector<EventSet>& us, const std::vector<u64>& shifts) {
    require(!us.empty(), "joint density: need at least one set");
    require(us.size() == shifts.size(), "joint density: one shift per set");
    u64 window = ~u64(0);
    for (std::size_t k = 0; k < us.size(); ++k) {
        require(shifts[k] <= us[k].horizon(), "joint density: shift exceeds horizon");
        window = std::min(window, us[k].horizon() - shifts[k]);
    }
    require(window >= 1, "joint density: empty shared window");
    u64 cnt = 0;
    for (u64 n = 1; n <= window; ++n) {
        bool all = true;
        for (std::size_t k = 0; k < us.size() && all; ++k) all = us[k].contains(n + shifts[k]);
        cnt += all;
    }
    return Rational{i64(cnt), i64(window)};
}

struct SyncTraceEntry {
    u64 stage = 0;
    u64 shift = 0;
    double density = 0;
    bool accepted = false;
};

struct SyncResult {
    bool found = false;
    u64 failed_stage = 0;           // first stage with no feasible shift
    std::vector<u64> shifts;        // per family; shifts[0] == 0
    double theta_hat = 0;           // joint density at the accepted shifts
    double theta_min = 0;           // final acceptance threshold that was in force
    std::vector<double> marginals;  // per family at its shift, window [1, H]
    std::vector<double> premarginals;  // unshifted; drive the default threshold
    std::vector<SyncTraceEntry> trace;
    u64 horizon = 0, l_max = 0, samples = 0;
};

// families_per_sample[s][k]: the k-th schedule evaluated at the s-th sampled
// point, each with horizon >= H + L_max. theta_min = 0 picks the data-driven
// default: half the product of the unshifted marginal estimates up to the
// current stage (independence would put the joint at the full product).
inline SyncResult sync_search_sets(const std::vector<std::vector<EventSet>>& families_per_sample,
                                   u64 H, u64 L_max, double theta_min = 0.0) {
    require(!families_per_sample.empty(), "sync search: need samples");
    std::size_t K = families_per_sample.front().size();
    require(K >= 1, "sync search: need at least one family");
    for (const auto& fam : families_per_sample) {
        require(fam.size() == K, "sync search: ragged family lists");
        for (const auto& u : fam)
            require(u.horizon() >= H + L_max, "sync search: horizon too short for the shifts");
    }
    u64 S = families_per_sample.size();
    SyncResult res;
    res.horizon = H;
    res.l_max = L_max;
    res.samples = S;
    res.shifts.assign(K, 0);

    auto window_density = [&](const std::vector<EventSet>& vs) {
        u64 cnt = 0;
        for (const auto& v : vs) cnt += v.count_prefix(H);
        return double(cnt) / double(S * H);
    };

    for (std::size_t k = 0; k < K; ++k) {
        double pm = 0;
        for (const auto& fam : families_per_sample) pm += double(fam[k].count_prefix(H));
        res.premarginals.push_back(pm / double(S * H));
    }

    // running intersections, one per sample, always at horizon >= H
    std::vector<EventSet> running;
    running.reserve(S);
    for (const auto& fam : families_per_sample) running.push_back(fam[0]);
    res.marginals.push_back(window_density(running));
    res.theta_hat = res.marginals[0];

    double product = res.premarginals[0];
    for (std::size_t k = 1; k < K; ++k) {
        product *= res.premarginals[k];
        double thr = theta_min > 0.0 ? theta_min : 0.5 * product;
        res.theta_min = thr;
        bool staged = false;
        for (u64 ell = 0; ell <= L_max && !staged; ++ell) {
            std::vector<EventSet> next;
            next.reserve(S);
            for (u64 s = 0; s < S; ++s)
                next.push_back(combine(running[s], shift_left(families_per_sample[s][k], ell),
                                       SetOp::intersect));
            double dens = window_density(next);
            staged = dens > thr;
            res.trace.push_back({k, ell, dens, staged});
            if (staged) {
                res.shifts[k] = ell;
                res.theta_hat = dens;
                double mg = 0;
                for (u64 s = 0; s < S; ++s)
                    mg += double(shift_left(families_per_sample[s][k], ell).count_prefix(H));
                res.marginals.push_back(mg / double(S * H));
                running = std::move(next);
            }
        }
        if (!staged) {
            res.failed_stage = k;
            return res;
        }
    }
    res.found = true;
    return res;
}

// schedule-driven front end: sample points, build one trace per family (each
// family brings its own target cylinders and potential), evaluate, search
struct ScheduleFamily {
    ScheduleAssignment rule;
    std::vector<CylinderSpec> target;
    std::vector<double> potential;  // indexed by symbol; may be empty for hitting rules
};

inline SyncResult sync_search(const ShiftSystem& sys, const std::vector<ScheduleFamily>& fams,
                              u64 samples, u64 H, u64 L_max, double theta_min, u64 seed,
                              u64 threads = 0) {
    require(!fams.empty(), "sync search: need families");
    require(samples >= 1, "sync search: need samples");
    u64 need = H + L_max;
    i64 maxc = 1;
    for (const auto& fam : fams)
        for (const auto& c : fam.target) maxc = std::max(maxc, c.coordinate);
    std::vector<std::vector<EventSet>> sets(samples);
    parallel_for(samples, threads, [&](u64 s) {
        Rng rng(seed, s);
        auto x = sample_point(sys, rng, need + u64(maxc) + 1, 0);
        auto& row = sets[s];
        row.reserve(fams.size());
        for (const auto& fam : fams) {
            auto tr = shift_trace(x, need, fam.target, fam.potential);
            row.push_back(fam.rule.evaluate(tr, 0, need));
        }
    });
    return sync_search_sets(sets, H, L_max, theta_min);
}

// split-window agreement: densities on (0, H/2] and (H/2, H] of one set
struct SegmentAgreement {
    double first_half = 0, second_half = 0, sigma = 0;
    bool agree = false;
};

inline SegmentAgreement segment_agreement(const EventSet& v, u64 H) {
    require(H >= 2 && H <= v.horizon(), "segment agreement: bad window");
    u64 half = H / 2;
    SegmentAgreement out;
    out.first_half = double(v.count_prefix(half)) / double(half);
    out.second_half = double(v.count_prefix(2 * half) - v.count_prefix(half)) / double(half);
    out.sigma = binomial_stderr(out.first_half, half) + binomial_stderr(out.second_half, half);
    out.agree = std::fabs(out.first_half - out.second_half) <= 3.0 * out.sigma + 1e-12;
    return out;
}

}  // namespace ergokit
