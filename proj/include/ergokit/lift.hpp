#pragma once

// Empirical lifting diagnostics for induced maps: return-time statistics and
// the reciprocal identity theta * mean-return = 1, liftability evidence from
// mean-return growth curves, orbitwise tail sums and residues, and dyadic
// window growth for cocycles with positive drift.

#include <algorithm>
#include <cmath>
#include <vector>

#include "ergokit/cocycle.hpp"
#include "ergokit/common.hpp"

namespace ergokit {

// ----------------------------------------------------------- return counting

struct ReturnStats {
    u64 horizon = 0;
    u64 count = 0;         // returns completed strictly before the horizon
    u64 sum_before = 0;    // sum of the first `count` return times, < horizon
    u64 sum_through = 0;   // one more return, >= horizon
    double theta_hat = 0;  // count / horizon
    double mean_return = 0;
    double product = 0;  // theta_hat * mean_return
    bool bracketing_ok = false;
    bool escaped = false;  // return stream ended before the horizon was crossed
};

inline ReturnStats return_stats(const std::vector<u64>& returns, u64 n) {
    require(n >= 1, "return stats: horizon must be positive");
    ReturnStats st;
    st.horizon = n;
    u64 acc = 0;
    for (u64 r : returns) {
        require(r >= 1, "return stats: return times are positive");
        if (acc + r >= n) {
            st.sum_before = acc;
            st.sum_through = acc + r;
            st.bracketing_ok = acc < n && n <= acc + r;
            st.theta_hat = double(st.count) / double(n);
            if (st.count) st.mean_return = double(acc) / double(st.count);
            st.product = st.theta_hat * st.mean_return;
            return st;
        }
        acc += r;
        ++st.count;
    }
    st.escaped = true;
    st.sum_before = acc;
    return st;
}

// first-hit return stream on the Bernoulli(p) shift, streamed so that the
// horizon can be large; each return is the gap to the next 1-symbol
inline ReturnStats first_hit_return_stats(double p, u64 n, u64 seed, u64 stream = 0) {
    require(p > 0.0 && p <= 1.0, "return stats: p must be in (0,1]");
    Rng rng(seed, stream);
    ReturnStats st;
    st.horizon = n;
    u64 acc = 0;
    while (true) {
        u64 r = 1;
        while (!rng.bernoulli(p)) ++r;
        if (acc + r >= n) {
            st.sum_before = acc;
            st.sum_through = acc + r;
            st.bracketing_ok = acc < n && n <= acc + r;
            st.theta_hat = double(st.count) / double(n);
            if (st.count) st.mean_return = double(acc) / double(st.count);
            st.product = st.theta_hat * st.mean_return;
            return st;
        }
        acc += r;
        ++st.count;
    }
}

// ------------------------------------------------------- liftability evidence

enum class LiftVerdict { liftable, not_liftable, inconclusive };

struct LiftCurve {
    std::vector<u64> checkpoints;     // return counts m on a doubling grid
    std::vector<double> mean_return;  // cross-sample median of (1/m) sum R
    std::vector<double> theta_hat;    // cross-sample median of m / sum R
    std::vector<u64> alive;           // samples still running at the checkpoint
};

struct LiftabilityParams {
    double grow_tol = 0.01;  // per-doubling relative slope: flat curve
    double grow_bad = 0.025;  // and clearly unbounded
    double theta_min = 0.01;
};

struct LiftabilityReport {
    LiftVerdict verdict = LiftVerdict::inconclusive;
    double growth = 0;       // per-doubling relative slope over three doublings
    double theta_final = 0;  // averaged theta at the read-off checkpoint
    u64 read_checkpoint = 0;
    LiftCurve curve;
    u64 samples = 0;
    u64 truncated = 0;  // samples whose return stream ended early
};

// Curve statistics are cross-sample medians: with a heavy-tailed return time
// the cross-sample mean saturates at the (precision-truncated) expectation
// right away, while the median of the per-sample running means keeps the
// characteristic growth. The verdict is read at the last checkpoint that at
// least 90% of the samples reach: right at the survival boundary the alive
// streams are exactly those with small partial sums, which caps the curve.
inline LiftabilityReport liftability_from_streams(const std::vector<std::vector<u64>>& streams,
                                                  const LiftabilityParams& prm = {}) {
    require(!streams.empty(), "liftability: need at least one sample");
    u64 longest = 0;
    for (const auto& s : streams) longest = std::max<u64>(longest, s.size());
    require(longest >= 16, "liftability: streams too short for a growth curve");
    LiftabilityReport rep;
    rep.samples = streams.size();
    for (u64 m = 16; m <= longest; m *= 2) rep.curve.checkpoints.push_back(m);
    auto median = [](std::vector<double>& v) {
        std::size_t mid = v.size() / 2;
        std::nth_element(v.begin(), v.begin() + mid, v.end());
        double hi = v[mid];
        if (v.size() % 2 == 0) {
            std::nth_element(v.begin(), v.begin() + mid - 1, v.begin() + mid);
            return (hi + v[mid - 1]) / 2.0;
        }
        return hi;
    };
    for (u64 m : rep.curve.checkpoints) {
        std::vector<double> mr, th;
        for (const auto& s : streams) {
            if (s.size() < m) continue;
            u64 acc = 0;
            for (u64 j = 0; j < m; ++j) acc += s[j];
            mr.push_back(double(acc) / double(m));
            th.push_back(double(m) / double(acc));
        }
        if (mr.empty()) break;
        rep.curve.alive.push_back(mr.size());
        rep.curve.mean_return.push_back(median(mr));
        rep.curve.theta_hat.push_back(median(th));
    }
    rep.curve.checkpoints.resize(rep.curve.alive.size());
    for (const auto& s : streams)
        if (s.size() < longest) ++rep.truncated;
    std::size_t last = rep.curve.alive.size();
    while (last-- > 0)
        if (10 * rep.curve.alive[last] >= 9 * rep.samples) break;
    require(last + 1 > 0 && last >= 3, "liftability: too few well-populated checkpoints");
    rep.read_checkpoint = rep.curve.checkpoints[last];
    rep.growth =
        (rep.curve.mean_return[last] - rep.curve.mean_return[last - 3]) /
        (3.0 * rep.curve.mean_return[last]);
    rep.theta_final = rep.curve.theta_hat[last];
    if (rep.growth >= prm.grow_bad)
        rep.verdict = LiftVerdict::not_liftable;
    else if (rep.growth <= prm.grow_tol && rep.theta_final >= prm.theta_min)
        rep.verdict = LiftVerdict::liftable;
    return rep;
}

// geometric first-hit returns: evidence for liftability at any p > 0
inline LiftabilityReport liftability_first_hit(double p, u64 samples, u64 returns_per_sample,
                                               u64 seed, u64 threads = 0,
                                               const LiftabilityParams& prm = {}) {
    require(p > 0.0 && p <= 1.0, "liftability: p must be in (0,1]");
    require(samples >= 1, "liftability: need samples");
    std::vector<std::vector<u64>> streams(samples);
    parallel_for(samples, threads, [&](u64 s) {
        Rng rng(seed, s);
        auto& out = streams[s];
        out.reserve(returns_per_sample);
        for (u64 i = 0; i < returns_per_sample; ++i) {
            u64 r = 1;
            while (!rng.bernoulli(p)) ++r;
            out.push_back(r);
        }
    });
    return liftability_from_streams(streams, prm);
}

// doubling map with R = 2^n on C_n = [2^-(n+1), 2^-n): the induced orbit is a
// cursor walk over the binary expansion of a Lebesgue-random point, since each
// application of f^{2^n} discards exactly 2^n leading bits. Streams stop when
// the expansion runs out; the mean-return curve then grows without bound.
inline LiftabilityReport liftability_dyadic_tower(u64 samples, u64 bits, u64 seed,
                                                  u64 threads = 0,
                                                  const LiftabilityParams& prm = {}) {
    require(samples >= 1, "liftability: need samples");
    require(bits >= 1024 && bits % 64 == 0, "liftability: bits must be a multiple of 64, >= 1024");
    std::vector<std::vector<u64>> streams(samples);
    parallel_for(samples, threads, [&](u64 s) {
        Rng rng(seed, s);
        std::vector<u64> w(bits / 64);
        for (auto& x : w) x = rng.next_u64();
        auto bit = [&](u64 i) { return (w[i >> 6] >> (63 - (i & 63))) & 1; };
        u64 pos = 0;
        auto& out = streams[s];
        while (true) {
            u64 g = 0;
            while (pos + g < bits && bit(pos + g) == 0) ++g;
            if (pos + g >= bits || g >= 63) break;
            u64 r = u64(1) << g;
            if (pos + r >= bits) break;
            out.push_back(r);
            pos += r;
        }
    });
    return liftability_from_streams(streams, prm);
}

// ------------------------------------------------------------ tails, residues

struct TailReport {
    std::vector<u64> thresholds;
    std::vector<double> dplus;  // orbit density of {j : R(f^j x) >= n}
    double tail_sum = 0;        // sum over all n <= max threshold (partial I_f(R))
    double residue = 0;         // density at the largest threshold
    double plateau_spread = 0;  // max - min over the trailing plateau window
    u64 plateau_window = 0;
    u64 horizon = 0;
};

inline TailReport tail_and_residue(const std::vector<u64>& orbit_returns,
                                   const std::vector<u64>& thresholds, u64 plateau_window = 4) {
    require(!orbit_returns.empty(), "tail report: empty orbit");
    require(!thresholds.empty(), "tail report: need thresholds");
    for (std::size_t i = 1; i < thresholds.size(); ++i)
        require(thresholds[i] > thresholds[i - 1], "tail report: thresholds must increase");
    require(thresholds.front() >= 1, "tail report: thresholds start at 1");
    TailReport rep;
    rep.thresholds = thresholds;
    rep.horizon = orbit_returns.size();
    u64 nmax = thresholds.back();
    // exact counts via a clamped histogram and suffix sums
    std::vector<u64> hist(nmax + 2, 0);
    u64 clipped_sum = 0;
    for (u64 r : orbit_returns) {
        require(r >= 1, "tail report: return times are positive");
        ++hist[std::min(r, nmax + 1)];
        clipped_sum += std::min(r, nmax);
    }
    std::vector<u64> suffix(nmax + 3, 0);
    for (u64 n = nmax + 1; n >= 1; --n) suffix[n] = suffix[n + 1] + hist[n];
    double H = double(rep.horizon);
    for (u64 n : thresholds) rep.dplus.push_back(double(suffix[n]) / H);
    // sum over every integer threshold 1..nmax collapses to a clipped mean
    rep.tail_sum = double(clipped_sum) / H;
    rep.residue = rep.dplus.back();
    u64 win = std::min<u64>(plateau_window, rep.dplus.size());
    rep.plateau_window = win;
    double lo = rep.dplus.back(), hi = rep.dplus.back();
    for (u64 i = 0; i < win; ++i) {
        double v = rep.dplus[rep.dplus.size() - 1 - i];
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    rep.plateau_spread = hi - lo;
    return rep;
}

// R(f^j x) for the first-hit time on a sampled Bernoulli(p) orbit; O(H) via a
// right-to-left next-one table over one symbol stream
inline std::vector<u64> first_hit_orbit_returns(double p, u64 H, u64 seed, u64 stream = 0,
                                                u64 slack = 4096) {
    require(p > 0.0 && p < 1.0, "orbit returns: p must be in (0,1)");
    require(H >= 1, "orbit returns: empty orbit");
    Rng rng(seed, stream);
    u64 total = H + slack;
    std::vector<uint8_t> s(total);
    for (auto& b : s) b = rng.bernoulli(p) ? 1 : 0;
    std::vector<u64> next1(total + 1, total);
    for (u64 i = total; i-- > 0;) next1[i] = s[i] ? i : next1[i + 1];
    std::vector<u64> out(H);
    for (u64 j = 0; j < H; ++j) {
        require(next1[j] < total, "orbit returns: no hit within the slack buffer");
        out[j] = next1[j] - j + 1;
    }
    return out;
}

// ---------------------------------------------------- tail-integral identity

struct TailIntegralReport {
    double birkhoff = 0;    // (1/H) sum |phi(f^j x)|
    double staircase = 0;   // integral of the level-set density curve
    double discrepancy = 0;
    u64 horizon = 0;
};

// for a finite orbit both sides are the same finite sum, so the discrepancy
// only measures floating-point error; the content is in how the right side is
// assembled (exact staircase over the observed levels, no quadrature grid)
inline TailIntegralReport tail_integral_identity(const std::vector<double>& values) {
    require(!values.empty(), "tail integral: empty orbit");
    TailIntegralReport rep;
    rep.horizon = values.size();
    std::vector<double> a(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        a[i] = std::fabs(values[i]);
        rep.birkhoff += a[i];
    }
    rep.birkhoff /= double(a.size());
    std::sort(a.begin(), a.end());
    double H = double(a.size());
    double prev = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == prev) continue;
        // count of orbit points with level >= a[i] is everything from i on
        rep.staircase += (a[i] - prev) * double(a.size() - i) / H;
        prev = a[i];
    }
    rep.discrepancy = std::fabs(rep.birkhoff - rep.staircase);
    return rep;
}

// ------------------------------------------- measure-vs-orbit tail domination

struct TailDominationReport {
    std::vector<u64> thresholds;
    std::vector<double> mu_tail;   // independent-sample estimate of mu(R >= n)
    std::vector<double> mu_sigma;
    std::vector<double> dplus;     // orbit estimate with effective-sample sigma
    std::vector<double> dplus_sigma;
    bool dominated = true;  // mu <= dplus + 3 (sigma_mu + sigma_dplus) throughout
};

inline TailDominationReport tail_domination_check(double p, const std::vector<u64>& thresholds,
                                                  u64 orbit_H, u64 mu_samples, u64 seed) {
    require(mu_samples >= 100, "tail domination: too few measure samples");
    TailDominationReport rep;
    rep.thresholds = thresholds;
    auto orbit = first_hit_orbit_returns(p, orbit_H, seed, 0);
    auto tails = tail_and_residue(orbit, thresholds);
    Rng rng(seed, 1);
    std::vector<u64> draws(mu_samples);
    for (auto& r : draws) {
        r = 1;
        while (!rng.bernoulli(p)) ++r;
    }
    for (std::size_t i = 0; i < thresholds.size(); ++i) {
        u64 n = thresholds[i];
        u64 cnt = 0;
        for (u64 r : draws) cnt += r >= n;
        double mu = double(cnt) / double(mu_samples);
        double smu = binomial_stderr(mu, mu_samples);
        double dp = tails.dplus[i];
        // the orbit indicator has correlation range about n, so discount
        double sdp = binomial_stderr(dp, std::max<u64>(1, orbit_H / std::max<u64>(1, n)));
        rep.mu_tail.push_back(mu);
        rep.mu_sigma.push_back(smu);
        rep.dplus.push_back(dp);
        rep.dplus_sigma.push_back(sdp);
        if (mu > dp + 3.0 * (smu + sdp)) rep.dominated = false;
    }
    return rep;
}

// -------------------------------------------------------- dyadic window growth

struct WindowGrowthReport {
    std::vector<u64> ells;
    std::vector<double> averages;  // (1/n) sum_j phi(2^ell, f^j x)
    std::vector<double> bounds;    // (lambda/5) 2^ell
    u64 ell0 = 0;
    bool found = false;  // smallest ell whose whole suffix clears the bound
};

inline WindowGrowthReport window_growth_check(const CocycleTable& t, double lambda, u64 ell_lo,
                                              u64 ell_hi, u64 bases) {
    require(lambda > 0.0, "window growth: needs a positive drift");
    require(ell_lo <= ell_hi, "window growth: bad range");
    require((u64(1) << ell_hi) < t.length(), "window growth: table shorter than largest window");
    WindowGrowthReport rep;
    for (u64 ell = ell_lo; ell <= ell_hi; ++ell) {
        u64 w = u64(1) << ell;
        u64 n = std::min<u64>(bases, t.length() - w);
        rep.ells.push_back(ell);
        rep.averages.push_back(dyadic_window_average(t, ell, n));
        rep.bounds.push_back(lambda / 5.0 * double(w));
    }
    for (std::size_t i = rep.ells.size(); i-- > 0;) {
        if (rep.averages[i] >= rep.bounds[i]) {
            rep.ell0 = rep.ells[i];
            rep.found = true;
        } else {
            break;
        }
    }
    return rep;
}

// running-sup probe: sup_{m <= n <= horizon} phi(n, x)/n clears gamma - tol at
// every doubling checkpoint m, so the average keeps returning to the level
inline bool running_limsup_ok(const CocycleTable& t, double gamma, u64 horizon, double tol) {
    require(horizon >= 1 && horizon <= t.length(), "limsup probe: horizon outside table");
    bool ok = true;
    for (u64 m = 1; m <= horizon; m *= 2) {
        double best = -1e300;
        for (u64 n = m; n <= horizon; ++n)
            best = std::max(best, t.evaluate(n, 0) / double(n));
        ok = ok && best >= gamma - tol;
        if (!ok) break;
    }
    return ok;
}

}  // namespace ergokit
