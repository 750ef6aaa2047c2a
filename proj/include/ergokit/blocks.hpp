#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "ergokit/common.hpp"
#include "ergokit/induced.hpp"
#include "ergokit/schedules.hpp"
#include "ergokit/systems.hpp"

namespace ergokit {

// membership in the coherent block is an infinite backward condition; every
// verdict here is explicit about the depth it was checked to
struct BlockCertificate {
    u64 depth = 0;
    bool in_block = true;
    u64 excluded_at = 0;  // smallest failing backward index, 0 if none found
};

// ---------------------------------------------------- rule-specific membership

// hitting schedules collapse the backward tower: j is an event of the j-fold
// preimage exactly when the point itself sits in the target
inline BlockCertificate hitting_block_membership(const SymbolicPoint& x,
                                                 const std::vector<CylinderSpec>& target,
                                                 u64 depth) {
    bool in = true;
    for (const auto& c : target)
        if (x.at(c.coordinate) != c.symbol) { in = false; break; }
    return {depth, in, in ? 0 : u64(1)};
}

// additive Pliss schedules reduce to backward partial sums: membership to
// depth D says every backward window average clears gamma
inline BlockCertificate pliss_block_membership(const SymbolicPoint& x,
                                               const std::vector<double>& pot_by_symbol,
                                               double gamma, u64 depth) {
    require(x.backward_room() >= depth, "block membership: backward window too small");
    double S = 0.0;
    for (u64 m = 1; m <= depth; ++m) {
        S += pot_by_symbol[std::size_t(x.at(1 - i64(m)))];
        if (S < gamma * double(m) - pliss_slack(m)) return {depth, false, m};
    }
    return {depth, true, 0};
}

// exact-integer variant, gamma = gp/gq
inline BlockCertificate pliss_block_membership_exact(const SymbolicPoint& x,
                                                     const std::vector<i64>& pot_by_symbol,
                                                     i64 gp, i64 gq, u64 depth) {
    require(x.backward_room() >= depth, "block membership: backward window too small");
    i64 S = 0;
    for (u64 m = 1; m <= depth; ++m) {
        S += pot_by_symbol[std::size_t(x.at(1 - i64(m)))];
        if (gq * S < gp * i64(m)) return {depth, false, m};
    }
    return {depth, true, 0};
}

// ------------------------------------------------------- finite exact objects

// B restricted to depth D on a finite bijection, from an explicit schedule table
inline std::vector<uint8_t> block_set_finite(const FiniteMap& f,
                                             const std::vector<EventSet>& table, u64 depth) {
    require(table.size() == std::size_t(f.n), "block_set_finite: table size mismatch");
    std::vector<uint8_t> out(f.n, 1);
    for (int x = 1; x <= f.n; ++x) {
        int y = x;
        for (u64 j = 1; j <= depth; ++j) {
            y = f.backward_step(y);
            if (!table[y - 1].contains(j)) { out[x - 1] = 0; break; }
        }
    }
    return out;
}

// the invariant core of the first-event induced map sits inside the block
inline std::vector<uint8_t> first_event_core(const FiniteMap& f,
                                             const std::vector<EventSet>& table) {
    TimeTable R(f.n, 0);
    for (int x = 1; x <= f.n; ++x) R[x - 1] = table[x - 1].first_or_zero();
    return invariant_core(f, R);
}

// ------------------------------------------------------ block flags from sums

// in-block flags for x, f(x), ..., f^J(x) from one materialized potential
// window: pot[0..D+J-1] holds the integer potentials of coordinates 1-D .. J,
// and f^j(x) is tested through its D backward sums ending at index D+j.
// writing s_i = gq*prefix_i - gp*i turns "all D window sums clear gamma" into
// "s at the endpoint dominates the sliding-window max", done with a deque
inline std::vector<uint8_t> block_flags_window(const std::vector<i64>& pot, u64 D, u64 J,
                                               i64 gp, i64 gq) {
    require(pot.size() >= D + J, "block_flags_window: window too small");
    std::vector<i64> s(pot.size() + 1, 0);
    i64 acc = 0;
    for (std::size_t i = 0; i < pot.size(); ++i) {
        acc += pot[i];
        s[i + 1] = gq * acc - gp * i64(i + 1);
    }
    std::vector<uint8_t> flags(J + 1, 1);
    std::vector<u64> dq(pot.size() + 1);  // indices with decreasing s values
    std::size_t lo = 0, hi = 0;
    for (u64 i = 0; i <= D + J; ++i) {
        if (i >= D) {
            // window of candidates k in [i-D, i-1] is current deque content
            u64 j = i - D;
            flags[j] = s[i] >= s[dq[lo]] ? 1 : 0;
        }
        while (hi > lo && s[dq[hi - 1]] <= s[i]) --hi;
        dq[hi++] = i;
        if (dq[lo] + D <= i) ++lo;  // drop indices leaving the next window
    }
    return flags;
}

// --------------------------------------------------- measure-density identity

struct BlockDensityReport {
    double block_measure = 0;
    double block_stderr = 0;
    double density = 0;
    double density_stderr = 0;
    u64 samples = 0, depth = 0, horizon = 0;
};

struct PlissBlockParams {
    double p = 0.7;          // Bernoulli weight of symbol 1 (potential +1)
    i64 gp = 1, gq = 5;      // gamma as a fraction
    u64 samples = 100000;
    u64 depth = 100000;
    u64 horizon = 100000;
    u64 density_orbits = 16;
    u64 seed = 1;
    int threads = 0;
};

// estimates both sides of the block-measure = orbit-density identity for the
// Pliss schedule of the +/-1 potential on a two-sided Bernoulli shift; the
// backward scan draws coordinates lazily so excluded points exit early
inline BlockDensityReport pliss_block_density(const PlissBlockParams& prm) {
    require(prm.p > 0 && prm.p < 1, "block density: weight outside (0,1)");
    BlockDensityReport rep;
    rep.samples = prm.samples;
    rep.depth = prm.depth;
    rep.horizon = prm.horizon;
    int threads = resolve_threads(prm.threads);

    std::vector<uint8_t> in_block(prm.samples, 0);
    parallel_for(prm.samples, threads, [&](u64 s) {
        Rng rng(prm.seed, 2 * s);
        i64 S = 0;
        bool ok = true;
        for (u64 m = 1; m <= prm.depth; ++m) {
            S += rng.bernoulli(prm.p) ? 1 : -1;
            if (prm.gq * S < prm.gp * i64(m)) { ok = false; break; }
        }
        in_block[s] = ok;
    });
    u64 hits = 0;
    for (auto b : in_block) hits += b;
    rep.block_measure = double(hits) / double(prm.samples);
    rep.block_stderr = binomial_stderr(rep.block_measure, prm.samples);

    std::vector<double> dens(prm.density_orbits, 0.0);
    parallel_for(prm.density_orbits, threads, [&](u64 k) {
        Rng rng(prm.seed, 2 * k + 1);
        i64 S = 0, best = 0;
        u64 events = 0;
        for (u64 n = 1; n <= prm.horizon; ++n) {
            S += rng.bernoulli(prm.p) ? 1 : -1;
            i64 t = prm.gq * S - prm.gp * i64(n);
            if (t >= best) ++events;
            if (t > best) best = t;
        }
        dens[k] = double(events) / double(prm.horizon);
    });
    double mean = 0;
    for (double d : dens) mean += d;
    mean /= double(prm.density_orbits);
    double var = 0;
    for (double d : dens) var += (d - mean) * (d - mean);
    rep.density = mean;
    rep.density_stderr = prm.density_orbits > 1
                             ? std::sqrt(var / double(prm.density_orbits - 1) /
                                         double(prm.density_orbits))
                             : 0.0;
    return rep;
}

// hitting-schedule version of the same identity on a Bernoulli cylinder; the
// block side is the exact membership identity, the density side counts events
inline BlockDensityReport hitting_block_density(double p, u64 samples, u64 horizon,
                                                u64 seed, int threads_req = 0) {
    BlockDensityReport rep;
    rep.samples = samples;
    rep.depth = 1;
    rep.horizon = horizon;
    int threads = resolve_threads(threads_req);
    std::vector<uint8_t> in_block(samples, 0);
    parallel_for(samples, threads, [&](u64 s) {
        Rng rng(seed, 2 * s);
        in_block[s] = rng.bernoulli(p);
    });
    u64 hits = 0;
    for (auto b : in_block) hits += b;
    rep.block_measure = double(hits) / double(samples);
    rep.block_stderr = binomial_stderr(rep.block_measure, samples);
    Rng rng(seed, 1);
    u64 events = 0;
    for (u64 n = 1; n <= horizon; ++n)
        if (rng.bernoulli(p)) ++events;
    rep.density = double(events) / double(horizon);
    rep.density_stderr = binomial_stderr(rep.density, horizon);
    return rep;
}

// ----------------------------------------------------------- extended Kac law

struct ExtendedKacReport {
    double integral = 0;   // estimate of the R-integral over the block
    double stderr_ = 0;
    u64 samples = 0;
    u64 block_points = 0;
    u64 capped = 0;        // block points whose first event exceeded the horizon
    bool inconclusive = false;
};

// E[R_U restricted to the block] as a plain mean of R * indicator over samples;
// the first event is scanned forward with fresh lazily drawn coordinates
inline ExtendedKacReport extended_kac_pliss(const PlissBlockParams& prm) {
    ExtendedKacReport rep;
    rep.samples = prm.samples;
    int threads = resolve_threads(prm.threads);
    std::vector<u64> r_of(prm.samples, 0);   // 0: not a block point
    std::vector<uint8_t> cap_flag(prm.samples, 0);
    parallel_for(prm.samples, threads, [&](u64 s) {
        Rng rng(prm.seed, 3 * s);
        i64 S = 0;
        for (u64 m = 1; m <= prm.depth; ++m) {
            S += rng.bernoulli(prm.p) ? 1 : -1;
            if (prm.gq * S < prm.gp * i64(m)) return;
        }
        Rng fwd(prm.seed, 3 * s + 1);
        i64 T = 0, best = 0;
        for (u64 n = 1; n <= prm.horizon; ++n) {
            T += fwd.bernoulli(prm.p) ? 1 : -1;
            i64 t = prm.gq * T - prm.gp * i64(n);
            if (t >= best) { r_of[s] = n; return; }
            if (t > best) best = t;
        }
        r_of[s] = prm.horizon;  // lower bound; flagged below
        cap_flag[s] = 1;
    });
    double sum = 0, sum2 = 0;
    for (u64 s = 0; s < prm.samples; ++s) {
        if (r_of[s] == 0) continue;
        ++rep.block_points;
        rep.capped += cap_flag[s];
        double v = double(r_of[s]);
        sum += v;
        sum2 += v * v;
    }
    if (rep.block_points == 0) {
        rep.inconclusive = true;
        return rep;
    }
    rep.integral = sum / double(prm.samples);
    double mean = rep.integral;
    double var = sum2 / double(prm.samples) - mean * mean;
    rep.stderr_ = std::sqrt(std::max(0.0, var) / double(prm.samples));
    return rep;
}

struct KacReport {
    double integral = 0;
    double stderr_ = 0;
    u64 samples = 0;
    u64 returns = 0;  // samples that started in the target (counted returns)
};

// classical Kac on the cylinder [symbol 1 at coordinate 1]: R is the first
// return to the cylinder, integrated over it
inline KacReport kac_bernoulli_cylinder(double p, u64 samples, u64 seed, int threads_req = 0,
                                        u64 cap = 1u << 20) {
    require(p > 0 && p < 1, "kac: weight outside (0,1)");
    KacReport rep;
    rep.samples = samples;
    int threads = resolve_threads(threads_req);
    std::vector<u64> r_of(samples, 0);
    std::vector<uint8_t> failed(samples, 0);
    parallel_for(samples, threads, [&](u64 s) {
        Rng rng(seed, s);
        if (!rng.bernoulli(p)) return;  // not in the cylinder
        for (u64 n = 1; n <= cap; ++n)
            if (rng.bernoulli(p)) { r_of[s] = n; return; }
        failed[s] = 1;
    });
    for (auto fl : failed)
        if (fl) throw precision_error("kac: return cap exhausted");
    double sum = 0, sum2 = 0;
    for (u64 s = 0; s < samples; ++s) {
        if (r_of[s] == 0) continue;
        ++rep.returns;
        sum += double(r_of[s]);
        sum2 += double(r_of[s]) * double(r_of[s]);
    }
    rep.integral = sum / double(samples);
    double var = sum2 / double(samples) - rep.integral * rep.integral;
    rep.stderr_ = std::sqrt(std::max(0.0, var) / double(samples));
    return rep;
}

// same integral for the doubling map with target [1/2, 1], driven through the
// exact bit representation of sampled points
inline KacReport kac_doubling_half(u64 samples, u64 seed, int threads_req = 0) {
    KacReport rep;
    rep.samples = samples;
    int threads = resolve_threads(threads_req);
    std::vector<u64> r_of(samples, 0);
    std::vector<uint8_t> failed(samples, 0);
    parallel_for(samples, threads, [&](u64 s) {
        Rng rng(seed, s);
        BitPoint x = BitPoint::sample(rng);
        if (x.bit(1) != 1) return;  // outside [1/2, 1)
        BitPoint y = x;
        for (u64 n = 1;; ++n) {
            if (y.precision_left() < 2) { failed[s] = 1; return; }
            y.shift_left_once();
            if (y.bit(1) == 1) { r_of[s] = n; return; }
        }
    });
    for (auto fl : failed)
        if (fl) throw precision_error("kac: bit precision exhausted before return");
    double sum = 0, sum2 = 0;
    for (u64 s = 0; s < samples; ++s) {
        if (r_of[s] == 0) continue;
        ++rep.returns;
        sum += double(r_of[s]);
        sum2 += double(r_of[s]) * double(r_of[s]);
    }
    rep.integral = sum / double(samples);
    double var = sum2 / double(samples) - rep.integral * rep.integral;
    rep.stderr_ = std::sqrt(std::max(0.0, var) / double(samples));
    return rep;
}

// --------------------------------------------------------- first-return check

struct FirstReturnReport {
    bool ok = true;
    u64 checked = 0;
    u64 early_visits = 0;   // block point revisited the block before R
    u64 landings_out = 0;   // image under the induced map left the block
};

// exhaustive verification on a finite bijection with an explicit table
inline FirstReturnReport first_return_verify_finite(const FiniteMap& f,
                                                    const std::vector<EventSet>& table,
                                                    u64 depth) {
    auto B = block_set_finite(f, table, depth);
    FirstReturnReport rep;
    for (int x = 1; x <= f.n; ++x) {
        if (!B[x - 1]) continue;
        ++rep.checked;
        u64 r = table[x - 1].first_or_zero();
        if (r == 0) continue;
        int y = x;
        for (u64 j = 1; j < r; ++j) {
            y = f.step(y);
            if (B[y - 1]) { ++rep.early_visits; rep.ok = false; }
        }
        y = f.step(y);
        if (!B[y - 1]) { ++rep.landings_out; rep.ok = false; }
    }
    return rep;
}

// sampled verification for the Pliss block on the two-sided Bernoulli shift
inline FirstReturnReport first_return_verify_pliss(const PlissBlockParams& prm) {
    FirstReturnReport rep;
    int threads = resolve_threads(prm.threads);
    std::vector<uint8_t> early(prm.samples, 0), out(prm.samples, 0), used(prm.samples, 0);
    parallel_for(prm.samples, threads, [&](u64 s) {
        Rng rng(prm.seed, s);
        // one window of potentials for coordinates 1-D .. J
        std::vector<i64> pot(prm.depth + prm.horizon);
        for (auto& v : pot) v = rng.bernoulli(prm.p) ? 1 : -1;
        auto flags = block_flags_window(pot, prm.depth, prm.horizon, prm.gp, prm.gq);
        if (!flags[0]) return;  // not a block point
        used[s] = 1;
        // first event of the schedule at the base point
        i64 S = 0, best = 0;
        u64 r = 0;
        for (u64 n = 1; n <= prm.horizon; ++n) {
            S += pot[prm.depth + n - 1];
            i64 t = prm.gq * S - prm.gp * i64(n);
            if (t >= best) { r = n; break; }
            if (t > best) best = t;
        }
        if (r == 0) return;
        for (u64 j = 1; j < r; ++j)
            if (flags[j]) { early[s] = 1; break; }
        if (!flags[r]) out[s] = 1;
    });
    for (u64 s = 0; s < prm.samples; ++s) {
        rep.checked += used[s];
        rep.early_visits += early[s];
        rep.landings_out += out[s];
    }
    rep.ok = rep.early_visits == 0 && rep.landings_out == 0;
    return rep;
}

}  // namespace ergokit
