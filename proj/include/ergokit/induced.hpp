#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <vector>

#include "ergokit/common.hpp"
#include "ergokit/schedule.hpp"
#include "ergokit/schedules.hpp"
#include "ergokit/systems.hpp"

namespace ergokit {

// R tables on finite maps: R[x-1] >= 1 for x in the induced domain A, 0 outside
using TimeTable = std::vector<u64>;

inline TimeTable to_time_table(const std::vector<int>& r) {
    TimeTable out(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) {
        require(r[i] >= 0, "time table: negative entry");
        out[i] = u64(r[i]);
    }
    return out;
}

inline bool in_domain(const TimeTable& R, int x) {
    return x >= 1 && std::size_t(x) <= R.size() && R[x - 1] >= 1;
}

// F(x) = f^{R(x)}(x); 0 marks states outside the domain
inline std::vector<int> induced_map(const FiniteMap& f, const TimeTable& R) {
    require(R.size() == std::size_t(f.n), "induced_map: table size mismatch");
    std::vector<int> F(f.n, 0);
    for (int x = 1; x <= f.n; ++x)
        if (in_domain(R, x)) F[x - 1] = f.iterate(x, R[x - 1]);
    return F;
}

// R(x) = min{n >= 1: f^n(x) in B}; exact on finite maps (orbits cycle), with
// genuine non-return marked 0 rather than a horizon artifact
inline TimeTable first_entry_table(const FiniteMap& f, const std::vector<uint8_t>& target) {
    require(target.size() == std::size_t(f.n), "first_entry_table: mask size mismatch");
    TimeTable R(f.n, 0);
    for (int x = 1; x <= f.n; ++x) {
        int y = x;
        for (int steps = 1; steps <= 2 * f.n + 1; ++steps) {
            y = f.step(y);
            if (target[y - 1]) { R[x - 1] = u64(steps); break; }
        }
    }
    return R;
}

// restriction of first entry to starting points inside B (first return)
inline TimeTable first_return_table(const FiniteMap& f, const std::vector<uint8_t>& target) {
    TimeTable R = first_entry_table(f, target);
    for (int x = 1; x <= f.n; ++x)
        if (!target[x - 1]) R[x - 1] = 0;
    return R;
}

// ------------------------------------------------------- time-property checks

struct TimeWitness {
    int x = 0;
    u64 j = 0;
    bool undefined_at = false;  // f^j(x) left the domain (breaks exactness only)
};

struct TimeCheckReport {
    bool coherent = true;
    bool exact = true;
    std::optional<TimeWitness> coherent_witness;
    std::optional<TimeWitness> exact_witness;
};

// coherent: R(x) >= R(f^j x) + j whenever both points sit in the domain and
// 0 <= j < R(x); exact: equality for every such j, and leaving the domain
// before time R(x) is itself a violation
inline TimeCheckReport induced_time_checks(const FiniteMap& f, const TimeTable& R) {
    require(R.size() == std::size_t(f.n), "induced_time_checks: table size mismatch");
    TimeCheckReport rep;
    for (int x = 1; x <= f.n; ++x) {
        if (!in_domain(R, x)) continue;
        int y = x;
        for (u64 j = 1; j < R[x - 1]; ++j) {
            y = f.step(y);
            if (!in_domain(R, y)) {
                if (rep.exact) {
                    rep.exact = false;
                    rep.exact_witness = TimeWitness{x, j, true};
                }
                continue;
            }
            if (R[x - 1] < R[y - 1] + j && rep.coherent) {
                rep.coherent = false;
                rep.coherent_witness = TimeWitness{x, j, false};
            }
            if (R[x - 1] != R[y - 1] + j && rep.exact) {
                rep.exact = false;
                rep.exact_witness = TimeWitness{x, j, false};
            }
        }
    }
    return rep;
}

// -------------------------------------------------------------- orbit algebra

// A0 = points whose F-orbit never leaves the domain; exact fixed point
inline std::vector<uint8_t> absorbing_domain(const FiniteMap& f, const TimeTable& R) {
    auto F = induced_map(f, R);
    std::vector<uint8_t> in(f.n, 0);
    for (int x = 1; x <= f.n; ++x) in[x - 1] = in_domain(R, x);
    for (bool changed = true; changed;) {
        changed = false;
        for (int x = 1; x <= f.n; ++x)
            if (in[x - 1] && !in[F[x - 1] - 1]) { in[x - 1] = 0; changed = true; }
    }
    return in;
}

// A_F = largest F-invariant core inside A0 (intersection of forward images)
inline std::vector<uint8_t> invariant_core(const FiniteMap& f, const TimeTable& R) {
    auto F = induced_map(f, R);
    std::vector<uint8_t> cur = absorbing_domain(f, R);
    for (;;) {
        std::vector<uint8_t> img(f.n, 0);
        for (int x = 1; x <= f.n; ++x)
            if (cur[x - 1]) img[F[x - 1] - 1] = 1;
        if (img == cur) return cur;
        cur = img;
    }
}

// forward reach sets {g^k(x): k >= 0} for a (possibly partial) successor table
inline std::vector<std::vector<uint8_t>> reach_sets(int n, const std::vector<int>& succ) {
    std::vector<std::vector<uint8_t>> reach(n, std::vector<uint8_t>(n, 0));
    for (int x = 1; x <= n; ++x) {
        int y = x;
        while (y >= 1 && !reach[x - 1][y - 1]) {
            reach[x - 1][y - 1] = 1;
            y = succ[y - 1];
        }
    }
    return reach;
}

struct OrbitCoherenceReport {
    bool orbit_coherent = true;
    int x = 0, y = 0;           // witness pair on failure
    bool f_meets = false;       // which side of the equivalence held
};

// on A0: forward f-orbits meet exactly when forward F-orbits meet
inline OrbitCoherenceReport orbit_coherence_check(const FiniteMap& f, const TimeTable& R) {
    auto A0 = absorbing_domain(f, R);
    auto F = induced_map(f, R);
    auto reach_f = reach_sets(f.n, f.succ);
    auto reach_F = reach_sets(f.n, F);
    OrbitCoherenceReport rep;
    for (int x = 1; x <= f.n; ++x) {
        if (!A0[x - 1]) continue;
        for (int y = x; y <= f.n; ++y) {
            if (!A0[y - 1]) continue;
            bool mf = false, mF = false;
            for (int z = 1; z <= f.n && !mf; ++z)
                mf = reach_f[x - 1][z - 1] && reach_f[y - 1][z - 1];
            for (int z = 1; z <= f.n && !mF; ++z)
                mF = reach_F[x - 1][z - 1] && reach_F[y - 1][z - 1];
            if (mf != mF) {
                rep.orbit_coherent = false;
                rep.x = x;
                rep.y = y;
                rep.f_meets = mf;
                return rep;
            }
        }
    }
    return rep;
}

// transitivity of F on its domain A0, in the set-meeting sense: the forward
// images of every singleton meet every other singleton
inline bool induced_transitive(const FiniteMap& f, const TimeTable& R) {
    auto dom = absorbing_domain(f, R);
    auto F = induced_map(f, R);
    auto reach = reach_sets(f.n, F);
    for (int x = 1; x <= f.n; ++x) {
        if (!dom[x - 1]) continue;
        for (int y = 1; y <= f.n; ++y)
            if (dom[y - 1] && !reach[x - 1][y - 1]) return false;
    }
    return true;
}

// --------------------------------------------------------------- spreading

// union of the initial f-segments {x, fx, ..., f^{R(x)-1} x} over x in U
inline std::vector<uint8_t> spreading(const FiniteMap& f, const std::vector<uint8_t>& U,
                                      const TimeTable& R) {
    require(U.size() == std::size_t(f.n), "spreading: set size mismatch");
    std::vector<uint8_t> out(f.n, 0);
    for (int x = 1; x <= f.n; ++x) {
        if (!U[x - 1]) continue;
        require(in_domain(R, x), "spreading: set leaves the induced domain");
        int y = x;
        for (u64 j = 0; j < R[x - 1]; ++j) {
            out[y - 1] = 1;
            y = f.step(y);
        }
    }
    return out;
}

inline std::vector<uint8_t> preimage_set(const FiniteMap& f, const std::vector<uint8_t>& S) {
    std::vector<uint8_t> out(f.n, 0);
    for (int x = 1; x <= f.n; ++x) out[x - 1] = S[f.step(x) - 1];
    return out;
}

inline std::vector<uint8_t> image_set(const FiniteMap& f, const std::vector<uint8_t>& S) {
    std::vector<uint8_t> out(f.n, 0);
    for (int x = 1; x <= f.n; ++x)
        if (S[x - 1]) out[f.step(x) - 1] = 1;
    return out;
}

// ------------------------------------------------ return-sum decomposition

// for coherent R and any split point a < R(x) landing in A0: the remaining
// time R(x) - a is a full sum of returns along the F-orbit of f^a(x)
struct DecompositionReport {
    bool holds = true;
    int x = 0;
    u64 a = 0;
};

inline DecompositionReport decomposition_check(const FiniteMap& f, const TimeTable& R) {
    auto A0 = absorbing_domain(f, R);
    auto F = induced_map(f, R);
    DecompositionReport rep;
    for (int x = 1; x <= f.n; ++x) {
        if (!A0[x - 1]) continue;
        int y = x;
        for (u64 a = 0; a < R[x - 1]; ++a) {
            if (a > 0) y = f.step(y);
            if (!A0[y - 1]) continue;
            u64 acc = a;
            int z = y;
            bool hit = (acc == R[x - 1]);
            while (acc < R[x - 1]) {
                acc += R[z - 1];
                z = F[z - 1];
                if (acc == R[x - 1]) { hit = true; break; }
            }
            if (!hit) {
                rep.holds = false;
                rep.x = x;
                rep.a = a;
                return rep;
            }
        }
    }
    return rep;
}

// ----------------------------------------------------------- first-time maps

enum class FirstTimeStatus { found, empty_within_horizon, genuinely_empty };

struct FirstTime {
    FirstTimeStatus status = FirstTimeStatus::found;
    u64 r = 0;
};

// first event of a schedule along a trace; emptiness here can only be stated
// relative to the horizon
inline FirstTime first_time(const ScheduleAssignment& a, const OrbitTrace& tr, u64 offset,
                            u64 horizon) {
    auto u = a.evaluate(tr, offset, horizon);
    u64 r = u.first_or_zero();
    if (r == 0) return {FirstTimeStatus::empty_within_horizon, 0};
    return {FirstTimeStatus::found, r};
}

// finite maps decide emptiness exactly: the orbit is eventually periodic
inline FirstTime first_time_finite(const FiniteMap& f, int x,
                                   const std::vector<uint8_t>& target) {
    int y = x;
    for (int steps = 1; steps <= 2 * f.n + 1; ++steps) {
        y = f.step(y);
        if (target[y - 1]) return {FirstTimeStatus::found, u64(steps)};
    }
    return {FirstTimeStatus::genuinely_empty, 0};
}

// ------------------------------------------------------- induced trajectories

struct InducedTrajectory {
    std::vector<u64> returns;  // R(F^j x)
    std::vector<u64> cumsum;   // r_1 .. r_m
    bool escaped = false;      // R became undefined within the window
    u64 escape_step = 0;
};

// walk of the first-hit induced map on a sampled symbolic point; stops when
// the coordinate window or the requested length runs out
inline InducedTrajectory induced_walk_first_hit(SymbolicPoint x, u64 max_steps, u64 cap) {
    InducedTrajectory out;
    u64 total = 0;
    for (u64 j = 0; j < max_steps; ++j) {
        if (x.forward_room() <= cap) break;
        u64 r = first_hit_time(x, cap);
        if (r == 0) {
            out.escaped = true;
            out.escape_step = j;
            break;
        }
        out.returns.push_back(r);
        total += r;
        out.cumsum.push_back(total);
        for (u64 s = 0; s < r; ++s) x = x.step();
    }
    return out;
}

// cumulative-sum schedule of a coherent induced time, realized as an event set
inline EventSet schedule_of_returns(const std::vector<u64>& returns, u64 horizon) {
    EventSet out(horizon);
    u64 acc = 0;
    for (u64 r : returns) {
        require(r >= 1, "schedule_of_returns: zero return time");
        acc += r;
        if (acc > horizon) break;
        out.insert(acc);
    }
    return out;
}

// per-state schedule table for a coherent finite R, ready for coherence_check;
// incoherent tables are rejected up front
inline std::vector<EventSet> induced_schedule_table(const FiniteMap& f, const TimeTable& R,
                                                    u64 horizon) {
    auto checks = induced_time_checks(f, R);
    require(checks.coherent, "induced schedule: time table is not coherent");
    auto F = induced_map(f, R);
    auto A0 = absorbing_domain(f, R);
    std::vector<EventSet> table;
    table.reserve(f.n);
    for (int x = 1; x <= f.n; ++x) {
        EventSet u(horizon);
        if (A0[x - 1]) {
            u64 acc = 0;
            int y = x;
            while (true) {
                acc += R[y - 1];
                if (acc > horizon) break;
                u.insert(acc);
                y = F[y - 1];
            }
        }
        table.push_back(std::move(u));
    }
    return table;
}

// -------------------------------------------------------------- tower measure

struct TowerPoint {
    int base = 0;
    u64 level = 0;
};

struct FiniteTowerResult {
    std::vector<double> mu;  // projected weights per state, normalized
    double mass = 0;         // integral of R against nu
    double mass_series = 0;  // sum over j of nu({R > j}); equal up to 1e-12
};

// exact projection on finite systems: push nu restricted to {R > j} forward
// j steps, sum over levels, normalize by the mass
inline FiniteTowerResult tower_project_finite(const FiniteMap& f, const TimeTable& R,
                                              const std::vector<double>& nu) {
    require(nu.size() == std::size_t(f.n), "tower_project: weight size mismatch");
    u64 top = 0;
    double mass = 0;
    for (int x = 1; x <= f.n; ++x) {
        if (nu[x - 1] < 0) throw precondition_error("tower_project: negative weight");
        if (nu[x - 1] > 0) {
            require(in_domain(R, x), "tower_project: weight outside the induced domain");
            top = std::max(top, R[x - 1]);
            mass += double(R[x - 1]) * nu[x - 1];
        }
    }
    require(mass > 0, "tower_project: zero total mass");
    FiniteTowerResult out;
    out.mass = mass;
    out.mu.assign(f.n, 0.0);
    for (u64 j = 0; j < top; ++j) {
        double level_mass = 0;
        for (int x = 1; x <= f.n; ++x) {
            if (nu[x - 1] <= 0 || R[x - 1] <= j) continue;
            out.mu[f.iterate(x, j) - 1] += nu[x - 1] / mass;
            level_mass += nu[x - 1];
        }
        out.mass_series += level_mass;
    }
    return out;
}

struct ShiftTowerResult {
    double mass = 0;          // mean return time
    double mass_stderr = 0;
    std::vector<double> symbol_freq;  // projected frequency of each symbol
    double pair_freq_11 = 0;          // projected frequency of the (1,1) 2-cylinder
    u64 samples = 0;
};

// Monte Carlo projection for the first-hit induced map on a Bernoulli shift
inline ShiftTowerResult tower_project_first_hit(const ShiftSystem& sys, u64 samples,
                                                u64 seed, u64 cap = 4096) {
    require(sys.is_bernoulli(), "tower projection sampler expects a Bernoulli shift");
    std::size_t alpha = sys.alphabet;
    ShiftTowerResult out;
    out.symbol_freq.assign(alpha, 0.0);
    double sum_r = 0, sum_r2 = 0;
    std::vector<double> counts(alpha, 0.0);
    double count_11 = 0;
    Rng rng(seed, 7001);
    for (u64 s = 0; s < samples; ++s) {
        auto x = sample_point(sys, rng, cap + 2);
        u64 r = first_hit_time(x, cap);
        require(r >= 1, "tower projection: return cap exhausted");
        sum_r += double(r);
        sum_r2 += double(r) * double(r);
        // coordinates 1..r are the base cell: symbols seen at levels 0..r-1
        for (u64 j = 1; j <= r; ++j) counts[std::size_t(x.at(i64(j)))] += 1.0;
        if (x.at(i64(r)) == 1 && x.at(i64(r) + 1) == 1) count_11 += 1.0;
    }
    out.samples = samples;
    out.mass = sum_r / double(samples);
    double var = sum_r2 / double(samples) - out.mass * out.mass;
    out.mass_stderr = std::sqrt(std::max(0.0, var) / double(samples));
    for (std::size_t a = 0; a < alpha; ++a) out.symbol_freq[a] = counts[a] / sum_r;
    out.pair_freq_11 = count_11 / sum_r;
    return out;
}

struct DivergenceReport {
    bool diverged = false;
    double partial_mass = 0;
    u64 terms = 0;
};

// mass series for the dyadic-tower example: level C_n carries weight 2^{-(n+1)}
// and return 2^n, so every term adds exactly 1/2 and no cap survives
inline DivergenceReport dyadic_tower_mass(double cap, u64 max_terms) {
    require(max_terms <= 900, "dyadic_tower_mass: term count exceeds double range");
    DivergenceReport rep;
    for (u64 n = 0; n < max_terms; ++n) {
        rep.partial_mass += std::ldexp(1.0, int(n)) * std::ldexp(1.0, -int(n + 1));
        ++rep.terms;
        if (rep.partial_mass > cap) {
            rep.diverged = true;
            break;
        }
    }
    return rep;
}

// ------------------------------------------------------------- f components

struct ComponentReport {
    std::vector<int> component_of;  // 0 for states outside A0
    int count = 0;
    std::vector<std::vector<int>> cycles;  // the F-cycles, one per component
};

// partition of A0 by the F-cycle each state falls into
inline ComponentReport f_components(const FiniteMap& f, const TimeTable& R) {
    auto A0 = absorbing_domain(f, R);
    auto F = induced_map(f, R);
    ComponentReport rep;
    rep.component_of.assign(f.n, 0);
    std::vector<int> cycle_id(f.n, 0);
    for (int x = 1; x <= f.n; ++x) {
        if (!A0[x - 1] || rep.component_of[x - 1] != 0) continue;
        // find the cycle this orbit lands on
        int slow = x, fast = x;
        do {
            slow = F[slow - 1];
            fast = F[F[fast - 1] - 1];
        } while (slow != fast);
        if (cycle_id[slow - 1] == 0) {
            ++rep.count;
            std::vector<int> cyc;
            int y = slow;
            do {
                cycle_id[y - 1] = rep.count;
                cyc.push_back(y);
                y = F[y - 1];
            } while (y != slow);
            std::sort(cyc.begin(), cyc.end());
            rep.cycles.push_back(cyc);
        }
        int id = cycle_id[slow - 1];
        int y = x;
        while (rep.component_of[y - 1] == 0) {
            rep.component_of[y - 1] = id;
            y = F[y - 1];
        }
    }
    return rep;
}

}  // namespace ergokit
