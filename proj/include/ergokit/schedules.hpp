#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "ergokit/cocycle.hpp"
#include "ergokit/common.hpp"
#include "ergokit/schedule.hpp"
#include "ergokit/systems.hpp"

namespace ergokit {

// per-step observations along one orbit; schedules evaluate against this
struct OrbitTrace {
    std::vector<u64> state;        // f^j(x) as a state id (finite systems), j = 0..len
    std::vector<uint8_t> hit;      // f^j(x) in target, j = 0..len
    std::vector<double> potential; // g(f^j(x)), j = 0..len-1
};

// masks and potentials are indexed by state - 1 (states run 1..n)
inline OrbitTrace finite_trace(const FiniteMap& f, int start, u64 len,
                               const std::vector<uint8_t>& target_mask,
                               const std::vector<double>& potential_by_state = {}) {
    require(target_mask.empty() || target_mask.size() == std::size_t(f.n),
            "finite_trace: target mask size mismatch");
    require(potential_by_state.empty() || potential_by_state.size() == std::size_t(f.n),
            "finite_trace: potential size mismatch");
    OrbitTrace tr;
    int s = start;
    for (u64 j = 0; j <= len; ++j) {
        tr.state.push_back(u64(s));
        if (!target_mask.empty()) tr.hit.push_back(target_mask[s - 1]);
        if (!potential_by_state.empty() && j < len)
            tr.potential.push_back(potential_by_state[s - 1]);
        if (j < len) s = f.step(s);
    }
    return tr;
}

struct CylinderSpec {
    i64 coordinate;  // >= 1 on one-sided points
    int symbol;
};

inline OrbitTrace shift_trace(const SymbolicPoint& x, u64 len,
                              const std::vector<CylinderSpec>& target,
                              const std::vector<double>& potential_by_symbol = {}) {
    OrbitTrace tr;
    for (u64 j = 0; j <= len; ++j) {
        if (!target.empty()) {
            bool in = true;
            for (const auto& c : target)
                if (x.at(c.coordinate + i64(j)) != c.symbol) { in = false; break; }
            tr.hit.push_back(in ? 1 : 0);
        }
        if (!potential_by_symbol.empty() && j < len)
            tr.potential.push_back(potential_by_symbol[x.at(i64(j) + 1)]);
    }
    return tr;
}

// ---------------------------------------------------------------- assignments

enum class ScheduleRule { hitting, pliss, threshold, explicit_table };

struct ScheduleAssignment {
    ScheduleRule rule = ScheduleRule::hitting;
    double gamma = 0.0;
    bool coherent_by_construction = false;
    std::vector<u64> shifts;          // nonempty: pointwise union of these left-shifts
    std::vector<EventSet> table;      // explicit_table: per state id

    EventSet evaluate(const OrbitTrace& tr, u64 offset, u64 horizon) const {
        if (shifts.empty()) return base_evaluate(tr, offset, horizon);
        u64 widest = *std::max_element(shifts.begin(), shifts.end());
        EventSet wide = base_evaluate(tr, offset, horizon + widest);
        EventSet out(horizon);
        for (u64 ell : shifts)
            shift_left(wide, ell).for_each([&](u64 e) {
                if (e <= horizon) out.insert(e);
            });
        return out;
    }

  private:
    EventSet base_evaluate(const OrbitTrace& tr, u64 offset, u64 horizon) const {
        require(horizon >= 1, "schedule: horizon must be positive");
        switch (rule) {
            case ScheduleRule::hitting: {
                require(tr.hit.size() > offset + horizon, "schedule: trace too short for hits");
                EventSet out(horizon);
                for (u64 n = 1; n <= horizon; ++n)
                    if (tr.hit[offset + n]) out.insert(n);
                return out;
            }
            case ScheduleRule::pliss: {
                require(tr.potential.size() >= offset + horizon,
                        "schedule: trace too short for potentials");
                EventSet out(horizon);
                double S = 0.0, best = 0.0;
                for (u64 n = 1; n <= horizon; ++n) {
                    S += tr.potential[offset + n - 1];
                    double t = S - gamma * double(n);
                    if (t >= best - pliss_slack(n)) out.insert(n);
                    if (t > best) best = t;
                }
                return out;
            }
            case ScheduleRule::threshold: {
                require(tr.potential.size() >= offset + horizon,
                        "schedule: trace too short for potentials");
                EventSet out(horizon);
                double S = 0.0;
                for (u64 n = 1; n <= horizon; ++n) {
                    S += tr.potential[offset + n - 1];
                    if (S >= gamma * double(n) - pliss_slack(n)) out.insert(n);
                }
                return out;
            }
            case ScheduleRule::explicit_table: {
                require(tr.state.size() > offset, "schedule: trace lacks state ids");
                u64 s = tr.state[offset];
                require(s < table.size(), "schedule: state id outside table");
                EventSet out(horizon);
                table[s].for_each([&](u64 e) {
                    if (e <= horizon) out.insert(e);
                });
                return out;
            }
        }
        throw error("schedule: unreachable rule");
    }
};

inline ScheduleAssignment hitting_schedule() {
    ScheduleAssignment a;
    a.rule = ScheduleRule::hitting;
    a.coherent_by_construction = true;
    return a;
}

// coherent for additive and sup-additive cocycles; sub-additive-only rejected
inline ScheduleAssignment pliss_schedule(double gamma,
                                         CocycleKind kind = CocycleKind::additive) {
    require(kind != CocycleKind::subadditive,
            "pliss_schedule: subadditive cocycles carry no coherence guarantee");
    ScheduleAssignment a;
    a.rule = ScheduleRule::pliss;
    a.gamma = gamma;
    a.coherent_by_construction = true;
    return a;
}

inline ScheduleAssignment threshold_schedule(double gamma) {
    ScheduleAssignment a;
    a.rule = ScheduleRule::threshold;
    a.gamma = gamma;
    a.coherent_by_construction = false;
    return a;
}

inline ScheduleAssignment explicit_schedule(std::vector<EventSet> table) {
    ScheduleAssignment a;
    a.rule = ScheduleRule::explicit_table;
    a.table = std::move(table);
    return a;
}

inline ScheduleAssignment shift_union(const ScheduleAssignment& base,
                                      const std::vector<u64>& ells) {
    require(!ells.empty(), "shift_union: need at least one shift");
    require(base.shifts.empty(), "shift_union: already a union");
    ScheduleAssignment a = base;
    a.shifts = ells;
    std::sort(a.shifts.begin(), a.shifts.end());
    a.shifts.erase(std::unique(a.shifts.begin(), a.shifts.end()), a.shifts.end());
    return a;
}

// U(f^j x) for j = 0..count-1, each at the same horizon
inline std::vector<EventSet> evaluate_along(const ScheduleAssignment& a, const OrbitTrace& tr,
                                            u64 count, u64 horizon) {
    std::vector<EventSet> out;
    out.reserve(count);
    for (u64 j = 0; j < count; ++j) out.push_back(a.evaluate(tr, j, horizon));
    return out;
}

inline std::vector<EventSet> intersect_along(const std::vector<EventSet>& a,
                                             const std::vector<EventSet>& b) {
    require(a.size() == b.size(), "intersect_along: length mismatch");
    std::vector<EventSet> out;
    out.reserve(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        out.push_back(combine(a[i], b[i], SetOp::intersect));
    return out;
}

// ------------------------------------------------------------ coherence check

// witness encodes both implications: m == 0 means (P1) broke (event n at the
// base point, n - j missing j steps ahead); j == 0 with m >= 1 means (P2)
// broke (n and then m were events but n + m is not)
struct CoherenceWitness {
    u64 orbit_index = 0;
    u64 n = 0, m = 0, j = 0;
};

struct CoherenceReport {
    bool p1 = true, p2 = true;
    u64 checked = 0;
    std::optional<CoherenceWitness> witness;

    bool coherent() const { return p1 && p2; }
};

// exhaustive over one orbit of evaluated sets; the witness returned is
// lexicographically minimal in (n, m, j)
inline CoherenceReport coherence_check(const std::vector<EventSet>& along, u64 horizon) {
    CoherenceReport rep;
    auto better = [&](const CoherenceWitness& w) {
        if (!rep.witness) return true;
        const auto& b = *rep.witness;
        if (w.n != b.n) return w.n < b.n;
        if (w.m != b.m) return w.m < b.m;
        return w.j < b.j;
    };
    u64 count = along.size();
    for (u64 i = 0; i < count; ++i) {
        require(along[i].horizon() >= horizon, "coherence_check: set horizon too small");
        // (P1) via subset scan of the j-step shift
        for (u64 j = 1; i + j < count; ++j) {
            if (j >= horizon) break;
            ++rep.checked;
            shift_left(along[i], j).for_each([&](u64 e) {
                if (e <= horizon - j && !along[i + j].contains(e)) {
                    rep.p1 = false;
                    CoherenceWitness w{i, e + j, 0, j};
                    if (better(w)) rep.witness = w;
                }
            });
        }
        // (P2) via translated subset scan from each event
        along[i].for_each([&](u64 n) {
            if (n > horizon || i + n >= count) return;
            ++rep.checked;
            along[i + n].for_each([&](u64 m) {
                if (n + m <= horizon && !along[i].contains(n + m)) {
                    rep.p2 = false;
                    CoherenceWitness w{i, n, m, 0};
                    if (better(w)) rep.witness = w;
                }
            });
        });
    }
    return rep;
}

// sigma^{a} U(x) = sigma^{a-1} U(f x) on the overlapping horizon, a = min U(x);
// vacuously true when U(x) is empty
inline bool stationarity_holds(const EventSet& at_x, const EventSet& at_fx) {
    u64 a = at_x.first_or_zero();
    if (a == 0) return true;
    EventSet lhs = shift_left(at_x, a);
    EventSet rhs = (a == 1) ? at_fx : shift_left(at_fx, a - 1);
    u64 h = std::min(lhs.horizon(), rhs.horizon());
    for (u64 e = 1; e <= h; ++e)
        if (lhs.contains(e) != rhs.contains(e)) return false;
    return true;
}

// ------------------------------------------------------- non-sync block pairs

// two half-density sequences built from runs 1^k 0^k and the complement; the
// schedule family indexed by depth is the plain translate of the base set
struct AlternatingRunsPair {
    std::vector<uint8_t> x0, y0;  // symbols at positions 1..H stored at [pos-1]
    EventSet u0, u1;              // positions of ones
};

inline AlternatingRunsPair alternating_runs_pair(u64 horizon) {
    AlternatingRunsPair ex;
    ex.x0.resize(horizon);
    ex.y0.resize(horizon);
    u64 pos = 0;
    for (u64 k = 1; pos < horizon; ++k) {
        for (u64 i = 0; i < k && pos < horizon; ++i) ex.x0[pos++] = 1;
        for (u64 i = 0; i < k && pos < horizon; ++i) ex.x0[pos++] = 0;
    }
    for (u64 i = 0; i < horizon; ++i) ex.y0[i] = ex.x0[i] ? 0 : 1;
    ex.u0 = EventSet(horizon);
    ex.u1 = EventSet(horizon);
    for (u64 i = 0; i < horizon; ++i) {
        if (ex.x0[i]) ex.u0.insert(i + 1);
        if (ex.y0[i]) ex.u1.insert(i + 1);
    }
    return ex;
}

inline EventSet alternating_runs_at_depth(const EventSet& base, u64 depth) {
    return depth == 0 ? base : translate_right(base, depth);
}

}  // namespace ergokit
