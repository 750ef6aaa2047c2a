#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <utility>
#include <vector>

#include "ergokit/common.hpp"

namespace ergokit {

// Finite view of a set of event indices in {1..horizon}. Dense bitmap for
// moderate horizons, sorted list above; both iterate in increasing order.
class EventSet {
  public:
    static constexpr u64 dense_limit = u64(1) << 26;

    explicit EventSet(u64 horizon = 0, bool truncated = false)
        : horizon_(horizon), truncated_(truncated), dense_(horizon <= dense_limit) {
        if (dense_) bits_.assign(words(horizon_), 0);
    }

    static EventSet from_events(u64 horizon, const std::vector<u64>& events, bool truncated = false) {
        EventSet s(horizon, truncated);
        u64 prev = 0;
        for (u64 e : events) {
            require(e >= 1 && e <= horizon, "event set: event out of range");
            require(e > prev, "event set: events must be strictly increasing");
            prev = e;
            s.insert(e);
        }
        return s;
    }

    u64 horizon() const { return horizon_; }
    bool truncated() const { return truncated_; }
    void mark_truncated() { truncated_ = true; }

    void insert(u64 e) {
        require(e >= 1 && e <= horizon_, "event set: event out of range");
        if (dense_) {
            bits_[(e - 1) >> 6] |= u64(1) << ((e - 1) & 63);
        } else {
            require(events_.empty() || events_.back() < e, "event set: unsorted insert");
            events_.push_back(e);
        }
    }

    bool contains(u64 e) const {
        if (e < 1 || e > horizon_) return false;
        if (dense_) return (bits_[(e - 1) >> 6] >> ((e - 1) & 63)) & 1;
        return std::binary_search(events_.begin(), events_.end(), e);
    }

    u64 count() const {
        if (!dense_) return events_.size();
        u64 c = 0;
        for (u64 w : bits_) c += std::popcount(w);
        return c;
    }

    u64 count_prefix(u64 n) const {  // #(U cap {1..n})
        n = std::min(n, horizon_);
        if (!dense_)
            return u64(std::upper_bound(events_.begin(), events_.end(), n) - events_.begin());
        u64 c = 0, full = n >> 6;
        for (u64 i = 0; i < full; ++i) c += std::popcount(bits_[i]);
        u64 rem = n & 63;
        if (rem) c += std::popcount(bits_[full] & ((u64(1) << rem) - 1));
        return c;
    }

    template <typename Fn>
    void for_each(Fn&& fn) const {
        if (!dense_) {
            for (u64 e : events_) fn(e);
            return;
        }
        for (u64 i = 0; i < bits_.size(); ++i) {
            u64 w = bits_[i];
            while (w) {
                fn((i << 6) + u64(std::countr_zero(w)) + 1);
                w &= w - 1;
            }
        }
    }

    std::vector<u64> to_events() const {
        std::vector<u64> out;
        out.reserve(dense_ ? 0 : events_.size());
        for_each([&](u64 e) { out.push_back(e); });
        return out;
    }

    u64 first_or_zero() const {
        if (!dense_) return events_.empty() ? 0 : events_.front();
        for (u64 i = 0; i < bits_.size(); ++i)
            if (bits_[i]) return (i << 6) + u64(std::countr_zero(bits_[i])) + 1;
        return 0;
    }

    bool empty() const { return first_or_zero() == 0; }

    friend bool operator==(const EventSet& a, const EventSet& b) {
        if (a.horizon_ != b.horizon_) return false;
        return a.to_events() == b.to_events();
    }

  private:
    static u64 words(u64 h) { return (h + 63) >> 6; }

    u64 horizon_;
    bool truncated_;
    bool dense_;
    std::vector<u64> bits_;
    std::vector<u64> events_;
};

// sigma^k U = {j - k : j in U, j > k}, horizon shrinks by k
inline EventSet shift_left(const EventSet& u, u64 k) {
    require(k <= u.horizon(), "shift_left: shift exceeds horizon");
    EventSet out(u.horizon() - k, u.truncated());
    u.for_each([&](u64 e) {
        if (e > k) out.insert(e - k);
    });
    return out;
}

// k + U = {j + k : j in U}; horizon unchanged, spilled tail recorded
inline EventSet translate_right(const EventSet& u, u64 k) {
    EventSet out(u.horizon(), u.truncated());
    bool spilled = false;
    u.for_each([&](u64 e) {
        if (e + k <= u.horizon())
            out.insert(e + k);
        else
            spilled = true;
    });
    if (spilled) out.mark_truncated();
    return out;
}

enum class SetOp { intersect, unite, subtract };

inline EventSet combine(const EventSet& a, const EventSet& b, SetOp op) {
    u64 h = std::min(a.horizon(), b.horizon());
    EventSet out(h, a.truncated() || b.truncated());
    for (u64 e = 1; e <= h; ++e) {
        bool ina = a.contains(e), inb = b.contains(e);
        bool keep = op == SetOp::intersect ? (ina && inb)
                  : op == SetOp::unite     ? (ina || inb)
                                           : (ina && !inb);
        if (keep) out.insert(e);
    }
    return out;
}

// dist(U, V) = 2^-min(U xor V); exact, horizons must match
inline Dyadic dyadic_distance(const EventSet& a, const EventSet& b) {
    require(a.horizon() == b.horizon(), "dyadic_distance: horizon mismatch");
    for (u64 e = 1; e <= a.horizon(); ++e)
        if (a.contains(e) != b.contains(e)) return Dyadic::pow2(e);
    return Dyadic::zero_value();
}

struct DensityReport {
    Rational upper{0, 1};   // max prefix average past burn-in
    Rational lower{0, 1};   // min prefix average past burn-in
    std::vector<std::pair<u64, Rational>> prefix_averages;  // at geometric checkpoints
    u64 burn_in_start = 1;
};

// prefix counting averages #(U cap {1..n})/n; extrema are scanned exactly
// over the burn-in range (they can only move at event boundaries)
inline DensityReport densities(const EventSet& u, double burn_in = 0.1) {
    require(u.horizon() >= 1, "densities: empty horizon");
    require(burn_in >= 0.0 && burn_in < 1.0, "densities: burn-in must be in [0,1)");
    u64 h = u.horizon();
    u64 n0 = std::max<u64>(1, u64(burn_in * double(h)));

    DensityReport rep;
    rep.burn_in_start = n0;

    std::vector<u64> checkpoints;
    for (u64 n = h; n >= 1; n >>= 1) {
        checkpoints.push_back(n);
        if (n == 1) break;
    }
    std::sort(checkpoints.begin(), checkpoints.end());

    bool seeded = false;
    Rational hi{0, 1}, lo{0, 1};
    auto consider = [&](u64 c, u64 n) {
        if (n < n0 || n > h) return;
        Rational r{i64(c), i64(n)};
        if (!seeded) {
            hi = lo = r;
            seeded = true;
            return;
        }
        if (hi < r) hi = r;
        if (r < lo) lo = r;
    };

    u64 c = 0;
    std::size_t ci = 0;
    u64 c_at_n0 = 0;
    bool n0_done = false;
    u.for_each([&](u64 e) {
        while (ci < checkpoints.size() && checkpoints[ci] < e) {
            rep.prefix_averages.push_back({checkpoints[ci], Rational(i64(c), i64(checkpoints[ci]))});
            ++ci;
        }
        if (!n0_done && e > n0) { c_at_n0 = c; n0_done = true; }
        if (e > n0) consider(c, e - 1);  // local minimum just before e
        ++c;
        consider(c, e);  // local maximum at e
    });
    while (ci < checkpoints.size()) {
        rep.prefix_averages.push_back({checkpoints[ci], Rational(i64(c), i64(checkpoints[ci]))});
        ++ci;
    }
    if (!n0_done) c_at_n0 = c;
    consider(c_at_n0, n0);
    consider(u.count(), h);
    rep.upper = hi;
    rep.lower = lo;
    return rep;
}

inline Rational natural_density_estimate(const EventSet& u) {
    require(u.horizon() >= 1, "density: empty horizon");
    return Rational(i64(u.count()), i64(u.horizon()));
}

}  // namespace ergokit
