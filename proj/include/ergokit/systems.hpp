#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ergokit/common.hpp"

namespace ergokit {

// ---------------------------------------------------------------- finite maps

struct FiniteMap {
    int n = 0;                // states 1..n
    std::vector<int> succ;    // succ[i-1] = f(i)

    int step(int x) const {
        require(x >= 1 && x <= n, "finite map: state out of range");
        return succ[x - 1];
    }
    int iterate(int x, u64 k) const {
        for (u64 i = 0; i < k; ++i) x = step(x);
        return x;
    }
    std::vector<int> orbit(int x, u64 len) const {
        std::vector<int> out;
        out.reserve(len + 1);
        out.push_back(x);
        for (u64 i = 0; i < len; ++i) out.push_back(x = step(x));
        return out;
    }
    std::vector<std::vector<int>> preimages() const {
        std::vector<std::vector<int>> pre(n);
        for (int x = 1; x <= n; ++x) pre[succ[x - 1] - 1].push_back(x);
        return pre;
    }
    bool is_bijection() const {
        std::vector<int> seen(n, 0);
        for (int v : succ) {
            if (v < 1 || v > n || seen[v - 1]) return false;
            seen[v - 1] = 1;
        }
        return true;
    }
    int backward_step(int x) const {
        if (!is_bijection())
            throw unsupported_error("finite map: backward step needs a bijection");
        for (int y = 1; y <= n; ++y)
            if (succ[y - 1] == x) return y;
        throw precondition_error("finite map: no preimage");
    }
};

inline FiniteMap make_finite_map(std::vector<int> succ) {
    FiniteMap m;
    m.n = int(succ.size());
    m.succ = std::move(succ);
    for (int v : m.succ) require(v >= 1 && v <= m.n, "finite map: successor out of range");
    return m;
}

// --------------------------------------------------------------- shift spaces

enum class Sidedness { one_sided, two_sided };

struct BernoulliMeasure {
    std::vector<double> weights;
};

struct MarkovMeasure {
    std::vector<std::vector<double>> rows;  // transition matrix
    std::vector<double> stationary;
};

struct ShiftSystem {
    int alphabet = 2;
    Sidedness sides = Sidedness::one_sided;
    std::variant<BernoulliMeasure, MarkovMeasure> measure;

    bool is_bernoulli() const { return std::holds_alternative<BernoulliMeasure>(measure); }
    const BernoulliMeasure& bernoulli() const { return std::get<BernoulliMeasure>(measure); }
    const MarkovMeasure& markov() const { return std::get<MarkovMeasure>(measure); }
};

inline ShiftSystem make_bernoulli_shift(std::vector<double> weights, Sidedness sides) {
    double s = 0;
    for (double w : weights) {
        require(w >= 0.0, "bernoulli: negative weight");
        s += w;
    }
    require(std::fabs(s - 1.0) <= 1e-12, "bernoulli: weights must sum to 1 within 1e-12");
    ShiftSystem sys;
    sys.alphabet = int(weights.size());
    sys.sides = sides;
    sys.measure = BernoulliMeasure{std::move(weights)};
    return sys;
}

inline ShiftSystem make_markov_shift(std::vector<std::vector<double>> rows,
                                     std::vector<double> stationary, Sidedness sides) {
    int a = int(rows.size());
    require(int(stationary.size()) == a, "markov: stationary size mismatch");
    for (const auto& r : rows) {
        require(int(r.size()) == a, "markov: matrix must be square");
        double s = 0;
        for (double v : r) { require(v >= 0.0, "markov: negative entry"); s += v; }
        require(std::fabs(s - 1.0) <= 1e-12, "markov: rows must sum to 1");
    }
    for (int j = 0; j < a; ++j) {
        double lhs = 0;
        for (int i = 0; i < a; ++i) lhs += stationary[i] * rows[i][j];
        require(std::fabs(lhs - stationary[j]) <= 1e-10, "markov: pi P = pi fails at 1e-10");
    }
    ShiftSystem sys;
    sys.alphabet = a;
    sys.sides = sides;
    sys.measure = MarkovMeasure{std::move(rows), std::move(stationary)};
    return sys;
}

// A point is a sampled window of symbols with a cursor. Coordinates are
// 1-based looking forward (x(1) is the current first symbol); two-sided
// windows also expose x(0), x(-1), ... down to the sampled depth.
class SymbolicPoint {
  public:
    SymbolicPoint(std::shared_ptr<const std::vector<std::uint8_t>> buf, u64 zero_index,
                  Sidedness sides)
        : buf_(std::move(buf)), zero_(zero_index), sides_(sides) {}

    // coordinate i >= 1 always; i <= 0 only on two-sided windows
    int at(i64 i) const {
        require(i >= 1 || sides_ == Sidedness::two_sided,
                "symbolic point: negative coordinates need a two-sided shift");
        i64 idx = i64(zero_) + (i - 1);
        if (idx < 0 || idx >= i64(buf_->size()))
            throw precision_error("symbolic point: window exhausted");
        return (*buf_)[std::size_t(idx)];
    }
    SymbolicPoint step() const {
        if (zero_ + 1 > buf_->size())
            throw precision_error("symbolic point: window exhausted");
        return SymbolicPoint(buf_, zero_ + 1, sides_);
    }
    SymbolicPoint backward_step() const {
        if (sides_ != Sidedness::two_sided)
            throw unsupported_error("backward step: one-sided shift is not invertible");
        if (zero_ == 0) throw precision_error("symbolic point: window exhausted");
        return SymbolicPoint(buf_, zero_ - 1, sides_);
    }
    u64 forward_room() const { return buf_->size() - zero_; }
    u64 backward_room() const { return zero_; }
    Sidedness sides() const { return sides_; }

  private:
    std::shared_ptr<const std::vector<std::uint8_t>> buf_;
    u64 zero_;  // buffer index of coordinate 1
    Sidedness sides_;
};

inline int sample_symbol(const ShiftSystem& sys, Rng& rng, int prev, bool have_prev) {
    if (sys.is_bernoulli()) {
        double u = rng.next_u01(), acc = 0;
        const auto& w = sys.bernoulli().weights;
        for (std::size_t i = 0; i + 1 < w.size(); ++i) {
            acc += w[i];
            if (u < acc) return int(i);
        }
        return int(w.size()) - 1;
    }
    const auto& mk = sys.markov();
    const auto& dist = have_prev ? mk.rows[prev] : mk.stationary;
    double u = rng.next_u01(), acc = 0;
    for (std::size_t i = 0; i + 1 < dist.size(); ++i) {
        acc += dist[i];
        if (u < acc) return int(i);
    }
    return int(dist.size()) - 1;
}

// windows are drawn left to right so Markov chains stay stationary
inline SymbolicPoint sample_point(const ShiftSystem& sys, Rng& rng, u64 forward_len,
                                  u64 backward_len = 0) {
    require(sys.sides == Sidedness::two_sided || backward_len == 0,
            "sample_point: backward depth needs a two-sided shift");
    auto buf = std::make_shared<std::vector<std::uint8_t>>();
    buf->reserve(backward_len + forward_len);
    int prev = 0;
    bool have = false;
    for (u64 i = 0; i < backward_len + forward_len; ++i) {
        prev = sample_symbol(sys, rng, prev, have);
        have = true;
        buf->push_back(std::uint8_t(prev));
    }
    return SymbolicPoint(buf, backward_len, sys.sides);
}

// ------------------------------------------------------------- interval maps

enum class IntervalKind { doubling, tent, pw_linear };

struct PwBranch {
    // branch on [lo, hi): x -> slope*x + intercept (mod 1); dyadic data only
    double lo, hi;
    i64 slope;
    double intercept;
};

struct IntervalMap {
    IntervalKind kind = IntervalKind::doubling;
    std::vector<PwBranch> branches;  // pw_linear only; must partition [0,1)
};

inline IntervalMap make_interval_map(IntervalKind kind, std::vector<PwBranch> branches = {}) {
    IntervalMap m;
    m.kind = kind;
    if (kind == IntervalKind::pw_linear) {
        require(!branches.empty(), "interval map: pw-linear needs branches");
        double edge = 0.0;
        for (const auto& b : branches) {
            require(b.lo == edge, "interval map: branches must partition [0,1)");
            require(b.hi > b.lo, "interval map: empty branch");
            require(b.slope >= 1, "interval map: slope must be a positive integer");
            double lo32 = b.lo * 4294967296.0, hi32 = b.hi * 4294967296.0;
            require(lo32 == double(u64(lo32)) && hi32 == double(u64(hi32)),
                    "interval map: breakpoints must be dyadic with at most 32 bits");
            edge = b.hi;
        }
        require(edge == 1.0, "interval map: branches must partition [0,1)");
        m.branches = std::move(branches);
    }
    return m;
}

// x in [0,1) as an exact B-bit binary expansion; each map step consumes
// precision, and walking past it is an error rather than a silent rounding
class BitPoint {
  public:
    static constexpr u64 default_bits = 256;

    explicit BitPoint(u64 bits = default_bits) : bits_(bits), valid_(bits) {
        words_.assign((bits + 63) / 64, 0);
    }

    static BitPoint sample(Rng& rng, u64 bits = default_bits) {
        BitPoint p(bits);
        for (auto& w : p.words_) w = rng.next_u64();
        u64 rem = bits % 64;
        if (rem) p.words_.back() &= ~((u64(1) << (64 - rem)) - 1);
        return p;
    }

    static BitPoint from_double(double x, u64 bits = default_bits) {
        require(x >= 0.0 && x < 1.0, "bit point: need [0,1)");
        BitPoint p(bits);
        for (u64 i = 1; i <= bits; ++i) {
            x *= 2;
            if (x >= 1.0) { p.set_bit(i); x -= 1.0; }
        }
        return p;
    }

    u64 precision_left() const { return valid_; }
    u64 total_bits() const { return bits_; }

    int bit(u64 i) const {  // i-th fractional bit, 1-based
        require(i >= 1 && i <= bits_, "bit point: index out of range");
        if (i > valid_) throw precision_error("bit point: precision exhausted");
        u64 w = (i - 1) >> 6, off = 63 - ((i - 1) & 63);
        return int((words_[w] >> off) & 1);
    }

    double value() const {
        double x = 0;
        u64 top = std::min<u64>(valid_, 64);
        for (u64 i = top; i >= 1; --i) x = (x + bit_raw(i)) / 2.0;
        return x;
    }

    void shift_left_once() {  // x -> 2x mod 1
        if (valid_ == 0) throw precision_error("bit point: precision exhausted");
        u64 carry = 0;
        for (std::size_t w = words_.size(); w-- > 0;) {
            u64 nw = (words_[w] << 1) | carry;
            carry = words_[w] >> 63;
            words_[w] = nw;
        }
        --valid_;
    }

    void complement_fraction() {  // x -> 1 - x, exact for x != 0 at current precision
        if (valid_ == 0) throw precision_error("bit point: precision exhausted");
        for (auto& w : words_) w = ~w;
        // add one ulp at the last valid bit
        u64 i = valid_;
        while (i >= 1) {
            u64 w = (i - 1) >> 6, off = 63 - ((i - 1) & 63);
            u64 mask = u64(1) << off;
            if (!(words_[w] & mask)) { words_[w] |= mask; break; }
            words_[w] &= ~mask;
            --i;
        }
        mask_tail();
    }

    void multiply_small(i64 m) {  // x -> m*x mod 1, m >= 1; costs bit_width(m)-1 bits
        require(m >= 1, "bit point: slope must be positive");
        int cost = 0;
        while ((i64(1) << (cost + 1)) <= m) ++cost;
        if (valid_ < u64(cost) + 1) throw precision_error("bit point: precision exhausted");
        std::vector<u64> acc(words_.size(), 0);
        u64 mm = u64(m);
        for (int b = 0; b < 64 && (mm >> b); ++b) {
            if (!((mm >> b) & 1)) continue;
            std::vector<u64> shifted = words_;
            for (int s = 0; s < b; ++s) {  // shift by one, b times
                u64 carry = 0;
                for (std::size_t w = shifted.size(); w-- > 0;) {
                    u64 nw = (shifted[w] << 1) | carry;
                    carry = shifted[w] >> 63;
                    shifted[w] = nw;
                }
            }
            u64 carry = 0;
            for (std::size_t w = acc.size(); w-- > 0;) {
                u64 a = acc[w], s = shifted[w];
                u64 sum = a + s + carry;
                carry = (sum < a || (carry && sum == a)) ? 1 : 0;
                acc[w] = sum;
            }
        }
        words_ = std::move(acc);
        valid_ -= u64(cost);
        mask_tail();
    }

    void add_fraction(const BitPoint& other) {  // x -> x + y mod 1
        u64 carry = 0;
        for (std::size_t w = words_.size(); w-- > 0;) {
            u64 a = words_[w], b = w < other.words_.size() ? other.words_[w] : 0;
            u64 sum = a + b + carry;
            carry = (sum < a || (carry && sum == a)) ? 1 : 0;
            words_[w] = sum;
        }
        mask_tail();
    }

    // first k bits as an integer: floor(x * 2^k); exact membership tests for
    // dyadic intervals [a/2^k, b/2^k) reduce to a <= prefix_value(k) < b
    u64 prefix_value(u64 k) const {
        require(k >= 1 && k <= 64, "bit point: prefix width must be 1..64");
        if (k > valid_) throw precision_error("bit point: precision exhausted");
        u64 v = 0;
        for (u64 i = 1; i <= k; ++i) v = (v << 1) | u64(bit_raw(i));
        return v;
    }

  private:
    int bit_raw(u64 i) const {
        u64 w = (i - 1) >> 6, off = 63 - ((i - 1) & 63);
        return int((words_[w] >> off) & 1);
    }
    void set_bit(u64 i) {
        u64 w = (i - 1) >> 6, off = 63 - ((i - 1) & 63);
        words_[w] |= u64(1) << off;
    }
    void mask_tail() {
        u64 rem = bits_ % 64;
        if (rem) words_.back() &= ~((u64(1) << (64 - rem)) - 1);
    }

    u64 bits_;
    u64 valid_;
    std::vector<u64> words_;
};

inline BitPoint interval_step(const IntervalMap& map, const BitPoint& x) {
    BitPoint y = x;
    switch (map.kind) {
        case IntervalKind::doubling:
            y.shift_left_once();
            return y;
        case IntervalKind::tent:
            // 2x on [0,1/2), 2(1-x) on [1/2,1); the dyadic boundary folds mod 1
            if (y.bit(1) == 1) y.complement_fraction();
            y.shift_left_once();
            return y;
        case IntervalKind::pw_linear: {
            // branch bounds are dyadic with at most 32 bits, so a 32-bit
            // prefix decides membership exactly
            u64 pv = y.prefix_value(32);
            for (const auto& b : map.branches) {
                u64 lo = u64(b.lo * 4294967296.0), hi = u64(b.hi * 4294967296.0);
                if (pv >= lo && pv < hi) {
                    y.multiply_small(b.slope);
                    if (b.intercept != 0.0) {
                        BitPoint add = BitPoint::from_double(b.intercept, x.total_bits());
                        y.add_fraction(add);
                    }
                    return y;
                }
            }
            throw precondition_error("interval map: point escaped all branches");
        }
    }
    throw precondition_error("interval map: unknown kind");
}

// L steps; exact while precision lasts, then a precision error (never rounds)
inline std::vector<BitPoint> interval_orbit(const IntervalMap& map, const BitPoint& x, u64 len) {
    std::vector<BitPoint> out;
    out.reserve(len + 1);
    out.push_back(x);
    for (u64 i = 0; i < len; ++i) out.push_back(interval_step(map, out.back()));
    return out;
}

// ------------------------------------------------------------ worked examples

enum class ExampleId { spread_quad, cycle3_flat, cycle3_merge, dyadic_tower, first_hit_shift };

struct ExampleSystem {
    ExampleId id;
    std::string note;
    std::optional<FiniteMap> finite;
    std::vector<int> induced_time;       // R on states, finite cases
    std::optional<IntervalMap> interval;
    std::optional<ShiftSystem> shift;
};

inline ExampleSystem worked_example(ExampleId id, double p = 0.5) {
    ExampleSystem ex;
    ex.id = id;
    switch (id) {
        case ExampleId::spread_quad:
            // four states, f: 1->2, 2->3, 3->1, 4->2; R = (2,3,1,1)
            ex.finite = make_finite_map({2, 3, 1, 2});
            ex.induced_time = {2, 3, 1, 1};
            ex.note = "induced image not fully invariant under pullback of the spread set";
            break;
        case ExampleId::cycle3_flat:
            // three-cycle with R = 2 everywhere: orbit-coherent but not coherent
            ex.finite = make_finite_map({2, 3, 1});
            ex.induced_time = {2, 2, 2};
            ex.note = "orbit coherence without time coherence";
            break;
        case ExampleId::cycle3_merge:
            // three-cycle with R = (2,1,1): coherent time, non-transitive induced map
            ex.finite = make_finite_map({2, 3, 1});
            ex.induced_time = {2, 1, 1};
            ex.note = "coherent time whose induced map is not transitive";
            break;
        case ExampleId::dyadic_tower:
            // doubling map with R = 2^n on C_n = [2^-(n+1), 2^-n), C_0 = [1/2, 1);
            // each level has length 2^-(n+1), so E[R] = sum 1/2 diverges
            ex.interval = make_interval_map(IntervalKind::doubling);
            ex.note = "integrability of the induced time fails for Lebesgue";
            break;
        case ExampleId::first_hit_shift:
            // full shift; R(x) = position of the first 1-symbol
            ex.shift = make_bernoulli_shift({1.0 - p, p}, Sidedness::one_sided);
            ex.note = "lateral shift on cylinders of the full two-symbol shift";
            break;
    }
    return ex;
}

// R for the doubling-map example: 2^n on C_n; exact from the leading bits
// (first 1-bit at position i puts x in C_{i-1}, hence R = 2^{i-1})
inline u64 dyadic_tower_time(const BitPoint& x) {
    for (u64 i = 1; i <= x.precision_left(); ++i)
        if (x.bit(i) == 1) return u64(1) << (i - 1);
    throw precision_error("dyadic tower: leading zeros exhaust precision");
}

// R for the lateral shift: first coordinate holding symbol 1
inline u64 first_hit_time(const SymbolicPoint& x, u64 cap) {
    for (u64 j = 1; j <= cap; ++j)
        if (x.at(i64(j)) == 1) return j;
    return 0;  // not found within cap
}

}  // namespace ergokit
