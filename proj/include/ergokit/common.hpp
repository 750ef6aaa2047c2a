#pragma once

#include <cstdint>
#include <cstdlib>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace ergokit {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using i128 = __int128;

// error taxonomy; the CLI maps these onto exit codes
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct precondition_error : error {
    using error::error;
};
struct precision_error : error {
    using error::error;
};
struct unsupported_error : error {
    using error::error;
};
struct config_error : error {
    using error::error;
};

inline void require(bool ok, const std::string& msg) {
    if (!ok) throw precondition_error(msg);
}

// exact signed rational, normalized, den > 0
struct Rational {
    i64 num = 0;
    i64 den = 1;

    Rational() = default;
    Rational(i64 n, i64 d) : num(n), den(d) { normalize(); }
    static Rational of(i64 n) { return Rational(n, 1); }

    void normalize() {
        if (den == 0) throw precondition_error("rational: zero denominator");
        if (den < 0) { num = -num; den = -den; }
        i64 g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) { num /= g; den /= g; }
        if (num == 0) den = 1;
    }
    double value() const { return double(num) / double(den); }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num == b.num && a.den == b.den;
    }
    friend bool operator<(const Rational& a, const Rational& b) {
        return i128(a.num) * b.den < i128(b.num) * a.den;
    }
    friend bool operator<=(const Rational& a, const Rational& b) {
        return i128(a.num) * b.den <= i128(b.num) * a.den;
    }
    friend Rational operator+(const Rational& a, const Rational& b) {
        i128 n = i128(a.num) * b.den + i128(b.num) * a.den;
        i128 d = i128(a.den) * b.den;
        i128 lim = std::numeric_limits<i64>::max();
        if (n > lim || n < -lim || d > lim)
            throw precondition_error("rational: overflow in add");
        return Rational(i64(n), i64(d));
    }
    friend Rational operator-(const Rational& a, const Rational& b) {
        return a + Rational(-b.num, b.den);
    }
    Rational abs() const { return Rational(num < 0 ? -num : num, den); }
};

// distances between event sets are powers of two; keep the exponent exact
struct Dyadic {
    bool zero = true;
    u64 exponent = 0;  // value = 2^-exponent when !zero

    static Dyadic zero_value() { return {}; }
    static Dyadic pow2(u64 e) { return {false, e}; }
    double value() const { return zero ? 0.0 : std::ldexp(1.0, -int(std::min<u64>(exponent, 1080))); }
    friend bool operator==(const Dyadic& a, const Dyadic& b) {
        return a.zero == b.zero && (a.zero || a.exponent == b.exponent);
    }
    friend bool operator<(const Dyadic& a, const Dyadic& b) {
        if (a.zero) return !b.zero;
        if (b.zero) return false;
        return a.exponent > b.exponent;
    }
    friend bool operator<=(const Dyadic& a, const Dyadic& b) { return a == b || a < b; }
};

// counter-based splittable generator (splitmix finalizer over a keyed counter);
// every (seed, stream) pair is an independent deterministic sequence
inline u64 mix64(u64 z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

class Rng {
  public:
    Rng(u64 seed, u64 stream) : key_(mix64(seed ^ mix64(stream * 0x9e3779b97f4a7c15ull + 1))), ctr_(0) {}

    u64 next_u64() { return mix64(key_ + (++ctr_) * 0x9e3779b97f4a7c15ull); }
    double next_u01() { return double(next_u64() >> 11) * 0x1.0p-53; }
    bool bernoulli(double p) {
        if (p <= 0.0) return false;
        if (p >= 1.0) return true;
        return next_u01() < p;
    }
    // weights must sum to ~1; returns index
    int pick(const std::vector<double>& cumulative) {
        double u = next_u01();
        for (std::size_t i = 0; i + 1 < cumulative.size(); ++i)
            if (u < cumulative[i]) return int(i);
        return int(cumulative.size()) - 1;
    }

  private:
    u64 key_;
    u64 ctr_;
};

inline std::vector<double> cumulative_weights(const std::vector<double>& w) {
    std::vector<double> c(w.size());
    double s = 0;
    for (std::size_t i = 0; i < w.size(); ++i) { s += w[i]; c[i] = s; }
    return c;
}

inline int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("ERGOKIT_THREADS")) {
        int v = std::atoi(env);
        if (v > 0) return v;
    }
    unsigned hc = std::thread::hardware_concurrency();
    return int(hc == 0 ? 1 : std::min(hc, 8u));
}

// static partition over [0, n); results must be keyed by index, not thread,
// so output bytes do not depend on the thread count
template <typename Fn>
void parallel_for(u64 n, int threads, Fn&& fn) {
    threads = std::max(1, std::min<int>(threads, int(n == 0 ? 1 : n)));
    if (threads == 1 || n < 2) {
        for (u64 i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    u64 chunk = (n + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
        u64 lo = u64(t) * chunk, hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &fn] {
            for (u64 i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

inline double binomial_stderr(double phat, u64 n) {
    if (n == 0) return 1.0;
    return std::sqrt(std::max(phat * (1.0 - phat), 1e-12) / double(n));
}

}  // namespace ergokit
