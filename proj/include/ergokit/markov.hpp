#pragma once

// Full Markov maps over a countable cylinder partition, driven by mass
// distributions with analytic tails: the zeta-weighted family, entropy and
// return-time integrals with certified remainders, second-moment partial
// sums, the exact-time moment sandwich, and orbit sampling.

#include <algorithm>
#include <cmath>
#include <vector>

#include "ergokit/common.hpp"
#include "ergokit/induced.hpp"
#include "ergokit/systems.hpp"

namespace ergokit {

// ------------------------------------------------- power sums, zeta machinery

// Euler-Maclaurin evaluation with two Bernoulli correction terms past a
// direct prefix of 256 terms; the next term is below 1e-14 for s in [0.4, 3]
namespace detail {

constexpr u64 em_prefix = 256;

inline double power_tail_to_infinity(double s, double K) {
    // sum_{k>=K} k^{-s} for s > 1
    double f = std::pow(K, -s);
    double fp = -s * std::pow(K, -s - 1.0);
    double fppp = -s * (s + 1.0) * (s + 2.0) * std::pow(K, -s - 3.0);
    return std::pow(K, 1.0 - s) / (s - 1.0) + f / 2.0 - fp / 12.0 + fppp / 720.0;
}

inline double log_power_tail_to_infinity(double s, double K) {
    // sum_{k>=K} log(k) k^{-s} for s > 1
    double lk = std::log(K);
    double integral = std::pow(K, 1.0 - s) * (lk / (s - 1.0) + 1.0 / ((s - 1.0) * (s - 1.0)));
    double g = lk * std::pow(K, -s);
    double gp = std::pow(K, -s - 1.0) * (1.0 - s * lk);
    double gppp = std::pow(K, -s - 3.0) *
                  (s * (s + 1.0) + (s + 2.0) * (2.0 * s + 1.0) - s * (s + 1.0) * (s + 2.0) * lk);
    return integral + g / 2.0 - gp / 12.0 + gppp / 720.0;
}

}  // namespace detail

inline double zeta_series(double s) {
    require(s > 1.0, "zeta: series needs s > 1");
    double acc = 0;
    for (u64 k = 1; k < detail::em_prefix; ++k) acc += std::pow(double(k), -s);
    return acc + detail::power_tail_to_infinity(s, double(detail::em_prefix));
}

// sum_{k>=1} log(k) k^{-s}, s > 1 (equals -zeta'(s))
inline double log_weighted_zeta(double s) {
    require(s > 1.0, "zeta: log-weighted series needs s > 1");
    double acc = 0;
    for (u64 k = 2; k < detail::em_prefix; ++k) acc += std::log(double(k)) * std::pow(double(k), -s);
    return acc + detail::log_power_tail_to_infinity(s, double(detail::em_prefix));
}

// P(s, M) = sum_{k=1}^{M} k^{-s} for any s > 0, s != 1; exact for small M,
// Euler-Maclaurin beyond the prefix so that M ~ 2^60 costs nothing
inline double partial_power_sum(double s, double M) {
    require(s > 0.0 && std::fabs(s - 1.0) > 1e-9, "power sum: s must avoid 1");
    require(M >= 1.0, "power sum: empty range");
    double Mf = std::floor(M);
    if (Mf <= double(detail::em_prefix) + 16.0) {
        double acc = 0;
        for (u64 k = 1; k <= u64(Mf); ++k) acc += std::pow(double(k), -s);
        return acc;
    }
    double K = double(detail::em_prefix);
    double acc = 0;
    for (u64 k = 1; k < detail::em_prefix; ++k) acc += std::pow(double(k), -s);
    // sum_{k=K}^{M} via the closed E-M form with both endpoints
    double fa = std::pow(K, -s), fb = std::pow(Mf, -s);
    double fpa = -s * std::pow(K, -s - 1.0), fpb = -s * std::pow(Mf, -s - 1.0);
    double fppa = -s * (s + 1.0) * (s + 2.0) * std::pow(K, -s - 3.0);
    double fppb = -s * (s + 1.0) * (s + 2.0) * std::pow(Mf, -s - 3.0);
    double integral = (std::pow(Mf, 1.0 - s) - std::pow(K, 1.0 - s)) / (1.0 - s);
    return acc + integral + (fa + fb) / 2.0 + (fpb - fpa) / 12.0 - (fppb - fppa) / 720.0;
}

// --------------------------------------------------------- mass distributions

enum class MassKind { geometric, zeta, explicit_list };

// weight function j -> m(P_j) with an explicit prefix and a closed-form tail;
// P_j is the cylinder of the word 0^{j-1} 1, so the first-hit time is j on it
struct MassDistribution {
    MassKind kind = MassKind::geometric;
    double alpha = 0;
    u64 ell = 0;
    double zeta_2a = 0;             // zeta(2 + alpha), cached
    std::vector<double> weights;    // m(P_1) .. m(P_cutoff)
    double tail_mass = 0;           // analytic mass past the cutoff
    double normalization = 0;       // explicit sum + tail, certified near 1

    u64 cutoff() const { return weights.size(); }

    double weight(u64 j) const {
        require(j >= 1, "mass: cells are indexed from 1");
        if (j <= weights.size()) return weights[j - 1];
        switch (kind) {
            case MassKind::geometric:
                return std::ldexp(1.0, -int(std::min<u64>(j, 1060)));
            case MassKind::zeta:
                if (j <= ell) return std::ldexp(1.0, -int(j));
                return std::ldexp(1.0, -int(ell)) / zeta_2a /
                       std::pow(double(j - ell), 2.0 + alpha);
            case MassKind::explicit_list:
                return 0.0;
        }
        return 0.0;
    }
};

inline void certify_normalization(const MassDistribution& m) {
    require(std::fabs(m.normalization - 1.0) <= 1e-12,
            "mass: normalization certificate failed");
    for (double w : m.weights) require(w >= 0.0, "mass: negative weight");
}

inline MassDistribution geometric_mass(u64 cutoff = 64) {
    require(cutoff >= 4 && cutoff <= 1000, "mass: cutoff out of range");
    MassDistribution m;
    m.kind = MassKind::geometric;
    for (u64 j = 1; j <= cutoff; ++j) m.weights.push_back(std::ldexp(1.0, -int(j)));
    m.tail_mass = std::ldexp(1.0, -int(cutoff));
    double s = 0;
    for (double w : m.weights) s += w;
    m.normalization = s + m.tail_mass;
    certify_normalization(m);
    return m;
}

// m(P_j) = 2^{-j} up to ell, then a zeta-normalized polynomial tail; the two
// branches give exactly 1 - 2^{-ell} and 2^{-ell} of mass respectively
inline MassDistribution zeta_mass(double alpha, u64 ell, u64 cutoff = 4096) {
    require(alpha > 0.0 && alpha < 1.0, "mass: alpha must be inside (0,1)");
    require(ell >= 1 && ell <= 500, "mass: ell out of range");
    require(cutoff >= ell + 64, "mass: cutoff too close to ell");
    MassDistribution m;
    m.kind = MassKind::zeta;
    m.alpha = alpha;
    m.ell = ell;
    m.zeta_2a = zeta_series(2.0 + alpha);
    for (u64 j = 1; j <= cutoff; ++j) {
        if (j <= ell)
            m.weights.push_back(std::ldexp(1.0, -int(j)));
        else
            m.weights.push_back(std::ldexp(1.0, -int(ell)) / m.zeta_2a /
                                std::pow(double(j - ell), 2.0 + alpha));
    }
    double tail_zeta = m.zeta_2a - partial_power_sum(2.0 + alpha, double(cutoff - ell));
    m.tail_mass = std::ldexp(1.0, -int(ell)) * tail_zeta / m.zeta_2a;
    double s = 0;
    for (std::size_t j = m.weights.size(); j-- > 0;) s += m.weights[j];
    m.normalization = s + m.tail_mass;
    certify_normalization(m);
    return m;
}

inline MassDistribution explicit_mass(std::vector<double> weights, double tail_mass = 0.0) {
    MassDistribution m;
    m.kind = MassKind::explicit_list;
    m.weights = std::move(weights);
    m.tail_mass = tail_mass;
    double s = 0;
    for (double w : m.weights) s += w;
    m.normalization = s + tail_mass;
    certify_normalization(m);
    return m;
}

// --------------------------------------------------------- invariant integrals

struct InvariantStats {
    double h_F = 0;      // sum m log(1/m), analytic remainder past the cutoff
    double mean_R = 0;   // sum j m_j, analytic remainder past the cutoff
    double abramov = 0;  // h_F / mean_R
    double tail_h = 0, tail_R = 0;  // the remainders that were added
    double c_alpha = 0;             // zeta kind: computed constant of the tail bounds
    bool mean_bounded = false;      // mean_R <= 2 + c_alpha (zeta kind)
};

// C(alpha): the smallest constant covering both displayed tail bounds
//   sum_{j>l} j m_j            <= (l+1) 2^{-l} zeta(1+a)/zeta(2+a) <= C l/2^l
//   sum_{j>l} m_j log(1/m_j)   <= [log(2^l zeta(2+a)) + (2+a) zeta(1+a)/zeta(2+a)] 2^{-l}
// maximized over l >= 1 (both ratios to l/2^l decrease in l)
inline double c_of_alpha(double alpha) {
    require(alpha > 0.0 && alpha < 1.0, "mass: alpha must be inside (0,1)");
    double z1 = zeta_series(1.0 + alpha), z2 = zeta_series(2.0 + alpha);
    double best = 0;
    for (u64 l = 1; l <= 64; ++l) {
        double lf = double(l);
        double c1 = (lf + 1.0) / lf * z1 / z2;
        double c2 = (std::log(std::ldexp(1.0, int(l)) * z2) + (2.0 + alpha) * z1 / z2) / lf;
        best = std::max({best, c1, c2});
    }
    return best;
}

inline InvariantStats invariant_stats(const MassDistribution& m) {
    certify_normalization(m);
    InvariantStats st;
    for (u64 j = 1; j <= m.cutoff(); ++j) {
        double w = m.weights[j - 1];
        if (w <= 0.0) continue;
        st.mean_R += double(j) * w;
        st.h_F += w * std::log(1.0 / w);
    }
    if (m.kind == MassKind::geometric) {
        // sum_{j>J} j 2^{-j} = (J+2) 2^{-J}; entropy tail is log2 times that
        u64 J = m.cutoff();
        st.tail_R = double(J + 2) * std::ldexp(1.0, -int(J));
        st.tail_h = std::log(2.0) * st.tail_R;
    } else if (m.kind == MassKind::zeta) {
        double s = 2.0 + m.alpha;
        double Kpast = double(m.cutoff() - m.ell);  // tail index k = j - ell starts past this
        double scale = std::ldexp(1.0, -int(m.ell)) / m.zeta_2a;
        double z1 = zeta_series(1.0 + m.alpha);
        double p1 = partial_power_sum(1.0 + m.alpha, Kpast);
        double p2 = partial_power_sum(s, Kpast);
        st.tail_R = scale * ((z1 - p1) + double(m.ell) * (m.zeta_2a - p2));
        double logc = std::log(std::ldexp(1.0, int(m.ell)) * m.zeta_2a);
        double lsum = log_weighted_zeta(s);
        double lpart = 0;
        for (u64 k = 1; k <= u64(Kpast); ++k) lpart += std::log(double(k)) * std::pow(double(k), -s);
        st.tail_h = scale * (logc * (m.zeta_2a - p2) + s * (lsum - lpart));
        st.c_alpha = c_of_alpha(m.alpha);
    }
    st.mean_R += st.tail_R;
    st.h_F += st.tail_h;
    st.abramov = st.h_F / st.mean_R;
    if (m.kind == MassKind::zeta) st.mean_bounded = st.mean_R <= 2.0 + st.c_alpha;
    return st;
}

// S(N) = sum_{j<=N} j^2 m_j; for the zeta family this diverges like N^{1-a},
// evaluated in closed form so that N ~ 2^60 is fine
inline double second_moment_partial(const MassDistribution& m, double N) {
    require(N >= 1.0, "second moment: empty range");
    double acc = 0;
    u64 direct = std::min<u64>(m.cutoff(), u64(std::min(N, 1e18)));
    if (m.kind != MassKind::zeta || N <= double(m.cutoff())) {
        for (u64 j = 1; j <= direct; ++j) acc += double(j) * double(j) * m.weight(j);
        if (N > double(m.cutoff()))
            require(m.kind == MassKind::geometric || m.tail_mass == 0.0,
                    "second moment: no analytic tail for this distribution");
        if (m.kind == MassKind::geometric && N > double(m.cutoff())) {
            // sum_{j>J} j^2 2^{-j} = (J^2 + 4J + 6) 2^{-J}; subtract the piece past N
            auto tail2 = [](double x) {
                return (x * x + 4.0 * x + 6.0) * std::pow(2.0, -x);
            };
            acc += tail2(double(m.cutoff())) - tail2(std::floor(N));
        }
        return acc;
    }
    for (u64 j = 1; j <= m.ell; ++j) acc += double(j) * double(j) * m.weight(j);
    double lf = double(m.ell);
    double M = N - lf;  // tail index range k = 1 .. N - ell
    double scale = std::ldexp(1.0, -int(m.ell)) / m.zeta_2a;
    acc += scale * (partial_power_sum(m.alpha, M) + 2.0 * lf * partial_power_sum(1.0 + m.alpha, M) +
                    lf * lf * partial_power_sum(2.0 + m.alpha, M));
    return acc;
}

// divergence probe: S(2N) >= factor * S(N) along doublings from n0
inline bool second_moment_doubling_ok(const MassDistribution& m, double n0, u64 doublings,
                                      double factor = 1.3) {
    double N = n0;
    for (u64 k = 0; k < doublings; ++k) {
        if (second_moment_partial(m, 2.0 * N) < factor * second_moment_partial(m, N)) return false;
        N *= 2.0;
    }
    return true;
}

// ------------------------------------------------------ exact-time moment law

struct MomentSandwich {
    double mean_nu = 0;    // int R dnu
    double second_nu = 0;  // int R^2 dnu
    double mean_mu = 0;    // int R dmu, mu the tower projection of nu
    double mean_mu_stderr = 0;
    double lower = 0, upper = 0;  // (1/2) mean_nu mean_mu and 2 mean_nu mean_mu
    bool holds = false;
};

// Bernoulli(p) base: geometric return times, exact series on the nu side and
// Monte Carlo on the mu side. The projection of the first-hit tower of
// Bernoulli(p) is Bernoulli(p) again, so mu-samples are fresh p-points.
inline MomentSandwich moment_sandwich_first_hit(double p, u64 mu_samples, u64 seed) {
    require(p > 0.0 && p <= 1.0, "moment sandwich: p must be in (0,1]");
    require(mu_samples >= 100, "moment sandwich: too few samples");
    MomentSandwich ms;
    ms.mean_nu = 1.0 / p;
    ms.second_nu = (2.0 - p) / (p * p);
    Rng rng(seed, 0);
    double acc = 0, acc2 = 0;
    for (u64 s = 0; s < mu_samples; ++s) {
        u64 r = 1;
        while (!rng.bernoulli(p)) ++r;
        acc += double(r);
        acc2 += double(r) * double(r);
    }
    ms.mean_mu = acc / double(mu_samples);
    double var = std::max(0.0, acc2 / double(mu_samples) - ms.mean_mu * ms.mean_mu);
    ms.mean_mu_stderr = std::sqrt(var / double(mu_samples));
    ms.lower = 0.5 * ms.mean_nu * ms.mean_mu;
    ms.upper = 2.0 * ms.mean_nu * ms.mean_mu;
    ms.holds = ms.lower <= ms.second_nu && ms.second_nu <= ms.upper;
    return ms;
}

// finite version, fully exact. R must be the first-return time of its own
// domain, which makes the tower hitting time exact: from level j of the
// fiber over x it equals R(x) - j (R itself on the base: next return), so
// the fiber sum collapses and int R dmu = sum nu(x) R(x)(R(x)+1)/2 over the
// tower mass
inline MomentSandwich moment_sandwich_finite(const FiniteMap& f, const TimeTable& R,
                                             const std::vector<double>& nu) {
    require(R.size() == std::size_t(f.n), "moment sandwich: table size mismatch");
    std::vector<uint8_t> dom(f.n, 0);
    for (int x = 1; x <= f.n; ++x) dom[x - 1] = in_domain(R, x) ? 1 : 0;
    if (R != first_return_table(f, dom))
        throw unsupported_error("moment sandwich: time table is not an exact first return");
    require(int(nu.size()) == f.n, "moment sandwich: nu size mismatch");
    MomentSandwich ms;
    double total = 0, hit_sum = 0;
    for (int x = 1; x <= f.n; ++x) {
        if (nu[x - 1] == 0.0) continue;
        require(nu[x - 1] > 0.0 && in_domain(R, x), "moment sandwich: nu must sit in the domain");
        double r = double(R[x - 1]);
        total += nu[x - 1];
        ms.mean_nu += r * nu[x - 1];
        ms.second_nu += r * r * nu[x - 1];
        hit_sum += r * (r + 1.0) / 2.0 * nu[x - 1];
    }
    require(std::fabs(total - 1.0) <= 1e-9, "moment sandwich: nu must be a probability");
    ms.mean_mu = hit_sum / ms.mean_nu;
    ms.lower = 0.5 * ms.mean_nu * ms.mean_mu;
    ms.upper = 2.0 * ms.mean_nu * ms.mean_mu;
    ms.holds = ms.lower <= ms.second_nu && ms.second_nu <= ms.upper;
    return ms;
}

// ---------------------------------------------------------------- orbit sampling

struct MarkovOrbit {
    std::vector<u64> cells;    // i.i.d. cell indices: the induced-map itinerary
    std::vector<int> symbols;  // concatenated words 0^{j-1} 1: the base orbit
    u64 resampled = 0;         // draws that fell past the cutoff and were redrawn
    double truncation_mass = 0;
};

inline MarkovOrbit sample_markov_orbit(const MassDistribution& m, u64 length, Rng& rng,
                                       u64 symbol_cap = 1 << 24) {
    certify_normalization(m);
    MarkovOrbit orb;
    orb.truncation_mass = m.tail_mass;
    auto cum = cumulative_weights(m.weights);
    orb.cells.reserve(length);
    while (orb.cells.size() < length) {
        double u = rng.next_u01() * m.normalization;
        auto it = std::lower_bound(cum.begin(), cum.end(), u);
        if (it == cum.end()) {
            ++orb.resampled;
            continue;
        }
        u64 j = u64(it - cum.begin()) + 1;
        orb.cells.push_back(j);
        require(orb.symbols.size() + j <= symbol_cap, "markov orbit: symbol budget exhausted");
        for (u64 i = 1; i < j; ++i) orb.symbols.push_back(0);
        orb.symbols.push_back(1);
    }
    return orb;
}

}  // namespace ergokit
