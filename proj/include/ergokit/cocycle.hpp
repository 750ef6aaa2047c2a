#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <variant>
#include <vector>

#include "ergokit/common.hpp"
#include "ergokit/schedule.hpp"

namespace ergokit {

enum class CocycleKind { additive, subadditive, supadditive };

// absolute comparison slack at horizon index n (float paths only)
inline double pliss_slack(u64 n) { return 1e-12 * double(n); }

// ------------------------------------------------------------- 2x2 matrices

struct Mat2d {
    double a = 1, b = 0, c = 0, d = 1;
};

inline Mat2d mat_mul(const Mat2d& x, const Mat2d& y) {
    return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d,
            x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
}

inline double mat_op_norm(const Mat2d& m) {  // largest singular value
    double t = m.a * m.a + m.b * m.b + m.c * m.c + m.d * m.d;
    double det = m.a * m.d - m.b * m.c;
    double disc = t * t - 4.0 * det * det;
    if (disc < 0) disc = 0;
    return std::sqrt((t + std::sqrt(disc)) * 0.5);
}

inline double mat_abs_det(const Mat2d& m) { return std::fabs(m.a * m.d - m.b * m.c); }

// ------------------------------------------------------------- cocycle data

struct AdditiveData {
    std::vector<double> prefix;  // S[0..N], S[0] = 0
};

enum class MatrixMode { log_norm, log_conorm };  // sub / sup additive sides

struct MatrixData {
    std::vector<Mat2d> word;  // A(f^k x) at position k
    MatrixMode mode = MatrixMode::log_norm;
};

struct GridData {
    // v[k][n-1] = phi(n, f^k x); rows may be ragged (n up to N-k)
    std::vector<std::vector<double>> v;
};

class CocycleTable {
  public:
    CocycleKind kind;

    static CocycleTable additive(const std::vector<double>& generator) {
        CocycleTable t;
        t.kind = CocycleKind::additive;
        AdditiveData d;
        d.prefix.resize(generator.size() + 1, 0.0);
        for (std::size_t i = 0; i < generator.size(); ++i)
            d.prefix[i + 1] = d.prefix[i] + generator[i];
        t.len_ = generator.size();
        t.data_ = std::move(d);
        return t;
    }

    static CocycleTable matrix(std::vector<Mat2d> word, MatrixMode mode) {
        for (const auto& m : word)
            require(mat_abs_det(m) > 0.0, "matrix cocycle: matrices must be invertible");
        CocycleTable t;
        t.kind = (mode == MatrixMode::log_norm) ? CocycleKind::subadditive
                                                : CocycleKind::supadditive;
        t.len_ = word.size();
        t.data_ = MatrixData{std::move(word), mode};
        return t;
    }

    static CocycleTable grid(std::vector<std::vector<double>> rows, CocycleKind kind) {
        CocycleTable t;
        t.kind = kind;
        t.len_ = rows.size();
        t.data_ = GridData{std::move(rows)};
        return t;
    }

    u64 length() const { return len_; }

    // phi(n, f^k x), defined for n >= 1, k + n <= length
    double evaluate(u64 n, u64 k) const {
        require(n >= 1 && k + n <= len_, "cocycle: (n,k) outside the table");
        if (const auto* ad = std::get_if<AdditiveData>(&data_))
            return ad->prefix[k + n] - ad->prefix[k];
        if (const auto* md = std::get_if<MatrixData>(&data_)) {
            Mat2d p = md->word[k];
            double scale = 0.0, logdet = std::log(mat_abs_det(md->word[k]));
            for (u64 i = 1; i < n; ++i) {
                p = mat_mul(md->word[k + i], p);
                logdet += std::log(mat_abs_det(md->word[k + i]));
                double m = mat_op_norm(p);
                if (m > 1e60) {
                    p.a /= m; p.b /= m; p.c /= m; p.d /= m;
                    scale += std::log(m);
                }
            }
            double ln = std::log(mat_op_norm(p)) + scale;
            return md->mode == MatrixMode::log_norm ? ln : logdet - ln;
        }
        const auto& gd = std::get<GridData>(data_);
        require(k < gd.v.size() && n - 1 < gd.v[k].size(), "cocycle: grid hole");
        return gd.v[k][n - 1];
    }

    const AdditiveData* additive_data() const { return std::get_if<AdditiveData>(&data_); }
    const MatrixData* matrix_data() const { return std::get_if<MatrixData>(&data_); }

  private:
    u64 len_ = 0;
    std::variant<AdditiveData, MatrixData, GridData> data_;
};

// ---------------------------------------------------------------- kind check

struct KindWitness {
    u64 n, m, k;
    double lhs, rhs;  // phi(n+m,k) vs phi(n,k) + phi(m,k+n)
};

struct KindReport {
    bool consistent = true;
    u64 checked = 0;
    std::optional<KindWitness> witness;
};

// verifies the defining identity/inequality on sampled (or exhaustive small)
// triples; the first witness is lexicographically minimal in (n, m, k)
inline KindReport check_kind(const CocycleTable& t, u64 sample_budget = 2000,
                             u64 seed = 1) {
    KindReport rep;
    u64 N = t.length();
    if (N < 2) return rep;
    auto test = [&](u64 n, u64 m, u64 k) -> bool {
        double lhs = t.evaluate(n + m, k);
        double rhs = t.evaluate(n, k) + t.evaluate(m, k + n);
        double tol = pliss_slack(k + n + m) + 1e-9;
        bool ok = true;
        switch (t.kind) {
            case CocycleKind::additive: ok = std::fabs(lhs - rhs) <= tol; break;
            case CocycleKind::subadditive: ok = lhs <= rhs + tol; break;
            case CocycleKind::supadditive: ok = lhs + tol >= rhs; break;
        }
        ++rep.checked;
        if (!ok && !rep.witness) rep.witness = KindWitness{n, m, k, lhs, rhs};
        return ok;
    };
    // count of all triples n,m >= 1, k >= 0, k+n+m <= N is ~N^3/6
    double total = double(N) * double(N) * double(N) / 6.0;
    if (total <= double(sample_budget)) {
        for (u64 n = 1; n + 1 <= N; ++n)
            for (u64 m = 1; n + m <= N; ++m)
                for (u64 k = 0; k + n + m <= N; ++k)
                    if (!test(n, m, k)) { rep.consistent = false; return rep; }
        return rep;
    }
    Rng rng(seed, 0xC0C);
    for (u64 s = 0; s < sample_budget; ++s) {
        u64 n = 1 + rng.next_u64() % (N - 1);
        u64 m = 1 + rng.next_u64() % (N - n);
        u64 k = (n + m < N) ? rng.next_u64() % (N - n - m + 1) : 0;
        if (!test(n, m, k)) { rep.consistent = false; return rep; }
    }
    return rep;
}

// ---------------------------------------------------------------- Pliss times

// n is a Pliss time iff every backward window beats gamma:
// phi(n-k, f^k x) >= gamma (n-k) for all 0 <= k < n
inline EventSet pliss_times(const CocycleTable& t, double gamma, u64 horizon) {
    require(horizon >= 1 && horizon <= t.length(), "pliss_times: horizon exceeds table");
    EventSet out(horizon);
    if (const auto* ad = t.additive_data()) {
        // running-max records of S_k - gamma k catch exactly the Pliss times
        const auto& S = ad->prefix;
        double best = 0.0;  // k = 0
        for (u64 n = 1; n <= horizon; ++n) {
            double tn = S[n] - gamma * double(n);
            if (tn >= best - pliss_slack(n)) out.insert(n);
            if (tn > best) best = tn;
        }
        return out;
    }
    std::vector<char> ok(horizon + 1, 1);
    if (const auto* md = t.matrix_data()) {
        // incremental products along each base point keep this at O(N^2) multiplies
        for (u64 k = 0; k < horizon; ++k) {
            Mat2d p{1, 0, 0, 1};
            double scale = 0.0, logdet = 0.0;
            for (u64 m = 1; k + m <= horizon; ++m) {
                p = mat_mul(md->word[k + m - 1], p);
                logdet += std::log(mat_abs_det(md->word[k + m - 1]));
                double mag = mat_op_norm(p);
                if (mag > 1e60) {
                    p.a /= mag; p.b /= mag; p.c /= mag; p.d /= mag;
                    scale += std::log(mag);
                }
                double ln = std::log(mat_op_norm(p)) + scale;
                double v = md->mode == MatrixMode::log_norm ? ln : logdet - ln;
                if (v < gamma * double(m) - pliss_slack(k + m)) ok[k + m] = 0;
            }
        }
    } else {
        for (u64 n = 1; n <= horizon; ++n)
            for (u64 k = 0; k < n; ++k)
                if (t.evaluate(n - k, k) < gamma * double(n - k) - pliss_slack(n)) {
                    ok[n] = 0;
                    break;
                }
    }
    for (u64 n = 1; n <= horizon; ++n)
        if (ok[n]) out.insert(n);
    return out;
}

// exact-integer path: generator values g, gamma = gp/gq; no float slack
inline EventSet pliss_times_exact(const std::vector<i64>& g, i64 gp, i64 gq, u64 horizon) {
    require(gq >= 1, "pliss_times_exact: gamma denominator must be positive");
    require(horizon >= 1 && horizon <= g.size(), "pliss_times_exact: horizon exceeds data");
    EventSet out(horizon);
    i64 S = 0;
    i64 best = 0;  // max of gq*S_k - gp*k over k < n
    for (u64 n = 1; n <= horizon; ++n) {
        S += g[n - 1];
        i64 tn = gq * S - gp * i64(n);
        if (tn >= best) out.insert(n);
        if (tn > best) best = tn;
    }
    return out;
}

// ------------------------------------------------------------ Pliss extraction

struct PlissExtract {
    std::vector<u64> indices;  // record positions of s(j) = a_j - j c0
    double theta = 0.0;        // (c1 - c0)/(C - c0)
    u64 n = 0;
    u64 guaranteed = 0;        // ceil(theta * n)
};

// record-based constructive extraction; C bounds single steps (a_0 = 0),
// which is all the counting argument consumes
inline PlissExtract pliss_extract(const std::vector<double>& a, double c0, double c1,
                                  double C) {
    require(0 < c0 && c0 < c1 && c1 <= C, "pliss_extract: need 0 < c0 < c1 <= C");
    require(!a.empty(), "pliss_extract: empty sequence");
    u64 n = a.size();
    require(a[n - 1] >= c1 * double(n) - pliss_slack(n),
            "pliss_extract: hypothesis a_n >= c1 n fails");
    double prev = 0.0;
    for (u64 j = 0; j < n; ++j) {
        require(a[j] - prev <= C + 1e-12, "pliss_extract: step exceeds C");
        prev = a[j];
    }
    PlissExtract out;
    out.n = n;
    out.theta = (c1 - c0) / (C - c0);
    out.guaranteed = u64(std::ceil(out.theta * double(n) - 1e-9));
    double best = 0.0;  // s(0) = 0
    for (u64 j = 1; j <= n; ++j) {
        double s = a[j - 1] - c0 * double(j);
        if (s >= best - pliss_slack(j)) out.indices.push_back(j);
        if (s > best) best = s;
    }
    return out;
}

// bounded-path variant: translate b_j = a_j + 2Cj and rerun with the shifted
// constants; s is literally unchanged, so the records must coincide
inline PlissExtract pliss_extract_bounded(const std::vector<double>& a, double c0, double c1,
                                          double C) {
    std::vector<double> b(a.size());
    for (u64 j = 0; j < a.size(); ++j) b[j] = a[j] + 2.0 * C * double(j + 1);
    return pliss_extract(b, c0 + 2.0 * C, c1 + 2.0 * C, 3.0 * C);
}

// ------------------------------------------------------- window average probe

// (1/n) sum_{j<n} phi(2^ell, f^j x)
inline double dyadic_window_average(const CocycleTable& t, u64 ell, u64 n) {
    u64 w = u64(1) << ell;
    require(n >= 1 && (n - 1) + w <= t.length(), "window average: table too short");
    if (const auto* ad = t.additive_data()) {
        const auto& S = ad->prefix;
        double acc = 0;
        for (u64 j = 0; j < n; ++j) acc += S[j + w] - S[j];
        return acc / double(n);
    }
    double acc = 0;
    for (u64 j = 0; j < n; ++j) acc += t.evaluate(w, j);
    return acc / double(n);
}

}  // namespace ergokit
