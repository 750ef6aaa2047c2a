#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "ergokit/cocycle.hpp"
#include "oracles.hpp"

using namespace ergokit;

namespace {

std::vector<double> random_walk(Rng& rng, u64 n, double p) {
    std::vector<double> g(n);
    for (auto& v : g) v = rng.bernoulli(p) ? 1.0 : -1.0;
    return g;
}

}  // namespace

TEST_CASE("additive pliss times match the quadratic oracle") {
    for (u64 trial = 0; trial < 20; ++trial) {
        Rng rng(41, trial);
        auto g = random_walk(rng, 400, 0.65);
        auto t = CocycleTable::additive(g);
        double gamma = 0.2;
        auto fast = pliss_times(t, gamma, 400).to_events();
        std::vector<double> S(g.size() + 1, 0.0);
        for (std::size_t i = 0; i < g.size(); ++i) S[i + 1] = S[i] + g[i];
        auto slow = oracle::pliss_times_bruteforce(S, gamma, 1e-9);
        REQUIRE(fast == slow);
    }
}

TEST_CASE("exact integer pliss path agrees with the integer oracle") {
    for (u64 trial = 0; trial < 20; ++trial) {
        Rng rng(42, trial);
        std::vector<i64> g(500);
        for (auto& v : g) v = rng.bernoulli(0.7) ? 1 : -1;
        auto fast = pliss_times_exact(g, 1, 5, 500).to_events();
        auto slow = oracle::pliss_times_bruteforce_int(g, 1, 5);
        REQUIRE(fast == slow);
        // and the float path lands on the same set for these clean inputs
        std::vector<double> gd(g.begin(), g.end());
        auto viafloat = pliss_times(CocycleTable::additive(gd), 0.2, 500).to_events();
        REQUIRE(viafloat == fast);
    }
}

TEST_CASE("pliss extraction yields verified indices with the guaranteed count") {
    double c0 = 0.25, c1 = 0.5, C = 1.0;
    for (u64 trial = 0; trial < 30; ++trial) {
        Rng rng(43, trial);
        u64 n = 600;
        std::vector<double> a(n);
        // biased bounded increments, rejected until the endpoint hypothesis holds
        for (;;) {
            double prev = 0;
            for (u64 j = 0; j < n; ++j) {
                double u = 2.0 * rng.next_u01() - 1.0;
                double step = 0.62 + (1.0 - 0.62) * u;
                a[j] = prev + std::min(step, C);
                prev = a[j];
            }
            if (a[n - 1] >= c1 * double(n)) break;
        }
        auto ex = pliss_extract(a, c0, c1, C);
        REQUIRE(ex.indices.size() >= ex.guaranteed);
        REQUIRE(ex.theta == Catch::Approx((c1 - c0) / (C - c0)));
        for (u64 m : ex.indices) REQUIRE(oracle::pliss_index_ok(a, m, c0, 1e-9));
        // extraction is exactly the c0-Pliss set when a is a cocycle sequence
        std::vector<double> g(n);
        double prev = 0;
        for (u64 j = 0; j < n; ++j) { g[j] = a[j] - prev; prev = a[j]; }
        auto full = pliss_times(CocycleTable::additive(g), c0, n).to_events();
        REQUIRE(ex.indices == full);
    }
}

TEST_CASE("translating by 2C leaves the extracted record set unchanged") {
    Rng rng(44, 7);
    u64 n = 500;
    std::vector<double> a(n);
    for (;;) {
        double prev = 0;
        for (u64 j = 0; j < n; ++j) {
            a[j] = prev + 0.6 + 0.4 * (2.0 * rng.next_u01() - 1.0);
            prev = a[j];
        }
        if (a[n - 1] >= 0.5 * double(n)) break;
    }
    auto base = pliss_extract(a, 0.25, 0.5, 1.0);
    auto moved = pliss_extract_bounded(a, 0.25, 0.5, 1.0);
    REQUIRE(base.indices == moved.indices);
    REQUIRE(moved.theta == Catch::Approx(base.theta));
    REQUIRE(base.theta == Catch::Approx(1.0 / 3.0));
}

TEST_CASE("extraction rejects broken hypotheses") {
    std::vector<double> a{0.5, 1.0, 1.5};
    REQUIRE_THROWS_AS(pliss_extract(a, 0.6, 0.5, 1.0), precondition_error);
    REQUIRE_THROWS_AS(pliss_extract(a, 0.25, 0.9, 1.0), precondition_error);  // a_n < c1 n
    std::vector<double> big{2.0, 2.5};
    REQUIRE_THROWS_AS(pliss_extract(big, 0.25, 0.5, 1.0), precondition_error);  // step > C
}

TEST_CASE("kind check accepts additive tables and flags doctored grids") {
    Rng rng(45, 1);
    auto g = random_walk(rng, 60, 0.5);
    auto t = CocycleTable::additive(g);
    auto rep = check_kind(t, 100000);
    REQUIRE(rep.consistent);
    REQUIRE(rep.checked > 0);

    // grid copied from the additive table, then one entry pushed up: no longer
    // subadditive, and the witness is the lexicographically first triple
    std::vector<std::vector<double>> rows(20);
    for (u64 k = 0; k < 20; ++k)
        for (u64 n = 1; k + n <= 20; ++n) rows[k].push_back(t.evaluate(n, k));
    rows[3][4] += 5.0;  // phi(5, 3)
    auto bad = CocycleTable::grid(rows, CocycleKind::subadditive);
    auto brep = check_kind(bad, 100000);
    REQUIRE_FALSE(brep.consistent);
    REQUIRE(brep.witness.has_value());
    auto w = *brep.witness;
    REQUIRE(w.lhs > w.rhs);
    // decomposing across (n, m, k) with k+n+m <= 8 hits phi(5,3) first at n=1
    REQUIRE(w.n + w.m + w.k <= 8);
}

TEST_CASE("matrix cocycle norms match the long-double oracle product") {
    Rng rng(46, 2);
    std::vector<Mat2d> word;
    std::vector<oracle::Mat2> oword;
    for (int i = 0; i < 40; ++i) {
        double a = 1.0 + rng.next_u01(), b = rng.next_u01() - 0.5;
        double c = rng.next_u01() - 0.5, d = 1.0 + rng.next_u01();
        word.push_back({a, b, c, d});
        oword.push_back({a, b, c, d});
    }
    auto t = CocycleTable::matrix(word, MatrixMode::log_norm);
    REQUIRE(t.kind == CocycleKind::subadditive);
    for (auto [n, k] : std::vector<std::pair<u64, u64>>{{1, 0}, {5, 3}, {40, 0}, {17, 20}}) {
        double got = t.evaluate(n, k);
        std::vector<oracle::Mat2> slice(oword.begin() + k, oword.begin() + k + n);
        double want = double(oracle::log_norm_of_product(slice));
        REQUIRE(got == Catch::Approx(want).margin(1e-8));
    }
    auto rep = check_kind(t, 4000);
    REQUIRE(rep.consistent);
}

TEST_CASE("conorm side is supadditive and pliss sets match direct evaluation") {
    Rng rng(47, 3);
    std::vector<Mat2d> word;
    for (int i = 0; i < 120; ++i) {
        // expanding-ish matrices keep log sigma_min mostly positive
        double a = 2.0 + rng.next_u01(), d = 2.0 + rng.next_u01();
        double b = 0.3 * (rng.next_u01() - 0.5), c = 0.3 * (rng.next_u01() - 0.5);
        word.push_back({a, b, c, d});
    }
    auto t = CocycleTable::matrix(word, MatrixMode::log_conorm);
    REQUIRE(t.kind == CocycleKind::supadditive);
    REQUIRE(check_kind(t, 4000).consistent);

    double gamma = 0.5;
    auto fast = pliss_times(t, gamma, 120);
    for (u64 n = 1; n <= 120; ++n) {
        bool expect = true;
        for (u64 k = 0; k < n && expect; ++k)
            if (t.evaluate(n - k, k) < gamma * double(n - k) - pliss_slack(n)) expect = false;
        REQUIRE(fast.contains(n) == expect);
    }
    REQUIRE(fast.count() > 0);
}

TEST_CASE("window averages reduce to plain sums for additive tables") {
    Rng rng(48, 4);
    auto g = random_walk(rng, 300, 0.6);
    auto t = CocycleTable::additive(g);
    u64 ell = 3, n = 200, w = u64(1) << ell;
    double got = dyadic_window_average(t, ell, n);
    double acc = 0;
    for (u64 j = 0; j < n; ++j)
        for (u64 i = 0; i < w; ++i) acc += g[j + i];
    REQUIRE(got == Catch::Approx(acc / double(n)));
    REQUIRE_THROWS_AS(dyadic_window_average(t, 9, 300), precondition_error);
}
