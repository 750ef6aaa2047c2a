#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"

using namespace oracle;

TEST_CASE("progression density by inclusion-exclusion") {
    // multiples of 2: density 1/2
    REQUIRE(ap_union_density({{2, 2}}) == Rational(1, 2));
    // multiples of 2 or 3: 1/2 + 1/3 - 1/6 = 2/3
    REQUIRE(ap_union_density({{2, 2}, {3, 3}}) == Rational(2, 3));
    // odds and evens partition everything
    REQUIRE(ap_union_density({{1, 2}, {2, 2}}) == Rational(1, 1));
    // 1 mod 4 and 3 mod 4 inside odds: no double counting issues
    REQUIRE(ap_union_density({{1, 4}, {3, 4}, {1, 2}}) == Rational(1, 2));
    // incompatible intersection drops out: 0 mod 2 vs 1 mod 2 with a third
    REQUIRE(ap_union_density({{2, 6}, {3, 6}}) == Rational(1, 3));
}

TEST_CASE("progression counts match the density at O(1/n) rate") {
    std::vector<Progression> ps = {{2, 2}, {3, 3}, {5, 7}};
    Rational d = ap_union_density(ps);
    for (u64 n : {50u, 200u, 1000u, 5000u}) {
        u64 c = ap_union_count(ps, n);
        // floor errors: at most 2^m terms each off by < 1
        double err = std::fabs(double(c) / double(n) - d.value());
        REQUIRE(err <= 8.0 / double(n));
    }
}

TEST_CASE("hand-checked Pliss indices") {
    // a = 0.6, 0.4, 1.6, 1.2, 2.2 with c0 = 0.5:
    //  m=1: 0.6 >= 0.5            -> yes
    //  m=2: 0.4/2 = 0.2 < 0.5     -> no
    //  m=3: 1.6/3, (1.6-0.6)/2 = 0.5 (tie counts), 1.2 -> yes
    //  m=4: (1.2-1.6)/1 < 0       -> no
    //  m=5: 2.2/5 = 0.44 < 0.5    -> no
    std::vector<double> a = {0.6, 0.4, 1.6, 1.2, 2.2};
    std::vector<bool> expect = {true, false, true, false, false};
    for (std::size_t m = 1; m <= a.size(); ++m)
        REQUIRE(pliss_index_ok(a, m, 0.5, 1e-12) == expect[m - 1]);
}

TEST_CASE("integer Pliss oracle agrees with float oracle on small walks") {
    std::vector<i64> g = {1, 1, -1, 1, -1, -1, 1, 1, 1, -1, 1, 1};
    std::vector<double> S(g.size() + 1, 0.0);
    std::vector<double> a(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        S[i + 1] = S[i] + double(g[i]);
        a[i] = S[i + 1];
    }
    auto ints = pliss_times_bruteforce_int(g, 1, 5);  // gamma = 1/5
    auto flts = pliss_times_bruteforce(S, 0.2, 1e-12);
    REQUIRE(ints == flts);
    for (u64 m : ints) REQUIRE(pliss_index_ok(a, m, 0.2, 1e-12));
}

TEST_CASE("geometric return-time moments") {
    for (double p : {0.2, 0.3, 0.5, 0.7, 0.8}) {
        double m1 = 0, m2 = 0, w = p;
        for (int j = 1; j <= 4000; ++j) {
            m1 += j * w;
            m2 += double(j) * j * w;
            w *= (1.0 - p);
        }
        REQUIRE(std::fabs(m1 - geometric_mean(p)) < 1e-9);
        REQUIRE(std::fabs(m2 - geometric_second_moment(p)) < 1e-9);
    }
    REQUIRE(geometric_mean(0.5) == 2.0);            // sum j 2^-j = 2
    REQUIRE(geometric_second_moment(0.5) == 6.0);   // sum j^2 2^-j = 6
}

TEST_CASE("2x2 operator norm basics") {
    Mat2 id{1, 0, 0, 1};
    REQUIRE(std::fabs(double(op_norm(id)) - 1.0) < 1e-15);
    Mat2 diag{3, 0, 0, 0.5};
    REQUIRE(std::fabs(double(op_norm(diag)) - 3.0) < 1e-12);
    Mat2 rot{0, -1, 1, 0};
    REQUIRE(std::fabs(double(op_norm(rot)) - 1.0) < 1e-12);
    // product norm is submultiplicative
    Mat2 m1{2, 1, 0, 1}, m2{1, 0, 3, 1};
    long double n12 = op_norm(mul(m1, m2));
    REQUIRE(double(n12) <= double(op_norm(m1) * op_norm(m2)) + 1e-9);
}
