#include <catch2/catch_amalgamated.hpp>

#include <numeric>
#include <vector>

#include "ergokit/blocks.hpp"
#include "oracles.hpp"

using namespace ergokit;

namespace {

FiniteMap random_permutation(Rng& rng, int n) {
    std::vector<int> p(n);
    std::iota(p.begin(), p.end(), 1);
    for (int i = n - 1; i > 0; --i)
        std::swap(p[i], p[rng.next_u64() % u64(i + 1)]);
    return make_finite_map(p);
}

}  // namespace

TEST_CASE("hitting-block membership is the target indicator, any depth") {
    auto sys = make_bernoulli_shift({0.5, 0.5}, Sidedness::two_sided);
    std::vector<CylinderSpec> target{{1, 1}};
    for (u64 trial = 0; trial < 25; ++trial) {
        Rng rng(81, trial);
        auto x = sample_point(sys, rng, 60, 25);
        bool in_target = x.at(1) == 1;
        for (u64 D : {1, 5, 20}) {
            auto cert = hitting_block_membership(x, target, D);
            REQUIRE(cert.in_block == in_target);
            REQUIRE(cert.depth == D);
        }
        // the identity, checked against direct schedule evaluation at preimages
        auto y = x;
        for (u64 j = 1; j <= 20; ++j) {
            y = y.backward_step();
            auto u = hitting_schedule().evaluate(shift_trace(y, 30, target), 0, 25);
            REQUIRE(u.contains(j) == in_target);
        }
    }
}

TEST_CASE("pliss-block membership matches the per-depth schedule oracle") {
    auto sys = make_bernoulli_shift({0.3, 0.7}, Sidedness::two_sided);
    u64 D = 40;
    u64 agreements = 0, members = 0;
    for (u64 trial = 0; trial < 40; ++trial) {
        Rng rng(82, trial);
        auto x = sample_point(sys, rng, 4, D);
        auto cert = pliss_block_membership_exact(x, {-1, 1}, 1, 5, D);
        // oracle: j must be an event of the schedule evaluated at the j-th preimage
        u64 first_fail = 0;
        for (u64 j = 1; j <= D && first_fail == 0; ++j) {
            std::vector<i64> g(j);
            for (u64 i = 0; i < j; ++i) g[i] = x.at(i64(i) + 1 - i64(j)) == 1 ? 1 : -1;
            if (!pliss_times_exact(g, 1, 5, j).contains(j)) first_fail = j;
        }
        REQUIRE(cert.in_block == (first_fail == 0));
        REQUIRE(cert.excluded_at == first_fail);
        // float path agrees on these integer inputs
        auto fcert = pliss_block_membership(x, {-1.0, 1.0}, 0.2, D);
        REQUIRE(fcert.in_block == cert.in_block);
        agreements += cert.in_block == (first_fail == 0);
        members += cert.in_block;
        // nesting: verdicts at smaller depths only get weaker
        for (u64 d = 1; d <= D; ++d) {
            auto c = pliss_block_membership_exact(x, {-1, 1}, 1, 5, d);
            REQUIRE(c.in_block == (first_fail == 0 || first_fail > d));
        }
    }
    REQUIRE(agreements == 40);
    REQUIRE(members > 0);
}

TEST_CASE("windowed block flags equal the quadratic backward-sum scan") {
    for (u64 trial = 0; trial < 30; ++trial) {
        Rng rng(83, trial);
        u64 D = 25, J = 40;
        std::vector<i64> pot(D + J);
        double p = trial % 3 == 0 ? 0.5 : 0.65;
        for (auto& v : pot) v = rng.bernoulli(p) ? 1 : -1;
        auto fast = block_flags_window(pot, D, J, 1, 5);
        std::vector<i64> prefix(pot.size() + 1, 0);
        for (std::size_t i = 0; i < pot.size(); ++i) prefix[i + 1] = prefix[i] + pot[i];
        for (u64 j = 0; j <= J; ++j) {
            uint8_t want = 1;
            for (u64 m = 1; m <= D; ++m)
                if (5 * (prefix[D + j] - prefix[D + j - m]) < i64(m)) { want = 0; break; }
            REQUIRE(fast[j] == want);
        }
    }
    // degenerate windows
    std::vector<i64> ones(30, 1);
    auto all = block_flags_window(ones, 10, 20, 1, 5);
    for (auto f : all) REQUIRE(f == 1);
    std::vector<i64> down(30, -1);
    auto none = block_flags_window(down, 10, 20, 1, 5);
    for (auto f : none) REQUIRE(f == 0);
}

TEST_CASE("on permutations the hitting block is the target and contains the core") {
    for (u64 trial = 0; trial < 30; ++trial) {
        Rng rng(84, trial);
        auto f = random_permutation(rng, 10);
        std::vector<uint8_t> mask(10, 0);
        for (auto& b : mask) b = rng.bernoulli(0.35) ? 1 : 0;
        if (std::find(mask.begin(), mask.end(), 1) == mask.end()) mask[3] = 1;
        u64 horizon = 30;
        std::vector<EventSet> table;
        for (int x = 1; x <= f.n; ++x) {
            EventSet u(horizon);
            int y = x;
            for (u64 n = 1; n <= horizon; ++n) {
                y = f.step(y);
                if (mask[y - 1]) u.insert(n);
            }
            table.push_back(std::move(u));
        }
        REQUIRE(block_set_finite(f, table, 12) == mask);
        auto core = first_event_core(f, table);
        bool nonempty = false;
        for (int x = 1; x <= f.n; ++x) {
            if (core[x - 1]) REQUIRE(mask[x - 1] == 1);
            nonempty = nonempty || core[x - 1];
        }
        REQUIRE(nonempty);
        auto fr = first_return_verify_finite(f, table, 12);
        REQUIRE(fr.ok);
        REQUIRE(fr.checked > 0);
    }
}

TEST_CASE("a schedule without the chaining law fails first-return verification") {
    auto f = make_finite_map({2, 1});
    u64 horizon = 12;
    EventSet full(horizon);
    for (u64 n = 1; n <= horizon; ++n) full.insert(n);
    EventSet holed(horizon);
    for (u64 n = 1; n <= horizon; ++n)
        if (n != 2) holed.insert(n);
    std::vector<EventSet> table{full, holed};
    auto B = block_set_finite(f, table, 8);
    REQUIRE(B == std::vector<uint8_t>{1, 0});
    auto rep = first_return_verify_finite(f, table, 8);
    REQUIRE_FALSE(rep.ok);
    REQUIRE(rep.landings_out == 1);
}

TEST_CASE("block measure meets orbit density for the drifted pliss schedule") {
    PlissBlockParams prm;
    prm.p = 0.7;
    prm.samples = 20000;
    prm.depth = 3000;
    prm.horizon = 20000;
    prm.density_orbits = 12;
    prm.seed = 85;
    auto rep = pliss_block_density(prm);
    REQUIRE(rep.block_measure > 0.2);
    REQUIRE(rep.density > 0.2);
    REQUIRE(std::fabs(rep.block_measure - rep.density) <= 0.02);
    // bound from the record-count argument: density >= (c1-c0)/(C-c0) = 1/4
    REQUIRE(rep.density >= 0.25 - 0.02);
}

TEST_CASE("level above the drift empties both sides of the identity") {
    PlissBlockParams prm;
    prm.p = 0.5;  // zero drift, level 1/5
    prm.samples = 4000;
    prm.depth = 2000;
    prm.horizon = 10000;
    prm.density_orbits = 6;
    prm.seed = 86;
    auto rep = pliss_block_density(prm);
    REQUIRE(rep.block_measure <= 0.02);
    REQUIRE(rep.density <= 0.03);

    auto kac = extended_kac_pliss(prm);
    if (kac.block_points == 0) REQUIRE(kac.inconclusive);
    else REQUIRE(kac.block_points < 40);
}

TEST_CASE("restricted first-event integral is unity over the pliss block") {
    PlissBlockParams prm;
    prm.p = 0.7;
    prm.samples = 30000;
    prm.depth = 2000;
    prm.horizon = 2000;
    prm.seed = 87;
    auto rep = extended_kac_pliss(prm);
    REQUIRE_FALSE(rep.inconclusive);
    REQUIRE(rep.capped == 0);
    REQUIRE(rep.block_points > 8000);
    REQUIRE(std::fabs(rep.integral - 1.0) <= 0.03);
    REQUIRE(std::fabs(rep.integral - 1.0) <= 5.0 * rep.stderr_ + 0.005);
}

TEST_CASE("classical return-time integrals over the entry set are unity") {
    auto half = kac_bernoulli_cylinder(0.5, 200000, 88);
    REQUIRE(half.returns > 90000);
    REQUIRE(oracle::within_sigmas(half.integral, 1.0, half.stderr_, 4.0));

    auto skew = kac_bernoulli_cylinder(0.3, 200000, 89);
    REQUIRE(oracle::within_sigmas(skew.integral, 1.0, skew.stderr_, 4.0));

    auto dbl = kac_doubling_half(100000, 90);
    REQUIRE(dbl.returns > 45000);
    REQUIRE(oracle::within_sigmas(dbl.integral, 1.0, dbl.stderr_, 4.0));
}

TEST_CASE("induced pliss map is the first return to the block on samples") {
    PlissBlockParams prm;
    prm.p = 0.7;
    prm.samples = 2000;
    prm.depth = 800;
    prm.horizon = 800;
    prm.seed = 91;
    auto rep = first_return_verify_pliss(prm);
    REQUIRE(rep.ok);
    REQUIRE(rep.checked > 400);
    REQUIRE(rep.early_visits == 0);
    REQUIRE(rep.landings_out == 0);
}
