#include <catch2/catch_amalgamated.hpp>

#include <vector>

#include "ergokit/induced.hpp"
#include "oracles.hpp"

using namespace ergokit;

namespace {

FiniteMap random_map(Rng& rng, int n) {
    std::vector<int> succ(n);
    for (auto& s : succ) s = 1 + int(rng.next_u64() % u64(n));
    return make_finite_map(succ);
}

std::vector<uint8_t> random_mask(Rng& rng, int n) {
    std::vector<uint8_t> m(n, 0);
    for (auto& b : m) b = rng.bernoulli(0.4) ? 1 : 0;
    if (std::find(m.begin(), m.end(), 1) == m.end()) m[0] = 1;
    return m;
}

}  // namespace

TEST_CASE("constant time on a 3-cycle is orbit-coherent but not coherent") {
    auto ex = worked_example(ExampleId::cycle3_flat);
    auto R = to_time_table(ex.induced_time);
    auto rep = induced_time_checks(*ex.finite, R);
    REQUIRE_FALSE(rep.coherent);
    REQUIRE_FALSE(rep.exact);
    REQUIRE(rep.coherent_witness.has_value());
    // R(x) = 2 but one step in the remaining time is still 2, not 1
    REQUIRE(rep.coherent_witness->j == 1);
    REQUIRE(orbit_coherence_check(*ex.finite, R).orbit_coherent);
}

TEST_CASE("merging 3-cycle time is coherent yet the induced map is not transitive") {
    auto ex = worked_example(ExampleId::cycle3_merge);
    auto R = to_time_table(ex.induced_time);
    auto rep = induced_time_checks(*ex.finite, R);
    REQUIRE(rep.coherent);
    auto F = induced_map(*ex.finite, R);
    REQUIRE(F == std::vector<int>{3, 3, 1});
    REQUIRE_FALSE(induced_transitive(*ex.finite, R));
    REQUIRE(induced_transitive(*ex.finite, {1, 1, 1}));  // the base cycle is
    // invariant core is the 2-cycle {1,3}; state 2 only feeds in
    auto core = invariant_core(*ex.finite, R);
    REQUIRE(core == std::vector<uint8_t>{1, 0, 1});
    auto comp = f_components(*ex.finite, R);
    REQUIRE(comp.count == 1);
    REQUIRE(comp.cycles[0] == std::vector<int>{1, 3});
    REQUIRE(comp.component_of == std::vector<int>{1, 1, 1});
}

TEST_CASE("quad example: spreading set and its pullback disagree") {
    auto ex = worked_example(ExampleId::spread_quad);
    auto R = to_time_table(ex.induced_time);
    auto F = induced_map(*ex.finite, R);
    REQUIRE(F == std::vector<int>{3, 2, 1, 2});
    auto spread = spreading(*ex.finite, {1, 0, 1, 0}, R);
    REQUIRE(spread == std::vector<uint8_t>{1, 1, 1, 0});
    auto pulled = preimage_set(*ex.finite, spread);
    REQUIRE(pulled == std::vector<uint8_t>{1, 1, 1, 1});
    REQUIRE(pulled != spread);

    auto comp = f_components(*ex.finite, R);
    REQUIRE(comp.count == 2);
    REQUIRE(comp.cycles[0] == std::vector<int>{1, 3});
    REQUIRE(comp.cycles[1] == std::vector<int>{2});
    REQUIRE(comp.component_of == std::vector<int>{1, 2, 1, 2});
}

TEST_CASE("first-entry times are exact and coherent on random maps") {
    for (u64 trial = 0; trial < 50; ++trial) {
        Rng rng(71, trial);
        auto f = random_map(rng, 12);
        auto mask = random_mask(rng, 12);
        auto R = first_entry_table(f, mask);
        auto rep = induced_time_checks(f, R);
        REQUIRE(rep.exact);
        REQUIRE(rep.coherent);
        REQUIRE(orbit_coherence_check(f, R).orbit_coherent);
        REQUIRE(decomposition_check(f, R).holds);
        auto ret = first_return_table(f, mask);
        for (int x = 1; x <= f.n; ++x) {
            if (mask[x - 1]) REQUIRE(ret[x - 1] == R[x - 1]);
            else REQUIRE(ret[x - 1] == 0);
        }
    }
}

TEST_CASE("splitting a 4-cycle by doubling breaks orbit coherence") {
    auto f = make_finite_map({2, 3, 4, 1});
    TimeTable R{2, 2, 2, 2};
    REQUIRE_FALSE(induced_time_checks(f, R).coherent);
    auto rep = orbit_coherence_check(f, R);
    REQUIRE_FALSE(rep.orbit_coherent);
    REQUIRE(rep.x == 1);
    REQUIRE(rep.y == 2);
    REQUIRE(rep.f_meets);  // f-orbits meet around the cycle, F-orbits split
}

TEST_CASE("decomposition of the remaining time holds exhaustively when coherent") {
    auto ex = worked_example(ExampleId::cycle3_merge);
    REQUIRE(decomposition_check(*ex.finite, to_time_table(ex.induced_time)).holds);
    // and fails for the incoherent flat time
    auto ex2 = worked_example(ExampleId::cycle3_flat);
    REQUIRE_FALSE(decomposition_check(*ex2.finite, to_time_table(ex2.induced_time)).holds);
}

TEST_CASE("forward-invariant sets spread to forward-invariant sets") {
    for (u64 trial = 0; trial < 40; ++trial) {
        Rng rng(72, trial);
        auto f = random_map(rng, 10);
        auto mask = random_mask(rng, 10);
        auto R = first_entry_table(f, mask);
        auto A0 = absorbing_domain(f, R);
        auto spread = spreading(f, A0, R);  // F(A0) is inside A0
        auto img = image_set(f, spread);
        for (int x = 1; x <= f.n; ++x)
            if (img[x - 1]) REQUIRE(spread[x - 1] == 1);
    }
}

TEST_CASE("cumulative return sums form a coherent schedule with min = R") {
    auto ex = worked_example(ExampleId::cycle3_merge);
    auto R = to_time_table(ex.induced_time);
    u64 horizon = 24;
    auto table = induced_schedule_table(*ex.finite, R, horizon);
    REQUIRE(table[0].to_events() == std::vector<u64>{2, 3, 5, 6, 8, 9, 11, 12, 14, 15, 17, 18, 20, 21, 23, 24});
    for (int x = 1; x <= 3; ++x) REQUIRE(table[x - 1].first_or_zero() == R[x - 1]);
    // along the f-orbit of state 1 the per-state sets satisfy both coherence laws
    auto orbit = ex.finite->orbit(1, 12);
    std::vector<EventSet> along;
    for (int s : orbit) along.push_back(table[s - 1]);
    REQUIRE(coherence_check(along, horizon).coherent());
    // incoherent tables are rejected outright
    auto ex2 = worked_example(ExampleId::cycle3_flat);
    REQUIRE_THROWS_AS(induced_schedule_table(*ex2.finite, to_time_table(ex2.induced_time), 10),
                      precondition_error);
    // unit returns give the full schedule
    REQUIRE(schedule_of_returns(std::vector<u64>(30, 1), 30).count() == 30);
}

TEST_CASE("finite first-time search separates escape from absence") {
    auto f = make_finite_map({2, 3, 1, 2});
    auto none = first_time_finite(f, 1, {0, 0, 0, 1});  // state 4 is unreachable
    REQUIRE(none.status == FirstTimeStatus::genuinely_empty);
    auto hit = first_time_finite(f, 4, {0, 1, 0, 0});
    REQUIRE(hit.status == FirstTimeStatus::found);
    REQUIRE(hit.r == 1);
    auto cyc = first_time_finite(f, 1, {1, 0, 0, 0});
    REQUIRE(cyc.r == 3);

    // trace-based first time can only report horizon exhaustion
    OrbitTrace tr;
    tr.hit.assign(50, 0);
    auto miss = first_time(hitting_schedule(), tr, 0, 40);
    REQUIRE(miss.status == FirstTimeStatus::empty_within_horizon);
    tr.hit[7] = 1;
    auto found = first_time(hitting_schedule(), tr, 0, 40);
    REQUIRE(found.r == 7);
}

TEST_CASE("finite tower projection of an invariant base measure is invariant") {
    auto ex = worked_example(ExampleId::cycle3_merge);
    auto R = to_time_table(ex.induced_time);
    // F = (3,3,1): uniform mass on the 2-cycle {1,3} is F-invariant
    auto res = tower_project_finite(*ex.finite, R, {0.5, 0.0, 0.5});
    REQUIRE(res.mass == Catch::Approx(1.5));
    REQUIRE(std::fabs(res.mass - res.mass_series) < 1e-12);
    for (double w : res.mu) REQUIRE(w == Catch::Approx(1.0 / 3.0));
    // projected measure is f-invariant: pushforward preserves the weights
    std::vector<double> pushed(3, 0.0);
    for (int x = 1; x <= 3; ++x) pushed[ex.finite->step(x) - 1] += res.mu[x - 1];
    for (int x = 1; x <= 3; ++x) REQUIRE(pushed[x - 1] == Catch::Approx(res.mu[x - 1]));

    // unit return time: projection is the base measure itself
    auto idres = tower_project_finite(*ex.finite, {1, 1, 1}, {0.2, 0.3, 0.5});
    REQUIRE(idres.mass == Catch::Approx(1.0));
    REQUIRE(idres.mu == std::vector<double>{0.2, 0.3, 0.5});
}

TEST_CASE("sampled tower projection of the first-hit map recovers the product measure") {
    auto sys = make_bernoulli_shift({0.5, 0.5}, Sidedness::one_sided);
    auto res = tower_project_first_hit(sys, 20000, 73, 64);
    REQUIRE(oracle::within_sigmas(res.mass, 2.0, res.mass_stderr, 4.0));
    REQUIRE(std::fabs(res.symbol_freq[1] - 0.5) < 0.012);
    REQUIRE(std::fabs(res.symbol_freq[0] - 0.5) < 0.012);
    REQUIRE(std::fabs(res.pair_freq_11 - 0.25) < 0.012);

    auto skew = tower_project_first_hit(make_bernoulli_shift({0.7, 0.3}, Sidedness::one_sided),
                                        20000, 74, 96);
    REQUIRE(oracle::within_sigmas(skew.mass, 1.0 / 0.3, skew.mass_stderr, 4.0));
    REQUIRE(std::fabs(skew.symbol_freq[1] - 0.3) < 0.012);
}

TEST_CASE("dyadic tower mass grows linearly and trips any cap") {
    auto rep = dyadic_tower_mass(100.0, 900);
    REQUIRE(rep.diverged);
    REQUIRE(rep.terms == 201);
    REQUIRE(rep.partial_mass == Catch::Approx(100.5));
    auto tame = dyadic_tower_mass(1000.0, 800);
    REQUIRE_FALSE(tame.diverged);
    REQUIRE(tame.partial_mass == Catch::Approx(400.0));
}

TEST_CASE("induced walk along a sampled point lands on the 1-symbol positions") {
    auto sys = make_bernoulli_shift({0.5, 0.5}, Sidedness::one_sided);
    Rng rng(75, 0);
    auto x = sample_point(sys, rng, 3000);
    auto walk = induced_walk_first_hit(x, 200, 64);
    REQUIRE(walk.returns.size() >= 50);
    REQUIRE_FALSE(walk.escaped);
    u64 seen = 0;
    for (i64 j = 1; seen < walk.cumsum.size(); ++j) {
        if (x.at(j) == 1) {
            REQUIRE(walk.cumsum[seen] == u64(j));
            ++seen;
        }
    }
    for (std::size_t i = 1; i < walk.cumsum.size(); ++i)
        REQUIRE(walk.cumsum[i] == walk.cumsum[i - 1] + walk.returns[i]);
}
