#pragma once

// Named experiments: config in, report rows out. Every random quantity draws
// from Rng(config seed, fixed stream index) and is reduced in index order,
// so a rerun with the same seed gives byte-identical CSV at any thread count.

#include <cmath>
#include <string>
#include <vector>

#include "ergokit/blocks.hpp"
#include "ergokit/cocycle.hpp"
#include "ergokit/config.hpp"
#include "ergokit/induced.hpp"
#include "ergokit/lift.hpp"
#include "ergokit/markov.hpp"
#include "ergokit/report.hpp"
#include "ergokit/schedules.hpp"
#include "ergokit/sync.hpp"
#include "ergokit/systems.hpp"

namespace ergokit {

using ExperimentFn = std::vector<ReportRow> (*)(const ExperimentConfig&, int);

struct ExperimentInfo {
    const char* id;
    const char* summary;
    ExperimentFn run;
    const char* example_params;  // [params] body emitted by `ergokit example`
};

namespace experiments {

struct Meta {
    std::string s;
    Meta& kv(const char* k, u64 v) { return add(k, std::to_string(v)); }
    Meta& kv(const char* k, double v) { return add(k, fmt_g(v)); }
    Meta& kv(const char* k, const std::string& v) { return add(k, v); }
    Meta& add(const char* k, const std::string& v) {
        if (!s.empty()) s += ';';
        s += k;
        s += '=';
        s += v;
        return *this;
    }
    operator std::string() const { return s; }
};

// ------------------------------------------------------------ pliss-extraction

inline std::vector<ReportRow> run_pliss_extraction(const ExperimentConfig& cfg, int threads) {
    ParamReader pr(cfg);
    u64 sequences = pr.count("sequences", 1000);
    u64 length = pr.count("length", 10000);
    double c0 = pr.real("c0", 0.25), c1 = pr.real("c1", 0.5), C = pr.real("cap", 1.0);
    u64 recheck = pr.count("recheck_sequences", 8);
    pr.finish();
    require(0 < c0 && c0 < c1 && c1 < C, "pliss-extraction: need 0 < c0 < c1 < C");

    std::vector<double> ratio(sequences, 0.0);
    std::vector<uint8_t> bound_ok(sequences, 0), recheck_ok(sequences, 1);
    double mid = c1 + 0.2 * (C - c1), spread = C - mid;
    parallel_for(sequences, threads, [&](u64 s) {
        Rng rng(cfg.seed, s);
        std::vector<double> a(length);
        for (;;) {  // enforce the hypothesis; the positive drift ends this fast
            double prev = 0;
            for (u64 j = 0; j < length; ++j) {
                a[j] = prev + mid + spread * (2.0 * rng.next_u01() - 1.0);
                prev = a[j];
            }
            if (a[length - 1] >= c1 * double(length)) break;
        }
        auto ex = pliss_extract(a, c0, c1, C);
        ratio[s] = double(ex.indices.size()) / double(length);
        bound_ok[s] = ex.indices.size() >= ex.guaranteed ? 1 : 0;
        if (s < recheck) {  // every record beats all suffix rates, rechecked raw
            for (u64 m : ex.indices) {
                double sm = a[m - 1] - c0 * double(m);
                if (sm < -pliss_slack(m)) recheck_ok[s] = 0;
                for (u64 k = 1; k < m; ++k)
                    if (sm < a[k - 1] - c0 * double(k) - pliss_slack(m)) recheck_ok[s] = 0;
            }
        }
    });
    bool all_bound = true, all_recheck = true;
    double worst = 1.0;
    for (u64 s = 0; s < sequences; ++s) {
        all_bound = all_bound && bound_ok[s];
        all_recheck = all_recheck && recheck_ok[s];
        worst = std::min(worst, ratio[s]);
    }
    double theta = (c1 - c0) / (C - c0);
    std::string meta = Meta().kv("seed", cfg.seed).kv("sequences", sequences).kv("n", length);
    return {
        bool_row(cfg.experiment, "extraction_bound", all_bound, meta),
        bool_row(cfg.experiment, "record_recheck", all_recheck,
                 Meta().kv("seed", cfg.seed).kv("rechecked", std::min(recheck, sequences))),
        info_row(cfg.experiment, "min_count_ratio", worst, 0.0, meta, true),
        info_row(cfg.experiment, "guaranteed_theta", theta, 0.0, meta, true),
    };
}

// ------------------------------------------------------------------ kac pair

inline std::vector<ReportRow> run_kac_cylinder(const ExperimentConfig& cfg, int threads) {
    ParamReader pr(cfg);
    double p = pr.real("p", 0.5);
    u64 samples = pr.count("samples", 2200000);
    pr.finish();
    auto rep = kac_bernoulli_cylinder(p, samples, cfg.seed, threads);
    std::string meta =
        Meta().kv("seed", cfg.seed).kv("samples", samples).kv("p", p).kv("returns", rep.returns);
    return {
        gated_row(cfg.experiment, "kac_integral", rep.integral, rep.stderr_, meta, 1.0, 0.01),
        info_row(cfg.experiment, "returns", double(rep.returns), 0.0, meta, true),
    };
}

inline std::vector<ReportRow> run_kac_doubling(const ExperimentConfig& cfg, int threads) {
    ParamReader pr(cfg);
    u64 samples = pr.count("samples", 1100000);
    pr.finish();
    auto rep = kac_doubling_half(samples, cfg.seed, threads);
    std::string meta =
        Meta().kv("seed", cfg.seed).kv("samples", samples).kv("returns", rep.returns);
    return {
        gated_row(cfg.experiment, "kac_integral", rep.integral, rep.stderr_, meta, 1.0, 0.01),
        info_row(cfg.experiment, "returns", double(rep.returns), 0.0, meta, true),
    };
}

// ------------------------------------------------- pliss block and extended kac

inline PlissBlockParams block_params(const ExperimentConfig& cfg, ParamReader& pr, int threads) {
    PlissBlockParams prm;
    prm.p = pr.real("p", 0.7);
    prm.gp = i64(pr.count("gamma_num", 1));
    prm.gq = i64(pr.count("gamma_den", 5));
    prm.samples = pr.count("samples", 100000);
    prm.depth = pr.count("depth", 100000);
    prm.horizon = pr.count("horizon", 100000);
    prm.density_orbits = pr.count("density_orbits", 16);
    prm.seed = cfg.seed;
    prm.threads = threads;
    return prm;
}

inline std::vector<ReportRow> run_pliss_block_density(const ExperimentConfig& cfg, int threads) {
    ParamReader pr(cfg);
    auto prm = block_params(cfg, pr, threads);
    pr.finish();
    auto rep = pliss_block_density(prm);
    std::string meta = Meta()
                           .kv("seed", cfg.seed)
                           .kv("samples", prm.samples)
                           .kv("depth", prm.depth)
                           .kv("horizon", prm.horizon)
                           .kv("p", prm.p);
    return {
        gated_row(cfg.experiment, "density_gap", rep.block_measure - rep.density,
                  rep.block_stderr + rep.density_stderr, meta, 0.0, 0.02),
        info_row(cfg.experiment, "block_measure", rep.block_measure, rep.block_stderr, meta),
        info_row(cfg.experiment, "orbit_density", rep.density, rep.density_stderr, meta),
    };
}

inline std::vector<ReportRow> run_extended_kac(const ExperimentConfig& cfg, int threads) {
    ParamReader pr(cfg);
    auto prm = block_params(cfg, pr, threads);
    pr.finish();
    auto rep = extended_kac_pliss(prm);
    if (rep.inconclusive) throw error("extended-kac: no block points at this scale");
    std::string meta = Meta()
                           .kv("seed", cfg.seed)
                           .kv("samples", prm.samples)
                           .kv("horizon", prm.horizon)
                           .kv("block_points", rep.block_points);
    return {
        gated_row(cfg.experiment, "block_r_integral", rep.integral, rep.stderr_, meta, 1.0, 0.03),
        bool_row(cfg.experiment, "no_capped_returns", rep.capped == 0, meta),
        info_row(cfg.experiment, "block_points", double(rep.block_points), 0.0, meta, true),
    };
}

// --------------------------------------------------------------- theta identity

inline std::vector<ReportRow> run_theta_reciprocal(const ExperimentConfig& cfg, int) {
    ParamReader pr(cfg);
    auto ps = pr.reals("p", {0.3, 0.5, 0.7});
    u64 horizon = pr.count("horizon", 1000000);
    pr.finish();
    std::vector<ReportRow> rows;
    for (std::size_t i = 0; i < ps.size(); ++i) {
        double p = ps[i];
        require(p > 0 && p < 1, "theta-reciprocal: p outside (0,1)");
        auto st = first_hit_return_stats(p, horizon, cfg.seed, i);
        if (st.escaped) throw error("theta-reciprocal: an orbit escaped the horizon");
        std::string tag = fmt_g(p);
        std::string meta = Meta().kv("seed", cfg.seed).kv("horizon", horizon).kv("p", p);
        rows.push_back(gated_row(cfg.experiment, "theta_product_p" + tag, st.product, 0.0, meta,
                                 1.0, 0.02));
        rows.push_back(info_row(cfg.experiment, "theta_hat_p" + tag, st.theta_hat, 0.0, meta));
        rows.push_back(
            info_row(cfg.experiment, "mean_return_p" + tag, st.mean_return, 0.0, meta));
    }
    return rows;
}

// ------------------------------------------------------------------------ sync

inline std::vector<ReportRow> run_sync_alternating(const ExperimentConfig& cfg, int) {
    ParamReader pr(cfg);
    u64 horizon = pr.count("horizon", 1000000);
    u64 l_max = pr.count("l_max", 32);
    pr.finish();
    auto pair = alternating_runs_pair(horizon + l_max + 8);
    auto res = sync_search_sets({{pair.u0, pair.u1}}, horizon, l_max, 0.0);
    double joint_peak = 0;
    for (const auto& e : res.trace) joint_peak = std::max(joint_peak, e.density);
    std::string meta = Meta().kv("horizon", horizon).kv("l_max", l_max);
    return {
        gated_row(cfg.experiment, "marginal_a", res.premarginals[0], 0.0, meta, 0.5, 0.01),
        gated_row(cfg.experiment, "marginal_b", res.premarginals[1], 0.0, meta, 0.5, 0.01),
        gated_row(cfg.experiment, "joint_peak_density", joint_peak, 0.0, meta, 0.0, 0.01),
        bool_row(cfg.experiment, "search_reports_failure", !res.found, meta),
    };
}

inline std::vector<ReportRow> run_sync_independent(const ExperimentConfig& cfg, int threads) {
    ParamReader pr(cfg);
    u64 samples = pr.count("samples", 6);
    u64 horizon = pr.count("horizon", 200000);
    u64 l_max = pr.count("l_max", 8);
    u64 ca = pr.count("coordinate_a", 1), cb = pr.count("coordinate_b", 2);
    pr.finish();
    require(ca != cb, "sync-independent: coordinates must differ");
    auto sys = make_bernoulli_shift({0.5, 0.5}, Sidedness::one_sided);
    std::vector<ScheduleFamily> fams(2);
    fams[0].rule = hitting_schedule();
    fams[0].target = {{i64(ca), 1}};
    fams[1].rule = hitting_schedule();
    fams[1].target = {{i64(cb), 1}};
    auto res = sync_search(sys, fams, samples, horizon, l_max, 0.0, cfg.seed, u64(threads));
    bool minimal = res.found;
    for (u64 s : res.shifts) minimal = minimal && (s == 0);
    std::string meta =
        Meta().kv("seed", cfg.seed).kv("samples", samples).kv("horizon", horizon);
    return {
        gated_row(cfg.experiment, "theta_hat", res.theta_hat, 0.0, meta, 0.25, 0.02),
        bool_row(cfg.experiment, "search_found", res.found, meta),
        bool_row(cfg.experiment, "shifts_minimal", minimal, meta),
        info_row(cfg.experiment, "marginal_a", res.found ? res.marginals[0] : 0.0, 0.0, meta),
        info_row(cfg.experiment, "marginal_b", res.found ? res.marginals[1] : 0.0, 0.0, meta),
    };
}

// -------------------------------------------------------------- finite booleans

inline std::vector<ReportRow> run_finite_examples(const ExperimentConfig& cfg, int) {
    ParamReader pr(cfg);
    pr.finish();
    std::vector<ReportRow> rows;
    std::string meta = "exhaustive";

    auto quad = worked_example(ExampleId::spread_quad);
    auto Rq = to_time_table(quad.induced_time);
    auto F = induced_map(*quad.finite, Rq);
    auto spread = spreading(*quad.finite, {1, 0, 1, 0}, Rq);
    auto pulled = preimage_set(*quad.finite, spread);
    rows.push_back(bool_row(cfg.experiment, "spread_quad_induced_map",
                            F == std::vector<int>{3, 2, 1, 2}, meta));
    rows.push_back(bool_row(cfg.experiment, "spread_quad_spreading",
                            spread == std::vector<uint8_t>{1, 1, 1, 0}, meta));
    rows.push_back(bool_row(cfg.experiment, "spread_quad_not_invariant", pulled != spread, meta));

    auto flat = worked_example(ExampleId::cycle3_flat);
    auto Rf = to_time_table(flat.induced_time);
    rows.push_back(bool_row(cfg.experiment, "cycle3_flat_orbit_coherent",
                            orbit_coherence_check(*flat.finite, Rf).orbit_coherent, meta));
    rows.push_back(bool_row(cfg.experiment, "cycle3_flat_not_coherent",
                            !induced_time_checks(*flat.finite, Rf).coherent, meta));

    auto merge = worked_example(ExampleId::cycle3_merge);
    auto Rm = to_time_table(merge.induced_time);
    rows.push_back(bool_row(cfg.experiment, "cycle3_merge_coherent",
                            induced_time_checks(*merge.finite, Rm).coherent, meta));
    rows.push_back(bool_row(cfg.experiment, "cycle3_merge_not_transitive",
                            !induced_transitive(*merge.finite, Rm), meta));
    auto reach = reach_sets(merge.finite->n, induced_map(*merge.finite, Rm));
    rows.push_back(bool_row(cfg.experiment, "cycle3_merge_orbit_of_1",
                            reach[0] == std::vector<uint8_t>{1, 0, 1}, meta));
    return rows;
}

// ------------------------------------------------------------- zeta mass family

inline std::vector<ReportRow> run_zeta_mass_entropy(const ExperimentConfig& cfg, int) {
    ParamReader pr(cfg);
    double alpha = pr.real("alpha", 0.5);
    u64 ell = pr.count("ell", 11);
    double epsilon = pr.real("epsilon", 0.05);
    u64 n0_log2 = pr.count("n0_log2", 30);
    u64 doublings = pr.count("doublings", 8);
    double factor = pr.real("growth_factor", 1.3);
    pr.finish();
    auto m = zeta_mass(alpha, ell);
    auto st = invariant_stats(m);
    double n0 = std::ldexp(1.0, int(n0_log2));
    double s_ratio = second_moment_partial(m, 2.0 * n0) / second_moment_partial(m, n0);
    std::string meta = Meta().kv("alpha", alpha).kv("ell", ell).kv("epsilon", epsilon);
    return {
        gated_row(cfg.experiment, "normalization", m.normalization, 0.0, meta, 1.0, 1e-12,
                  true),
        bool_row(cfg.experiment, "abramov_exceeds_bound",
                 st.abramov > std::log(2.0) - epsilon, meta),
        bool_row(cfg.experiment, "mean_return_bounded", st.mean_bounded, meta),
        bool_row(cfg.experiment, "second_moment_grows",
                 second_moment_doubling_ok(m, n0, doublings, factor),
                 Meta().kv("n0_log2", n0_log2).kv("doublings", doublings).kv("factor", factor)),
        info_row(cfg.experiment, "abramov_ratio", st.abramov, 0.0, meta, true),
        info_row(cfg.experiment, "entropy_induced", st.h_F, 0.0, meta, true),
        info_row(cfg.experiment, "mean_return", st.mean_R, 0.0, meta, true),
        info_row(cfg.experiment, "c_alpha", st.c_alpha, 0.0, meta, true),
        info_row(cfg.experiment, "s_doubling_ratio", s_ratio, 0.0,
                 Meta().kv("n0_log2", n0_log2), true),
    };
}

// --------------------------------------------------------------- moment sandwich

inline std::vector<ReportRow> run_moment_sandwich(const ExperimentConfig& cfg, int) {
    ParamReader pr(cfg);
    auto ps = pr.reals("p", {0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8});
    u64 mu_samples = pr.count("mu_samples", 200000);
    pr.finish();
    std::vector<ReportRow> rows;
    for (std::size_t i = 0; i < ps.size(); ++i) {
        double p = ps[i];
        auto ms = moment_sandwich_first_hit(p, mu_samples, cfg.seed + 1000003 * i);
        std::string tag = fmt_g(p);
        std::string meta = Meta().kv("seed", cfg.seed).kv("mu_samples", mu_samples).kv("p", p);
        rows.push_back(bool_row(cfg.experiment, "sandwich_holds_p" + tag, ms.holds, meta));
        rows.push_back(info_row(cfg.experiment, "second_moment_p" + tag, ms.second_nu, 0.0,
                                meta, true));
        rows.push_back(
            info_row(cfg.experiment, "mean_mu_p" + tag, ms.mean_mu, ms.mean_mu_stderr, meta));
        if (p == 0.5) {
            rows.push_back(gated_row(cfg.experiment, "mean_nu_half", ms.mean_nu, 0.0, meta, 2.0,
                                     0.0, true));
            rows.push_back(gated_row(cfg.experiment, "second_nu_half", ms.second_nu, 0.0, meta,
                                     6.0, 0.0, true));
        }
    }
    auto unit = moment_sandwich_first_hit(1.0, 1000, cfg.seed);
    rows.push_back(bool_row(cfg.experiment, "sandwich_holds_unit", unit.holds,
                            Meta().kv("seed", cfg.seed).kv("p", 1.0)));
    return rows;
}

// ------------------------------------------------------------------ tail residue

inline std::vector<ReportRow> run_tail_residue(const ExperimentConfig& cfg, int) {
    ParamReader pr(cfg);
    double p = pr.real("p", 0.5);
    u64 horizon = pr.count("horizon", 1000000);
    u64 tmax = pr.count("threshold_max", 20);
    pr.finish();
    auto returns = first_hit_orbit_returns(p, horizon, cfg.seed);
    std::vector<u64> thresholds(tmax);
    for (u64 n = 1; n <= tmax; ++n) thresholds[n - 1] = n;
    auto rep = tail_and_residue(returns, thresholds);

    Rng rng(cfg.seed, 1);
    std::vector<double> values(horizon);
    for (auto& v : values) v = rng.bernoulli(p) ? 1.0 : 0.0;
    auto ident = tail_integral_identity(values);

    std::string meta =
        Meta().kv("seed", cfg.seed).kv("horizon", horizon).kv("threshold_max", tmax).kv("p", p);
    return {
        gated_row(cfg.experiment, "residue", rep.residue, 0.0, meta, 0.0, 0.01),
        gated_row(cfg.experiment, "tail_sum", rep.tail_sum, 0.0, meta, 1.0 / p, 0.02),
        gated_row(cfg.experiment, "indicator_identity_gap", ident.discrepancy, 0.0, meta, 0.0,
                  0.01),
        info_row(cfg.experiment, "plateau_spread", rep.plateau_spread, 0.0, meta),
        info_row(cfg.experiment, "indicator_average", ident.birkhoff, 0.0, meta),
    };
}

// ------------------------------------------------------------------- liftability

inline std::vector<ReportRow> run_liftability(const ExperimentConfig& cfg, int threads) {
    ParamReader pr(cfg);
    double p = pr.real("p", 0.5);
    u64 samples = pr.count("samples", 100);
    u64 rps = pr.count("returns_per_sample", 2048);
    u64 tower_samples = pr.count("tower_samples", 150);
    u64 tower_bits = pr.count("tower_bits", 131072);
    pr.finish();
    auto geo = liftability_first_hit(p, samples, rps, cfg.seed, threads, {});
    auto tow = liftability_dyadic_tower(tower_samples, tower_bits, cfg.seed, threads, {});
    std::string gm = Meta().kv("seed", cfg.seed).kv("samples", samples).kv("p", p);
    std::string tm = Meta().kv("seed", cfg.seed).kv("samples", tower_samples).kv("bits",
                                                                                 tower_bits);
    return {
        bool_row(cfg.experiment, "geometric_liftable", geo.verdict == LiftVerdict::liftable, gm),
        bool_row(cfg.experiment, "tower_not_liftable",
                 tow.verdict == LiftVerdict::not_liftable, tm),
        info_row(cfg.experiment, "geometric_growth", geo.growth, 0.0, gm),
        info_row(cfg.experiment, "geometric_theta", geo.theta_final, 0.0, gm),
        info_row(cfg.experiment, "tower_growth", tow.growth, 0.0, tm),
        info_row(cfg.experiment, "tower_theta", tow.theta_final, 0.0, tm),
    };
}

// ----------------------------------------------------------------- window growth

inline std::vector<ReportRow> run_window_growth(const ExperimentConfig& cfg, int) {
    ParamReader pr(cfg);
    u64 length = pr.count("length", 1500);
    u64 ell_max = pr.count("ell_max", 7);
    u64 bases = pr.count("bases", 64);
    double drift_p = pr.real("drift_p", 0.75);
    pr.finish();
    require((u64(1) << ell_max) < length, "window-growth: length too short for ell_max");

    Rng rng(cfg.seed, 0);
    std::vector<double> steps(length + (u64(1) << ell_max));
    for (auto& s : steps) s = rng.bernoulli(drift_p) ? 1.0 : -1.0;
    double drift = 2.0 * drift_p - 1.0;
    auto add = window_growth_check(CocycleTable::additive(steps), drift, 0, ell_max, bases);

    Rng ctl(cfg.seed, 1);
    std::vector<double> flat(steps.size());
    for (auto& s : flat) s = ctl.bernoulli(0.5) ? 1.0 : -1.0;
    auto zero = window_growth_check(CocycleTable::additive(flat), drift, 0, ell_max, bases);

    auto word = [&](u64 n) {
        Rng mr(cfg.seed, 2);
        std::vector<Mat2d> w(n);
        for (auto& m : w) {
            double e = 0.2 * (mr.next_u01() - 0.5);
            m = Mat2d{2.0 + mr.next_u01(), e, e, 3.0 + mr.next_u01()};
        }
        return w;
    };
    auto t1 = CocycleTable::matrix(word(length), MatrixMode::log_conorm);
    double lambda = t1.evaluate(length, 0) / double(length);
    auto m1 = window_growth_check(t1, lambda, 0, ell_max, bases);
    auto t2 = CocycleTable::matrix(word(2 * length), MatrixMode::log_conorm);
    auto m2 = window_growth_check(t2, lambda, 0, ell_max, bases);

    std::string meta = Meta().kv("seed", cfg.seed).kv("length", length).kv("ell_max", ell_max);
    return {
        bool_row(cfg.experiment, "additive_window_found", add.found, meta),
        bool_row(cfg.experiment, "zero_drift_rejected", !zero.found, meta),
        bool_row(cfg.experiment, "matrix_window_found", m1.found && m2.found, meta),
        bool_row(cfg.experiment, "matrix_window_stable", m1.found && m2.found && m1.ell0 == m2.ell0,
                 meta),
        info_row(cfg.experiment, "matrix_drift", lambda, 0.0, meta),
        info_row(cfg.experiment, "additive_ell0", add.found ? double(add.ell0) : -1.0, 0.0,
                 meta),
    };
}

}  // namespace experiments

inline const std::vector<ExperimentInfo>& experiment_catalog() {
    static const std::vector<ExperimentInfo> catalog = {
        {"pliss-extraction", "record extraction from bounded drifting sequences: count bound",
         experiments::run_pliss_extraction,
         "sequences = 50\nlength = 2000\nrecheck_sequences = 4\n"},
        {"kac-cylinder", "mean first return to the 1-cylinder of a Bernoulli shift",
         experiments::run_kac_cylinder, "p = 0.5\nsamples = 200000\n"},
        {"kac-doubling", "mean first return to [1/2,1] under the doubling map",
         experiments::run_kac_doubling, "samples = 150000\n"},
        {"pliss-block-density", "block measure vs orbit density for the drifted +/-1 potential",
         experiments::run_pliss_block_density,
         "p = 0.7\nsamples = 20000\ndepth = 3000\nhorizon = 20000\ndensity_orbits = 12\n"},
        {"extended-kac", "return-time integral over the certified block equals one",
         experiments::run_extended_kac,
         "p = 0.7\nsamples = 30000\ndepth = 2000\nhorizon = 2000\n"},
        {"theta-reciprocal", "theta times mean return equals one along first-hit orbits",
         experiments::run_theta_reciprocal, "p = [0.3, 0.5, 0.7]\nhorizon = 200000\n"},
        {"sync-alternating", "alternating-run pair: half marginals, vanishing joint density",
         experiments::run_sync_alternating, "horizon = 100000\nl_max = 32\n"},
        {"sync-independent", "shift search on independent cylinder schedules finds theta = 1/4",
         experiments::run_sync_independent,
         "samples = 6\nhorizon = 200000\nl_max = 8\ncoordinate_a = 1\ncoordinate_b = 2\n"},
        {"finite-examples", "exhaustive booleans on the small worked systems",
         experiments::run_finite_examples, ""},
        {"zeta-mass-entropy", "zeta-weighted mass: normalization, entropy ratio, divergence",
         experiments::run_zeta_mass_entropy,
         "alpha = 0.5\nell = 11\nepsilon = 0.05\nn0_log2 = 30\ndoublings = 8\n"},
        {"moment-sandwich", "exact return-time moments against the tower-side bounds",
         experiments::run_moment_sandwich, "p = [0.2, 0.5, 0.8]\nmu_samples = 50000\n"},
        {"tail-residue", "orbit tail densities, residue, and the level-set identity",
         experiments::run_tail_residue, "p = 0.5\nhorizon = 200000\nthreshold_max = 20\n"},
        {"liftability", "mean-return growth separates liftable from non-liftable towers",
         experiments::run_liftability,
         "samples = 60\nreturns_per_sample = 1024\ntower_samples = 80\ntower_bits = 65536\n"},
        {"window-growth", "dyadic window averages clear a fifth of the drift",
         experiments::run_window_growth, "length = 1500\nell_max = 7\nbases = 64\n"},
    };
    return catalog;
}

inline const ExperimentInfo* find_experiment(const std::string& id) {
    for (const auto& e : experiment_catalog())
        if (id == e.id) return &e;
    return nullptr;
}

inline std::string example_config(const ExperimentInfo& info) {
    std::string out;
    out += "schema = \"";
    out += config_schema;
    out += "\"\nexperiment = \"";
    out += info.id;
    out += "\"\nseed = 42\n";
    if (info.example_params[0] != '\0') {
        out += "\n[params]\n";
        out += info.example_params;
    }
    return out;
}

}  // namespace ergokit
