#pragma once

// Drives one experiment from a parsed config. Reports are written only after
// the run completed, so a failed run leaves no partial files behind.
// Exit codes: 0 all gates pass, 1 a gate failed, 2 bad config, 3 runtime error.

#include <map>
#include <string>
#include <vector>

#include "ergokit/config.hpp"
#include "ergokit/experiments.hpp"
#include "ergokit/report.hpp"

namespace ergokit {

struct RunResult {
    int exit_code = 3;
    std::string message;  // set for exit codes 2 and 3
    ExperimentConfig config;
    std::vector<ReportRow> rows;
    ReportPaths paths;
    int threads = 0;
    u64 failures = 0;
};

// precedence: command-line flag, then config key, then ERGOKIT_THREADS/hardware
inline int runner_threads(const ExperimentConfig& cfg, int flag_threads) {
    if (flag_threads > 0) return resolve_threads(flag_threads);
    if (cfg.threads > 0) return resolve_threads(cfg.threads);
    return resolve_threads(0);
}

inline void apply_tolerances(std::vector<ReportRow>& rows,
                             const std::map<std::string, double>& overrides) {
    for (const auto& [key, tol] : overrides) {
        bool hit = false;
        for (auto& r : rows)
            if (r.gated && r.quantity == key) {
                regate(r, tol);
                hit = true;
            }
        if (!hit) throw config_error("tolerance '" + key + "' matches no gated quantity");
    }
}

inline RunResult run_experiment(const ExperimentConfig& cfg, int flag_threads = 0,
                                const std::string& out_override = "") {
    RunResult res;
    res.config = cfg;
    try {
        const ExperimentInfo* info = find_experiment(cfg.experiment);
        if (!info) throw config_error("unknown experiment '" + cfg.experiment + "'");
        res.threads = runner_threads(cfg, flag_threads);
        res.rows = info->run(cfg, res.threads);
        apply_tolerances(res.rows, cfg.tolerances);
        sort_rows(res.rows);
        res.failures = failure_count(res.rows);
        std::string dir = !out_override.empty() ? out_override
                          : !cfg.out_dir.empty() ? cfg.out_dir
                                                 : std::string(".");
        res.paths = write_report(dir, cfg.experiment, cfg.seed, res.threads, res.rows);
        res.exit_code = res.failures ? 1 : 0;
    } catch (const config_error& e) {
        res.exit_code = 2;
        res.message = e.what();
    } catch (const std::exception& e) {
        res.exit_code = 3;
        res.message = e.what();
    }
    return res;
}

inline RunResult run_experiment_file(const std::string& path, int flag_threads = 0,
                                     const std::string& out_override = "") {
    ExperimentConfig cfg;
    try {
        cfg = load_config(path);
    } catch (const config_error& e) {
        RunResult res;
        res.exit_code = 2;
        res.message = e.what();
        return res;
    }
    return run_experiment(cfg, flag_threads, out_override);
}

}  // namespace ergokit
