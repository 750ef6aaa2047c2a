// ergokit command line: run experiments from a TOML config, list the catalog,
// or print a ready-to-edit example config for one experiment id.

#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "ergokit/runner.hpp"

namespace {

int cmd_list() {
    for (const auto& e : ergokit::experiment_catalog())
        std::printf("%-22s %s\n", e.id, e.summary);
    return 0;
}

int cmd_example(const std::string& id) {
    const auto* info = ergokit::find_experiment(id);
    if (!info) {
        std::fprintf(stderr, "ergokit: unknown experiment '%s' (try `ergokit list`)\n",
                     id.c_str());
        return 2;
    }
    std::fputs(ergokit::example_config(*info).c_str(), stdout);
    return 0;
}

int cmd_run(const std::string& path, int threads, const std::string& out_dir) {
    auto res = ergokit::run_experiment_file(path, threads, out_dir);
    if (res.exit_code >= 2) {
        std::fprintf(stderr, "ergokit: %s\n", res.message.c_str());
        return res.exit_code;
    }
    std::printf("experiment %s  seed %llu  threads %d\n", res.config.experiment.c_str(),
                (unsigned long long)res.config.seed, res.threads);
    for (const auto& r : res.rows) {
        std::printf("  %-28s %-14s %s", r.quantity.c_str(), ergokit::fmt_g(r.value).c_str(),
                    ergokit::verdict_of(r).c_str());
        if (r.gated && !r.pass)
            std::printf("  (target %s, tolerance %s)", ergokit::fmt_g(r.target).c_str(),
                        ergokit::fmt_g(r.tolerance).c_str());
        std::printf("\n");
    }
    std::printf("wrote %s\n", res.paths.csv.string().c_str());
    std::printf("wrote %s\n", res.paths.json.string().c_str());
    if (res.failures)
        std::printf("%llu quantit%s out of tolerance\n", (unsigned long long)res.failures,
                    res.failures == 1 ? "y" : "ies");
    return res.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ergokit: schedules, induced maps, and return-time experiments"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "run an experiment described by a TOML config");
    std::string config_path, out_dir;
    int threads = 0;
    run->add_option("config", config_path, "path to the config file")->required();
    run->add_option("--out", out_dir, "output directory for the CSV/JSON report");
    run->add_option("--threads", threads, "worker threads (overrides config and environment)")
        ->check(CLI::Range(1, 256));

    auto* list = app.add_subcommand("list", "list the experiment catalog");

    auto* example = app.add_subcommand("example", "print an example config for an experiment");
    std::string example_id;
    example->add_option("id", example_id, "experiment id from `ergokit list`")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;  // --help exits cleanly, anything else is a usage error
    }

    if (list->parsed()) return cmd_list();
    if (example->parsed()) return cmd_example(example_id);
    return cmd_run(config_path, threads, out_dir);
}
