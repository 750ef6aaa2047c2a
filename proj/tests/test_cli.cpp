#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <string>

#include "ergokit/runner.hpp"

using namespace ergokit;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

fs::path fresh_dir(const char* tag) {
    auto d = fs::temp_directory_path() / (std::string("ergokit-test-") + tag);
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

const char* minimal = "schema = \"ergokit/1\"\nexperiment = \"finite-examples\"\nseed = 7\n";

}  // namespace

TEST_CASE("config parser accepts the full surface") {
    std::string text =
        "# comment\n"
        "schema = \"ergokit/1\"\n"
        "experiment = \"kac-doubling\"  # trailing comment\n"
        "seed = 1_000\n"
        "threads = 4\n"
        "out = \"reports\"\n"
        "\n"
        "[params]\n"
        "samples = 50000\n"
        "p = 0.5\n"
        "label = \"a # not a comment\"\n"
        "grid = [0.25, 0.5, 1]\n"
        "flag = true\n"
        "\n"
        "[tolerances]\n"
        "kac_integral = 0.05\n";
    auto cfg = parse_config_text(text);
    CHECK(cfg.experiment == "kac-doubling");
    CHECK(cfg.seed == 1000);
    CHECK(cfg.threads == 4);
    CHECK(cfg.out_dir == "reports");
    CHECK(cfg.params.at("samples").i == 50000);
    CHECK(cfg.params.at("p").f == 0.5);
    CHECK(cfg.params.at("label").s == "a # not a comment");
    CHECK(cfg.params.at("grid").arr == std::vector<double>{0.25, 0.5, 1.0});
    CHECK(cfg.params.at("flag").b == true);
    CHECK(cfg.tolerances.at("kac_integral") == 0.05);
}

TEST_CASE("config parser rejects malformed input with line numbers") {
    auto rejects = [](const std::string& text, const std::string& needle) {
        try {
            parse_config_text(text);
            FAIL("expected config_error for: " << text);
        } catch (const config_error& e) {
            CHECK_THAT(e.what(), Catch::Matchers::ContainsSubstring(needle));
        }
    };
    rejects("experiment = \"x\"\nseed = 1\n", "missing schema");
    rejects("schema = \"ergokit/1\"\nseed = 1\n", "missing experiment");
    rejects("schema = \"ergokit/1\"\nexperiment = \"x\"\n", "missing seed");
    rejects("schema = \"ergokit/2\"\nexperiment = \"x\"\nseed = 1\n", "schema");
    rejects(std::string(minimal) + "seed = 8\n", "line 4");
    rejects(std::string(minimal) + "mystery = 3\n", "unknown key");
    rejects(std::string(minimal) + "[mystery]\n", "line 4");
    rejects(std::string(minimal) + "[params]\nx == 1\n", "line 5");
    rejects(std::string(minimal) + "[params]\nx = 1e\n", "line 5");
    rejects(std::string(minimal) + "[params]\nx = [1, \"a\"]\n", "numbers");
    rejects(std::string(minimal) + "[tolerances]\nq = -0.5\n", "positive");
    rejects(std::string(minimal) + "[tolerances]\nq = \"small\"\n", "number");
    rejects("schema = \"ergokit/1\"\nexperiment = \"x\"\nseed = -3\n", "seed");
    rejects("schema = \"ergokit/1\"\nexperiment = \"x\"\nseed = 1\nthreads = 300\n", "threads");
    rejects(std::string(minimal) + "[params]\nx = 1 junk\n", "line 5");
    rejects(std::string(minimal) + "[params]\n\"x\" = 1\n", "line 5");
}

TEST_CASE("param reader enforces types and consumes every key") {
    auto cfg = parse_config_text(std::string(minimal) +
                                 "[params]\nn = 12\nrate = 0.25\nname = \"x\"\nps = [0.1, "
                                 "0.9]\n");
    ParamReader pr(cfg);
    CHECK(pr.count("n", 1) == 12);
    CHECK(pr.count("absent", 5) == 5);
    CHECK(pr.real("rate", 0.0) == 0.25);
    CHECK(pr.real("n", 0.0) == 12.0);  // ints promote to real
    CHECK(pr.text("name", "") == "x");
    CHECK(pr.reals("ps", {}) == std::vector<double>{0.1, 0.9});
    CHECK(pr.reals("rate", {}) == std::vector<double>{0.25});  // scalar promotes
    pr.finish();

    ParamReader again(cfg);
    CHECK_THROWS_AS(again.count("rate", 1), config_error);   // float where int needed
    CHECK_THROWS_AS(again.real("name", 0.0), config_error);  // string where number needed
    CHECK_THROWS_AS(again.text("n", ""), config_error);

    auto leftover = parse_config_text(std::string(minimal) + "[params]\nstray = 1\n");
    ParamReader lr(leftover);
    CHECK_THROWS_AS(lr.finish(), config_error);
}

TEST_CASE("csv rendering is canonical") {
    std::vector<ReportRow> rows = {
        info_row("demo", "zeta", 1.25, 0.5, "k=1"),
        gated_row("demo", "alpha", 2.0, 0.0, "k=2", 2.0, 0.1),
        bool_row("demo", "beta", false, "k=3"),
    };
    std::string csv = render_csv(rows);
    CHECK_THAT(csv, Catch::Matchers::StartsWith("experiment,quantity,value,error,meta,verdict\n"));
    CHECK(csv.find('\r') == std::string::npos);
    auto alpha = csv.find("alpha"), beta = csv.find("beta"), zeta = csv.find("zeta");
    CHECK(alpha < beta);
    CHECK(beta < zeta);  // sorted by quantity, not insertion order
    CHECK_THAT(csv, Catch::Matchers::ContainsSubstring("demo,alpha,2,0,k=2,PASS\n"));
    CHECK_THAT(csv, Catch::Matchers::ContainsSubstring("demo,beta,0,exact,k=3,FAIL\n"));
    CHECK_THAT(csv, Catch::Matchers::ContainsSubstring("demo,zeta,1.25,0.5,k=1,INFO\n"));
    CHECK(failure_count(rows) == 1);

    auto bad = info_row("demo", "q", 0, 0, "a,b");
    CHECK_THROWS_AS(render_csv({bad}), error);  // commas would shear the table

    auto r = gated_row("demo", "g", 1.05, 0.0, "", 1.0, 0.1);
    CHECK(r.pass);
    regate(r, 0.01);
    CHECK_FALSE(r.pass);
}

TEST_CASE("experiment catalog is closed under its own examples") {
    const auto& cat = experiment_catalog();
    REQUIRE(cat.size() >= 12);
    for (const auto& e : cat) {
        CAPTURE(e.id);
        CHECK(find_experiment(e.id) == &e);
        auto cfg = parse_config_text(example_config(e));
        CHECK(cfg.experiment == e.id);
        CHECK(cfg.seed == 42);
    }
    CHECK(find_experiment("no-such-id") == nullptr);
}

TEST_CASE("runner maps failure classes to exit codes") {
    auto dir = fresh_dir("exit");

    auto cfg = parse_config_text(std::string(minimal));
    auto ok = run_experiment(cfg, 1, (dir / "ok").string());
    CHECK(ok.exit_code == 0);
    CHECK(ok.failures == 0);
    CHECK(fs::exists(ok.paths.csv));
    CHECK(fs::exists(ok.paths.json));

    // an absurd tolerance flips a passing gate; reports are still written
    auto tight = parse_config_text(
        "schema = \"ergokit/1\"\nexperiment = \"kac-doubling\"\nseed = 7\n"
        "[params]\nsamples = 5000\n[tolerances]\nkac_integral = 1e-9\n");
    auto fail = run_experiment(tight, 1, (dir / "tight").string());
    CHECK(fail.exit_code == 1);
    CHECK(fail.failures == 1);
    CHECK(fs::exists(fail.paths.csv));

    auto unknown_tol = parse_config_text(std::string(minimal) + "[tolerances]\nnope = 0.1\n");
    auto bad_tol = run_experiment(unknown_tol, 1, (dir / "tol").string());
    CHECK(bad_tol.exit_code == 2);
    CHECK_FALSE(fs::exists(dir / "tol" / "finite-examples.csv"));

    auto unknown_exp = parse_config_text(
        "schema = \"ergokit/1\"\nexperiment = \"no-such-id\"\nseed = 7\n");
    CHECK(run_experiment(unknown_exp, 1, (dir / "unk").string()).exit_code == 2);

    auto bad_param = parse_config_text(
        "schema = \"ergokit/1\"\nexperiment = \"kac-doubling\"\nseed = 7\n"
        "[params]\nsamples = \"many\"\n");
    auto p = run_experiment(bad_param, 1, (dir / "param").string());
    CHECK(p.exit_code == 2);
    CHECK_FALSE(fs::exists(dir / "param" / "kac-doubling.csv"));

    // run-time precondition failures are not config errors
    auto short_run = parse_config_text(
        "schema = \"ergokit/1\"\nexperiment = \"window-growth\"\nseed = 7\n"
        "[params]\nlength = 4\n");
    auto r = run_experiment(short_run, 1, (dir / "rt").string());
    CHECK(r.exit_code == 3);
    CHECK_FALSE(r.message.empty());
    CHECK_FALSE(fs::exists(dir / "rt" / "window-growth.csv"));

    CHECK(run_experiment_file((dir / "missing.toml").string(), 1, dir.string()).exit_code == 2);
}

TEST_CASE("reports are byte-identical across reruns and thread counts") {
    auto dir = fresh_dir("det");
    auto cfg = parse_config_text(
        "schema = \"ergokit/1\"\nexperiment = \"kac-doubling\"\nseed = 99\n"
        "[params]\nsamples = 60000\n");

    auto a = run_experiment(cfg, 1, (dir / "a").string());
    auto b = run_experiment(cfg, 1, (dir / "b").string());
    auto c = run_experiment(cfg, 4, (dir / "c").string());
    REQUIRE(a.exit_code == 0);
    REQUIRE(b.exit_code == 0);
    REQUIRE(c.exit_code == 0);
    CHECK(slurp(a.paths.csv) == slurp(b.paths.csv));
    CHECK(slurp(a.paths.json) == slurp(b.paths.json));
    CHECK(slurp(a.paths.csv) == slurp(c.paths.csv));  // thread count never leaks into CSV

    auto j = nlohmann::json::parse(slurp(a.paths.json));
    CHECK(j["schema"] == "ergokit/1");
    CHECK(j["experiment"] == "kac-doubling");
    CHECK(j["seed"] == 99);
    CHECK(j["failures"] == 0);
    REQUIRE(j["rows"].is_array());
    CHECK(j["rows"].size() == a.rows.size());

    auto d1 = run_experiment(cfg, 1, (dir / "a").string());  // overwrite in place
    CHECK(slurp(d1.paths.csv) == slurp(a.paths.csv));
}

TEST_CASE("threads resolve flag over config over environment") {
    auto cfg = parse_config_text(std::string(minimal) + "threads = 3\n");
    CHECK(runner_threads(cfg, 2) == 2);
    CHECK(runner_threads(cfg, 0) == 3);
    auto bare = parse_config_text(std::string(minimal));
    CHECK(runner_threads(bare, 0) >= 1);  // environment or hardware fallback
}
