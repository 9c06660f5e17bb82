#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

#include "ttfilter/convergence.hpp"
#include "ttfilter/experiments.hpp"
#include "ttfilter/plot_data.hpp"

using namespace ttfilter;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& stem) : path(fs::temp_directory_path() / stem) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("config parsing, typed access, unknown keys", "[config]") {
    const std::string text = R"(
# comment
[grid]
half_width = 2.2   # trailing comment
points = 8

[filter]
eps_tt = 1e-3
integral_mode = product

[pf]
particles = 2000, 3000,4000
)";
    const Config cfg = Config::parse_string(text);
    CHECK(cfg.get_double("grid", "half_width", 0.0) == 2.2);
    CHECK(cfg.get_int("grid", "points", 0) == 8);
    CHECK(cfg.get_string("filter", "integral_mode", "") == "product");
    CHECK(cfg.get_int_list("pf", "particles", {}) == std::vector<long long>{2000, 3000, 4000});
    CHECK(cfg.get_double("filter", "missing", 7.5) == 7.5);

    CHECK_THROWS_AS(Config::parse_string("key = 1\n"), ConfigError);       // outside section
    CHECK_THROWS_AS(Config::parse_string("[a\nk = 1\n"), ConfigError);     // malformed header
    CHECK_THROWS_AS(Config::parse_string("[a]\nnoequals\n"), ConfigError); // missing '='
    const Config bad = Config::parse_string("[grid]\npoints = 8\ntypo_key = 1\n");
    CHECK_THROWS_AS(bad.validate_schema({{"grid", {"points"}}}), ConfigError);
    const Config badnum = Config::parse_string("[grid]\npoints = eight\n");
    CHECK_THROWS_AS(badnum.get_int("grid", "points", 0), ConfigError);
}

TEST_CASE("unknown config keys abort experiment runs", "[config]") {
    ExperimentSpec spec;
    spec.kind = ExperimentKind::table1;
    spec.config = Config::parse_string("[table1]\ndims = 2\ndofs = 10\nmisspelled = 1\n");
    CHECK_THROWS_AS(run_table1(spec), ConfigError);
}

TEST_CASE("results round-trip with aggregate verification", "[results]") {
    TempDir dir("ttf_results_test");
    ResultRecord record;
    record.kind = "cubic";
    for (Index t = 0; t < 3; ++t) {
        ResultRow row;
        row.method = t == 2 ? "pf3000" : "tt";
        row.trial = t;
        row.seed = 100 + t;
        row.rmse = 0.4 + 0.01 * t;
        row.wall_time_s = 1.5;
        row.failed = t == 1;
        row.extra["max_rank"] = 12.0;
        record.rows.push_back(row);
    }
    record.sort_rows();
    write_results(record, dir.path.string());

    const ResultRecord loaded = load_and_verify_results(dir.path.string());
    REQUIRE(loaded.rows.size() == 3);
    CHECK(loaded.rows[0].method == "pf3000");  // sorted by method then trial
    CHECK(loaded.rows[1].rmse == 0.4);
    CHECK(loaded.rows[2].failed);
    const json agg = aggregate_from_rows(loaded);
    CHECK(agg["methods"]["tt"]["failures"] == 1);
    CHECK(agg["methods"]["tt"]["mean_rmse"] == 0.4);

    // Tampering with the stored aggregate is detected on load.
    json tampered = agg;
    tampered["methods"]["tt"]["mean_rmse"] = 0.0;
    std::ofstream bad(dir.path / "aggregate.json");
    bad << tampered.dump(2) << "\n";
    bad.close();
    CHECK_THROWS(load_and_verify_results(dir.path.string()));
}

TEST_CASE("cubic runs end to end at desk scale and is deterministic", "[experiments]") {
    TempDir dir("ttf_cubic_test");
    ExperimentSpec spec;
    spec.kind = ExperimentKind::cubic;
    spec.config = Config::parse_string(R"(
[model]
dimension = 2
[filter]
eps_tt = 1e-4
horizon = 0.3
dt = 0.01
[path]
substeps = 8
[pf]
particles = 200
)");
    spec.trials = 2;
    spec.seed = 7;
    spec.out_dir = dir.path.string();
    spec.workers = 2;

    const ResultRecord a = run_cubic(spec);
    REQUIRE(a.rows.size() == 6);  // 2 trials x {tt, pf200, ekf}
    for (const ResultRow& row : a.rows) {
        if (!row.failed) {
            CHECK(row.rmse > 0.0);
            CHECK(row.rmse < 2.2);
        }
    }
    CHECK(fs::exists(dir.path / "results.csv"));
    CHECK(fs::exists(dir.path / "aggregate.json"));
    CHECK(fs::exists(dir.path / ("truth_seed7_trial0.csv")));
    CHECK(fs::exists(dir.path / ("tt_seed7_trial1.csv")));

    // Same spec, fresh run: identical rows apart from wall times.
    spec.out_dir.clear();
    const ResultRecord b = run_cubic(spec);
    REQUIRE(b.rows.size() == a.rows.size());
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        CHECK(a.rows[i].method == b.rows[i].method);
        CHECK(a.rows[i].seed == b.rows[i].seed);
        CHECK(a.rows[i].rmse == b.rows[i].rmse);
        CHECK(a.rows[i].failed == b.rows[i].failed);
    }

    // The stored artifacts reload and verify.
    const ResultRecord loaded = load_and_verify_results(dir.path.string());
    CHECK(loaded.rows.size() == a.rows.size());
}

TEST_CASE("fair comparison: every method consumes the same trajectory", "[experiments]") {
    // The truth file is written once per trial; methods read the same record.
    // Spot-check by rerunning with methods restricted and comparing seeds.
    ExperimentSpec spec;
    spec.kind = ExperimentKind::cubic;
    spec.config = Config::parse_string(R"(
[model]
dimension = 1
[experiment]
methods = tt
[filter]
horizon = 0.1
dt = 0.01
[path]
substeps = 4
)");
    spec.trials = 1;
    spec.seed = 99;
    const ResultRecord tt_only = run_cubic(spec);

    spec.config = Config::parse_string(R"(
[model]
dimension = 1
[experiment]
methods = ekf
[filter]
horizon = 0.1
dt = 0.01
[path]
substeps = 4
)");
    const ResultRecord ekf_only = run_cubic(spec);
    REQUIRE(tt_only.rows.size() == 1);
    REQUIRE(ekf_only.rows.size() == 1);
    CHECK(tt_only.rows[0].seed == ekf_only.rows[0].seed);
}

TEST_CASE("emit_plot_data produces overlays and a summary", "[experiments][plot]") {
    TempDir dir("ttf_plot_test");
    ExperimentSpec spec;
    spec.kind = ExperimentKind::cubic;
    spec.config = Config::parse_string(R"(
[model]
dimension = 2
[experiment]
methods = tt,ekf
[filter]
eps_tt = 1e-4
horizon = 0.2
dt = 0.01
[path]
substeps = 4
)");
    spec.trials = 1;
    spec.seed = 3;
    spec.out_dir = dir.path.string();
    run_cubic(spec);

    const std::vector<std::string> files = emit_plot_data(dir.path.string(), 0);
    CHECK(fs::exists(dir.path / "overlay_dim1.csv"));
    CHECK(fs::exists(dir.path / "overlay_dim2.csv"));
    CHECK(fs::exists(dir.path / "plot_summary.json"));
    CHECK(files.size() >= 3);

    std::ifstream is(dir.path / "overlay_dim1.csv");
    std::string header;
    std::getline(is, header);
    CHECK(header == "t,truth,ekf,tt");

    // Empty directory: hard error, no partial files.
    TempDir empty("ttf_plot_empty");
    CHECK_THROWS(emit_plot_data(empty.path.string(), 0));
}

TEST_CASE("multimode smoke run exports marginals and symmetry scores", "[experiments]") {
    TempDir dir("ttf_mm_test");
    ExperimentSpec spec;
    spec.kind = ExperimentKind::multimode;
    spec.config = Config::parse_string(R"(
[grid]
points = 13
[experiment]
methods = tt,pf
[filter]
eps_tt = 1e-3
horizon = 0.5
dt = 0.01
[path]
substeps = 4
[pf]
particles = 300
[multimode]
snapshot_dt = 0.25
bimodal_after = 10
)");
    spec.trials = 1;
    spec.seed = 5;
    spec.out_dir = dir.path.string();
    const ResultRecord record = run_multimode(spec);
    CHECK(record.extras.contains("tt_max_asymmetry"));
    CHECK(record.extras["tt_max_asymmetry"].get<double>() < 0.05);
    bool found_marginal = false;
    for (const auto& entry : fs::directory_iterator(dir.path))
        if (entry.path().filename().string().rfind("marginal_dim1", 0) == 0) found_marginal = true;
    CHECK(found_marginal);

    const std::vector<std::string> files = emit_plot_data(dir.path.string(), 0);
    CHECK(fs::exists(dir.path / "heatmap_dim1.csv"));
    (void)files;
}

TEST_CASE("convergence rejects too few levels", "[experiments]") {
    ExperimentSpec spec;
    spec.kind = ExperimentKind::spatial_order;
    spec.config = Config::parse_string("[convergence]\nlevels = 2\n");
    CHECK_THROWS_AS(run_convergence(spec), ConfigError);

    spec.kind = ExperimentKind::tt_accuracy;
    spec.config = Config::parse_string("[convergence]\neps_list = 1e-2, 1e-3\n");
    CHECK_THROWS_AS(run_convergence(spec), ConfigError);
}

TEST_CASE("operator cache round-trips and validates its manifest", "[experiments][cache]") {
    TempDir dir("ttf_cache_test");
    const SignalModel model = models::smooth_2d();
    const GridSpec grid(2.0, 6, 2);
    AssemblyOptions opt;
    opt.eps = 1e-6;
    opt.delta = 0.01;

    const DiscretizedOperators fresh =
        assemble_cached(model, grid, opt, dir.path.string());
    CHECK(fs::exists(dir.path / "manifest.json"));
    const DiscretizedOperators cached =
        assemble_cached(model, grid, opt, dir.path.string());
    CHECK((tt_matrix_to_dense(fresh.m_left) - tt_matrix_to_dense(cached.m_left)).norm() == 0.0);
    CHECK(cached.ns_iterations == fresh.ns_iterations);

    // A different delta must miss the cache and re-assemble.
    AssemblyOptions opt2 = opt;
    opt2.delta = 0.02;
    const DiscretizedOperators other = assemble_cached(model, grid, opt2, dir.path.string());
    CHECK((tt_matrix_to_dense(other.m_right) - tt_matrix_to_dense(fresh.m_right)).norm() > 0.0);
}

TEST_CASE("table1 runner records ranks for a small combo", "[experiments]") {
    ExperimentSpec spec;
    spec.kind = ExperimentKind::table1;
    spec.config = Config::parse_string("[table1]\ndims = 2\ndofs = 10\n");
    const ResultRecord record = run_table1(spec);
    REQUIRE(record.rows.size() == 1);
    CHECK(!record.rows[0].failed);
    CHECK(record.rows[0].extra.at("rank") >= 3.0);
    CHECK(record.rows[0].extra.at("rank") <= 7.0);
    CHECK(record.rows[0].extra.at("residual") < 5e-5);
}
