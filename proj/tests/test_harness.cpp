#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "gbe/common.hpp"
#include "gbe/harness.hpp"

using namespace gbe;
using harness::ExperimentConfig;

TEST_CASE("parse_config: defaults, validation, round trip") {
    auto cfg = harness::parse_config(R"({"experiment":"dos-table","alpha":1})");
    CHECK(cfg.experiment == "dos-table");
    CHECK(cfg.alpha == std::vector<double>{1.0});
    CHECK(cfg.window == 10.0);
    CHECK(cfg.tau == 1.0);
    CHECK(cfg.sigma == 0.0);
    CHECK(cfg.workers == 0);

    CHECK_THROWS_AS(harness::parse_config(R"({"experiment":"nope"})"), config_error);
    CHECK_THROWS_AS(harness::parse_config(R"({"alpha":1})"), config_error);
    CHECK_THROWS_AS(harness::parse_config("not json"), config_error);
    CHECK_THROWS_AS(harness::parse_config(R"({"experiment":"clt","n":"ten"})"), config_error);

    try {
        harness::parse_config(R"({"experiment":"clt","replicas":0})");
        FAIL("expected config_error");
    } catch (const config_error& e) {
        CHECK(e.field() == "replicas");
    }
    try {
        harness::parse_config(R"({"experiment":"local-law","zeta":{"tau":-1}})");
        FAIL("expected config_error");
    } catch (const config_error& e) {
        CHECK(e.field() == "zeta.tau");
    }

    // Round trip.
    cfg.alpha = {0.5, 1.0};
    cfg.energy = {0.0, 1.5};
    cfg.seed = 99;
    cfg.workers = 3;
    auto again = harness::from_json(harness::to_json(cfg));
    CHECK(harness::to_json(again) == harness::to_json(cfg));
}

TEST_CASE("csv formatting: numeric, newline-terminated, 17 digits") {
    harness::ResultTable t;
    t.name = "t";
    t.columns = {"a", "b"};
    t.add_row({1.0 / 3.0, 2.0});
    t.add_row({-0.5, 1e-12});
    auto csv = harness::to_csv(t);
    CHECK(csv.substr(0, 4) == "a,b\n");
    CHECK(csv.back() == '\n');
    // Values round-trip exactly through the printed representation.
    double a = 0, b = 0;
    std::sscanf(csv.c_str() + 4, "%lf,%lf", &a, &b);
    CHECK(a == 1.0 / 3.0);
    CHECK(b == 2.0);
    CHECK_THROWS_AS(t.add_row({1.0}), std::invalid_argument);
}

TEST_CASE("dos-table experiment: anchors, verdicts, files") {
    ExperimentConfig cfg;
    cfg.experiment = "dos-table";
    cfg.alpha = {1.0};
    cfg.emin = -1.0;
    cfg.emax = 1.0;
    cfg.estep = 0.5;
    cfg.trunc_n = 4'000'000;
    cfg.eta = 3e-3;
    cfg.out = "test_out_dos";
    auto tables = harness::run_experiment(cfg);
    REQUIRE(tables.size() == 1);
    const auto& t = tables[0];
    REQUIRE(t.rows.size() == 5);
    // Row at E = 0.
    const auto& mid = t.rows[2];
    CHECK(mid[0] == doctest::Approx(0.0));
    CHECK(mid[1] == doctest::Approx(0.2539745).epsilon(1e-5));
    CHECK(mid[2] == doctest::Approx(mid[1]).epsilon(1e-3));  // theta identity
    CHECK(std::fabs(mid[3] - mid[1]) < 5e-3);                 // truncation route

    CHECK(std::filesystem::exists("test_out_dos/" + t.name + ".csv"));
    CHECK(std::filesystem::exists("test_out_dos/" + t.name + ".json"));
    CHECK(t.metadata["config"]["experiment"] == "dos-table");
    CHECK(t.metadata["verdicts"].size() >= 2);
    std::filesystem::remove_all("test_out_dos");
}

TEST_CASE("clt experiment table and worker-count determinism") {
    ExperimentConfig cfg;
    cfg.experiment = "clt";
    cfg.alpha = {1.0};
    cfg.n = 60;
    cfg.replicas = 1500;
    cfg.f = "x";
    cfg.seed = 5;

    cfg.workers = 1;
    auto t1 = harness::run_experiment(cfg, false);
    cfg.workers = 2;
    auto t2 = harness::run_experiment(cfg, false);
    REQUIRE(t1.size() == 1);
    CHECK(harness::to_csv(t1[0]) == harness::to_csv(t2[0]));

    // f = x: the statistic is exactly N(0,1).
    auto cols = t1[0].columns;
    auto row = t1[0].rows[0];
    auto col = [&](const std::string& name) {
        for (std::size_t i = 0; i < cols.size(); ++i)
            if (cols[i] == name) return row[i];
        FAIL("missing column ", name);
        return 0.0;
    };
    CHECK(std::fabs(col("variance") - 1.0) <= 3.0 * col("variance_se"));
    CHECK(col("ks_p") > 0.001);
}

TEST_CASE("sweep expansion produces one table per combination") {
    ExperimentConfig cfg;
    cfg.experiment = "local-law";
    cfg.alpha = {0.5, 1.0};
    cfg.energy = {0.0, 1.0};
    cfg.n = 120;
    cfg.replicas = 60;
    cfg.seed = 3;
    auto tables = harness::run_experiment(cfg, false);
    CHECK(tables.size() == 4);
    // Distinct names per combination.
    for (std::size_t i = 0; i < tables.size(); ++i)
        for (std::size_t j = i + 1; j < tables.size(); ++j)
            CHECK(tables[i].name != tables[j].name);
}

TEST_CASE("global-law experiment: moments converge to the limit moments") {
    ExperimentConfig cfg;
    cfg.experiment = "global-law";
    cfg.alpha = {1.0};
    cfg.n = 4000;
    cfg.replicas = 32;
    cfg.seed = 11;
    auto tables = harness::run_experiment(cfg, false);
    REQUIRE(tables.size() == 1);
    REQUIRE(tables[0].rows.size() == 4);
    // moment limits (J^k)(1,1): 0, alpha+1, 0, (alpha+1)(2 alpha+3)
    CHECK(tables[0].rows[1][3] == doctest::Approx(2.0));
    CHECK(tables[0].rows[3][3] == doctest::Approx(10.0));
    for (const auto& row : tables[0].rows) CHECK(row[4] < 0.02);  // rel_error column
}

TEST_CASE("experiment wrappers produce well-formed tables") {
    // Tiny-parameter smoke runs: wiring, schemas, verdict plumbing.
    ExperimentConfig cfg;
    cfg.seed = 77;
    cfg.alpha = {1.0};

    cfg.experiment = "sigma2-identity";
    cfg.n = 120;
    cfg.replicas = 200;
    cfg.grid_size = 3;
    cfg.lhs_n = 80;
    cfg.lhs_replicas = 400;
    auto t1 = harness::run_experiment(cfg, false);
    REQUIRE(t1.size() == 1);
    CHECK(t1[0].rows.size() == 3);
    CHECK(t1[0].metadata.contains("rhs_integral"));

    cfg = ExperimentConfig{};
    cfg.seed = 77;
    cfg.experiment = "bulk-poisson";
    cfg.n = 400;
    cfg.replicas = 300;
    auto t2 = harness::run_experiment(cfg, false);
    CHECK(t2[0].rows.size() == 2);
    CHECK(t2[0].metadata.contains("gap_ks_p"));

    cfg = ExperimentConfig{};
    cfg.seed = 77;
    cfg.experiment = "wegner-minami";
    cfg.n = 60;
    cfg.replicas = 400;
    cfg.block_samples = 2000;
    auto t3 = harness::run_experiment(cfg, false);
    CHECK(t3[0].rows.size() == 60);
    CHECK(t3[0].metadata["minami"].size() == 2);

    cfg = ExperimentConfig{};
    cfg.seed = 77;
    cfg.experiment = "green-decay";
    cfg.n = 100;
    cfg.replicas = 400;
    cfg.max_distance = 60;
    auto t4 = harness::run_experiment(cfg, false);
    CHECK(t4[0].rows.size() == 60);
    CHECK(t4[0].metadata["slope"].get<double>() < 0.0);
}

TEST_CASE("emit_report exit codes") {
    harness::ResultTable pass_t;
    pass_t.name = "p";
    pass_t.metadata["verdicts"] = nlohmann::json::array(
        {{{"name", "check-a"}, {"pass", true}, {"detail", ""}}});
    harness::ResultTable fail_t;
    fail_t.name = "f";
    fail_t.metadata["verdicts"] = nlohmann::json::array(
        {{{"name", "check-b"}, {"pass", false}, {"detail", "off"}}});

    auto ok = harness::emit_report({pass_t});
    CHECK(ok.exit_code == 0);
    CHECK(ok.text.find("PASS") != std::string::npos);

    auto bad = harness::emit_report({pass_t, fail_t});
    CHECK(bad.exit_code == 1);
    CHECK(bad.text.find("check-b") != std::string::npos);

    auto empty = harness::emit_report({});
    CHECK(empty.exit_code == 0);
    CHECK(empty.text.find("no checks run") != std::string::npos);
}
