#include <doctest.h>

#include <string>

#include "qtorus/experiments.hpp"

using namespace qtorus;

TEST_CASE("measure experiment passes with the documented row layout") {
    const Report rep = run_measure_check(json::object());
    CHECK(rep.exit_code == 0);
    CHECK(rep.experiment == "measure-check");
    CHECK(rep.rows.size() == 3 * 7 * 2);  // profiles x n in {1,2,...,64} x two metrics
    for (const Row& r : rep.rows) {
        CHECK(r.pass);
        CHECK(r.module == "multipliers");
        CHECK(r.op == "convex_measure");
    }
    CHECK(rep.config_hash == fnv1a_hash(rep.config.dump()));
}

TEST_CASE("relation experiment passes and reports defects below 1/n") {
    const Report rep = run_relation_check(json::object());
    CHECK(rep.exit_code == 0);
    int defect_rows = 0;
    for (const Row& r : rep.rows) {
        CHECK(r.pass);
        if (r.metric == "defect_k" || r.metric == "defect_l") {
            ++defect_rows;
            CHECK(r.value < r.bound);
        }
    }
    CHECK(defect_rows == 16);  // n = 1..8, two defects each
}

TEST_CASE("discretization experiment respects both closed-form bounds") {
    const Report rep = run_discretization_check(json{{"trials", 40}});
    CHECK(rep.exit_code == 0);
    CHECK(rep.rows.size() == 4 * 4 * 2);  // (d, n) pairs x p values x two directions
    for (const Row& r : rep.rows) {
        CHECK(r.pass);
        CHECK(r.value <= r.bound + 1e-9);
        CHECK(r.value > 0.9);  // ratios sit near 1, not degenerate
    }
}

TEST_CASE("sidon experiment passes at a reduced horizon") {
    const Report rep = run_sidon_check(json{{"horizon", 5}, {"trials", 4}, {"ladder", 4}});
    CHECK(rep.exit_code == 0);
    int norm_rows = 0, gap_rows = 0;
    for (const Row& r : rep.rows) {
        CHECK(r.pass);
        if (r.metric == "norm") ++norm_rows;
        if (r.metric == "model_gap") ++gap_rows;
    }
    CHECK(norm_rows == 10);  // pairs (j, n) with j < n <= 5
    CHECK(gap_rows == 10);
}

TEST_CASE("experiment reruns serialize bit-identically") {
    for (const char* name : {"measure-check", "relation-check"}) {
        const Report a = run_experiment(name, json::object());
        const Report b = run_experiment(name, json::object());
        CHECK(report_to_json(a).dump() == report_to_json(b).dump());
        CHECK(report_to_csv(a) == report_to_csv(b));
    }
    const Report a = run_experiment("disc-check", json{{"trials", 10}});
    const Report b = run_experiment("disc-check", json{{"trials", 10}});
    CHECK(report_to_json(a).dump() == report_to_json(b).dump());
    const Report c = run_experiment("disc-check", json{{"trials", 10}, {"seed", 2}});
    CHECK(c.config_hash != a.config_hash);
}

TEST_CASE("reports carry the configuration and a printable hash") {
    const Report rep = run_measure_check(json::object());
    const json j = report_to_json(rep);
    CHECK(j.at("config").at("experiment").get<std::string>() == "measure-check");
    CHECK(j.at("config_hash").get<std::string>().size() == 16);
    CHECK(j.at("exit_code").get<int>() == 0);
    CHECK(j.at("rows").size() == rep.rows.size());
    const std::string csv = report_to_csv(rep);
    CHECK(csv.rfind("# config=", 0) == 0);
    CHECK(csv.find("# config_hash=") != std::string::npos);
    CHECK(csv.find("experiment,module,op,params,metric,value,bound,delta,pass\n") !=
          std::string::npos);
}

TEST_CASE("configuration errors surface as argument exceptions") {
    CHECK_THROWS_AS(run_experiment("no-such-check", json::object()), std::invalid_argument);
    CHECK_THROWS_AS(run_norm_growth_scan(json{{"theta", "1/3"}}), std::invalid_argument);
    CHECK_THROWS_AS(run_norm_growth_scan(json{{"symbol", "bogus:1"}}), std::invalid_argument);
}

TEST_CASE("norm scan produces a finite ladder against the flat-angle baseline") {
    const Report rep = run_norm_growth_scan(json{{"degree", 1},
                                                 {"ladder", 2},
                                                 {"restarts", 2},
                                                 {"iterations", 40},
                                                 {"symbol", "fejer:2"},
                                                 {"p", "4"}});
    CHECK(rep.exit_code == 0);
    REQUIRE(rep.rows.size() == 1 + 2 * 2);  // baseline + (lower, ratio) per rung
    CHECK(rep.rows[0].params == "theta=0/1;p=4");
    for (const Row& r : rep.rows) {
        CHECK(r.pass);
        CHECK(std::isfinite(r.value));
    }
}
