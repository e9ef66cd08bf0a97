#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "meissner/io.hpp"
#include "meissner/lab.hpp"
#include "meissner/plot.hpp"
#include "test_util.hpp"

using namespace meissner;
using nlohmann::json;

TEST_CASE("config parse: unknown keys fail fast with a field path") {
    json doc = {{"kind", "ORACLE"}, {"lambda", 0.1}, {"b", 0.5}, {"bogus", 1}};
    try {
        lab::RunConfig::parse(doc);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::ConfigInvalid);
        CHECK(std::string(e.what()).find("bogus") != std::string::npos);
    }

    json missing = {{"kind", "ORACLE"}, {"b", 0.5}};
    try {
        lab::RunConfig::parse(missing);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::ConfigInvalid);
        CHECK(std::string(e.what()).find("lambda") != std::string::npos);
    }
}

TEST_CASE("config round trip is identity") {
    json doc = {{"kind", "CONTINUATION"},
                {"system", "LIMIT"},
                {"lambda", 0.1},
                {"seed", 7},
                {"geometry", {{"slab", {{"n", 300}, {"L", 1.0}}}}},
                {"data", {{"type", "slab_uniform"}, {"b_lo", 1.0}, {"b_hi", 0.0}}},
                {"schedule", {{"mu_start", 0.4}, {"mu_step", 0.02}}}};
    auto cfg = lab::RunConfig::parse(doc);
    auto again = lab::RunConfig::parse(cfg.to_json());
    CHECK(cfg.to_json() == again.to_json());
    CHECK(cfg.kind == "CONTINUATION");
    CHECK(cfg.seed == 7);
}

TEST_CASE("oracle run writes profile and summary") {
    json doc = {{"kind", "ORACLE"}, {"lambda", 0.1}, {"b", 0.5}};
    auto cfg = lab::RunConfig::parse(doc);
    auto outcome = lab::run(cfg, "/tmp/meissner_lab_test_oracle", 1);
    CHECK(outcome.exit_code == 0);
    CHECK(outcome.summary["a0"].get<double>() == doctest::Approx(0.54120).epsilon(1e-4));
    auto profile = read_text_file("/tmp/meissner_lab_test_oracle/profile.csv");
    CHECK(profile.rfind("x,f,a,fp,ap\n", 0) == 0);
}

TEST_CASE("run_file maps bad configs to exit 2 with an error document") {
    write_text_file("/tmp/meissner_lab_bad.json", "{\"kind\": \"ORACLE\", \"b\": 0.5}");
    auto outcome = lab::run_file("/tmp/meissner_lab_bad.json", "/tmp", -1, 1);
    CHECK(outcome.exit_code == 2);
    CHECK(outcome.summary.contains("error"));
    std::string msg = outcome.summary["error"]["message"].get<std::string>();
    CHECK(msg.find("lambda") != std::string::npos);
}

TEST_CASE("results table: provenance comments and round trip") {
    ResultsTable t({"x", "y"});
    t.add_row({1.0, 2.0});
    t.add_row({3.0, 0.125});
    t.set_provenance("deadbeef", "2020-01-01T00:00:00Z");
    std::string full = t.to_csv();
    CHECK(full.find("# config deadbeef") != std::string::npos);
    CHECK(full.find("# wall_time") != std::string::npos);
    auto back = ResultsTable::from_csv(full);
    CHECK(back.columns() == t.columns());
    CHECK(back.rows() == t.rows());
    CHECK(back.body_csv() == t.body_csv());
    CHECK_THROWS_AS(t.column("nope"), Error);
}

TEST_CASE("field CSV round trip") {
    auto g = box_grid(4, 3, 5, 1.0, 1.0, 1.0);
    testutil::Rng rng(3);
    ScalarField f(g, Placement::Node);
    for (auto& v : f.values()) v = rng.uniform(-1, 1);
    std::stringstream ss;
    write_field_csv(ss, f);
    auto f2 = read_scalar_field_csv(ss, g, Placement::Node);
    for (std::size_t i = 0; i < f.size(); ++i) CHECK(f.values()[i] == f2.values()[i]);

    VectorField w(g, Placement::Edge);
    for (int d = 0; d < 3; ++d)
        for (auto& v : w.comp(d)) v = rng.uniform(-1, 1);
    std::stringstream s2;
    write_field_csv(s2, w);
    auto w2 = read_vector_field_csv(s2, g, Placement::Edge);
    for (int d = 0; d < 3; ++d)
        for (std::size_t i = 0; i < w.comp(d).size(); ++i) CHECK(w.comp(d)[i] == w2.comp(d)[i]);
}

TEST_CASE("plots: determinism, empty table, error kinds") {
    ResultsTable t({"kappa", "err"});
    t.add_row({16, 1e-2});
    t.add_row({32, 3.5e-3});
    t.add_row({64, 1.2e-3});
    PlotSpec spec;
    spec.x_column = "kappa";
    spec.y_columns = {"err"};
    spec.log_x = spec.log_y = true;
    spec.guide_slope = -1.5;
    std::string a = emit_plot(t, spec);
    std::string b = emit_plot(t, spec);
    CHECK(a == b);
    CHECK(a.find("<polyline") != std::string::npos);
    CHECK(a.find("slope") != std::string::npos);

    ResultsTable empty({"kappa", "err"});
    PlotSpec spec2 = spec;
    spec2.guide_slope.reset();
    std::string svg = emit_plot(empty, spec2);
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("<rect") != std::string::npos);

    PlotSpec bad = spec;
    bad.y_columns = {"missing"};
    CHECK_THROWS_AS(emit_plot(t, bad), Error);

    ResultsTable neg({"x", "y"});
    neg.add_row({1.0, -2.0});
    PlotSpec logbad;
    logbad.x_column = "x";
    logbad.y_columns = {"y"};
    logbad.log_y = true;
    try {
        emit_plot(neg, logbad);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NonPositiveLogData);
    }
}

TEST_CASE("stable hash is deterministic and content sensitive") {
    CHECK(stable_hash("abc") == stable_hash("abc"));
    CHECK(stable_hash("abc") != stable_hash("abd"));
}

TEST_CASE("slab profile summary carries the oracle quantities") {
    SlabProblem p;
    p.lambda = 0.1;
    p.b = 0.5;
    auto sol = solve_limit_ode(p);
    auto j = json::parse(slab_summary_json(sol, p.b));
    CHECK(j["a0"].get<double>() == doctest::Approx(0.54120).epsilon(1e-4));
    CHECK(j["first_integral_residual"].get<double>() <= 1e-10);
}
