#include <cstdio>
#include <cstdlib>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "meissner/acceptance.hpp"
#include "meissner/io.hpp"
#include "meissner/lab.hpp"
#include "meissner/plot.hpp"

namespace {

std::string default_out() {
    const char* env = std::getenv("MEISSNER_LAB_OUT");
    return env ? env : ".";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"meissner-lab: a numerical laboratory for Meissner states"};
    app.require_subcommand(1);

    // run <config.json> [--out DIR] [--seed N] [--jobs K]
    auto* run_cmd = app.add_subcommand("run", "execute a JSON experiment config");
    std::string config_path, out_dir;
    std::int64_t seed = -1;
    int jobs = 1;
    run_cmd->add_option("config", config_path, "path to the config JSON")->required();
    run_cmd->add_option("--out", out_dir, "output directory (default MEISSNER_LAB_OUT or .)");
    run_cmd->add_option("--seed", seed, "override the config seed");
    run_cmd->add_option("--jobs", jobs, "worker pool size for sweeps");

    // acceptance [--out DIR] [--seed N]
    auto* acc_cmd = app.add_subcommand("acceptance", "run the acceptance battery");
    std::string acc_out;
    std::uint64_t acc_seed = 20180441;
    acc_cmd->add_option("--out", acc_out, "output directory");
    acc_cmd->add_option("--seed", acc_seed, "random seed for the battery");

    // plot <table.csv> <plotspec.json> [--out FILE]
    auto* plot_cmd = app.add_subcommand("plot", "render a results table to SVG");
    std::string table_path, spec_path, svg_out = "plot.svg";
    plot_cmd->add_option("table", table_path, "results CSV")->required();
    plot_cmd->add_option("plotspec", spec_path, "plot spec JSON")->required();
    plot_cmd->add_option("--out", svg_out, "output SVG path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run_cmd) {
            std::string dir = out_dir.empty() ? default_out() : out_dir;
            auto outcome = meissner::lab::run_file(config_path, dir, seed, jobs);
            std::printf("%s\n", outcome.summary.dump(2).c_str());
            return outcome.exit_code;
        }
        if (*acc_cmd) {
            meissner::acceptance::Options opts;
            opts.out_dir = acc_out.empty() ? default_out() : acc_out;
            opts.seed = acc_seed;
            auto results = meissner::acceptance::run_all(opts);
            return meissner::acceptance::all_passed(results) ? 0 : 4;
        }
        if (*plot_cmd) {
            auto table = meissner::ResultsTable::from_csv(meissner::read_text_file(table_path));
            auto doc = nlohmann::json::parse(meissner::read_text_file(spec_path));
            meissner::PlotSpec spec;
            spec.x_column = doc.at("x").get<std::string>();
            for (const auto& y : doc.at("y")) spec.y_columns.push_back(y.get<std::string>());
            spec.log_x = doc.value("log_x", false);
            spec.log_y = doc.value("log_y", false);
            if (doc.contains("guide_slope")) spec.guide_slope = doc["guide_slope"].get<double>();
            if (doc.contains("marker_x")) spec.marker_x = doc["marker_x"].get<double>();
            spec.title = doc.value("title", "");
            meissner::write_text_file(svg_out, meissner::emit_plot(table, spec));
            return 0;
        }
    } catch (const meissner::Error& e) {
        nlohmann::json err;
        err["error"] = {{"kind", meissner::to_string(e.kind())}, {"message", e.what()}};
        std::printf("%s\n", err.dump(2).c_str());
        return e.kind() == meissner::ErrorKind::ConfigInvalid ? 2 : 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
    return 0;
}
