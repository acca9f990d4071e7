// Copyright (c) 2026 The yieldmap authors.
//
// This software is licensed under the Apache License, Version 2.0 (the "License").
// You may not use this file except in compliance with the License. You may
// obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0.
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command line front end. Subcommands map onto the library stages:
//   run     full pipeline over a record file, artifacts into a directory
//   synth   synthetic field + serpentine harvest, records and truth as CSV
//   render  quantile-binned PPM raster of a staged GeoJSON artifact
//   report  human-readable summary of a run's report.json
// Exit codes: 0 success, 1 unexpected failure, 2 config, 3 data, 4 numeric.

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "yieldmap/errors.hpp"
#include "yieldmap/kernels/kernels.hpp"
#include "yieldmap/pipeline.hpp"
#include "yieldmap/render.hpp"
#include "yieldmap/synth.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

struct SynthCli {
    double width = 200.0;
    double height = 200.0;
    yieldmap::FieldSpec field;
    yieldmap::PathSpec path;
    std::vector<std::string> voids;
    std::string output_dir = "yieldmap_synth";
};

yieldmap::Polygon parse_void(const std::string& text) {
    std::vector<double> v;
    const char* p = text.data();
    const char* end = text.data() + text.size();
    while (p < end) {
        double value = 0.0;
        const auto [next, ec] = std::from_chars(p, end, value);
        if (ec != std::errc{}) {
            break;
        }
        v.push_back(value);
        p = next;
        if (p < end && *p == ',') {
            ++p;
        }
    }
    if (v.size() != 4 || p != end) {
        throw yieldmap::ConfigError("synth: --void wants min_x,min_y,max_x,max_y, got '" + text +
                                    "'");
    }
    return yieldmap::make_box(v[0], v[1], v[2], v[3]);
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

void print_report_summary(const ordered_json& j, std::ostream& os) {
    const auto& in = j.at("input");
    const auto& rect = j.at("rectangles");
    const auto& tess = j.at("tessellation");
    const auto& ap = j.at("apportioning");
    const auto& sm = j.at("smoothing");

    os << "records:    " << in.at("record_count").get<std::size_t>() << " (" << in.at("warnings").size()
       << " warnings)\n";
    os << "rectangles: " << rect.at("count").get<std::size_t>() << "\n";
    os << "tiles:      " << tess.at("tile_count").get<std::size_t>() << ", overlap "
       << fmt(tess.at("overlap_percent").get<double>()) << "%, leaked "
       << fmt(tess.at("leaked_mass_fraction").get<double>() * 100.0) << "%\n";
    const auto& grid = ap.at("grid");
    os << "grid:       " << grid.at("nx").get<std::size_t>() << " x " << grid.at("ny").get<std::size_t>()
       << " at " << fmt(grid.at("resolution").get<double>()) << " m, retained "
       << ap.at("retained_pixels").get<std::size_t>() << " pixels, coverage deficit "
       << fmt(ap.at("coverage_deficit_percent").get<double>()) << "%\n";
    const auto& params = sm.at("params");
    os << "model:      nu " << fmt(params.at("smoothness").get<double>()) << ", range "
       << fmt(params.at("range").get<double>()) << " m, sill " << fmt(params.at("sill").get<double>())
       << ", nugget " << fmt(params.at("nugget").get<double>()) << ", loglik "
       << fmt(sm.at("loglik").get<double>()) << "\n";
    os << "prediction: " << sm.at("prediction_pixels").get<std::size_t>() << " pixels at "
       << fmt(sm.at("prediction_grid").at("resolution").get<double>()) << " m\n";

    double worst = 0.0;
    for (const auto& row : j.at("ledger")) {
        worst = std::max(worst, row.at("relative_error").get<double>());
    }
    os << "ledger:     " << j.at("ledger").size() << " boundaries, worst closure error " << fmt(worst)
       << "\n";
    const std::string failed = j.at("failed_stage").get<std::string>();
    if (!failed.empty()) {
        os << "FAILED at stage: " << failed << "\n";
    }
}

int cmd_run(const yieldmap::RunConfig& config, const std::string& backend) {
    yieldmap::kernels::set_backend(yieldmap::kernels::parse_backend(backend));
    const yieldmap::RunResult result = yieldmap::run(config);
    std::cout << "run complete, artifacts in " << config.output_dir << "\n";
    print_report_summary(ordered_json::parse(yieldmap::report_to_json(config, result.report)),
                         std::cout);
    return yieldmap::kExitOk;
}

int cmd_synth(SynthCli& cli) {
    cli.field.bbox = {0.0, 0.0, cli.width, cli.height};
    for (const std::string& text : cli.voids) {
        cli.field.voids.push_back(parse_void(text));
    }
    const yieldmap::SynthResult synth = yieldmap::generate(cli.field, cli.path);

    std::error_code ec;
    fs::create_directories(cli.output_dir, ec);
    if (ec) {
        throw yieldmap::DataError("synth: cannot create output directory " + cli.output_dir + ": " +
                                  ec.message());
    }
    const fs::path dir(cli.output_dir);
    yieldmap::write_file_atomic((dir / "records.csv").string(),
                                yieldmap::records_to_csv(synth.records));
    yieldmap::write_file_atomic((dir / "truth.csv").string(), yieldmap::truth_to_csv(synth.truth));

    std::cout << "synthetic harvest written to " << cli.output_dir << "\n";
    std::cout << "records:   " << synth.records.size() << " over " << synth.passes << " passes\n";
    std::cout << "mass:      " << fmt(synth.total_mass) << " kg emitted, " << fmt(synth.harvested_mass)
              << " kg swept\n";
    std::cout << "area:      " << fmt(synth.harvested_area) << " m2, duplicate coverage "
              << fmt(synth.duplicate_coverage_fraction * 100.0) << "%\n";
    return yieldmap::kExitOk;
}

int cmd_render(const std::string& input, const std::string& prefix,
               const yieldmap::RenderOptions& options) {
    const std::vector<yieldmap::Feature> features =
        yieldmap::parse_geojson(yieldmap::read_file(input));
    const yieldmap::RenderResult image = yieldmap::render(features, options);
    yieldmap::write_file_atomic(prefix + ".ppm", image.ppm);
    yieldmap::write_file_atomic(prefix + "_legend.json", image.legend_json);
    for (const std::string& w : image.warnings) {
        std::cerr << "warning: " << w << "\n";
    }
    std::cout << "wrote " << image.width << "x" << image.height << " map to " << prefix << ".ppm ("
              << options.property << ", " << options.bins << " bins)\n";
    return yieldmap::kExitOk;
}

int cmd_report(const std::string& input) {
    fs::path path(input);
    if (fs::is_directory(path)) {
        path /= "report.json";
    }
    ordered_json j;
    try {
        j = ordered_json::parse(yieldmap::read_file(path.string()));
    } catch (const ordered_json::exception& e) {
        throw yieldmap::DataError("report: " + path.string() + " is not valid JSON: " + e.what());
    }
    std::cout << "report " << path.string() << "\n";
    print_report_summary(j, std::cout);
    return yieldmap::kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"yield monitor records to smoothed yield maps"};
    app.require_subcommand(1);
    // The config file is processed by the root app (that is where the
    // library reads it); subcommand options live in sections, e.g. [run].
    // Flags given on the command line always win over file values.
    app.set_config("--config", "", "INI-style config file; put run options under [run]");
    app.allow_config_extras(CLI::config_extras_mode::error);

    // run
    yieldmap::RunConfig config;
    std::string backend = "auto";
    CLI::App* run = app.add_subcommand("run", "Execute the full pipeline over a record file");
    run->fallthrough();
    run->add_option("-i,--input", config.input_path, "Delimited record file")->required();
    run->add_option("-o,--output", config.output_dir, "Artifact directory")
        ->envname("YIELDMAP_OUTPUT_ROOT")
        ->default_str("yieldmap_out");
    run->add_option("--time-column", config.schema.time_column, "Source column for time");
    run->add_option("--x-column", config.schema.x_column, "Source column for x");
    run->add_option("--y-column", config.schema.y_column, "Source column for y");
    run->add_option("--swath-column", config.schema.swath_column, "Source column for swath");
    run->add_option("--mass-column", config.schema.mass_column, "Source column for mass");
    run->add_option("--xy-multiplier", config.schema.xy_multiplier, "Coordinate unit to meters");
    run->add_option("--swath-multiplier", config.schema.swath_multiplier,
                    "Swath unit to half-width meters");
    run->add_option("--mass-multiplier", config.schema.mass_multiplier, "Mass unit to kilograms");
    run->add_option("--min-displacement", config.min_displacement,
                    "Meters below which consecutive records merge");
    run->add_option("--snap-tolerance", config.snap_tolerance,
                    "Overlay snapping scale, must match the build constant");
    const std::map<std::string, yieldmap::NestedPolicy> policies{
        {"drop", yieldmap::NestedPolicy::kDrop}, {"reassign", yieldmap::NestedPolicy::kReassign}};
    run->add_option("--nested-policy", config.nested_policy, "Fully nested rectangle handling")
        ->transform(CLI::CheckedTransformer(policies, CLI::ignore_case));
    run->add_option("--resolution", config.aggregation_resolution, "Aggregation grid meters");
    run->add_option("--coverage-threshold", config.coverage_threshold,
                    "Minimum covered fraction a pixel needs to stay in the map");
    run->add_option("--prediction-resolution", config.prediction_resolution,
                    "Prediction grid meters; 0 reuses the aggregation grid");
    run->add_option("--nu", config.nu_candidates, "Smoothness candidates for model selection");
    run->add_option("--block-size", config.block_size, "Kriging block size; 0 is one block");
    run->add_option("--seed", config.seed, "Generator seed echoed into the report");
    bool no_dumps = false;
    run->add_flag("--no-dumps", no_dumps, "Write report.json only, skip stage artifacts");
    run->add_option("--kernel-backend", backend, "scalar, avx2, neon or auto")
        ->check(CLI::IsMember({"scalar", "avx2", "neon", "auto"}));

    // synth
    SynthCli synth_cli;
    CLI::App* synth = app.add_subcommand("synth", "Generate a synthetic harvest for testing");
    synth->add_option("-o,--output", synth_cli.output_dir, "Directory for records.csv + truth.csv");
    synth->add_option("--width", synth_cli.width, "Field width, meters");
    synth->add_option("--height", synth_cli.height, "Field height, meters");
    synth->add_option("--mean-log-yield", synth_cli.field.truth.mean_log_yield,
                      "Mean of log yield (kg/m2 scale)");
    synth->add_option("--trend-x", synth_cli.field.truth.trend_x, "Log-yield slope per meter, x");
    synth->add_option("--trend-y", synth_cli.field.truth.trend_y, "Log-yield slope per meter, y");
    bool flat = false;
    synth->add_flag("--flat", flat, "Disable the random field component of the truth");
    synth->add_option("--sill", synth_cli.field.truth.field_params.sill, "Truth field sill");
    synth->add_option("--range", synth_cli.field.truth.field_params.range, "Truth field range, m");
    synth->add_option("--smoothness", synth_cli.field.truth.field_params.smoothness,
                      "Truth field smoothness");
    synth->add_option("--lattice-resolution", synth_cli.field.truth.lattice_resolution,
                      "Truth node spacing, meters");
    synth->add_option("--void", synth_cli.voids, "Inaccessible box min_x,min_y,max_x,max_y")
        ->take_all();
    synth->add_option("--seed", synth_cli.field.seed, "Generator seed");
    synth->add_option("--spacing-factor", synth_cli.path.spacing_factor,
                      "Pass spacing as a multiple of the full swath width");
    synth->add_option("--swath", synth_cli.path.swath_half_width, "Swath half-width, meters");
    synth->add_option("--step", synth_cli.path.step_mean, "Mean cycle distance, meters");
    synth->add_option("--step-jitter", synth_cli.path.step_jitter, "Cycle distance jitter in [0,1)");
    const std::map<std::string, yieldmap::TurnStyle> turns{
        {"semicircle", yieldmap::TurnStyle::kSemicircle}, {"none", yieldmap::TurnStyle::kNone}};
    synth->add_option("--turns", synth_cli.path.turn_style, "Headland style between passes")
        ->transform(CLI::CheckedTransformer(turns, CLI::ignore_case));
    synth->add_option("--pivot-overlap", synth_cli.path.pivot_overlap,
                      "Where the headland turn pivots relative to the row end");
    synth->add_option("--noise-sigma", synth_cli.path.noise_sigma,
                      "Log-scale sigma of mean-one record noise");

    // render
    std::string render_input;
    std::string render_prefix = "yieldmap_map";
    yieldmap::RenderOptions render_options;
    CLI::App* render = app.add_subcommand("render", "Rasterize a staged GeoJSON artifact");
    render->add_option("-i,--input", render_input, "GeoJSON artifact (smoothed or pixels)")
        ->required();
    render->add_option("-o,--output", render_prefix, "Output prefix for .ppm and _legend.json");
    render->add_option("--property", render_options.property, "Feature property to plot");
    render->add_option("--bins", render_options.bins, "Palette bins across the quantiles");

    // report
    std::string report_input;
    CLI::App* report = app.add_subcommand("report", "Summarize a run's report.json");
    report->add_option("-i,--input", report_input, "report.json or the run directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? yieldmap::kExitOk : yieldmap::kExitConfigError;
    }

    try {
        if (run->parsed()) {
            if (config.output_dir.empty()) {
                config.output_dir = "yieldmap_out";
            }
            if (no_dumps) {
                config.dump_records = config.dump_rectangles = config.dump_tiles = false;
                config.dump_pixels = config.dump_params = config.dump_smoothed = false;
            }
            return cmd_run(config, backend);
        }
        if (synth->parsed()) {
            synth_cli.field.truth.use_random_field = !flat;
            return cmd_synth(synth_cli);
        }
        if (render->parsed()) {
            return cmd_render(render_input, render_prefix, render_options);
        }
        if (report->parsed()) {
            return cmd_report(report_input);
        }
    } catch (const yieldmap::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return yieldmap::kExitFailure;
    }
    return yieldmap::kExitOk;
}
