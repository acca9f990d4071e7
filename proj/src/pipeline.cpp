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

#include "yieldmap/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <string>
#include <utility>
#include <variant>

#include <json.hpp>

#include "yieldmap/errors.hpp"
#include "yieldmap/kernels/kernels.hpp"
#include "yieldmap/linalg.hpp"
#include "yieldmap/synth.hpp"

namespace yieldmap {

namespace {

using ordered_json = nlohmann::ordered_json;

double prop_double(const Feature& f, const std::string& key) {
    const auto it = f.properties.find(key);
    if (it == f.properties.end()) {
        throw DataError("artifact feature lacks property '" + key + "'");
    }
    if (const double* d = std::get_if<double>(&it->second)) {
        return *d;
    }
    if (const long long* i = std::get_if<long long>(&it->second)) {
        return static_cast<double>(*i);
    }
    throw DataError("artifact property '" + key + "' is not numeric");
}

long long prop_int(const Feature& f, const std::string& key) {
    const auto it = f.properties.find(key);
    if (it == f.properties.end()) {
        throw DataError("artifact feature lacks property '" + key + "'");
    }
    if (const long long* i = std::get_if<long long>(&it->second)) {
        return *i;
    }
    throw DataError("artifact property '" + key + "' is not an integer");
}

bool prop_bool(const Feature& f, const std::string& key) {
    const auto it = f.properties.find(key);
    if (it == f.properties.end()) {
        throw DataError("artifact feature lacks property '" + key + "'");
    }
    if (const bool* b = std::get_if<bool>(&it->second)) {
        return *b;
    }
    throw DataError("artifact property '" + key + "' is not a boolean");
}

const Polygon& single_polygon(const Feature& f, const std::string& what) {
    if (f.geometry.polygons.size() != 1) {
        throw DataError(what + " feature must carry exactly one polygon");
    }
    return f.geometry.polygons.front();
}

ordered_json grid_json(const Grid& g) {
    ordered_json j;
    j["origin_x"] = g.origin_x;
    j["origin_y"] = g.origin_y;
    j["resolution"] = g.resolution;
    j["nx"] = g.nx;
    j["ny"] = g.ny;
    return j;
}

ordered_json params_json_body(const FitResult& fit) {
    ordered_json j;
    j["params"]["sill"] = fit.params.sill;
    j["params"]["range"] = fit.params.range;
    j["params"]["smoothness"] = fit.params.smoothness;
    j["params"]["nugget"] = fit.params.nugget;
    j["loglik"] = fit.loglik;
    ordered_json& d = j["diagnostics"];
    d["pixels_used"] = fit.diagnostics.pixels_used;
    d["zero_mass_excluded"] = fit.diagnostics.zero_mass_excluded;
    d["likelihood_evals"] = fit.diagnostics.likelihood_evals;
    d["converged"] = fit.diagnostics.converged;
    d["boundary"] = fit.diagnostics.boundary;
    d["mean_log"] = fit.diagnostics.mean_log;
    d["note"] = fit.diagnostics.note;
    d["init_logliks"] = fit.diagnostics.init_logliks;
    return j;
}

std::string policy_name(NestedPolicy p) {
    return p == NestedPolicy::kDrop ? "drop" : "reassign";
}

} // namespace

void validate_config(const RunConfig& config) {
    const auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
    if (config.input_path.empty()) {
        throw ConfigError("run: input path is empty");
    }
    if (config.output_dir.empty()) {
        throw ConfigError("run: output directory is empty");
    }
    if (!positive(config.min_displacement)) {
        throw ConfigError("run: min_displacement must be positive and finite");
    }
    if (!positive(config.snap_tolerance)) {
        throw ConfigError("run: snap_tolerance must be positive and finite");
    }
    if (config.snap_tolerance != kSnapToleranceM) {
        // The overlay engine compiles its snapping scale in; a config asking
        // for a different one would silently not get it, so refuse instead.
        throw ConfigError("run: this build snaps overlays at " + format_double(kSnapToleranceM) +
                          " m and snap_tolerance must equal it");
    }
    if (!positive(config.aggregation_resolution)) {
        throw ConfigError("run: aggregation_resolution must be positive and finite");
    }
    if (!std::isfinite(config.coverage_threshold) || config.coverage_threshold < 0.0 ||
        config.coverage_threshold > 1.0) {
        throw ConfigError("run: coverage_threshold must lie in [0, 1]");
    }
    if (!std::isfinite(config.prediction_resolution) || config.prediction_resolution < 0.0) {
        throw ConfigError(
            "run: prediction_resolution must be positive, or 0 to reuse the aggregation grid");
    }
    if (config.nu_candidates.empty()) {
        throw ConfigError("run: nu_candidates is empty");
    }
    for (const double nu : config.nu_candidates) {
        if (!positive(nu)) {
            throw ConfigError("run: nu_candidates must be positive and finite");
        }
    }
}

std::vector<Feature> rect_features(const std::vector<HarvestRect>& rects) {
    std::vector<Feature> out;
    out.reserve(rects.size());
    for (const HarvestRect& r : rects) {
        Feature f;
        f.geometry.polygons.push_back(r.geometry);
        f.properties["mass"] = r.mass;
        f.properties["recorded_area"] = r.recorded_area;
        f.properties["source_t"] = r.source_t;
        f.properties["tau"] = r.tau;
        out.push_back(std::move(f));
    }
    return out;
}

std::vector<HarvestRect> rects_from_features(const std::vector<Feature>& features) {
    std::vector<HarvestRect> out;
    out.reserve(features.size());
    for (const Feature& f : features) {
        HarvestRect r;
        r.tau = prop_int(f, "tau");
        r.geometry = single_polygon(f, "rectangle");
        r.mass = prop_double(f, "mass");
        r.recorded_area = prop_double(f, "recorded_area");
        r.source_t = prop_int(f, "source_t");
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<Feature> tile_features(const std::vector<TessTile>& tiles) {
    std::vector<Feature> out;
    out.reserve(tiles.size());
    for (const TessTile& t : tiles) {
        Feature f;
        f.geometry = t.geometry;
        f.properties["effective_area"] = t.effective_area;
        f.properties["mass"] = t.mass;
        f.properties["tau"] = t.tau;
        out.push_back(std::move(f));
    }
    return out;
}

std::vector<TessTile> tiles_from_features(const std::vector<Feature>& features) {
    std::vector<TessTile> out;
    out.reserve(features.size());
    for (const Feature& f : features) {
        TessTile t;
        t.tau = prop_int(f, "tau");
        t.geometry = f.geometry;
        t.mass = prop_double(f, "mass");
        t.effective_area = prop_double(f, "effective_area");
        out.push_back(std::move(t));
    }
    return out;
}

std::vector<Feature> pixel_features(const std::vector<GridPixel>& pixels) {
    std::vector<Feature> out;
    out.reserve(pixels.size());
    for (const GridPixel& p : pixels) {
        Feature f;
        f.geometry.polygons.push_back(p.geometry);
        f.properties["covered_fraction"] = p.covered_fraction;
        f.properties["cx"] = p.centroid.x;
        f.properties["cy"] = p.centroid.y;
        f.properties["mass"] = p.mass;
        f.properties["n"] = static_cast<long long>(p.n);
        f.properties["retained"] = p.retained;
        out.push_back(std::move(f));
    }
    return out;
}

std::vector<GridPixel> pixels_from_features(const std::vector<Feature>& features) {
    std::vector<GridPixel> out;
    out.reserve(features.size());
    for (const Feature& f : features) {
        GridPixel p;
        p.n = static_cast<std::size_t>(prop_int(f, "n"));
        p.geometry = single_polygon(f, "pixel");
        p.mass = prop_double(f, "mass");
        p.covered_fraction = prop_double(f, "covered_fraction");
        p.retained = prop_bool(f, "retained");
        p.centroid = {prop_double(f, "cx"), prop_double(f, "cy")};
        out.push_back(std::move(p));
    }
    return out;
}

std::vector<Feature> smoothed_features(const std::vector<SmoothedPixel>& pixels,
                                       const Grid& prediction_grid) {
    std::vector<Feature> out;
    out.reserve(pixels.size());
    for (const SmoothedPixel& s : pixels) {
        const std::size_t ix = s.n % prediction_grid.nx;
        const std::size_t iy = s.n / prediction_grid.nx;
        const BBox box = prediction_grid.pixel_box(ix, iy);
        Feature f;
        f.geometry.polygons.push_back(make_box(box.min_x, box.min_y, box.max_x, box.max_y));
        f.properties["cx"] = s.centroid.x;
        f.properties["cy"] = s.centroid.y;
        f.properties["mu_log"] = s.mu_log;
        f.properties["mu_mass"] = s.mu_mass;
        f.properties["n"] = static_cast<long long>(s.n);
        f.properties["var_log"] = s.var_log;
        f.properties["var_mass"] = s.var_mass;
        f.properties["yield_kg_m2"] = s.yield_kg_m2;
        f.properties["yield_mg_ha"] = s.yield_mg_ha;
        f.properties["yield_var"] = s.yield_var;
        out.push_back(std::move(f));
    }
    return out;
}

std::string smoothed_to_csv(const std::vector<SmoothedPixel>& pixels) {
    std::string out = "x,y,mu_log,var_log,mu_mass,var_mass,yield_kg_m2,yield_mg_ha,yield_var\n";
    for (const SmoothedPixel& s : pixels) {
        out += format_double(s.centroid.x);
        out += ',';
        out += format_double(s.centroid.y);
        out += ',';
        out += format_double(s.mu_log);
        out += ',';
        out += format_double(s.var_log);
        out += ',';
        out += format_double(s.mu_mass);
        out += ',';
        out += format_double(s.var_mass);
        out += ',';
        out += format_double(s.yield_kg_m2);
        out += ',';
        out += format_double(s.yield_mg_ha);
        out += ',';
        out += format_double(s.yield_var);
        out += '\n';
    }
    return out;
}

std::string params_to_json(const FitResult& fit) {
    return params_json_body(fit).dump(2) + "\n";
}

std::string report_to_json(const RunConfig& config, const RunReport& report) {
    ordered_json j;
    j["schema_version"] = 1;

    ordered_json& c = j["config"];
    c["input_path"] = config.input_path;
    c["columns"]["time"] = config.schema.time_column;
    c["columns"]["x"] = config.schema.x_column;
    c["columns"]["y"] = config.schema.y_column;
    c["columns"]["swath"] = config.schema.swath_column;
    c["columns"]["mass"] = config.schema.mass_column;
    c["columns"]["xy_multiplier"] = config.schema.xy_multiplier;
    c["columns"]["swath_multiplier"] = config.schema.swath_multiplier;
    c["columns"]["mass_multiplier"] = config.schema.mass_multiplier;
    c["min_displacement"] = config.min_displacement;
    c["snap_tolerance"] = config.snap_tolerance;
    c["nested_policy"] = policy_name(config.nested_policy);
    c["aggregation_resolution"] = config.aggregation_resolution;
    c["coverage_threshold"] = config.coverage_threshold;
    c["prediction_resolution"] = config.prediction_resolution;
    c["nu_candidates"] = config.nu_candidates;
    c["block_size"] = config.block_size;
    c["output_dir"] = config.output_dir;
    c["seed"] = config.seed;

    ordered_json& in = j["input"];
    in["record_count"] = report.record_count;
    in["warnings"] = report.input_warnings;

    ordered_json& rect = j["rectangles"];
    rect["count"] = report.rectangle_count;
    rect["input_records"] = report.merge.input_records;
    rect["merged_records"] = report.merge.merged_records;
    rect["forward_merged"] = report.merge.forward_merged;
    rect["trailing_merged"] = report.merge.trailing_merged;
    rect["trailing_mass"] = report.merge.trailing_mass;
    rect["anchor_mass"] = report.merge.anchor_mass;

    ordered_json& tess = j["tessellation"];
    tess["tile_count"] = report.tile_count;
    tess["dropped_count"] = report.tess.dropped_count;
    tess["leaked_mass"] = report.tess.leaked_mass;
    tess["leaked_mass_fraction"] = report.tess.leaked_mass_fraction;
    tess["overlap_percent"] = report.tess.overlap_percent;

    ordered_json& ap = j["apportioning"];
    ap["grid"] = grid_json(report.grid);
    ap["total_mass_in"] = report.apportion.total_mass_in;
    ap["mass_on_retained"] = report.apportion.mass_on_retained;
    ap["mass_on_discarded"] = report.apportion.mass_on_discarded;
    ap["coverage_deficit_percent"] = report.apportion.coverage_deficit_percent;
    ap["retained_pixels"] = report.retained_pixels;
    ap["discarded_pixels"] = report.discarded_pixels;

    ordered_json& sm = j["smoothing"];
    sm.update(params_json_body(report.fit));
    sm["prediction_grid"] = grid_json(report.prediction_grid);
    sm["prediction_pixels"] = report.prediction_pixels;

    ordered_json ledger = ordered_json::array();
    for (const LedgerEntry& e : report.ledger) {
        ordered_json row;
        row["stage"] = e.stage;
        row["mass_in"] = e.mass_in;
        row["mass_retained"] = e.mass_retained;
        row["mass_leaked"] = e.mass_leaked;
        row["mass_discarded"] = e.mass_discarded;
        row["relative_error"] = e.relative_error;
        ledger.push_back(std::move(row));
    }
    j["ledger"] = std::move(ledger);

    j["backends"]["linalg"] = report.linalg_backend;
    j["backends"]["kernels"] = report.kernel_backend;
    j["failed_stage"] = report.failed_stage;

    // The only fields that vary between identical runs, kept in one subtree
    // so consumers can drop it before comparing reports.
    ordered_json& t = j["timings_ms"];
    t = ordered_json::object();
    for (const StageTiming& s : report.timings) {
        t[s.stage] = s.milliseconds;
    }

    return j.dump(2) + "\n";
}

RunResult run(const RunConfig& config) {
    validate_config(config);

    namespace fs = std::filesystem;
    std::error_code dir_ec;
    fs::create_directories(config.output_dir, dir_ec);
    if (dir_ec) {
        throw DataError("run: cannot create output directory " + config.output_dir + ": " +
                        dir_ec.message());
    }
    const auto artifact = [&](const char* name) {
        return (fs::path(config.output_dir) / name).string();
    };

    RunResult result;
    RunReport& rep = result.report;
    rep.linalg_backend = linalg::using_lapack() ? "lapack" : "portable";
    rep.kernel_backend = std::string(kernels::backend_name(kernels::active_backend()));

    std::string current_stage;
    const auto timed = [&](const char* name, auto&& body) {
        current_stage = name;
        const auto start = std::chrono::steady_clock::now();
        body();
        const auto stop = std::chrono::steady_clock::now();
        rep.timings.push_back(
            {name, std::chrono::duration<double, std::milli>(stop - start).count()});
    };
    const auto book = [&](const char* stage, double in, double retained, double leaked,
                          double discarded) {
        LedgerEntry e{stage, in, retained, leaked, discarded, 0.0};
        e.relative_error =
            std::abs(in - (retained + leaked + discarded)) / std::max(std::abs(in), 1.0);
        rep.ledger.push_back(std::move(e));
    };
    const auto mass_of = [](const auto& items) {
        double total = 0.0;
        for (const auto& item : items) {
            total += item.mass;
        }
        return total;
    };

    try {
        double record_mass = 0.0;
        timed("ingest", [&] {
            const std::string text = read_file(config.input_path);
            result.records = parse_records(text, config.schema);
            rep.input_warnings = validate_geometry_feasibility(result.records);
            rep.record_count = result.records.size();
            for (const MonitorRecord& r : result.records) {
                record_mass += r.m;
            }
            book("ingest", record_mass, record_mass, 0.0, 0.0);
            if (config.dump_records) {
                write_file_atomic(artifact("records.csv"), records_to_csv(result.records));
            }
        });

        double rect_mass = 0.0;
        timed("rectangles", [&] {
            RectanglesResult rr = make_rectangles(result.records, config.min_displacement);
            result.rects = std::move(rr.rects);
            rep.merge = rr.report;
            rep.rectangle_count = result.rects.size();
            rect_mass = mass_of(result.rects);
            book("rectangles", record_mass, rect_mass, 0.0, 0.0);
            if (config.dump_rectangles) {
                write_file_atomic(artifact("rectangles.geojson"),
                                  to_geojson(rect_features(result.rects)));
            }
        });

        double tile_mass = 0.0;
        timed("tessellation", [&] {
            TessResult tr = tessellate(result.rects, config.nested_policy);
            result.tiles = std::move(tr.tiles);
            rep.tess = tr.report;
            rep.tile_count = result.tiles.size();
            tile_mass = mass_of(result.tiles);
            book("tessellation", rect_mass, tile_mass, rep.tess.leaked_mass, 0.0);
            if (config.dump_tiles) {
                write_file_atomic(artifact("tiles.geojson"), to_geojson(tile_features(result.tiles)));
            }
        });

        timed("apportioning", [&] {
            rep.grid = make_grid(result.tiles, config.aggregation_resolution);
            ApportionResult ar = apportion(result.tiles, rep.grid, config.coverage_threshold);
            result.pixels = std::move(ar.pixels);
            rep.apportion = ar.report;
            for (const GridPixel& p : result.pixels) {
                if (p.covered_fraction > 0.0) {
                    (p.retained ? rep.retained_pixels : rep.discarded_pixels) += 1;
                }
            }
            book("apportioning", tile_mass, rep.apportion.mass_on_retained, 0.0,
                 rep.apportion.mass_on_discarded);
            if (config.dump_pixels) {
                write_file_atomic(artifact("pixels.geojson"),
                                  to_geojson(pixel_features(result.pixels)));
            }
        });

        timed("smoothing", [&] {
            FitOptions opts;
            opts.nu_candidates = config.nu_candidates;
            const FitResult fit = fit_mle(result.pixels, opts);
            rep.fit = fit;
            if (config.dump_params) {
                write_file_atomic(artifact("params.json"), params_to_json(fit));
            }

            const double pres = config.prediction_resolution > 0.0 ? config.prediction_resolution
                                                                   : config.aggregation_resolution;
            rep.prediction_grid = pres == config.aggregation_resolution
                                      ? rep.grid
                                      : make_grid(result.tiles, pres);
            std::vector<SmoothedPixel> all =
                krige(result.pixels, fit.params, rep.prediction_grid, config.block_size);
            backtransform(all);
            apply_yield(all, pres);

            // The kriging surface extends over the whole prediction grid;
            // the artifact keeps only cells whose centroid falls on a
            // retained aggregation pixel, so unharvested ground and voids
            // stay out of the map.
            double fit_mass = 0.0;
            for (const GridPixel& p : result.pixels) {
                if (p.retained && p.mass > 0.0) {
                    fit_mass += p.mass;
                }
            }
            result.smoothed.reserve(all.size());
            for (const SmoothedPixel& s : all) {
                const double fx = (s.centroid.x - rep.grid.origin_x) / rep.grid.resolution;
                const double fy = (s.centroid.y - rep.grid.origin_y) / rep.grid.resolution;
                if (fx < 0.0 || fy < 0.0) {
                    continue;
                }
                const std::size_t ix = static_cast<std::size_t>(fx);
                const std::size_t iy = static_cast<std::size_t>(fy);
                if (ix >= rep.grid.nx || iy >= rep.grid.ny) {
                    continue;
                }
                if (result.pixels[iy * rep.grid.nx + ix].retained) {
                    result.smoothed.push_back(s);
                }
            }
            rep.prediction_pixels = result.smoothed.size();
            // Smoothing predicts but never moves mass: the kilograms on the
            // retained pixels enter, the zero-mass exclusions carry none.
            book("smoothing", rep.apportion.mass_on_retained, fit_mass, 0.0, 0.0);
            if (config.dump_smoothed) {
                write_file_atomic(artifact("smoothed.geojson"),
                                  to_geojson(smoothed_features(result.smoothed,
                                                               rep.prediction_grid)));
                write_file_atomic(artifact("smoothed.csv"), smoothed_to_csv(result.smoothed));
            }
        });
    } catch (const Error& e) {
        rep.failed_stage = current_stage;
        // Completed artifacts stay on disk; the partial report names the
        // failed stage. Failure to write it must not mask the stage error.
        try {
            write_file_atomic(artifact("report.json"), report_to_json(config, rep));
        } catch (...) {
        }
        throw Error("pipeline stage '" + current_stage + "': " + e.what(), e.exit_code());
    }

    write_file_atomic(artifact("report.json"), report_to_json(config, rep));
    return result;
}

} // namespace yieldmap
