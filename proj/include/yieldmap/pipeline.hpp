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

#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "yieldmap/apportion.hpp"
#include "yieldmap/bool_ops.hpp"
#include "yieldmap/ingest.hpp"
#include "yieldmap/io.hpp"
#include "yieldmap/rectangles.hpp"
#include "yieldmap/smooth.hpp"
#include "yieldmap/tessellate.hpp"

namespace yieldmap {

// Everything a run needs, in one value, so a run is reproducible from its
// config echo alone. Defaults follow the reference workflow: 5 m aggregation
// grid, 50% coverage threshold, drop policy for fully nested rectangles,
// smoothness candidates {0.5, 1.5, 2.5}, prediction grid equal to the
// aggregation grid.
struct RunConfig {
    std::string input_path;
    ColumnSchema schema;

    // Displacement below which consecutive records are coalesced, meters.
    double min_displacement = 0.01;
    // Overlay snapping scale, meters. The overlay engine compiles this in
    // (kSnapToleranceM); the field exists so configs state it explicitly and
    // validation can reject a value this build cannot honor.
    double snap_tolerance = kSnapToleranceM;
    NestedPolicy nested_policy = NestedPolicy::kDrop;
    double aggregation_resolution = 5.0;
    double coverage_threshold = 0.5;
    // 0 means predict on the aggregation grid itself.
    double prediction_resolution = 0.0;
    std::vector<double> nu_candidates{kSmoothnessCandidates.begin(),
                                      kSmoothnessCandidates.end()};
    std::size_t block_size = 64;

    std::string output_dir;
    // Per-stage artifact dumps. report.json is always written.
    bool dump_records = true;
    bool dump_rectangles = true;
    bool dump_tiles = true;
    bool dump_pixels = true;
    bool dump_params = true;
    bool dump_smoothed = true;

    // Generator seed for synthetic inputs, echoed into the report for
    // provenance. The processing stages are deterministic and never draw
    // from it.
    unsigned long long seed = 0;
};

// Throws ConfigError naming the offending field. Runs before any input is
// read, so a bad config never produces partial artifacts.
void validate_config(const RunConfig& config);

// One row of the mass-balance ledger. Every kilogram entering a stage leaves
// it as retained, leaked, or discarded; relative_error is the closure defect
// |in - (retained + leaked + discarded)| / max(in, 1 kg).
struct LedgerEntry {
    std::string stage;
    double mass_in = 0.0;
    double mass_retained = 0.0;
    double mass_leaked = 0.0;
    double mass_discarded = 0.0;
    double relative_error = 0.0;
};

struct StageTiming {
    std::string stage;
    double milliseconds = 0.0;
};

// Diagnostics of one run. Apart from timings (and the note fields inside
// diagnostics, which carry no numbers from the clock), every field is a pure
// function of config and input, which is what makes rerun reports comparable
// byte for byte once timings are set aside.
struct RunReport {
    std::size_t record_count = 0;
    std::vector<std::string> input_warnings;

    std::size_t rectangle_count = 0;
    MergeReport merge;

    std::size_t tile_count = 0;
    TessReport tess;

    Grid grid;
    ApportionReport apportion;
    std::size_t retained_pixels = 0;
    std::size_t discarded_pixels = 0;

    FitResult fit;
    Grid prediction_grid;
    // Prediction pixels written to the smoothed artifacts, after masking to
    // the retained area.
    std::size_t prediction_pixels = 0;

    std::vector<LedgerEntry> ledger;
    std::vector<StageTiming> timings;

    std::string linalg_backend;
    std::string kernel_backend;
    // Name of the stage that aborted the run; empty on success.
    std::string failed_stage;
};

// Report plus the in-memory stage products, so callers can evaluate a run
// without re-parsing its artifacts. smoothed holds the masked prediction set
// exactly as written to smoothed.geojson / smoothed.csv.
struct RunResult {
    RunReport report;
    std::vector<MonitorRecord> records;
    std::vector<HarvestRect> rects;
    std::vector<TessTile> tiles;
    std::vector<GridPixel> pixels;
    std::vector<SmoothedPixel> smoothed;
};

// Executes ingest, rectangles, tessellation, apportioning and smoothing in
// order, writing each stage artifact atomically as the stage completes and
// report.json last. A stage failure is rethrown as an Error prefixed with
// the stage name and the original exit code; artifacts of completed stages
// stay on disk and a partial report records the failed stage.
RunResult run(const RunConfig& config);

// Artifact serialization. Each *_features / *_from_features pair round-trips
// its stage product exactly: numbers are written in shortest round-trip form
// and parse back to identical bits, which is what the stage-composability
// guarantee rests on.
std::vector<Feature> rect_features(const std::vector<HarvestRect>& rects);
std::vector<HarvestRect> rects_from_features(const std::vector<Feature>& features);

std::vector<Feature> tile_features(const std::vector<TessTile>& tiles);
std::vector<TessTile> tiles_from_features(const std::vector<Feature>& features);

std::vector<Feature> pixel_features(const std::vector<GridPixel>& pixels);
std::vector<GridPixel> pixels_from_features(const std::vector<Feature>& features);

// Smoothed pixels as features over their prediction-grid boxes.
std::vector<Feature> smoothed_features(const std::vector<SmoothedPixel>& pixels,
                                       const Grid& prediction_grid);
// Header x,y,mu_log,var_log,mu_mass,var_mass,yield_kg_m2,yield_mg_ha,yield_var.
std::string smoothed_to_csv(const std::vector<SmoothedPixel>& pixels);

// Fitted model as JSON: the four covariance parameters, the log likelihood
// and the fit diagnostics.
std::string params_to_json(const FitResult& fit);

// Full run report as JSON. Field order is fixed and timings sit under the
// single key "timings_ms", so two reports from identical runs differ in that
// subtree only.
std::string report_to_json(const RunConfig& config, const RunReport& report);

} // namespace yieldmap
