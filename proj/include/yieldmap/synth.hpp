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
#include <cstdint>
#include <string>
#include <vector>

#include "yieldmap/covariance.hpp"
#include "yieldmap/geometry.hpp"
#include "yieldmap/ingest.hpp"
#include "yieldmap/smooth.hpp"

namespace yieldmap {

// Ground-truth yield surface for synthetic harvests. Log yield is a linear
// trend around a mean level, optionally plus a stationary random field drawn
// on a node lattice and interpolated bilinearly between nodes. The surface is
// defined BY that interpolation, so it can be evaluated exactly anywhere.
struct TruthParams {
    double mean_log_yield = -0.92; // roughly 0.4 kg/m2
    double trend_x = 0.0;          // d(log yield)/dx, per meter, about the bbox center
    double trend_y = 0.0;
    bool use_random_field = true;
    CovarianceParams field_params{1.0, 30.0, 1.5, 0.0}; // validated only when used
    double lattice_resolution = 10.0; // target node spacing, meters
};

// The synthetic field: crop extent, inaccessible areas, truth surface, seed.
// Crop exists exactly inside the bbox and outside every void.
struct FieldSpec {
    BBox bbox;
    std::vector<Polygon> voids; // each must lie inside the bbox
    TruthParams truth;
    std::uint64_t seed = 0;
};

// Headland behavior between passes: a semicircular turn swept by records, or
// a direct hop to the next pass start as a single record.
enum class TurnStyle {
    kSemicircle,
    kNone,
};

// Machine and path parameters. Pass spacing is spacing_factor times the full
// swath width 2w, so factors below 1 overlap adjacent passes. Cycle distance
// is step_mean scaled by a uniform factor in [1 - jitter, 1 + jitter).
// pivot_overlap shifts where the headland turn begins: 1 starts it exactly at
// the row end, smaller values pivot inside the rows and re-sweep more of the
// inner side, larger values carry the loop past the row end first.
// noise_sigma is the log-scale standard deviation of mean-one multiplicative
// noise applied to each emitted record mass; 0 emits exact swept masses.
struct PathSpec {
    double spacing_factor = 1.0;
    double swath_half_width = 2.5; // w, meters
    double step_mean = 2.0;        // meters
    double step_jitter = 0.0;      // in [0, 1)
    TurnStyle turn_style = TurnStyle::kSemicircle;
    double pivot_overlap = 1.0;
    double noise_sigma = 0.0;
};

// The truth surface raster plus everything needed to evaluate against it.
// Node (ix, iy) sits at (field.min_x + ix*dx, field.min_y + iy*dy); nodes
// span the bbox exactly. yield_at is the bare surface; crop_yield_at masks
// it to zero outside the bbox and inside voids.
struct TruthField {
    BBox field;
    std::vector<Polygon> voids;
    std::size_t nx = 0, ny = 0; // node counts per axis, each >= 2
    double dx = 0.0, dy = 0.0;  // node spacing, meters
    std::vector<double> log_yield; // node values, row-major iy*nx + ix

    double log_yield_at(Point p) const; // bilinear, clamped to the node span
    double yield_at(Point p) const;
    bool in_void(Point p) const;
    double crop_yield_at(Point p) const;
};

// One synthetic harvest. Masses come from destructive sampling on a fixed
// 0.25 m quadrature lattice: every lattice cell is collected at most once, by
// the first record whose swept rectangle covers its center, so the record
// masses sum exactly to the integral of crop yield over the swept union.
// record_pass runs parallel to records: the pass index for records emitted
// along a row (detours around voids included), -1 for headland records.
struct SynthResult {
    std::vector<MonitorRecord> records;
    std::vector<long long> record_pass;
    TruthField truth;
    std::size_t passes = 0;
    double total_mass = 0.0;     // sum of emitted record masses, kg
    double harvested_mass = 0.0; // integral of crop yield over the swept union
    double harvested_area = 0.0; // quadrature area of the swept union, m2
    double gross_swept_area = 0.0; // per-record swept areas summed, re-sweeps included
    double duplicate_coverage_fraction = 0.0; // 1 - harvested_area / gross_swept_area
};

// Generates a serpentine harvest over the field: west-east passes from the
// bottom up, alternating direction, swath edges flush with the bbox sides.
// Rows detour around void bounding boxes (records hug the void, never enter
// it), and headlands follow turn_style with records continuing through the
// turn. The first record is a zero-mass anchor at the path start.
// Throws ConfigError on invalid specs or when no pass fits the field.
SynthResult generate(const FieldSpec& field, const PathSpec& path);

// Comparison of a smoothed surface against the truth it was generated from,
// over prediction pixels whose centroid lies on crop ground.
struct EvalMetrics {
    std::size_t pixels_used = 0;
    double rmse = 0.0;        // on yield, kg/m2
    double correlation = 0.0; // Pearson; NaN when flagged degenerate
    bool degenerate_correlation = false; // either side has no spread
    double smoothed_mass = 0.0; // sum of pixel mass estimates, kg
    double truth_mass = 0.0;    // subsampled integral of crop yield over the same pixels
    double mass_ratio = 0.0;    // smoothed_mass / truth_mass
};

// Scores smoothed pixels against the truth surface at their centroids.
// pixel_resolution is the prediction pixel edge length in meters. Pixels
// outside the field or centered in a void are skipped. Throws ConfigError on
// a pixel without a yield value, DataError when no pixel overlaps the field.
EvalMetrics evaluate(const std::vector<SmoothedPixel>& smoothed, const TruthField& truth,
                     double pixel_resolution);

// Record CSV with header t,x,y,w,m, parseable by the default ingest schema
// (w is the half-width). Values round-trip exactly.
std::string records_to_csv(const std::vector<MonitorRecord>& records);

// Truth raster CSV with header x,y,yield, one row per lattice node, carrying
// the crop value (zero on void nodes).
std::string truth_to_csv(const TruthField& truth);

} // namespace yieldmap
