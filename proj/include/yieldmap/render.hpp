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

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "yieldmap/io.hpp"

namespace yieldmap {

struct Rgb {
    std::uint8_t r = 0;
    std::uint8_t g = 0;
    std::uint8_t b = 0;

    bool operator==(const Rgb&) const = default;
};

// Raster styling. The palette is a single-hue green ramp from light to dark
// interpolated over `bins` entries; breakpoints are empirical quantiles of
// the plotted property at probabilities k / bins, so equal shares of the
// painted pixels land in each bin and low and high values are represented
// uniformly. 8 bins keep the quartiles among the breakpoints.
struct RenderOptions {
    std::string property = "yield_mg_ha";
    std::size_t bins = 8;
    Rgb light{237, 248, 233};
    Rgb dark{0, 68, 27};
};

// A rendered map. ppm holds a binary P6 image, top row first; legend_json
// describes bins, breakpoints and colors. Grid cells without a painted
// feature (voids, discarded pixels) are white.
struct RenderResult {
    std::size_t width = 0;
    std::size_t height = 0;
    std::string ppm;
    std::string legend_json;
    std::vector<std::string> warnings;
};

// palette[i] linearly interpolates light -> dark; i = bin index.
std::vector<Rgb> make_palette(std::size_t bins, Rgb light, Rgb dark);

// Empirical quantiles with linear interpolation between order statistics,
// at probabilities k / bins for k = 0..bins. values need not be sorted.
std::vector<double> quantile_breakpoints(std::vector<double> values, std::size_t bins);

// Largest bin k with breakpoints[k] <= v, clamped to [0, bins - 1]. Values
// at the median therefore map to bin bins / 2, the middle palette entry.
std::size_t bin_of(double v, const std::vector<double>& breakpoints);

// Rasterizes grid-aligned features (one axis-aligned square cell each, as
// the stage dumps produce) into a quantile-binned image of the chosen
// property. Features whose "retained" property is false are left blank and
// excluded from the quantiles. A constant field has no quantile spread;
// every painted cell then gets the middle palette entry and a
// degenerate-quantile warning is recorded.
// Throws DataError on an empty artifact, cells off a common regular grid, or
// a painted feature lacking the property; ConfigError on bins < 2.
RenderResult render(const std::vector<Feature>& features, const RenderOptions& options = {});

} // namespace yieldmap
