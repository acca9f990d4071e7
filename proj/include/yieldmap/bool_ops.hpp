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

#include <span>

#include "yieldmap/geometry.hpp"

namespace yieldmap {

// Output components smaller than this are numerical slivers and are dropped.
inline constexpr double kSliverAreaM2 = 1e-8;

// Coordinate snapping scale used when an overlay has to be retried.
inline constexpr double kSnapToleranceM = 1e-6;

// Set operations on planar geometries. Results are sanitized: orientation
// normalized, sliver components below kSliverAreaM2 removed. On an overlay
// failure the inputs are snapped to kSnapToleranceM and retried once; a
// second failure throws GeometryError carrying both operands as WKT.
MultiPolygon intersection(const MultiPolygon& a, const MultiPolygon& b);
MultiPolygon difference(const MultiPolygon& a, const MultiPolygon& b);
MultiPolygon union_all(std::span<const MultiPolygon> parts);

MultiPolygon to_multi(const Polygon& poly);
MultiPolygon intersection(const Polygon& a, const Polygon& b);
MultiPolygon difference(const Polygon& a, const Polygon& b);

bool is_valid(const MultiPolygon& mp);

// Number of overlay calls that needed a snapping retry since process start
// (or since the last reset). Diagnostic: a retry perturbs coordinates by up
// to half the snap step, so heavy retry traffic degrades tile boundaries.
std::size_t overlay_retry_count();
void reset_overlay_retry_count();

} // namespace yieldmap
