/*
 * Copyright 2026 The covtomo Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#include <covtomo/rational.hpp>

#include <optional>
#include <vector>

namespace covtomo {

enum class BoundaryKind { Interval, Sphere, Box };

struct GridSpec {
    /// Nodes per axis (Cartesian) or {radial intervals, angular nodes} (polar).
    std::vector<int> nodes_per_axis;
    /// 2D sphere domains only: polar (r, theta) grid instead of a masked box.
    bool polar = false;
};

/// Star-shaped region with homotopy center and a convex boundary.
///
/// Interval and Box keep explicit lower/upper corners; Sphere is centered at
/// the homotopy center.
struct StarDomain {
    int dim = 1;
    Point center;
    BoundaryKind kind = BoundaryKind::Interval;
    Point lower;
    Point upper;
    Rational radius;
    std::optional<GridSpec> grid;

    static StarDomain interval(const Rational& a, const Rational& b, const Rational& x0);
    static StarDomain sphere(const Point& center, const Rational& radius);
    static StarDomain box(const Point& center, const Point& half_widths);

    /// Throws when the center is not strictly interior.
    void validate() const;

    bool contains(const std::vector<double>& x, double slack = 1e-12) const;
    std::vector<double> bounding_lower() const;
    std::vector<double> bounding_upper() const;
    /// Largest distance from the center to a boundary point.
    double max_extent() const;
    std::vector<double> center_d() const { return to_double(center); }
};

/// Tensor lattice of the bounding box with per_axis nodes per axis, clipped to
/// the closed region and, if ball_radius is given, to the ball around the
/// center. per_axis must be >= 2.
std::vector<std::vector<double>> lattice_points(const StarDomain& dom, int per_axis,
                                                std::optional<double> ball_radius = std::nullopt);

/// Exact rational points on the boundary (endpoints, sphere via inverse
/// stereographic projection, box faces), at least min_count of them for
/// dim > 1.
std::vector<Point> rational_boundary_points(const StarDomain& dom, int min_count);

/// Outward (unnormalized) boundary normal at a boundary point.
Point boundary_normal(const StarDomain& dom, const Point& p);

} // namespace covtomo
