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
#include <covtomo/domain.hpp>
#include <covtomo/errors.hpp>

#include <algorithm>
#include <cmath>

namespace covtomo {

StarDomain StarDomain::interval(const Rational& a, const Rational& b, const Rational& x0)
{
    StarDomain d;
    d.dim = 1;
    d.center = {x0};
    d.kind = BoundaryKind::Interval;
    d.lower = {a};
    d.upper = {b};
    d.validate();
    return d;
}

StarDomain StarDomain::sphere(const Point& center, const Rational& radius)
{
    StarDomain d;
    d.dim = static_cast<int>(center.size());
    d.center = center;
    d.kind = BoundaryKind::Sphere;
    d.radius = radius;
    d.validate();
    return d;
}

StarDomain StarDomain::box(const Point& center, const Point& half_widths)
{
    if (center.size() != half_widths.size()) throw DimensionMismatch("box center/half-width length mismatch");
    StarDomain d;
    d.dim = static_cast<int>(center.size());
    d.center = center;
    d.kind = d.dim == 1 ? BoundaryKind::Interval : BoundaryKind::Box;
    for (std::size_t i = 0; i < center.size(); ++i) {
        d.lower.push_back(center[i] - half_widths[i]);
        d.upper.push_back(center[i] + half_widths[i]);
    }
    d.validate();
    return d;
}

void StarDomain::validate() const
{
    if (dim < 1) throw Error("domain dimension must be positive");
    if (static_cast<int>(center.size()) != dim) throw DimensionMismatch("domain center length mismatch");
    if (kind == BoundaryKind::Sphere) {
        if (sgn(radius) <= 0) throw Error("sphere radius must be positive");
        return;
    }
    if (static_cast<int>(lower.size()) != dim || static_cast<int>(upper.size()) != dim) {
        throw DimensionMismatch("domain bounds length mismatch");
    }
    if (kind == BoundaryKind::Interval && dim != 1) throw Error("interval domains are one-dimensional");
    for (int i = 0; i < dim; ++i) {
        if (!(lower[i] < center[i] && center[i] < upper[i])) {
            throw Error("homotopy center must lie strictly inside the domain");
        }
    }
}

bool StarDomain::contains(const std::vector<double>& x, double slack) const
{
    const auto c = center_d();
    if (kind == BoundaryKind::Sphere) {
        double r2 = 0;
        for (int i = 0; i < dim; ++i) r2 += (x[i] - c[i]) * (x[i] - c[i]);
        const double r = radius.get_d();
        return r2 <= r * r * (1 + slack) + slack;
    }
    for (int i = 0; i < dim; ++i) {
        if (x[i] < lower[i].get_d() - slack || x[i] > upper[i].get_d() + slack) return false;
    }
    return true;
}

std::vector<double> StarDomain::bounding_lower() const
{
    if (kind != BoundaryKind::Sphere) return to_double(lower);
    auto c = center_d();
    for (auto& v : c) v -= radius.get_d();
    return c;
}

std::vector<double> StarDomain::bounding_upper() const
{
    if (kind != BoundaryKind::Sphere) return to_double(upper);
    auto c = center_d();
    for (auto& v : c) v += radius.get_d();
    return c;
}

double StarDomain::max_extent() const
{
    if (kind == BoundaryKind::Sphere) return radius.get_d();
    const auto c = center_d();
    double s = 0;
    for (int i = 0; i < dim; ++i) {
        const double w = std::max(c[i] - lower[i].get_d(), upper[i].get_d() - c[i]);
        s += w * w;
    }
    return std::sqrt(s);
}

std::vector<std::vector<double>> lattice_points(const StarDomain& dom, int per_axis,
                                                std::optional<double> ball_radius)
{
    if (per_axis < 2) throw Error("lattice needs at least 2 points per axis");
    auto lo = dom.bounding_lower();
    auto hi = dom.bounding_upper();
    const auto c = dom.center_d();
    if (ball_radius) {
        for (int i = 0; i < dom.dim; ++i) {
            lo[i] = std::max(lo[i], c[i] - *ball_radius);
            hi[i] = std::min(hi[i], c[i] + *ball_radius);
        }
    }
    std::vector<std::vector<double>> pts;
    std::vector<int> idx(dom.dim, 0);
    std::vector<double> x(dom.dim);
    while (true) {
        for (int i = 0; i < dom.dim; ++i) {
            x[i] = lo[i] + (hi[i] - lo[i]) * static_cast<double>(idx[i]) / (per_axis - 1);
        }
        bool keep = dom.contains(x);
        if (keep && ball_radius) {
            double r2 = 0;
            for (int i = 0; i < dom.dim; ++i) r2 += (x[i] - c[i]) * (x[i] - c[i]);
            keep = r2 <= (*ball_radius) * (*ball_radius) * (1 + 1e-12);
        }
        if (keep) pts.push_back(x);
        int axis = 0;
        while (axis < dom.dim && ++idx[axis] == per_axis) idx[axis++] = 0;
        if (axis == dom.dim) break;
    }
    return pts;
}

namespace {

/// Inverse stereographic projection of a rational vector u in R^{n-1} onto S^{n-1}.
Point inverse_stereographic(const Point& u)
{
    Rational s(0);
    for (const auto& v : u) s += v * v;
    Point p;
    for (const auto& v : u) p.push_back(2 * v / (s + 1));
    p.push_back((s - 1) / (s + 1));
    for (auto& v : p) v.canonicalize();
    return p;
}

} // namespace

std::vector<Point> rational_boundary_points(const StarDomain& dom, int min_count)
{
    std::vector<Point> pts;
    if (dom.dim == 1) {
        if (dom.kind == BoundaryKind::Sphere) {
            pts.push_back({dom.center[0] - dom.radius});
            pts.push_back({dom.center[0] + dom.radius});
        } else {
            pts.push_back(dom.lower);
            pts.push_back(dom.upper);
        }
        return pts;
    }
    if (dom.kind == BoundaryKind::Sphere) {
        // Parameters u in a symmetric rational lattice; include the pole.
        const int m = dom.dim - 1;
        int side = 2;
        while (true) {
            int count = 1;
            for (int i = 0; i < m; ++i) count *= (2 * side + 1);
            if (count + 1 >= min_count) break;
            ++side;
        }
        std::vector<int> idx(m, -side);
        while (true) {
            Point u;
            for (int i = 0; i < m; ++i) u.push_back(Rational(idx[i], side) * Rational(3, 2));
            Point s = inverse_stereographic(u);
            Point p;
            for (int i = 0; i < dom.dim; ++i) p.push_back(dom.center[i] + dom.radius * s[i]);
            pts.push_back(p);
            int axis = 0;
            while (axis < m && ++idx[axis] > side) idx[axis++] = -side;
            if (axis == m) break;
        }
        Point pole = dom.center;
        pole[dom.dim - 1] += dom.radius;
        pts.push_back(pole);
        return pts;
    }
    // Box faces: lattice on each face.
    int side = 2;
    while (2 * dom.dim * std::pow(side + 1, dom.dim - 1) < min_count) ++side;
    for (int axis = 0; axis < dom.dim; ++axis) {
        for (int face = 0; face < 2; ++face) {
            std::vector<int> idx(dom.dim - 1, 0);
            while (true) {
                Point p(dom.dim);
                int k = 0;
                for (int i = 0; i < dom.dim; ++i) {
                    if (i == axis) {
                        p[i] = face == 0 ? dom.lower[i] : dom.upper[i];
                    } else {
                        p[i] = dom.lower[i] + (dom.upper[i] - dom.lower[i]) * Rational(idx[k++], side);
                    }
                }
                pts.push_back(p);
                int a = 0;
                while (a < dom.dim - 1 && ++idx[a] > side) idx[a++] = 0;
                if (a == dom.dim - 1) break;
            }
        }
    }
    return pts;
}

Point boundary_normal(const StarDomain& dom, const Point& p)
{
    Point n(dom.dim, Rational(0));
    if (dom.kind == BoundaryKind::Sphere) {
        for (int i = 0; i < dom.dim; ++i) n[i] = p[i] - dom.center[i];
        return n;
    }
    for (int i = 0; i < dom.dim; ++i) {
        if (p[i] == dom.lower[i]) {
            n[i] = -1;
            return n;
        }
        if (p[i] == dom.upper[i]) {
            n[i] = 1;
            return n;
        }
    }
    throw Error("boundary_normal: point is not on the boundary");
}

} // namespace covtomo
