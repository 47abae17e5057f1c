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

#include <covtomo/domain.hpp>
#include <covtomo/form.hpp>

#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

namespace covtomo {

/// Node layout for a StarDomain. Cartesian grids cover the bounding box and
/// mask out nodes outside a sphere; sphere-adjacent nodes are snapped onto
/// the surface. The polar layout (2D disks only) has a center node followed
/// by rings i = 1..Nr of Ntheta nodes each.
struct GridGeometry {
    StarDomain dom;
    bool polar = false;
    std::vector<int> shape;
    std::vector<double> lower;
    std::vector<double> spacing;
    double dr = 0.0;
    double dtheta = 0.0;
    std::vector<std::vector<double>> coords;
    std::vector<char> active;
    std::vector<char> boundary;

    int dim() const { return dom.dim; }
    int node_count() const { return static_cast<int>(coords.size()); }
    bool interior(int node) const { return active[node] && !boundary[node]; }
    int polar_node(int ring, int j) const;
};

using GridGeometryPtr = std::shared_ptr<const GridGeometry>;

/// Builds the node layout from dom.grid, defaulting to 33 nodes per axis
/// (polar: 17 radial levels, 64 angles).
GridGeometryPtr make_geometry(const StarDomain& dom);

/// Nodal samples of a form: values[node * channels + channel]. Channels run
/// over basis_of_grade, then fiber row, then fiber column. Inactive nodes
/// hold zero.
class GridForm
{
public:
    GridForm(GridGeometryPtr geom, int grade, FiberSpec fiber = {});

    const GridGeometry& geometry() const { return *m_geom; }
    const GridGeometryPtr& geometry_ptr() const { return m_geom; }
    int grade() const { return m_grade; }
    const FiberSpec& fiber() const { return m_fiber; }
    const std::vector<TermKey>& channels() const { return m_channels; }
    int channel_count() const { return static_cast<int>(m_channels.size()); }
    int channel_of(const TermKey& key) const;
    /// "dx", "dx^dy", "phi" for grade 0, with "[r]" or "[r,c]" fiber suffixes.
    std::string channel_name(int ch) const;

    double& at(int node, int ch) { return m_values[node * channel_count() + ch]; }
    double at(int node, int ch) const { return m_values[node * channel_count() + ch]; }
    std::vector<double>& values() { return m_values; }
    const std::vector<double>& values() const { return m_values; }

private:
    GridGeometryPtr m_geom;
    int m_grade;
    FiberSpec m_fiber;
    std::vector<TermKey> m_channels;
    std::vector<double> m_values;
};

GridForm sample(const Form& w, const StarDomain& dom);
GridForm sample(const Form& w, const GridGeometryPtr& geom);

/// Channel values at a point, ordered like GridForm channels.
using ChannelFunction = std::function<std::vector<double>(const std::vector<double>&)>;

/// Grid form that holds f on boundary nodes and zero elsewhere.
GridForm boundary_values(const GridGeometryPtr& geom, int grade, FiberSpec fiber, const ChannelFunction& f);

/// Central differences inside, second-order one-sided stencils at the edge.
GridForm discrete_d(const GridForm& w);

/// a ^ w with a exact (evaluated at the nodes) and w sampled.
GridForm grid_wedge(const Form& a, const GridForm& w);

/// Gauss–Legendre nodes and weights on [0, 1].
void gauss_legendre(int order, std::vector<double>& nodes, std::vector<double>& weights);

/// Ray quadrature of the homotopy operator with interpolated coefficients.
GridForm quadrature_H(const GridForm& w, int order = 8);

struct GridSolveInfo {
    double relative_residual = 0.0;
    int refinements = 0;
};

/// Dirichlet Laplace solve; boundary node values of the input are the data.
GridForm solve_harmonic(const GridForm& boundary, double tol = 1e-10, GridSolveInfo* info = nullptr);

/// Implicit Euler for the heat equation up to time T with the boundary held
/// fixed. Interior initial values are taken from initial when given, else 0.
GridForm solve_heat(const GridForm& boundary, double T, int steps = 100, const GridForm* initial = nullptr,
                    GridSolveInfo* info = nullptr);

/// Discrete coordinate Laplacian applied at interior nodes (zero elsewhere).
GridForm discrete_laplacian(const GridForm& w);

/// Max over active nodes and channels of |w - exact|; interior_only skips
/// boundary nodes.
double max_abs_error(const GridForm& w, const Form& exact, bool interior_only = false);
double max_abs(const GridForm& w);

/// One row per active node: coordinates then channels.
void write_csv(const GridForm& w, std::ostream& out);

} // namespace covtomo
