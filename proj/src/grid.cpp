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
#include <covtomo/grid.hpp>
#include <covtomo/parallel.hpp>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <ostream>

namespace covtomo {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::vector<int> unravel(int index, const std::vector<int>& shape)
{
    std::vector<int> idx(shape.size());
    for (std::size_t a = 0; a < shape.size(); ++a) {
        idx[a] = index % shape[a];
        index /= shape[a];
    }
    return idx;
}

int ravel(const std::vector<int>& idx, const std::vector<int>& shape)
{
    int index = 0;
    for (std::size_t a = shape.size(); a-- > 0;) index = index * shape[a] + idx[a];
    return index;
}

// Neighbour along an axis, or -1 outside the node array or mask.
int cart_neighbor(const GridGeometry& g, int node, int axis, int step)
{
    std::vector<int> idx = unravel(node, g.shape);
    idx[axis] += step;
    if (idx[axis] < 0 || idx[axis] >= g.shape[axis]) return -1;
    const int nb = ravel(idx, g.shape);
    return g.active[nb] ? nb : -1;
}

void build_cartesian(GridGeometry& g)
{
    const StarDomain& dom = g.dom;
    const int n = dom.dim;
    const auto lo = dom.bounding_lower();
    const auto hi = dom.bounding_upper();
    g.shape.assign(n, 33);
    if (dom.grid && !dom.grid->nodes_per_axis.empty()) {
        const auto& spec = dom.grid->nodes_per_axis;
        for (int a = 0; a < n; ++a) g.shape[a] = spec[std::min<std::size_t>(a, spec.size() - 1)];
    }
    for (int s : g.shape) {
        if (s < 3) throw Error("grid too coarse: at least 3 nodes per axis are required");
    }
    g.lower = lo;
    g.spacing.resize(n);
    for (int a = 0; a < n; ++a) g.spacing[a] = (hi[a] - lo[a]) / (g.shape[a] - 1);
    int total = 1;
    for (int s : g.shape) total *= s;
    g.coords.resize(total);
    g.active.assign(total, 0);
    g.boundary.assign(total, 0);
    const bool sphere = dom.kind == BoundaryKind::Sphere;
    const auto c = dom.center_d();
    const double r = to_double(dom.radius);
    for (int node = 0; node < total; ++node) {
        const auto idx = unravel(node, g.shape);
        std::vector<double> x(n);
        for (int a = 0; a < n; ++a) x[a] = lo[a] + idx[a] * g.spacing[a];
        g.coords[node] = x;
        if (!sphere) {
            g.active[node] = 1;
            for (int a = 0; a < n; ++a) {
                if (idx[a] == 0 || idx[a] == g.shape[a] - 1) g.boundary[node] = 1;
            }
        } else {
            double d2 = 0.0;
            for (int a = 0; a < n; ++a) d2 += (x[a] - c[a]) * (x[a] - c[a]);
            g.active[node] = std::sqrt(d2) <= r * (1.0 + 1e-12) ? 1 : 0;
        }
    }
    if (!sphere) return;
    for (int node = 0; node < total; ++node) {
        if (!g.active[node]) continue;
        bool edge = false;
        for (int a = 0; a < n && !edge; ++a) {
            edge = cart_neighbor(g, node, a, -1) < 0 || cart_neighbor(g, node, a, +1) < 0;
        }
        if (!edge) continue;
        g.boundary[node] = 1;
        auto& x = g.coords[node];
        double d2 = 0.0;
        for (int a = 0; a < n; ++a) d2 += (x[a] - c[a]) * (x[a] - c[a]);
        const double d = std::sqrt(d2);
        if (d > 0) {
            for (int a = 0; a < n; ++a) x[a] = c[a] + (x[a] - c[a]) * (r / d);
        }
    }
}

void build_polar(GridGeometry& g)
{
    const StarDomain& dom = g.dom;
    if (dom.dim != 2 || dom.kind != BoundaryKind::Sphere) throw Error("polar grids require a 2D disk");
    int nr = 16;
    int nt = 64;
    const auto& spec = dom.grid->nodes_per_axis;
    if (spec.size() >= 1) nr = spec[0];
    if (spec.size() >= 2) nt = spec[1];
    if (nr < 2 || nt < 4) throw Error("grid too coarse: polar grids need >= 2 rings and >= 4 angles");
    g.polar = true;
    g.shape = {nr, nt};
    const double r = to_double(dom.radius);
    g.dr = r / nr;
    g.dtheta = 2.0 * kPi / nt;
    const auto c = dom.center_d();
    const int total = 1 + nr * nt;
    g.coords.resize(total);
    g.active.assign(total, 1);
    g.boundary.assign(total, 0);
    g.coords[0] = c;
    for (int i = 1; i <= nr; ++i) {
        for (int j = 0; j < nt; ++j) {
            const int node = g.polar_node(i, j);
            const double th = j * g.dtheta;
            g.coords[node] = {c[0] + i * g.dr * std::cos(th), c[1] + i * g.dr * std::sin(th)};
            g.boundary[node] = (i == nr) ? 1 : 0;
        }
    }
}

// Derivative of channel ch along axis a at a Cartesian node.
double cart_derivative(const GridForm& w, int node, int ch, int axis)
{
    const GridGeometry& g = w.geometry();
    const double h = g.spacing[axis];
    const int m1 = cart_neighbor(g, node, axis, -1);
    const int p1 = cart_neighbor(g, node, axis, +1);
    if (m1 >= 0 && p1 >= 0) return (w.at(p1, ch) - w.at(m1, ch)) / (2.0 * h);
    if (p1 >= 0) {
        const int p2 = cart_neighbor(g, p1, axis, +1);
        if (p2 >= 0) return (-3.0 * w.at(node, ch) + 4.0 * w.at(p1, ch) - w.at(p2, ch)) / (2.0 * h);
        return (w.at(p1, ch) - w.at(node, ch)) / h;
    }
    if (m1 >= 0) {
        const int m2 = cart_neighbor(g, m1, axis, -1);
        if (m2 >= 0) return (3.0 * w.at(node, ch) - 4.0 * w.at(m1, ch) + w.at(m2, ch)) / (2.0 * h);
        return (w.at(node, ch) - w.at(m1, ch)) / h;
    }
    throw Error("grid too coarse: isolated node along an axis");
}

// Cartesian gradient of channel ch at a polar node.
std::array<double, 2> polar_gradient(const GridForm& w, int node, int ch)
{
    const GridGeometry& g = w.geometry();
    const int nr = g.shape[0];
    const int nt = g.shape[1];
    if (node == 0) {
        double gx = 0.0, gy = 0.0;
        for (int j = 0; j < nt; ++j) {
            const double v = w.at(g.polar_node(1, j), ch) - w.at(0, ch);
            gx += v * std::cos(j * g.dtheta);
            gy += v * std::sin(j * g.dtheta);
        }
        return {2.0 * gx / (nt * g.dr), 2.0 * gy / (nt * g.dr)};
    }
    const int i = 1 + (node - 1) / nt;
    const int j = (node - 1) % nt;
    auto val = [&](int ii, int jj) {
        if (ii == 0) return w.at(0, ch);
        return w.at(g.polar_node(ii, ((jj % nt) + nt) % nt), ch);
    };
    double ur;
    if (i < nr) {
        ur = (val(i + 1, j) - val(i - 1, j)) / (2.0 * g.dr);
    } else {
        ur = (3.0 * val(i, j) - 4.0 * val(i - 1, j) + val(i - 2, j)) / (2.0 * g.dr);
    }
    const double ut = (val(i, j + 1) - val(i, j - 1)) / (2.0 * g.dtheta);
    const double r = i * g.dr;
    const double th = j * g.dtheta;
    return {std::cos(th) * ur - std::sin(th) / r * ut, std::sin(th) * ur + std::cos(th) / r * ut};
}

// Interpolated channel values at an arbitrary point of the domain.
std::vector<double> interpolate(const GridForm& w, const std::vector<double>& p)
{
    const GridGeometry& g = w.geometry();
    const int nc = w.channel_count();
    std::vector<double> out(nc, 0.0);
    if (g.polar) {
        const auto c = g.dom.center_d();
        const double dx = p[0] - c[0];
        const double dy = p[1] - c[1];
        const double rr = std::sqrt(dx * dx + dy * dy) / g.dr;
        double th = std::atan2(dy, dx);
        if (th < 0) th += 2.0 * kPi;
        const int nt = g.shape[1];
        const double tj = th / g.dtheta;
        int j0 = static_cast<int>(std::floor(tj));
        const double ft = tj - j0;
        j0 = ((j0 % nt) + nt) % nt;
        const int j1 = (j0 + 1) % nt;
        int i0 = std::min(static_cast<int>(std::floor(rr)), g.shape[0] - 1);
        const double fr = std::min(rr - i0, 1.0);
        auto node_at = [&](int i, int j) { return i == 0 ? 0 : g.polar_node(i, j); };
        for (int ch = 0; ch < nc; ++ch) {
            const double inner = (1 - ft) * w.at(node_at(i0, j0), ch) + ft * w.at(node_at(i0, j1), ch);
            const double outer = (1 - ft) * w.at(node_at(i0 + 1, j0), ch) + ft * w.at(node_at(i0 + 1, j1), ch);
            out[ch] = (1 - fr) * inner + fr * outer;
        }
        return out;
    }
    const int n = g.dim();
    std::vector<int> base(n);
    std::vector<double> frac(n);
    for (int a = 0; a < n; ++a) {
        const double s = (p[a] - g.lower[a]) / g.spacing[a];
        int i = static_cast<int>(std::floor(s));
        i = std::clamp(i, 0, g.shape[a] - 2);
        base[a] = i;
        frac[a] = std::clamp(s - i, 0.0, 1.0);
    }
    double wsum = 0.0;
    for (int corner = 0; corner < (1 << n); ++corner) {
        std::vector<int> idx = base;
        double weight = 1.0;
        for (int a = 0; a < n; ++a) {
            const bool up = corner & (1 << a);
            idx[a] += up ? 1 : 0;
            weight *= up ? frac[a] : 1.0 - frac[a];
        }
        const int node = ravel(idx, g.shape);
        if (!g.active[node] || weight == 0.0) continue;
        wsum += weight;
        for (int ch = 0; ch < nc; ++ch) out[ch] += weight * w.at(node, ch);
    }
    if (wsum <= 0.0) throw Error("ray point outside the sampled domain");
    for (double& v : out) v /= wsum;
    return out;
}

struct LaplaceSystem {
    std::vector<int> unknown_of_node;
    std::vector<int> node_of_unknown;
    Eigen::SparseMatrix<double> interior; // L restricted to unknowns
    Eigen::SparseMatrix<double> coupling; // L columns for all nodes, rows for unknowns
};

// Stencil of the coordinate Laplacian at an interior node: (node, weight) pairs.
std::vector<std::pair<int, double>> laplace_stencil(const GridGeometry& g, int node)
{
    std::vector<std::pair<int, double>> st;
    if (!g.polar) {
        double diag = 0.0;
        for (int a = 0; a < g.dim(); ++a) {
            const double h2 = g.spacing[a] * g.spacing[a];
            st.emplace_back(cart_neighbor(g, node, a, -1), 1.0 / h2);
            st.emplace_back(cart_neighbor(g, node, a, +1), 1.0 / h2);
            diag -= 2.0 / h2;
        }
        st.emplace_back(node, diag);
        return st;
    }
    const int nt = g.shape[1];
    const double dr2 = g.dr * g.dr;
    if (node == 0) {
        for (int j = 0; j < nt; ++j) st.emplace_back(g.polar_node(1, j), 4.0 / (nt * dr2));
        st.emplace_back(0, -4.0 / dr2);
        return st;
    }
    const int i = 1 + (node - 1) / nt;
    const int j = (node - 1) % nt;
    const double r = i * g.dr;
    const double out_w = (r + 0.5 * g.dr) / (r * dr2);
    const double in_w = (r - 0.5 * g.dr) / (r * dr2);
    const double th_w = 1.0 / (r * r * g.dtheta * g.dtheta);
    st.emplace_back(g.polar_node(i + 1, j), out_w);
    st.emplace_back(i == 1 ? 0 : g.polar_node(i - 1, j), in_w);
    st.emplace_back(g.polar_node(i, (j + 1) % nt), th_w);
    st.emplace_back(g.polar_node(i, (j + nt - 1) % nt), th_w);
    st.emplace_back(node, -(out_w + in_w + 2.0 * th_w));
    return st;
}

LaplaceSystem assemble(const GridGeometry& g)
{
    LaplaceSystem sys;
    sys.unknown_of_node.assign(g.node_count(), -1);
    for (int node = 0; node < g.node_count(); ++node) {
        if (g.interior(node)) {
            sys.unknown_of_node[node] = static_cast<int>(sys.node_of_unknown.size());
            sys.node_of_unknown.push_back(node);
        }
    }
    const int m = static_cast<int>(sys.node_of_unknown.size());
    std::vector<Eigen::Triplet<double>> in_t, all_t;
    for (int u = 0; u < m; ++u) {
        for (auto [nb, wgt] : laplace_stencil(g, sys.node_of_unknown[u])) {
            if (nb < 0) throw Error("interior node without a full Laplace stencil");
            all_t.emplace_back(u, nb, wgt);
            if (sys.unknown_of_node[nb] >= 0) in_t.emplace_back(u, sys.unknown_of_node[nb], wgt);
        }
    }
    sys.interior.resize(m, m);
    sys.interior.setFromTriplets(in_t.begin(), in_t.end());
    sys.coupling.resize(m, g.node_count());
    sys.coupling.setFromTriplets(all_t.begin(), all_t.end());
    return sys;
}

double inf_norm(const Eigen::VectorXd& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

// Solves M x = b with LU plus iterative refinement; returns the relative residual.
double refined_solve(const Eigen::SparseLU<Eigen::SparseMatrix<double>>& lu, const Eigen::SparseMatrix<double>& mat,
                     const Eigen::VectorXd& b, Eigen::VectorXd& x, int& refinements)
{
    x = lu.solve(b);
    const double scale = std::max(inf_norm(b), std::numeric_limits<double>::min());
    double rel = inf_norm(b - mat * x) / scale;
    for (int it = 0; it < 5 && rel > 1e-14; ++it) {
        const Eigen::VectorXd r = b - mat * x;
        x += lu.solve(r);
        const double next = inf_norm(b - mat * x) / scale;
        ++refinements;
        if (!(next < rel)) {
            rel = std::min(rel, next);
            break;
        }
        rel = next;
    }
    if (inf_norm(b) == 0.0) rel = inf_norm(mat * x);
    return rel;
}

} // namespace

int GridGeometry::polar_node(int ring, int j) const
{
    if (ring == 0) return 0;
    return 1 + (ring - 1) * shape[1] + j;
}

GridGeometryPtr make_geometry(const StarDomain& dom)
{
    dom.validate();
    auto g = std::make_shared<GridGeometry>();
    g->dom = dom;
    if (dom.grid && dom.grid->polar) {
        build_polar(*g);
    } else {
        build_cartesian(*g);
    }
    return g;
}

GridForm::GridForm(GridGeometryPtr geom, int grade, FiberSpec fiber)
    : m_geom(std::move(geom))
    , m_grade(grade)
    , m_fiber(fiber)
{
    if (grade < 0 || grade > m_geom->dim()) throw DimensionMismatch("grid form grade out of range");
    m_channels = form_channels(m_geom->dim(), grade, fiber);
    m_values.assign(static_cast<std::size_t>(m_geom->node_count()) * m_channels.size(), 0.0);
}

int GridForm::channel_of(const TermKey& key) const
{
    for (int i = 0; i < channel_count(); ++i) {
        if (m_channels[i] == key) return i;
    }
    return -1;
}

std::string GridForm::channel_name(int ch) const
{
    const TermKey& k = m_channels[ch];
    std::string name = m_grade == 0 ? "phi" : basis_name(m_geom->dim(), k.basis);
    if (m_fiber.scalar()) return name;
    name += "[" + std::to_string(k.row);
    if (m_fiber.endo) name += "," + std::to_string(k.col);
    return name + "]";
}

GridForm sample(const Form& w, const StarDomain& dom) { return sample(w, make_geometry(dom)); }

GridForm sample(const Form& w, const GridGeometryPtr& geom)
{
    if (w.dim() != geom->dim()) throw DimensionMismatch("form and grid dimension differ");
    GridForm out(geom, w.grade(), w.fiber());
    const CompiledForm compiled(w);
    std::vector<int> map;
    for (const TermKey& k : compiled.keys()) map.push_back(out.channel_of(k));
    parallel_for(geom->node_count(), [&](std::size_t node) {
        if (!geom->active[node]) return;
        const auto v = compiled.eval(geom->coords[node]);
        for (std::size_t i = 0; i < v.size(); ++i) out.at(static_cast<int>(node), map[i]) = v[i];
    });
    return out;
}

GridForm boundary_values(const GridGeometryPtr& geom, int grade, FiberSpec fiber, const ChannelFunction& f)
{
    GridForm out(geom, grade, fiber);
    for (int node = 0; node < geom->node_count(); ++node) {
        if (!geom->active[node] || !geom->boundary[node]) continue;
        const auto v = f(geom->coords[node]);
        if (static_cast<int>(v.size()) != out.channel_count()) throw DimensionMismatch("boundary data channel count");
        for (int ch = 0; ch < out.channel_count(); ++ch) out.at(node, ch) = v[ch];
    }
    return out;
}

GridForm discrete_d(const GridForm& w)
{
    const GridGeometry& g = w.geometry();
    const int n = g.dim();
    if (w.grade() == n) return GridForm(w.geometry_ptr(), n, w.fiber());
    GridForm out(w.geometry_ptr(), w.grade() + 1, w.fiber());
    parallel_for(g.node_count(), [&](std::size_t nd) {
        const int node = static_cast<int>(nd);
        if (!g.active[node]) return;
        for (int ch = 0; ch < w.channel_count(); ++ch) {
            const TermKey& k = w.channels()[ch];
            std::vector<double> grad(n);
            if (g.polar) {
                const auto pg = polar_gradient(w, node, ch);
                grad = {pg[0], pg[1]};
            } else {
                for (int a = 0; a < n; ++a) {
                    if (!(k.basis & (1u << a))) grad[a] = cart_derivative(w, node, ch, a);
                }
            }
            for (int a = 0; a < n; ++a) {
                if (k.basis & (1u << a)) continue;
                const int below = std::popcount(k.basis & ((1u << a) - 1u));
                const int target = out.channel_of({k.basis | (1u << a), k.row, k.col});
                out.at(node, target) += (below % 2 ? -1.0 : 1.0) * grad[a];
            }
        }
    });
    return out;
}

GridForm grid_wedge(const Form& a, const GridForm& w)
{
    const GridGeometry& g = w.geometry();
    const int n = g.dim();
    if (a.dim() != n) throw DimensionMismatch("wedge: dimension mismatch");
    const FiberSpec& fa = a.fiber();
    const FiberSpec& fw = w.fiber();
    FiberSpec out_fiber = fw;
    if (!fa.scalar()) {
        if (fw.scalar()) {
            out_fiber = fa;
        } else if (fa.cols() == fw.rows()) {
            out_fiber = FiberSpec{fa.rows(), fw.endo};
        } else {
            throw DimensionMismatch("wedge: incompatible fibers");
        }
    }
    const int grade = a.grade() + w.grade();
    if (grade > n) return GridForm(w.geometry_ptr(), n, out_fiber);
    GridForm out(w.geometry_ptr(), grade, out_fiber);
    const CompiledForm ca(a);
    const auto& akeys = ca.keys();
    parallel_for(g.node_count(), [&](std::size_t nd) {
        const int node = static_cast<int>(nd);
        if (!g.active[node]) return;
        const auto av = ca.eval(g.coords[node]);
        for (std::size_t i = 0; i < akeys.size(); ++i) {
            const TermKey& ka = akeys[i];
            for (int ch = 0; ch < w.channel_count(); ++ch) {
                const TermKey& kw = w.channels()[ch];
                if (ka.basis & kw.basis) continue;
                int row = kw.row, col = kw.col;
                if (!fa.scalar()) {
                    if (fw.scalar()) {
                        row = ka.row;
                        col = ka.col;
                    } else {
                        if (ka.col != kw.row) continue;
                        row = ka.row;
                        col = kw.col;
                    }
                }
                int swaps = 0;
                for (int j : basis_indices(kw.basis)) swaps += std::popcount(ka.basis >> (j + 1));
                const int target = out.channel_of({ka.basis | kw.basis, row, col});
                out.at(node, target) += (swaps % 2 ? -1.0 : 1.0) * av[i] * w.at(node, ch);
            }
        }
    });
    return out;
}

void gauss_legendre(int order, std::vector<double>& nodes, std::vector<double>& weights)
{
    if (order < 1) throw Error("quadrature order must be positive");
    nodes.assign(order, 0.0);
    weights.assign(order, 0.0);
    for (int i = 0; i < order; ++i) {
        double z = std::cos(kPi * (i + 0.75) / (order + 0.5));
        double deriv = 1.0;
        for (int it = 0; it < 100; ++it) {
            double p_prev = 1.0;
            double p = z;
            for (int k = 2; k <= order; ++k) {
                const double next = ((2.0 * k - 1.0) * z * p - (k - 1.0) * p_prev) / k;
                p_prev = p;
                p = next;
            }
            if (order == 1) {
                p = z;
                p_prev = 1.0;
            }
            deriv = order * (z * p - p_prev) / (z * z - 1.0);
            const double dz = p / deriv;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        nodes[order - 1 - i] = 0.5 * (1.0 + z);
        weights[order - 1 - i] = 1.0 / ((1.0 - z * z) * deriv * deriv);
    }
}

GridForm quadrature_H(const GridForm& w, int order)
{
    const GridGeometry& g = w.geometry();
    const int n = g.dim();
    const int k = w.grade();
    if (k == 0) return GridForm(w.geometry_ptr(), 0, w.fiber());
    std::vector<double> tq, wq;
    gauss_legendre(order, tq, wq);
    const auto x0 = g.dom.center_d();
    GridForm out(w.geometry_ptr(), k - 1, w.fiber());
    parallel_for(g.node_count(), [&](std::size_t nd) {
        const int node = static_cast<int>(nd);
        if (!g.active[node]) return;
        const auto& x = g.coords[node];
        std::vector<double> integrated(w.channel_count(), 0.0);
        std::vector<double> p(n);
        for (std::size_t q = 0; q < tq.size(); ++q) {
            for (int a = 0; a < n; ++a) p[a] = x0[a] + tq[q] * (x[a] - x0[a]);
            const auto v = interpolate(w, p);
            const double weight = wq[q] * std::pow(tq[q], k - 1);
            for (int ch = 0; ch < w.channel_count(); ++ch) integrated[ch] += weight * v[ch];
        }
        // i_K with K = x - x0 at the node.
        for (int ch = 0; ch < w.channel_count(); ++ch) {
            const TermKey& key = w.channels()[ch];
            int position = 0;
            for (int a : basis_indices(key.basis)) {
                const int target = out.channel_of({key.basis & ~(1u << a), key.row, key.col});
                out.at(node, target) += (position % 2 ? -1.0 : 1.0) * (x[a] - x0[a]) * integrated[ch];
                ++position;
            }
        }
    });
    return out;
}

GridForm discrete_laplacian(const GridForm& w)
{
    const GridGeometry& g = w.geometry();
    GridForm out(w.geometry_ptr(), w.grade(), w.fiber());
    for (int node = 0; node < g.node_count(); ++node) {
        if (!g.interior(node)) continue;
        for (auto [nb, wgt] : laplace_stencil(g, node)) {
            for (int ch = 0; ch < w.channel_count(); ++ch) out.at(node, ch) += wgt * w.at(nb, ch);
        }
    }
    return out;
}

GridForm solve_harmonic(const GridForm& boundary, double tol, GridSolveInfo* info)
{
    const GridGeometry& g = boundary.geometry();
    const LaplaceSystem sys = assemble(g);
    GridForm out = boundary;
    GridSolveInfo local;
    const int m = static_cast<int>(sys.node_of_unknown.size());
    for (int node = 0; node < g.node_count(); ++node) {
        if (g.interior(node)) {
            for (int ch = 0; ch < out.channel_count(); ++ch) out.at(node, ch) = 0.0;
        }
    }
    if (m > 0) {
        Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
        lu.compute(sys.interior);
        if (lu.info() != Eigen::Success) throw SolverFailure("Laplace matrix factorization failed");
        for (int ch = 0; ch < out.channel_count(); ++ch) {
            Eigen::VectorXd known(g.node_count());
            for (int node = 0; node < g.node_count(); ++node) known[node] = out.at(node, ch);
            const Eigen::VectorXd b = -(sys.coupling * known);
            Eigen::VectorXd x;
            const double rel = refined_solve(lu, sys.interior, b, x, local.refinements);
            local.relative_residual = std::max(local.relative_residual, rel);
            for (int u = 0; u < m; ++u) out.at(sys.node_of_unknown[u], ch) = x[u];
        }
    }
    if (info) *info = local;
    if (!(local.relative_residual <= tol)) {
        throw SolverFailure("harmonic solve did not reach the requested residual: relative residual " +
                            std::to_string(local.relative_residual));
    }
    return out;
}

GridForm solve_heat(const GridForm& boundary, double T, int steps, const GridForm* initial, GridSolveInfo* info)
{
    if (!(T > 0.0)) throw Error("heat extension requires T > 0");
    if (steps < 1) throw Error("heat extension requires at least one time step");
    const GridGeometry& g = boundary.geometry();
    const LaplaceSystem sys = assemble(g);
    const int m = static_cast<int>(sys.node_of_unknown.size());
    const double dt = T / steps;
    GridForm out = boundary;
    for (int node = 0; node < g.node_count(); ++node) {
        if (!g.interior(node)) continue;
        for (int ch = 0; ch < out.channel_count(); ++ch) out.at(node, ch) = initial ? initial->at(node, ch) : 0.0;
    }
    GridSolveInfo local;
    if (m > 0) {
        Eigen::SparseMatrix<double> eye(m, m);
        eye.setIdentity();
        const Eigen::SparseMatrix<double> mat = eye - dt * sys.interior;
        Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
        lu.compute(mat);
        if (lu.info() != Eigen::Success) throw SolverFailure("heat matrix factorization failed");
        for (int ch = 0; ch < out.channel_count(); ++ch) {
            Eigen::VectorXd boundary_only = Eigen::VectorXd::Zero(g.node_count());
            for (int node = 0; node < g.node_count(); ++node) {
                if (!g.interior(node)) boundary_only[node] = out.at(node, ch);
            }
            const Eigen::VectorXd forcing = dt * (sys.coupling * boundary_only);
            Eigen::VectorXd u(m);
            for (int i = 0; i < m; ++i) u[i] = out.at(sys.node_of_unknown[i], ch);
            for (int s = 0; s < steps; ++s) {
                const Eigen::VectorXd b = u + forcing;
                Eigen::VectorXd next;
                const double rel = refined_solve(lu, mat, b, next, local.refinements);
                local.relative_residual = std::max(local.relative_residual, rel);
                u = next;
            }
            for (int i = 0; i < m; ++i) out.at(sys.node_of_unknown[i], ch) = u[i];
        }
    }
    if (info) *info = local;
    if (!(local.relative_residual <= 1e-8)) {
        throw SolverFailure("heat step solve failed: relative residual " + std::to_string(local.relative_residual));
    }
    return out;
}

double max_abs_error(const GridForm& w, const Form& exact, bool interior_only)
{
    const GridForm ref = sample(exact, w.geometry_ptr());
    if (ref.grade() != w.grade() || !(ref.fiber() == w.fiber())) throw DimensionMismatch("grid/exact form mismatch");
    const GridGeometry& g = w.geometry();
    double err = 0.0;
    for (int node = 0; node < g.node_count(); ++node) {
        if (!g.active[node] || (interior_only && g.boundary[node])) continue;
        for (int ch = 0; ch < w.channel_count(); ++ch) err = std::max(err, std::abs(w.at(node, ch) - ref.at(node, ch)));
    }
    return err;
}

double max_abs(const GridForm& w)
{
    double m = 0.0;
    const GridGeometry& g = w.geometry();
    for (int node = 0; node < g.node_count(); ++node) {
        if (!g.active[node]) continue;
        for (int ch = 0; ch < w.channel_count(); ++ch) m = std::max(m, std::abs(w.at(node, ch)));
    }
    return m;
}

void write_csv(const GridForm& w, std::ostream& out)
{
    const GridGeometry& g = w.geometry();
    const int n = g.dim();
    for (int a = 0; a < n; ++a) out << (a ? "," : "") << variable_name(n, a);
    for (int ch = 0; ch < w.channel_count(); ++ch) out << "," << w.channel_name(ch);
    out << "\n";
    const auto old_precision = out.precision(17);
    for (int node = 0; node < g.node_count(); ++node) {
        if (!g.active[node]) continue;
        for (int a = 0; a < n; ++a) out << (a ? "," : "") << g.coords[node][a];
        for (int ch = 0; ch < w.channel_count(); ++ch) out << "," << w.at(node, ch);
        out << "\n";
    }
    out.precision(old_precision);
}

} // namespace covtomo
