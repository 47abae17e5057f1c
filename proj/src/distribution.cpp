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
#include <covtomo/distribution.hpp>

#include <algorithm>
#include <map>

namespace covtomo {

Rational integrate_1d(const Polynomial& p, const Rational& a, const Rational& b)
{
    if (p.dim() != 1) throw DimensionMismatch("one-variable integral of a multivariate polynomial");
    Rational s(0);
    for (const auto& [m, c] : p.terms()) {
        const int e = m.exp[0];
        Rational pa(1), pb(1);
        for (int i = 0; i <= e; ++i) {
            pa *= a;
            pb *= b;
        }
        s += c * (pb - pa) / (e + 1);
    }
    return s;
}

Distribution1D::Distribution1D(const Rational& lower, const Rational& upper)
    : m_lower(lower)
    , m_upper(upper)
{
    if (!(lower < upper)) throw Error("distribution interval must have lower < upper");
    m_pieces.push_back({lower, upper, Polynomial(1)});
}

Distribution1D Distribution1D::smooth(const Rational& lower, const Rational& upper, const Polynomial& p)
{
    Distribution1D d(lower, upper);
    d.set_pieces({{lower, upper, p}});
    return d;
}

Distribution1D Distribution1D::step(const Rational& lower, const Rational& upper, const Rational& at,
                                    const Rational& lo, const Rational& hi)
{
    Distribution1D d(lower, upper);
    d.set_pieces({{lower, at, Polynomial::constant(1, lo)}, {at, upper, Polynomial::constant(1, hi)}});
    return d;
}

void Distribution1D::set_pieces(std::vector<Piece> pieces)
{
    if (pieces.empty()) throw Error("distribution needs at least one piece");
    std::vector<Piece> merged;
    for (auto& pc : pieces) {
        if (pc.p.dim() != 1) throw DimensionMismatch("distribution pieces are one-variable polynomials");
        if (!merged.empty() && merged.back().p == pc.p && merged.back().b == pc.a) {
            merged.back().b = pc.b;
        } else {
            merged.push_back(std::move(pc));
        }
    }
    m_pieces = std::move(merged);
    validate();
    recompute_jumps();
}

void Distribution1D::add_atom(const Rational& at, const Rational& weight)
{
    if (at < m_lower || at > m_upper) throw Error("atom outside the distribution interval");
    if (sgn(weight) == 0) return;
    for (auto& a : m_atoms) {
        if (a.at == at) {
            a.weight += weight;
            if (sgn(a.weight) == 0) {
                m_atoms.erase(std::find_if(m_atoms.begin(), m_atoms.end(), [&](const Atom& x) { return x.at == at; }));
            }
            return;
        }
    }
    m_atoms.push_back({at, weight});
    std::sort(m_atoms.begin(), m_atoms.end(), [](const Atom& l, const Atom& r) { return l.at < r.at; });
}

void Distribution1D::validate() const
{
    if (m_pieces.front().a != m_lower || m_pieces.back().b != m_upper) {
        throw Error("distribution pieces must cover the whole interval");
    }
    for (std::size_t i = 0; i < m_pieces.size(); ++i) {
        if (!(m_pieces[i].a < m_pieces[i].b)) throw Error("distribution piece with empty interval");
        if (i > 0 && m_pieces[i - 1].b != m_pieces[i].a) throw Error("distribution pieces must be contiguous");
    }
}

void Distribution1D::recompute_jumps()
{
    m_jumps.clear();
    for (std::size_t i = 1; i < m_pieces.size(); ++i) {
        const Rational& x = m_pieces[i].a;
        const Rational h = m_pieces[i].p.eval({x}) - m_pieces[i - 1].p.eval({x});
        if (sgn(h) != 0) m_jumps.push_back({x, h});
    }
}

Distribution1D Distribution1D::derivative() const
{
    if (!m_atoms.empty()) throw Error("derivative of Dirac atoms is outside the supported distribution class");
    std::vector<Piece> pieces;
    for (const auto& pc : m_pieces) pieces.push_back({pc.a, pc.b, pc.p.derivative(0)});
    Distribution1D out(m_lower, m_upper);
    out.set_pieces(std::move(pieces));
    for (const auto& j : m_jumps) out.add_atom(j.at, j.height);
    return out;
}

Distribution1D Distribution1D::times(const Polynomial& f) const
{
    std::vector<Piece> pieces;
    for (const auto& pc : m_pieces) pieces.push_back({pc.a, pc.b, f * pc.p});
    Distribution1D out(m_lower, m_upper);
    out.set_pieces(std::move(pieces));
    for (const auto& a : m_atoms) out.add_atom(a.at, a.weight * f.eval({a.at}));
    return out;
}

Distribution1D Distribution1D::operator+(const Distribution1D& other) const
{
    if (m_lower != other.m_lower || m_upper != other.m_upper) throw DimensionMismatch("distribution intervals differ");
    std::vector<Rational> cuts{m_lower, m_upper};
    for (const auto& p : m_pieces) cuts.push_back(p.a);
    for (const auto& p : other.m_pieces) cuts.push_back(p.a);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    auto piece_at = [](const std::vector<Piece>& ps, const Rational& mid) -> const Polynomial& {
        for (const auto& p : ps) {
            if (p.a <= mid && mid <= p.b) return p.p;
        }
        return ps.back().p;
    };
    std::vector<Piece> pieces;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const Rational mid = (cuts[i] + cuts[i + 1]) / 2;
        pieces.push_back({cuts[i], cuts[i + 1], piece_at(m_pieces, mid) + piece_at(other.m_pieces, mid)});
    }
    Distribution1D out(m_lower, m_upper);
    out.set_pieces(std::move(pieces));
    for (const auto& a : m_atoms) out.add_atom(a.at, a.weight);
    for (const auto& a : other.m_atoms) out.add_atom(a.at, a.weight);
    return out;
}

bool Distribution1D::is_zero() const
{
    return m_atoms.empty() &&
           std::all_of(m_pieces.begin(), m_pieces.end(), [](const Piece& p) { return p.p.is_zero(); });
}

Rational Distribution1D::pair(const Polynomial& psi) const
{
    Rational s(0);
    for (const auto& pc : m_pieces) s += integrate_1d(psi * pc.p, pc.a, pc.b);
    for (const auto& a : m_atoms) s += a.weight * psi.eval({a.at});
    return s;
}

Rational Distribution1D::left_limit(const Rational& x) const
{
    for (const auto& pc : m_pieces) {
        if (pc.a < x && x <= pc.b) return pc.p.eval({x});
    }
    return m_pieces.front().p.eval({x});
}

Rational Distribution1D::right_limit(const Rational& x) const
{
    for (const auto& pc : m_pieces) {
        if (pc.a <= x && x < pc.b) return pc.p.eval({x});
    }
    return m_pieces.back().p.eval({x});
}

Rational Distribution1D::stokes_defect(const Polynomial& psi) const
{
    const Rational lhs = derivative().pair(psi);
    const Rational boundary = psi.eval({m_upper}) * left_limit(m_upper) - psi.eval({m_lower}) * right_limit(m_lower);
    return lhs - (boundary - pair(psi.derivative(0)));
}

} // namespace covtomo
