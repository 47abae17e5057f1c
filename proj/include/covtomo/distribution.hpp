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

#include <covtomo/polynomial.hpp>

#include <vector>

namespace covtomo {

/// Piecewise polynomial density on [lower, upper] with Heaviside jumps and
/// Dirac atoms. Pieces partition the interval in increasing order.
class Distribution1D
{
public:
    struct Piece {
        Rational a;
        Rational b;
        Polynomial p;
    };
    struct Jump {
        Rational at;
        Rational height;
    };
    struct Atom {
        Rational at;
        Rational weight;
    };

    Distribution1D(const Rational& lower, const Rational& upper);
    /// A single smooth piece.
    static Distribution1D smooth(const Rational& lower, const Rational& upper, const Polynomial& p);
    /// Value lo on [lower, at) and hi on (at, upper].
    static Distribution1D step(const Rational& lower, const Rational& upper, const Rational& at, const Rational& lo,
                               const Rational& hi);

    const Rational& lower() const { return m_lower; }
    const Rational& upper() const { return m_upper; }
    const std::vector<Piece>& pieces() const { return m_pieces; }
    const std::vector<Jump>& jumps() const { return m_jumps; }
    const std::vector<Atom>& atoms() const { return m_atoms; }

    /// Splits pieces at the given breakpoints and recomputes the jump list.
    void set_pieces(std::vector<Piece> pieces);
    void add_atom(const Rational& at, const Rational& weight);

    /// De Rham derivative: piecewise derivatives plus atoms of weight equal to
    /// the jump heights. Rejects inputs that already carry atoms.
    Distribution1D derivative() const;
    Distribution1D times(const Polynomial& f) const;
    Distribution1D operator+(const Distribution1D& other) const;
    bool is_zero() const;

    /// Exact pairing with a test polynomial: integral of psi times the density
    /// plus the atom contributions.
    Rational pair(const Polynomial& psi) const;
    /// Left and right limits of the density at a point.
    Rational left_limit(const Rational& x) const;
    Rational right_limit(const Rational& x) const;
    /// <psi, T'> - ([psi T] - <psi', T>) for this distribution T; zero is the
    /// Stokes identity.
    Rational stokes_defect(const Polynomial& psi) const;

    void validate() const;

private:
    void recompute_jumps();

    Rational m_lower;
    Rational m_upper;
    std::vector<Piece> m_pieces;
    std::vector<Jump> m_jumps;
    std::vector<Atom> m_atoms;
};

/// Exact integral of p over [a, b] (one variable).
Rational integrate_1d(const Polynomial& p, const Rational& a, const Rational& b);

} // namespace covtomo
