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
#include <covtomo/parse.hpp>

#include <cctype>
#include <string>

namespace covtomo {
namespace {

class PolyParser
{
public:
    PolyParser(int dim, std::string_view text)
        : m_dim(dim)
        , m_text(text)
    {
    }

    Polynomial parse_all()
    {
        Polynomial p = expr();
        skip();
        if (m_pos != m_text.size()) fail("unexpected trailing input");
        return p;
    }

    Polynomial expr()
    {
        skip();
        Polynomial acc(m_dim);
        bool negate = false;
        if (peek() == '+' || peek() == '-') {
            negate = (m_text[m_pos] == '-');
            ++m_pos;
        }
        acc = term();
        if (negate) acc = -acc;
        for (;;) {
            skip();
            const char c = peek();
            if (c != '+' && c != '-') break;
            ++m_pos;
            const Polynomial t = term();
            acc = (c == '+') ? acc + t : acc - t;
        }
        return acc;
    }

    std::size_t pos() const { return m_pos; }
    void set_pos(std::size_t p) { m_pos = p; }
    char peek_char()
    {
        skip();
        return peek();
    }

private:
    Polynomial term()
    {
        Polynomial acc = power();
        for (;;) {
            skip();
            const char c = peek();
            if (c == '*') {
                ++m_pos;
                acc = acc * power();
            } else if (c == '/') {
                ++m_pos;
                skip();
                const Rational q = number();
                if (q == 0) fail("division by zero");
                acc *= Rational(1) / q;
            } else if (c == '(' || std::isdigit(static_cast<unsigned char>(c)) || starts_variable()) {
                acc = acc * power();
            } else {
                break;
            }
        }
        return acc;
    }

    Polynomial power()
    {
        Polynomial base = atom();
        skip();
        if (peek() == '^') {
            ++m_pos;
            skip();
            const Rational e = number();
            if (e < 0 || e.get_den() != 1) fail("exponent must be a non-negative integer");
            Polynomial out = Polynomial::constant(m_dim, 1);
            for (long i = 0; i < e.get_num().get_si(); ++i) out = out * base;
            return out;
        }
        return base;
    }

    Polynomial atom()
    {
        skip();
        const char c = peek();
        if (c == '(') {
            ++m_pos;
            Polynomial p = expr();
            skip();
            if (peek() != ')') fail("expected ')'");
            ++m_pos;
            return p;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) return Polynomial::constant(m_dim, number());
        const int v = variable();
        if (v < 0) fail("expected a number, variable or '('");
        return Polynomial::variable(m_dim, v);
    }

    Rational number()
    {
        const std::size_t start = m_pos;
        while (m_pos < m_text.size() && std::isdigit(static_cast<unsigned char>(m_text[m_pos]))) ++m_pos;
        if (start == m_pos) fail("expected a number");
        return Rational(std::string(m_text.substr(start, m_pos - start)));
    }

    bool starts_variable()
    {
        const std::size_t save = m_pos;
        const bool ok = variable() >= 0;
        m_pos = save;
        return ok;
    }

    int variable()
    {
        int best = -1;
        std::size_t best_len = 0;
        for (int i = 0; i < m_dim; ++i) {
            const std::string name = variable_name(m_dim, i);
            if (m_text.substr(m_pos, name.size()) == name && name.size() > best_len) {
                const std::size_t end = m_pos + name.size();
                if (end < m_text.size() && std::isalnum(static_cast<unsigned char>(m_text[end])) &&
                    !std::isdigit(static_cast<unsigned char>(m_text[end])))
                    continue;
                if (end < m_text.size() && std::isdigit(static_cast<unsigned char>(m_text[end])) &&
                    std::isdigit(static_cast<unsigned char>(name.back())))
                    continue;
                best = i;
                best_len = name.size();
            }
        }
        if (best >= 0) m_pos += best_len;
        return best;
    }

    char peek() const { return m_pos < m_text.size() ? m_text[m_pos] : '\0'; }
    void skip()
    {
        while (m_pos < m_text.size() && std::isspace(static_cast<unsigned char>(m_text[m_pos]))) ++m_pos;
    }
    [[noreturn]] void fail(const std::string& what) const
    {
        throw Error("parse error at offset " + std::to_string(m_pos) + ": " + what + " in '" +
                    std::string(m_text) + "'");
    }

    int m_dim;
    std::string_view m_text;
    std::size_t m_pos = 0;
};

// Finds basis words such as "dx^dy" and returns the mask length consumed.
std::size_t match_basis(int dim, std::string_view s, std::vector<int>& indices)
{
    std::size_t pos = 0;
    indices.clear();
    for (;;) {
        if (pos >= s.size() || s[pos] != 'd') break;
        int found = -1;
        std::size_t len = 0;
        for (int i = 0; i < dim; ++i) {
            const std::string name = variable_name(dim, i);
            if (s.substr(pos + 1, name.size()) == name && name.size() > len) {
                found = i;
                len = name.size();
            }
        }
        if (found < 0) break;
        indices.push_back(found);
        pos += 1 + len;
        if (pos < s.size() && s[pos] == '^' && pos + 1 < s.size() && s[pos + 1] == 'd') {
            ++pos;
            continue;
        }
        break;
    }
    return indices.empty() ? 0 : pos;
}

} // namespace

Polynomial parse_polynomial(int dim, std::string_view text)
{
    return PolyParser(dim, text).parse_all();
}

Form parse_form(int dim, std::string_view text)
{
    // Split into top-level terms on '+'/'-' outside parentheses, then peel a
    // trailing basis word off each term.
    struct Piece {
        bool negative;
        std::string body;
    };
    std::vector<Piece> pieces;
    std::string current;
    bool negative = false;
    int depth = 0;
    auto flush = [&] {
        if (current.find_first_not_of(" \t") != std::string::npos) pieces.push_back({negative, current});
        current.clear();
    };
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (c == '(') ++depth;
        if (c == ')') --depth;
        const bool after_caret = !current.empty() && current.find_last_not_of(" ") != std::string::npos &&
                                 current[current.find_last_not_of(" ")] == '^';
        if (depth == 0 && (c == '+' || c == '-') && !after_caret) {
            flush();
            negative = (c == '-');
            continue;
        }
        current.push_back(c);
    }
    flush();

    int grade = -1;
    std::vector<std::pair<BasisMask, Polynomial>> parsed;
    for (const Piece& piece : pieces) {
        std::string body = piece.body;
        while (!body.empty() && std::isspace(static_cast<unsigned char>(body.back()))) body.pop_back();
        std::vector<int> indices;
        std::size_t cut = std::string::npos;
        for (std::size_t start = 0; start < body.size(); ++start) {
            if (body[start] != 'd') continue;
            if (start > 0 && std::isalnum(static_cast<unsigned char>(body[start - 1]))) continue;
            const std::size_t len = match_basis(dim, std::string_view(body).substr(start), indices);
            if (len > 0 && start + len == body.size()) {
                cut = start;
                break;
            }
        }
        Polynomial coeff = Polynomial::constant(dim, 1);
        BasisMask mask = 0;
        int sign = 1;
        if (cut != std::string::npos) {
            std::string head = body.substr(0, cut);
            while (!head.empty() && (std::isspace(static_cast<unsigned char>(head.back())) || head.back() == '*'))
                head.pop_back();
            if (head.find_first_not_of(" \t") != std::string::npos) coeff = parse_polynomial(dim, head);
            auto [m, s] = normalize_basis(indices);
            mask = m;
            sign = s;
        } else {
            coeff = parse_polynomial(dim, body);
        }
        const int g = grade_of(mask);
        if (grade >= 0 && g != grade) throw Error("parse error: mixed grades in '" + std::string(text) + "'");
        grade = g;
        if (piece.negative) sign = -sign;
        if (sign == 0) continue;
        if (sign < 0) coeff = -coeff;
        parsed.emplace_back(mask, coeff);
    }
    if (grade > dim) throw Error("parse error: grade exceeds dimension");
    Form out(dim, grade < 0 ? 0 : grade);
    for (auto& [mask, coeff] : parsed) out.add(mask, coeff);
    return out;
}

} // namespace covtomo
