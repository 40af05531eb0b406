#pragma once

// Sparse bivariate complex polynomials: arithmetic, parsing, canonical
// printing and univariate slice root-finding via companion matrices.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "bml/errors.hpp"

namespace bml {

using cplx = std::complex<double>;

inline bool is_finite(cplx v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }

/// Exponent pair of a monomial z^m w^n.
struct Mono {
    int m = 0;
    int n = 0;
    int degree() const { return m + n; }
    friend bool operator==(const Mono&, const Mono&) = default;
};

/// Graded-lex order with z above w: sort by total degree, then by z-exponent.
/// Ascending iteration starts at the constant term.
struct MonoLess {
    bool operator()(const Mono& a, const Mono& b) const {
        if (a.degree() != b.degree()) return a.degree() < b.degree();
        return a.m > b.m;
    }
};

class Poly2 {
public:
    using TermMap = std::map<Mono, cplx, MonoLess>;

    Poly2() = default;

    static Poly2 constant(cplx c) {
        Poly2 p;
        p.set(0, 0, c);
        return p;
    }
    static Poly2 zero() { return Poly2{}; }
    static Poly2 one() { return constant(1.0); }
    static Poly2 variable_z() {
        Poly2 p;
        p.set(1, 0, 1.0);
        return p;
    }
    static Poly2 variable_w() {
        Poly2 p;
        p.set(0, 1, 1.0);
        return p;
    }
    static Poly2 monomial(int m, int n, cplx c = 1.0) {
        Poly2 p;
        p.set(m, n, c);
        return p;
    }

    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    /// Total degree; the zero polynomial has degree -1 by convention.
    int degree() const {
        int d = -1;
        for (const auto& [mono, c] : terms_) d = std::max(d, mono.degree());
        return d;
    }
    int deg_z() const {
        int d = 0;
        for (const auto& [mono, c] : terms_) d = std::max(d, mono.m);
        return terms_.empty() ? -1 : d;
    }
    int deg_w() const {
        int d = 0;
        for (const auto& [mono, c] : terms_) d = std::max(d, mono.n);
        return terms_.empty() ? -1 : d;
    }

    cplx coeff(int m, int n) const {
        auto it = terms_.find(Mono{m, n});
        return it == terms_.end() ? cplx{0.0, 0.0} : it->second;
    }

    void set(int m, int n, cplx c) {
        if (m < 0 || n < 0) throw OutOfRange("negative exponent");
        if (!is_finite(c)) throw OutOfRange("non-finite coefficient");
        if (c == cplx{0.0, 0.0})
            terms_.erase(Mono{m, n});
        else
            terms_[Mono{m, n}] = c;
    }

    void add_term(int m, int n, cplx c) { set(m, n, coeff(m, n) + c); }

    double max_abs_coeff() const {
        double s = 0.0;
        for (const auto& [mono, c] : terms_) s = std::max(s, std::abs(c));
        return s;
    }

    friend Poly2 operator+(const Poly2& a, const Poly2& b) {
        Poly2 r = a;
        for (const auto& [mono, c] : b.terms_) r.add_term(mono.m, mono.n, c);
        return r;
    }
    friend Poly2 operator-(const Poly2& a, const Poly2& b) {
        Poly2 r = a;
        for (const auto& [mono, c] : b.terms_) r.add_term(mono.m, mono.n, -c);
        return r;
    }
    friend Poly2 operator*(const Poly2& a, const Poly2& b) {
        Poly2 r;
        for (const auto& [ma, ca] : a.terms_)
            for (const auto& [mb, cb] : b.terms_) r.add_term(ma.m + mb.m, ma.n + mb.n, ca * cb);
        return r;
    }
    friend Poly2 operator*(cplx s, const Poly2& p) { return Poly2::constant(s) * p; }
    friend Poly2 operator-(const Poly2& p) { return cplx(-1.0) * p; }

    Poly2 scale(cplx s) const { return s * *this; }

    Poly2 partial_z() const {
        Poly2 r;
        for (const auto& [mono, c] : terms_)
            if (mono.m > 0) r.add_term(mono.m - 1, mono.n, c * double(mono.m));
        return r;
    }
    Poly2 partial_w() const {
        Poly2 r;
        for (const auto& [mono, c] : terms_)
            if (mono.n > 0) r.add_term(mono.m, mono.n - 1, c * double(mono.n));
        return r;
    }

    /// Exchange the two variables.
    Poly2 swapped() const {
        Poly2 r;
        for (const auto& [mono, c] : terms_) r.set(mono.n, mono.m, c);
        return r;
    }

    /// Drop coefficients of modulus <= eps. Default keeps everything but exact zeros.
    Poly2 pruned(double eps = 0.0) const {
        Poly2 r;
        for (const auto& [mono, c] : terms_)
            if (std::abs(c) > eps) r.set(mono.m, mono.n, c);
        return r;
    }

    /// Horner evaluation over a dense coefficient grid.
    cplx eval(cplx z, cplx w) const {
        if (terms_.empty()) return {0.0, 0.0};
        const int dz = deg_z(), dw = deg_w();
        std::vector<std::vector<cplx>> grid(dz + 1, std::vector<cplx>(dw + 1, cplx{0.0, 0.0}));
        for (const auto& [mono, c] : terms_) grid[mono.m][mono.n] = c;
        cplx acc{0.0, 0.0};
        for (int m = dz; m >= 0; --m) {
            cplx row{0.0, 0.0};
            for (int n = dw; n >= 0; --n) row = row * w + grid[m][n];
            acc = acc * z + row;
        }
        return acc;
    }

    /// Coefficients of the univariate slice p(z0, w) as a dense vector in w.
    std::vector<cplx> slice_in_w(cplx z0) const {
        const int dw = std::max(deg_w(), 0);
        const int dz = std::max(deg_z(), 0);
        std::vector<cplx> pw(dz + 1);
        pw[0] = 1.0;
        for (int m = 1; m <= dz; ++m) pw[m] = pw[m - 1] * z0;
        std::vector<cplx> c(dw + 1, cplx{0.0, 0.0});
        for (const auto& [mono, coef] : terms_) c[mono.n] += coef * pw[mono.m];
        return c;
    }

    std::string to_string() const;

    friend bool operator==(const Poly2& a, const Poly2& b) { return a.terms_ == b.terms_; }

private:
    TermMap terms_;
};

// ---------------------------------------------------------------------------
// canonical printing (graded-lex, highest degree first)

namespace detail {

inline std::string format_real(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline std::string format_coeff(cplx c) {
    if (c.imag() == 0.0) return format_real(c.real());
    std::string s = "(" + format_real(c.real());
    if (c.imag() >= 0.0 || std::isnan(c.imag())) s += "+";
    s += format_real(c.imag()) + "i)";
    return s;
}

inline std::string format_mono(const Mono& mono) {
    std::string s;
    if (mono.m > 0) {
        s += "z";
        if (mono.m > 1) s += "^" + std::to_string(mono.m);
    }
    if (mono.n > 0) {
        if (!s.empty()) s += "*";
        s += "w";
        if (mono.n > 1) s += "^" + std::to_string(mono.n);
    }
    return s;
}

} // namespace detail

inline std::string Poly2::to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const auto& [mono, c] = *it;
        const bool first = out.empty();
        const bool real_coeff = c.imag() == 0.0;
        cplx printed = c;
        if (first) {
            if (real_coeff && c.real() < 0.0) {
                out += "-";
                printed = -c;
            }
        } else {
            if (real_coeff && c.real() < 0.0) {
                out += " - ";
                printed = -c;
            } else {
                out += " + ";
            }
        }
        const std::string mono_str = detail::format_mono(mono);
        if (mono_str.empty()) {
            out += detail::format_coeff(printed);
        } else if (printed == cplx{1.0, 0.0}) {
            out += mono_str;
        } else {
            out += detail::format_coeff(printed) + "*" + mono_str;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// expression parser
//
//   expr := ['+'|'-'] term (('+'|'-') term)*
//   term := coeff ('*'? atom)* | atom ('*'? atom)*
//   atom := 'z' ('^' uint)? | 'w' ('^' uint)?
//   coeff := real | '(' real ('+'|'-') real 'i' ')'
//
// Whitespace is permitted between tokens. Exponents above 10^6 are rejected.

namespace detail {

class PolyParser {
public:
    explicit PolyParser(std::string_view text) : text_(text) {}

    Poly2 parse() {
        Poly2 result = parse_sum();
        skip_ws();
        if (pos_ < text_.size()) fail("unexpected trailing input", pos_);
        return result;
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& msg, std::size_t at) const { throw ParseError(msg, at); }

    char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
    char take() { return pos_ < text_.size() ? text_[pos_++] : '\0'; }
    void skip_ws() {
        while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) ++pos_;
    }

    bool at_number() const {
        char c = peek();
        return (c >= '0' && c <= '9') || c == '.';
    }

    double parse_real() {
        skip_ws();
        std::size_t start = pos_;
        double sign = 1.0;
        if (peek() == '+' || peek() == '-') {
            if (take() == '-') sign = -1.0;
        }
        double value = 0.0;
        auto res = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), value);
        if (res.ec != std::errc{}) fail("expected a number", start);
        pos_ = std::size_t(res.ptr - text_.data());
        return sign * value;
    }

    /// Attempt '(' real ('+'|'-') real 'i' ')'; restores the cursor on failure.
    bool try_parse_complex(cplx& out) {
        const std::size_t saved = pos_;
        take(); // '('
        try {
            double re = parse_real();
            skip_ws();
            char op = take();
            if (op != '+' && op != '-') throw ParseError("not a complex literal", pos_);
            double im = parse_real();
            if (op == '-') im = -im;
            skip_ws();
            if (take() != 'i') throw ParseError("not a complex literal", pos_);
            skip_ws();
            if (take() != ')') throw ParseError("not a complex literal", pos_);
            out = {re, im};
            return true;
        } catch (const ParseError&) {
            pos_ = saved;
            return false;
        }
    }

    int parse_exponent() {
        if (peek() != '^') return 1;
        take();
        skip_ws();
        std::size_t start = pos_;
        std::uint64_t value = 0;
        auto res = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), value);
        if (res.ec != std::errc{}) fail("expected an exponent", start);
        pos_ = std::size_t(res.ptr - text_.data());
        if (value > 1000000) fail("exponent exceeds 10^6", start);
        return int(value);
    }

    /// One multiplicative factor: a number, a complex literal, a variable
    /// power, or a parenthesized subexpression (optionally raised to a
    /// power).
    Poly2 parse_factor() {
        skip_ws();
        if (at_number()) return Poly2::constant({parse_real(), 0.0});
        char c = peek();
        if (c == 'z' || c == 'w') {
            take();
            int e = parse_exponent();
            return c == 'z' ? Poly2::monomial(e, 0) : Poly2::monomial(0, e);
        }
        if (c == '(') {
            cplx literal;
            if (try_parse_complex(literal)) return Poly2::constant(literal);
            std::size_t open = pos_;
            take();
            Poly2 inner = parse_sum();
            skip_ws();
            if (take() != ')') fail("unterminated parenthesis", open);
            int e = parse_exponent();
            if (e > 64) fail("group exponent too large", open);
            Poly2 result = Poly2::one();
            for (int i = 0; i < e; ++i) result = result * inner;
            return result;
        }
        fail("expected a term", pos_);
    }

    Poly2 parse_term(double sign) {
        Poly2 product = Poly2::constant({sign, 0.0});
        bool saw_factor = false;
        while (true) {
            skip_ws();
            if (peek() == '*') {
                if (!saw_factor) fail("expected a term", pos_);
                take();
                skip_ws();
            } else if (saw_factor) {
                char c = peek();
                if (c != 'z' && c != 'w' && c != '(') break;
            }
            product = product * parse_factor();
            saw_factor = true;
        }
        return product;
    }

    Poly2 parse_sum() {
        Poly2 result;
        skip_ws();
        double sign = 1.0;
        if (peek() == '+' || peek() == '-') {
            if (take() == '-') sign = -1.0;
        }
        result = result + parse_term(sign);
        skip_ws();
        while (pos_ < text_.size() && (peek() == '+' || peek() == '-')) {
            char op = take();
            result = result + parse_term(op == '-' ? -1.0 : 1.0);
            skip_ws();
        }
        return result;
    }
};

} // namespace detail

inline Poly2 parse_poly(std::string_view text) {
    if (text.empty()) throw ParseError("empty expression", 0);
    return detail::PolyParser(text).parse();
}

// ---------------------------------------------------------------------------
// ideals

struct IdealSpec {
    std::vector<Poly2> generators;
    std::string label;

    IdealSpec(std::vector<Poly2> gens, std::string lab) : generators(std::move(gens)), label(std::move(lab)) {
        if (generators.empty()) throw OutOfRange("ideal needs at least one generator");
        for (const auto& g : generators)
            if (g.is_zero()) throw OutOfRange("zero polynomial cannot generate an ideal");
    }
};

/// Parse a semicolon-separated generator list.
inline IdealSpec parse_ideal(const std::string& text) {
    std::vector<Poly2> gens;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find(';', start);
        if (end == std::string::npos) end = text.size();
        std::string piece = text.substr(start, end - start);
        if (piece.find_first_not_of(" \t") != std::string::npos) gens.push_back(parse_poly(piece));
        start = end + 1;
        if (end == text.size()) break;
    }
    if (gens.empty()) throw ParseError("no generators in ideal", 0);
    return IdealSpec(std::move(gens), text);
}

// ---------------------------------------------------------------------------
// univariate slice roots via companion-matrix eigenvalues

struct RootsResult {
    std::vector<cplx> roots;
    int stripped_leading = 0; // leading slice coefficients removed before companion build
};

struct RootsOptions {
    double leading_drop_rel = 1e-12; // strip |c_top| below this times max |c_k|
    int newton_steps = 0;            // optional polish iterations
};

namespace detail {

// Parlett-Reinsch style balancing with powers of two; no rounding error.
inline void balance_companion(Eigen::MatrixXcd& A) {
    const int n = int(A.rows());
    const double gamma = 0.9;
    bool changed = true;
    while (changed) {
        changed = false;
        for (int i = 0; i < n; ++i) {
            double row_norm = 0.0, col_norm = 0.0;
            for (int j = 0; j < n; ++j) {
                row_norm += std::abs(A(i, j));
                col_norm += std::abs(A(j, i));
            }
            if (row_norm == 0.0 || col_norm == 0.0) continue;
            int exponent = 0;
            std::frexp(row_norm / col_norm, &exponent);
            exponent /= 2;
            if (exponent != 0) {
                const double scaled_col = std::ldexp(col_norm, exponent);
                const double scaled_row = std::ldexp(row_norm, -exponent);
                if (scaled_col + scaled_row < gamma * (col_norm + row_norm)) {
                    changed = true;
                    A.row(i) *= std::ldexp(1.0, -exponent);
                    A.col(i) *= std::ldexp(1.0, exponent);
                }
            }
        }
    }
}

inline cplx eval_univariate(const std::vector<cplx>& c, cplx x) {
    cplx acc{0.0, 0.0};
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
    return acc;
}

} // namespace detail

/// All roots of a dense univariate polynomial, multiplicity repeated.
inline RootsResult roots_of(std::vector<cplx> c, const RootsOptions& opts = {}) {
    RootsResult result;
    double maxc = 0.0;
    for (const auto& v : c) maxc = std::max(maxc, std::abs(v));
    if (maxc == 0.0) throw IdenticallyZeroSlice("all slice coefficients vanish");

    int deg = int(c.size()) - 1;
    while (deg > 0 && std::abs(c[deg]) < opts.leading_drop_rel * maxc) {
        --deg;
        ++result.stripped_leading;
    }
    if (deg == 0) return result;

    Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(deg, deg);
    for (int i = 1; i < deg; ++i) companion(i, i - 1) = 1.0;
    for (int i = 0; i < deg; ++i) companion(i, deg - 1) = -c[i] / c[deg];
    detail::balance_companion(companion);

    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
    if (solver.info() != Eigen::Success) throw NumericError("companion eigensolver failed");

    std::vector<cplx> derivative(deg);
    for (int k = 1; k <= deg; ++k) derivative[k - 1] = c[k] * double(k);
    c.resize(deg + 1);

    result.roots.reserve(deg);
    for (int i = 0; i < deg; ++i) {
        cplx r = solver.eigenvalues()(i);
        for (int step = 0; step < opts.newton_steps; ++step) {
            cplx d = detail::eval_univariate(derivative, r);
            if (std::abs(d) == 0.0) break;
            r -= detail::eval_univariate(c, r) / d;
        }
        result.roots.push_back(r);
    }
    std::sort(result.roots.begin(), result.roots.end(), [](cplx a, cplx b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return result;
}

/// Roots of the slice p(z0, .), multiplicity repeated. Leading-coefficient
/// vanishing at z0 is stripped and recorded in the result.
inline RootsResult roots_in_w(const Poly2& p, cplx z0, const RootsOptions& opts = {}) {
    std::vector<cplx> c = p.slice_in_w(z0);
    double maxc = 0.0;
    for (const auto& v : c) maxc = std::max(maxc, std::abs(v));
    if (maxc <= 1e-13 * (1.0 + p.max_abs_coeff()))
        throw IdenticallyZeroSlice("slice is identically zero at the given point");
    return roots_of(std::move(c), opts);
}

inline RootsResult roots_in_z(const Poly2& p, cplx w0, const RootsOptions& opts = {}) {
    return roots_in_w(p.swapped(), w0, opts);
}

} // namespace bml
