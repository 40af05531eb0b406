#pragma once

// Antisymmetric tensor quotients of m-fold tensor powers of the truncated
// Hardy space on the bidisk.
//
// The ambient space carries one component per index tuple gamma in
// {1..m}^m; each component is an m-fold tensor of bidegree-capped Hardy
// slots. Quotienting by the span of the antisymmetrizers f - sgn(s) s(f)
// and of the slot-difference actions (M_{a,i} - M_{a,j}) g leaves the
// subspace whose components vanish on repeated tuples and transform by sign
// on permutation tuples; it is carried isometrically onto the base quotient
// N0 of the single ordered tensor component by extracting sqrt(m!) times
// the identity-tuple component.

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "bml/errors.hpp"
#include "bml/poly.hpp"

namespace bml {

class TensorSpace {
public:
    TensorSpace(int copies, int slot_degree_cap, long coord_budget = (1L << 26))
        : m_(copies), d_(slot_degree_cap) {
        if (m_ < 2 || m_ > 3) throw OutOfRange("tensor copies must be 2 or 3");
        if (d_ < 0) throw OutOfRange("slot degree cap must be nonnegative");
        slot_dim_ = (d_ + 1) * (d_ + 1);
        comp_dim_ = 1;
        for (int i = 0; i < m_; ++i) comp_dim_ *= slot_dim_;
        components_ = 1;
        for (int i = 0; i < m_; ++i) components_ *= m_;
        total_dim_ = long(components_) * comp_dim_;
        if (total_dim_ > coord_budget) throw MemoryBudget("tensor space exceeds the coordinate budget");
    }

    int copies() const { return m_; }
    int slot_cap() const { return d_; }
    int slot_dim() const { return slot_dim_; }
    int comp_dim() const { return comp_dim_; }
    int components() const { return components_; }
    long total_dim() const { return total_dim_; }

    int slot_index(int mz, int mw) const { return mz * (d_ + 1) + mw; }
    std::pair<int, int> slot_mono(int t) const { return {t / (d_ + 1), t % (d_ + 1)}; }

    int comp_index(const std::vector<int>& gamma) const {
        int g = 0;
        for (int i = m_ - 1; i >= 0; --i) g = g * m_ + gamma[std::size_t(i)];
        return g;
    }
    std::vector<int> comp_tuple(int g) const {
        std::vector<int> gamma(static_cast<std::size_t>(m_));
        for (int i = 0; i < m_; ++i) {
            gamma[std::size_t(i)] = g % m_;
            g /= m_;
        }
        return gamma;
    }

    /// Multiply slot `slot` of a single-component vector by the polynomial a,
    /// dropping overflow past the bidegree cap. Returns whether anything was
    /// dropped.
    bool slot_multiply(const Poly2& a, int slot, const Eigen::VectorXcd& in, Eigen::VectorXcd& out) const {
        out = Eigen::VectorXcd::Zero(comp_dim_);
        bool truncated = false;
        const int stride = [&] {
            int s = 1;
            for (int i = 0; i < slot; ++i) s *= slot_dim_;
            return s;
        }();
        for (int idx = 0; idx < comp_dim_; ++idx) {
            cplx c = in(idx);
            if (c == cplx{0.0, 0.0}) continue;
            int t = (idx / stride) % slot_dim_;
            auto [mz, mw] = slot_mono(t);
            for (const auto& [mono, coef] : a.terms()) {
                int nz = mz + mono.m, nw = mw + mono.n;
                if (nz > d_ || nw > d_) {
                    truncated = true;
                    continue;
                }
                out(idx + (slot_index(nz, nw) - t) * stride) += coef * c;
            }
        }
        return truncated;
    }

    /// Adjoint of slot multiplication; never overflows the cap.
    void slot_multiply_adjoint(const Poly2& a, int slot, const Eigen::VectorXcd& in, Eigen::VectorXcd& out) const {
        out = Eigen::VectorXcd::Zero(comp_dim_);
        const int stride = [&] {
            int s = 1;
            for (int i = 0; i < slot; ++i) s *= slot_dim_;
            return s;
        }();
        for (int idx = 0; idx < comp_dim_; ++idx) {
            cplx c = in(idx);
            if (c == cplx{0.0, 0.0}) continue;
            int t = (idx / stride) % slot_dim_;
            auto [mz, mw] = slot_mono(t);
            for (const auto& [mono, coef] : a.terms()) {
                int nz = mz - mono.m, nw = mw - mono.n;
                if (nz < 0 || nw < 0) continue;
                out(idx + (slot_index(nz, nw) - t) * stride) += std::conj(coef) * c;
            }
        }
    }

private:
    int m_, d_, slot_dim_, comp_dim_, components_;
    long total_dim_;
};

// ---------------------------------------------------------------------------
// matrices of polynomials

struct PolyMatrix {
    int m = 0;
    std::vector<Poly2> entries; // row-major

    PolyMatrix() = default;
    explicit PolyMatrix(int size) : m(size), entries(std::size_t(size) * std::size_t(size)) {}

    Poly2& at(int i, int j) { return entries[std::size_t(i) * std::size_t(m) + std::size_t(j)]; }
    const Poly2& at(int i, int j) const { return entries[std::size_t(i) * std::size_t(m) + std::size_t(j)]; }

    int max_entry_degree() const {
        int deg = 0;
        for (const auto& e : entries) deg = std::max(deg, e.degree());
        return deg;
    }
};

/// Exact cofactor determinant; sizes 2 and 3 only.
inline Poly2 determinant(const PolyMatrix& a) {
    if (a.m == 1) return a.at(0, 0);
    if (a.m == 2) return a.at(0, 0) * a.at(1, 1) - a.at(0, 1) * a.at(1, 0);
    if (a.m == 3) {
        Poly2 det;
        det = det + a.at(0, 0) * (a.at(1, 1) * a.at(2, 2) - a.at(1, 2) * a.at(2, 1));
        det = det - a.at(0, 1) * (a.at(1, 0) * a.at(2, 2) - a.at(1, 2) * a.at(2, 0));
        det = det + a.at(0, 2) * (a.at(1, 0) * a.at(2, 1) - a.at(1, 1) * a.at(2, 0));
        return det;
    }
    throw OutOfRange("determinant supports sizes up to 3");
}

/// Parse "[[p, q], [r, s]]" with entries in the polynomial grammar.
inline PolyMatrix parse_poly_matrix(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::size_t i = 0;
    auto skip = [&] {
        while (i < text.size() && (text[i] == ' ' || text[i] == '\t')) ++i;
    };
    skip();
    if (i >= text.size() || text[i] != '[') throw ParseError("expected '['", i);
    ++i;
    while (true) {
        skip();
        if (i >= text.size()) throw ParseError("unterminated matrix", i);
        if (text[i] == ']') {
            ++i;
            break;
        }
        if (text[i] == ',') {
            ++i;
            continue;
        }
        if (text[i] != '[') throw ParseError("expected a row '['", i);
        ++i;
        std::vector<std::string> row;
        std::size_t start = i;
        int depth = 0;
        for (; i < text.size(); ++i) {
            char c = text[i];
            if (c == '(') ++depth;
            if (c == ')') --depth;
            if (depth == 0 && (c == ',' || c == ']')) {
                row.push_back(text.substr(start, i - start));
                start = i + 1;
                if (c == ']') break;
            }
        }
        if (i >= text.size()) throw ParseError("unterminated row", start);
        ++i;
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ParseError("empty matrix", 0);
    int m = int(rows.size());
    PolyMatrix out(m);
    for (int r = 0; r < m; ++r) {
        if (int(rows[std::size_t(r)].size()) != m) throw ParseError("matrix is not square", 0);
        for (int c = 0; c < m; ++c) out.at(r, c) = parse_poly(rows[std::size_t(r)][std::size_t(c)]);
    }
    return out;
}

// ---------------------------------------------------------------------------
// actions on the full tensor space

struct ActionResult {
    Eigen::VectorXcd vec;
    bool truncated = false;
};

/// (T_A f)_gamma = sum_beta (tensor_i a_{gamma_i, beta_i}) f_beta, exact
/// polynomial arithmetic followed by truncation to the slot caps.
inline ActionResult apply_matrix_action(const TensorSpace& sp, const PolyMatrix& a, const Eigen::VectorXcd& f) {
    if (a.m != sp.copies()) throw OutOfRange("matrix size differs from the tensor copies");
    if (f.size() != sp.total_dim()) throw OutOfRange("vector does not live on the tensor space");
    ActionResult res;
    res.vec = Eigen::VectorXcd::Zero(sp.total_dim());
    const int m = sp.copies();
    Eigen::VectorXcd scratch, next;
    for (int g = 0; g < sp.components(); ++g) {
        std::vector<int> gamma = sp.comp_tuple(g);
        for (int b = 0; b < sp.components(); ++b) {
            std::vector<int> beta = sp.comp_tuple(b);
            bool zero = false;
            for (int i = 0; i < m && !zero; ++i) zero = a.at(gamma[std::size_t(i)], beta[std::size_t(i)]).is_zero();
            if (zero) continue;
            scratch = f.segment(long(b) * sp.comp_dim(), sp.comp_dim());
            if (scratch.isZero(0.0)) continue;
            for (int i = 0; i < m; ++i) {
                res.truncated |= sp.slot_multiply(a.at(gamma[std::size_t(i)], beta[std::size_t(i)]), i, scratch, next);
                scratch.swap(next);
            }
            res.vec.segment(long(g) * sp.comp_dim(), sp.comp_dim()) += scratch;
        }
    }
    return res;
}

/// Adjoint of the matrix action; exact on the truncation.
inline Eigen::VectorXcd apply_matrix_action_adjoint(const TensorSpace& sp, const PolyMatrix& a,
                                                    const Eigen::VectorXcd& f) {
    if (a.m != sp.copies()) throw OutOfRange("matrix size differs from the tensor copies");
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(sp.total_dim());
    const int m = sp.copies();
    Eigen::VectorXcd scratch, next;
    for (int g = 0; g < sp.components(); ++g) { // output component delta
        std::vector<int> delta = sp.comp_tuple(g);
        for (int b = 0; b < sp.components(); ++b) {
            std::vector<int> beta = sp.comp_tuple(b);
            bool zero = false;
            for (int i = 0; i < m && !zero; ++i) zero = a.at(beta[std::size_t(i)], delta[std::size_t(i)]).is_zero();
            if (zero) continue;
            scratch = f.segment(long(b) * sp.comp_dim(), sp.comp_dim());
            if (scratch.isZero(0.0)) continue;
            for (int i = 0; i < m; ++i) {
                sp.slot_multiply_adjoint(a.at(beta[std::size_t(i)], delta[std::size_t(i)]), i, scratch, next);
                scratch.swap(next);
            }
            out.segment(long(g) * sp.comp_dim(), sp.comp_dim()) += scratch;
        }
    }
    return out;
}

/// Scalar module action in one tensor position: multiply slot `pos` of
/// every component by the polynomial a.
inline ActionResult apply_scalar_slot_action(const TensorSpace& sp, const Poly2& a, int pos,
                                             const Eigen::VectorXcd& f) {
    ActionResult res;
    res.vec.resize(sp.total_dim());
    Eigen::VectorXcd out;
    for (int g = 0; g < sp.components(); ++g) {
        Eigen::VectorXcd block = f.segment(long(g) * sp.comp_dim(), sp.comp_dim());
        res.truncated |= sp.slot_multiply(a, pos, block, out);
        res.vec.segment(long(g) * sp.comp_dim(), sp.comp_dim()) = out;
    }
    return res;
}

inline Eigen::VectorXcd apply_scalar_slot_action_adjoint(const TensorSpace& sp, const Poly2& a, int pos,
                                                         const Eigen::VectorXcd& f) {
    Eigen::VectorXcd res(sp.total_dim());
    Eigen::VectorXcd out;
    for (int g = 0; g < sp.components(); ++g) {
        Eigen::VectorXcd block = f.segment(long(g) * sp.comp_dim(), sp.comp_dim());
        sp.slot_multiply_adjoint(a, pos, block, out);
        res.segment(long(g) * sp.comp_dim(), sp.comp_dim()) = out;
    }
    return res;
}

/// Component relabeling s(f)_gamma = f_{(gamma_{s(1)}, ..., gamma_{s(m)})}.
inline Eigen::VectorXcd permute_components(const TensorSpace& sp, const std::vector<int>& perm,
                                           const Eigen::VectorXcd& f) {
    Eigen::VectorXcd out(sp.total_dim());
    const int m = sp.copies();
    for (int g = 0; g < sp.components(); ++g) {
        std::vector<int> gamma = sp.comp_tuple(g);
        std::vector<int> moved(static_cast<std::size_t>(m));
        for (int i = 0; i < m; ++i) moved[std::size_t(i)] = gamma[std::size_t(perm[std::size_t(i)])];
        out.segment(long(g) * sp.comp_dim(), sp.comp_dim()) =
            f.segment(long(sp.comp_index(moved)) * sp.comp_dim(), sp.comp_dim());
    }
    return out;
}

inline std::vector<std::vector<int>> all_permutations(int m) {
    std::vector<int> base(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) base[std::size_t(i)] = i;
    std::vector<std::vector<int>> out;
    do {
        out.push_back(base);
    } while (std::next_permutation(base.begin(), base.end()));
    return out;
}

inline int permutation_sign(const std::vector<int>& perm) {
    int sign = 1;
    for (std::size_t i = 0; i < perm.size(); ++i)
        for (std::size_t j = i + 1; j < perm.size(); ++j)
            if (perm[i] > perm[j]) sign = -sign;
    return sign;
}

// ---------------------------------------------------------------------------
// the antisymmetric quotient

class GrassmannBasis {
public:
    explicit GrassmannBasis(TensorSpace sp) : space(std::move(sp)) {}

    TensorSpace space;
    Eigen::MatrixXcd base_basis; // orthonormal basis of the base quotient N0 (single component coords)
    Eigen::MatrixXcd lift_basis; // orthonormal antisymmetric lifts (full coords)
    int action_cap = 1;
    double tol = 1e-10;

    int dim() const { return int(base_basis.cols()); }

    /// Antisymmetric lift assigning sgn(s)/sqrt(m!) copies of a base vector
    /// to every permutation component.
    Eigen::VectorXcd lift(const Eigen::VectorXcd& base_vec) const {
        Eigen::VectorXcd out = Eigen::VectorXcd::Zero(space.total_dim());
        const double scale = 1.0 / std::sqrt(double(factorial(space.copies())));
        for (const auto& perm : all_permutations(space.copies())) {
            int g = space.comp_index(perm);
            out.segment(long(g) * space.comp_dim(), space.comp_dim()) =
                double(permutation_sign(perm)) * scale * base_vec;
        }
        return out;
    }

    static int factorial(int n) { return n <= 1 ? 1 : n * factorial(n - 1); }
};

/// Span the slot-difference submodule of the single ordered component and
/// take the SVD orthocomplement; the antisymmetric quotient is the space of
/// sign lifts of that complement. Raising action_cap adds composite
/// difference actions; the complement is stable under it.
inline GrassmannBasis build_grassmann(int copies, int slot_cap, int action_cap = 1, double tol = 1e-10,
                                      long coord_budget = (1L << 26)) {
    TensorSpace sp(copies, slot_cap, coord_budget);
    GrassmannBasis basis(sp);
    basis.action_cap = action_cap;
    basis.tol = tol;

    std::vector<Poly2> actions;
    for (int dz = 0; dz <= action_cap; ++dz)
        for (int dw = 0; dw + dz <= action_cap; ++dw)
            if (dz + dw >= 1) actions.push_back(Poly2::monomial(dz, dw));

    const int m = sp.copies();
    std::vector<Eigen::VectorXcd> gens;
    Eigen::VectorXcd e = Eigen::VectorXcd::Zero(sp.comp_dim());
    Eigen::VectorXcd lhs, rhs;
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j)
            for (const Poly2& a : actions)
                for (int t = 0; t < sp.comp_dim(); ++t) {
                    e.setZero();
                    e(t) = 1.0;
                    sp.slot_multiply(a, i, e, lhs);
                    sp.slot_multiply(a, j, e, rhs);
                    Eigen::VectorXcd gen = lhs - rhs;
                    if (gen.norm() > 0.0) gens.push_back(std::move(gen));
                }

    Eigen::MatrixXcd span(sp.comp_dim(), Eigen::Index(gens.size()));
    for (std::size_t c = 0; c < gens.size(); ++c) span.col(Eigen::Index(c)) = gens[c] / gens[c].norm();

    Eigen::BDCSVD<Eigen::MatrixXcd> svd(span, Eigen::ComputeFullU);
    const auto& sv = svd.singularValues();
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > tol * sv(0)) ++rank;
    basis.base_basis = svd.matrixU().rightCols(sp.comp_dim() - rank);

    basis.lift_basis.resize(sp.total_dim(), basis.base_basis.cols());
    for (Eigen::Index c = 0; c < basis.base_basis.cols(); ++c)
        basis.lift_basis.col(c) = basis.lift(basis.base_basis.col(c));
    return basis;
}

/// Norm-preserving flattening onto the base quotient: sqrt(m!) times the
/// identity-tuple component, expressed in the base orthonormal basis.
inline Eigen::VectorXcd flatten(const GrassmannBasis& basis, const Eigen::VectorXcd& f, double residual_tol = 1e-8) {
    const TensorSpace& sp = basis.space;
    if (f.size() != sp.total_dim()) throw OutOfRange("vector does not live on the tensor space");
    double fnorm = f.norm();
    Eigen::VectorXcd inside = basis.lift_basis * (basis.lift_basis.adjoint() * f);
    if ((f - inside).norm() > residual_tol * std::max(1.0, fnorm))
        throw NotInSubspace("vector is not in the antisymmetric quotient");

    std::vector<int> id_tuple(static_cast<std::size_t>(sp.copies()));
    for (int i = 0; i < sp.copies(); ++i) id_tuple[std::size_t(i)] = i;
    Eigen::VectorXcd f0 = f.segment(long(sp.comp_index(id_tuple)) * sp.comp_dim(), sp.comp_dim());
    return basis.base_basis.adjoint() *
           (std::sqrt(double(GrassmannBasis::factorial(sp.copies()))) * f0);
}

/// Compression of the module action of `a` onto the base quotient.
inline Eigen::MatrixXcd base_action(const GrassmannBasis& basis, const Poly2& a) {
    const TensorSpace& sp = basis.space;
    Eigen::MatrixXcd img(sp.comp_dim(), basis.base_basis.cols());
    Eigen::VectorXcd out;
    for (Eigen::Index c = 0; c < basis.base_basis.cols(); ++c) {
        Eigen::VectorXcd col = basis.base_basis.col(c);
        sp.slot_multiply(a, 0, col, out);
        img.col(c) = out;
    }
    return basis.base_basis.adjoint() * img;
}

struct DeterminantCheck {
    double max_identity_residual = 0.0;   // of the flattened determinant intertwining
    double max_invariance_residual = 0.0; // of adjoint-invariance of the quotient
    Poly2 det;
    int trials = 0;
};

/// For random vectors of the antisymmetric quotient, compare the flattened
/// adjoint matrix action against the adjoint compression of the determinant
/// symbol, and measure how far the adjoint action leaves the quotient.
inline DeterminantCheck verify_determinant_identity(const GrassmannBasis& basis, const PolyMatrix& a, int trials = 8,
                                                    std::uint64_t seed = 12345) {
    if (a.m != basis.space.copies()) throw OutOfRange("matrix size differs from the tensor copies");
    DeterminantCheck check;
    check.det = determinant(a);
    check.trials = trials;
    if (basis.dim() == 0) return check;

    Eigen::MatrixXcd det_action = base_action(basis, check.det);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);

    for (int t = 0; t < trials; ++t) {
        Eigen::VectorXcd u(basis.dim());
        for (Eigen::Index i = 0; i < u.size(); ++i) u(i) = cplx(dist(rng), dist(rng));
        u /= u.norm();

        Eigen::VectorXcd f = basis.lift_basis * u;
        Eigen::VectorXcd g = apply_matrix_action_adjoint(basis.space, a, f);

        Eigen::VectorXcd inside = basis.lift_basis * (basis.lift_basis.adjoint() * g);
        check.max_invariance_residual = std::max(check.max_invariance_residual, (g - inside).norm());

        Eigen::VectorXcd lhs = flatten(basis, g);
        Eigen::VectorXcd rhs = det_action.adjoint() * u;
        check.max_identity_residual = std::max(check.max_identity_residual, (lhs - rhs).norm());
    }
    return check;
}

} // namespace bml
