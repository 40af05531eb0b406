#pragma once

// Truncated submodules spanned by generator-times-monomial products, graded
// orthonormal bases of the quotient complement, and matrix truncations of
// compressed multiplication operators.
//
// The quotient basis is graded by effective support: each basis vector is
// tagged with the maximal monomial degree it touches, up to the support
// tolerance of the grading. Interior compressions select levels <= N - k,
// away from the truncation edge.

#include <algorithm>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "bml/errors.hpp"
#include "bml/poly.hpp"
#include "bml/space.hpp"

namespace bml {

struct SpanningProduct {
    int generator;
    Mono multiplier;
};

class SubmoduleBasis {
public:
    explicit SubmoduleBasis(TruncatedSpace s) : space(std::move(s)) {}

    TruncatedSpace space;
    Eigen::MatrixXcd on_basis; // orthonormal columns, coordinates in the orthonormalized monomial basis
    int rank = 0;
    double rank_tol = 0.0;
    std::vector<SpanningProduct> spanning;

    Eigen::MatrixXcd projector() const { return on_basis * on_basis.adjoint(); }
};

/// Assemble all products g_i * z^a w^b of total degree <= N, orthonormalize
/// by SVD of the weighted coordinate matrix, keep directions above
/// tol * (largest singular value). `order` optionally permutes the spanning
/// columns; the resulting subspace is unchanged.
inline SubmoduleBasis build_submodule(const IdealSpec& ideal, const TruncatedSpace& space, double tol = 1e-10,
                                      const std::vector<int>& order = {}) {
    if (!(tol > 0.0) || tol > 1e-4) throw OutOfRange("rank tolerance must lie in (0, 1e-4]");

    std::vector<SpanningProduct> spanning;
    for (int gi = 0; gi < int(ideal.generators.size()); ++gi) {
        int gdeg = ideal.generators[std::size_t(gi)].degree();
        if (gdeg > space.degree_cap()) continue;
        for (const Mono& mono : space.basis())
            if (mono.degree() + gdeg <= space.degree_cap()) spanning.push_back({gi, mono});
    }
    if (spanning.empty()) throw EmptyTruncation("no generator multiple fits within the degree cap");

    if (!order.empty()) {
        if (order.size() != spanning.size()) throw OutOfRange("spanning order has the wrong length");
        std::vector<SpanningProduct> permuted(spanning.size());
        for (std::size_t i = 0; i < order.size(); ++i) permuted[i] = spanning[std::size_t(order[i])];
        spanning.swap(permuted);
    }

    Eigen::MatrixXcd cols(space.dim(), Eigen::Index(spanning.size()));
    for (std::size_t j = 0; j < spanning.size(); ++j) {
        const auto& sp = spanning[j];
        Poly2 product = ideal.generators[std::size_t(sp.generator)] * Poly2::monomial(sp.multiplier.m, sp.multiplier.n);
        cols.col(Eigen::Index(j)) = to_orthonormal(space, poly_to_vector(space, product).coords);
        double nrm = cols.col(Eigen::Index(j)).norm();
        if (nrm > 0.0) cols.col(Eigen::Index(j)) /= nrm;
    }

    Eigen::BDCSVD<Eigen::MatrixXcd> svd(cols, Eigen::ComputeThinU);
    const auto& sv = svd.singularValues();
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > tol * sv(0)) ++rank;

    SubmoduleBasis result(space);
    result.on_basis = svd.matrixU().leftCols(rank);
    result.rank = rank;
    result.rank_tol = tol;
    result.spanning = std::move(spanning);
    return result;
}

class QuotientBasis {
public:
    explicit QuotientBasis(TruncatedSpace s) : space(std::move(s)) {}

    TruncatedSpace space;
    Eigen::MatrixXcd on_basis;   // orthonormal columns spanning P_N minus the submodule
    std::vector<int> levels;     // effective support degree of each column (see build_quotient)
    int buffer = 2;
    int submodule_rank = 0;
    double rank_tol = 0.0;
    double support_tol = 1e-8;

    int dim() const { return int(on_basis.cols()); }

    int interior_dim(int k) const {
        int cutoff = space.degree_cap() - k;
        int count = 0;
        for (int lv : levels)
            if (lv <= cutoff) ++count;
        return count;
    }

    /// Express an ambient vector (orthonormal monomial coordinates) in the
    /// quotient basis.
    Eigen::VectorXcd coords_of(const Eigen::VectorXcd& on_ambient) const { return on_basis.adjoint() * on_ambient; }

    Eigen::MatrixXcd projector() const { return on_basis * on_basis.adjoint(); }
};

/// Orthonormal complement of the submodule inside the truncation, graded by
/// effective support: the level of a basis vector is the smallest degree d
/// such that its mass beyond degree d is at most support_tol. For quotients
/// with a monomial-graded structure the masses are exactly zero and the
/// levels coincide with the support degrees; for quotients whose elements
/// genuinely spread across all degrees the cascade isolates the directions
/// that have already converged below the truncation edge.
inline QuotientBasis build_quotient(const SubmoduleBasis& sub, int buffer = 2, double support_tol = 1e-8) {
    const TruncatedSpace& space = sub.space;
    const int dim = space.dim();

    QuotientBasis q(space);
    q.buffer = buffer;
    q.submodule_rank = sub.rank;
    q.rank_tol = sub.rank_tol;
    q.support_tol = support_tol;

    const int qdim = dim - sub.rank;
    if (qdim == 0) {
        q.on_basis.resize(dim, 0);
        return q;
    }

    Eigen::BDCSVD<Eigen::MatrixXcd> usvd(sub.on_basis, Eigen::ComputeFullU);
    Eigen::MatrixXcd cur = usvd.matrixU().rightCols(qdim);

    std::vector<std::pair<int, Eigen::Index>> order; // (level, column in staged)
    Eigen::MatrixXcd staged(dim, qdim);
    Eigen::Index placed = 0;
    for (int d = space.degree_cap(); d >= 1 && cur.cols() > 0; --d) {
        const int beyond = dim - TruncatedSpace::dimension_of(d - 1);
        Eigen::BDCSVD<Eigen::MatrixXcd> tsvd(cur.bottomRows(beyond), Eigen::ComputeFullV);
        const auto& sv = tsvd.singularValues();
        Eigen::Index big = 0;
        for (Eigen::Index i = 0; i < sv.size(); ++i)
            if (sv(i) > support_tol) ++big;
        Eigen::MatrixXcd rotated = cur * tsvd.matrixV();
        for (Eigen::Index i = 0; i < big; ++i) {
            staged.col(placed) = rotated.col(i);
            order.emplace_back(d, placed);
            ++placed;
        }
        cur = rotated.rightCols(cur.cols() - big);
    }
    for (Eigen::Index i = 0; i < cur.cols(); ++i) {
        staged.col(placed) = cur.col(i);
        order.emplace_back(0, placed);
        ++placed;
    }
    if (placed != qdim) throw NumericError("quotient grading lost columns");

    std::stable_sort(order.begin(), order.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    q.on_basis.resize(dim, qdim);
    for (Eigen::Index j = 0; j < qdim; ++j) {
        q.on_basis.col(j) = staged.col(order[std::size_t(j)].second);
        q.levels.push_back(order[std::size_t(j)].first);
    }
    return q;
}

/// Dense matrix of a compressed operator on the quotient basis, with the
/// level tags needed for interior sub-blocks.
class OperatorMatrix {
public:
    Eigen::MatrixXcd mat;
    std::vector<int> levels;
    int space_cap = 0;
    int buffer = 0;
    Poly2 symbol;

    int dim() const { return int(mat.rows()); }

    std::vector<int> interior_indices(int k) const {
        std::vector<int> sel;
        for (int j = 0; j < int(levels.size()); ++j)
            if (levels[std::size_t(j)] <= space_cap - k) sel.push_back(j);
        return sel;
    }
};

/// Matrix of the compression P_Q M_p restricted to the quotient, in the
/// orthonormal quotient basis.
inline OperatorMatrix compress(const Poly2& p, const QuotientBasis& q) {
    if (p.degree() > q.buffer)
        throw DegreeOverflow("symbol degree exceeds the quotient buffer");
    OperatorMatrix op;
    op.levels = q.levels;
    op.space_cap = q.space.degree_cap();
    op.buffer = q.buffer;
    op.symbol = p;
    Eigen::MatrixXcd mult_on = operator_to_orthonormal(q.space, multiplication_matrix(q.space, p));
    op.mat = q.on_basis.adjoint() * (mult_on * q.on_basis);
    return op;
}

inline OperatorMatrix adjoint(const OperatorMatrix& a) {
    OperatorMatrix op = a;
    op.mat = a.mat.adjoint();
    return op;
}

inline OperatorMatrix identity_like(const OperatorMatrix& a) {
    OperatorMatrix op = a;
    op.mat = Eigen::MatrixXcd::Identity(a.mat.rows(), a.mat.cols());
    op.symbol = Poly2::one();
    return op;
}

/// Compression of the operator to the sub-basis of quotient vectors
/// supported in degree <= N - k.
inline OperatorMatrix interior_compress(const OperatorMatrix& a, int k) {
    if (k < 0) throw OutOfRange("interior margin must be nonnegative");
    std::vector<int> sel = a.interior_indices(k);
    OperatorMatrix op;
    op.space_cap = a.space_cap;
    op.buffer = a.buffer;
    op.symbol = a.symbol;
    op.mat.resize(Eigen::Index(sel.size()), Eigen::Index(sel.size()));
    for (std::size_t i = 0; i < sel.size(); ++i)
        for (std::size_t j = 0; j < sel.size(); ++j)
            op.mat(Eigen::Index(i), Eigen::Index(j)) = a.mat(sel[i], sel[j]);
    for (int idx : sel) op.levels.push_back(a.levels[std::size_t(idx)]);
    return op;
}

/// Columns of the operator restricted to the interior domain, keeping the
/// full codomain. Kernel counts on this rectangle see genuine kernels
/// without picking up truncation-edge artifacts.
inline Eigen::MatrixXcd interior_domain_matrix(const OperatorMatrix& a, int k) {
    std::vector<int> sel = a.interior_indices(k);
    Eigen::MatrixXcd m(a.mat.rows(), Eigen::Index(sel.size()));
    for (std::size_t j = 0; j < sel.size(); ++j) m.col(Eigen::Index(j)) = a.mat.col(sel[j]);
    return m;
}

inline Eigen::VectorXd singular_values(const Eigen::MatrixXcd& m) {
    if (m.rows() == 0 || m.cols() == 0) return Eigen::VectorXd();
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(m);
    return svd.singularValues();
}

} // namespace bml
