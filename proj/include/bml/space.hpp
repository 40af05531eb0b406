#pragma once

// Weighted Bergman space combinatorics on the bidisk, truncated at a total
// degree: monomial norms, weighted inner products, reproducing kernels,
// backward shifts and the diagonal defect operator.
//
// Monomial coordinates are unnormalized; the norm table is applied inside
// the inner product, so multiplication by a polynomial stays a convolution.

#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "bml/errors.hpp"
#include "bml/poly.hpp"

namespace bml {

/// Weight parameter of the space; -1 selects the Hardy space.
struct WeightIndex {
    double alpha;
    explicit WeightIndex(double a) : alpha(a) {
        if (!(a >= -1.0)) throw OutOfRange("weight index must be >= -1");
    }
};

class TruncatedSpace {
public:
    TruncatedSpace(WeightIndex weight, int degree_cap) : alpha_(weight.alpha), cap_(degree_cap) {
        if (degree_cap < 0) throw OutOfRange("degree cap must be nonnegative");
        basis_.reserve(std::size_t(dimension_of(cap_)));
        for (int d = 0; d <= cap_; ++d)
            for (int m = d; m >= 0; --m) basis_.push_back(Mono{m, d - m});
        norms_sq_.resize(Eigen::Index(basis_.size()));
        norms_.resize(Eigen::Index(basis_.size()));
        for (std::size_t i = 0; i < basis_.size(); ++i) {
            double v = norm_factor(basis_[i].m) * norm_factor(basis_[i].n);
            norms_sq_(Eigen::Index(i)) = v;
            norms_(Eigen::Index(i)) = std::sqrt(v);
        }
    }

    double alpha() const { return alpha_; }
    int degree_cap() const { return cap_; }
    int dim() const { return int(basis_.size()); }
    static int dimension_of(int cap) { return cap < 0 ? 0 : (cap + 1) * (cap + 2) / 2; }

    const std::vector<Mono>& basis() const { return basis_; }
    const Eigen::VectorXd& norms() const { return norms_; }
    const Eigen::VectorXd& norms_sq() const { return norms_sq_; }

    bool contains(int m, int n) const { return m >= 0 && n >= 0 && m + n <= cap_; }

    int index_of(int m, int n) const {
        if (!contains(m, n)) throw OutOfRange("monomial outside the truncation");
        int d = m + n;
        return d * (d + 1) / 2 + (d - m);
    }

    /// ||z^m w^n|| in the weighted norm, via log-Gamma.
    double monomial_norm(int m, int n) const { return norms_(index_of(m, n)); }
    double monomial_norm_sq(int m, int n) const { return norms_sq_(index_of(m, n)); }

private:
    double norm_factor(int k) const {
        return std::exp(std::lgamma(double(k) + 1.0) + std::lgamma(alpha_ + 2.0) -
                        std::lgamma(double(k) + alpha_ + 2.0));
    }

    double alpha_;
    int cap_;
    std::vector<Mono> basis_;
    Eigen::VectorXd norms_;
    Eigen::VectorXd norms_sq_;
};

/// Dense coordinates of a truncated function in the monomial basis.
struct CoeffVector {
    const TruncatedSpace* space = nullptr;
    Eigen::VectorXcd coords;

    CoeffVector() = default;
    CoeffVector(const TruncatedSpace& s, Eigen::VectorXcd c) : space(&s), coords(std::move(c)) {
        if (coords.size() != s.dim()) throw SpaceMismatch("coordinate length differs from basis size");
    }
};

inline CoeffVector poly_to_vector(const TruncatedSpace& space, const Poly2& p) {
    Eigen::VectorXcd c = Eigen::VectorXcd::Zero(space.dim());
    for (const auto& [mono, coef] : p.terms()) {
        if (!space.contains(mono.m, mono.n)) throw OutOfRange("polynomial exceeds the degree cap");
        c(space.index_of(mono.m, mono.n)) = coef;
    }
    return CoeffVector(space, std::move(c));
}

inline Poly2 vector_to_poly(const CoeffVector& v) {
    Poly2 p;
    const auto& basis = v.space->basis();
    for (int i = 0; i < v.coords.size(); ++i)
        if (v.coords(i) != cplx{0.0, 0.0}) p.add_term(basis[std::size_t(i)].m, basis[std::size_t(i)].n, v.coords(i));
    return p;
}

/// Weighted inner product, linear in the first slot.
inline cplx inner(const CoeffVector& f, const CoeffVector& g) {
    if (f.space != g.space) throw SpaceMismatch("vectors live in different spaces");
    return (f.coords.array() * g.coords.array().conjugate() *
            f.space->norms_sq().array().cast<cplx>())
        .sum();
}

inline double norm(const CoeffVector& f) { return std::sqrt(std::max(0.0, inner(f, f).real())); }

/// Truncated reproducing kernel at a point of the open bidisk: the
/// coefficient of z^m w^n is conj(l1)^m conj(l2)^n / ||z^m w^n||^2, so
/// inner(f, kernel) = f(lambda) exactly for polynomials within the cap.
inline CoeffVector kernel_vector(const TruncatedSpace& space, cplx lambda1, cplx lambda2) {
    if (std::abs(lambda1) >= 1.0 || std::abs(lambda2) >= 1.0)
        throw PointOutsideBidisk("kernel points must lie in the open bidisk");
    Eigen::VectorXcd c(space.dim());
    const cplx c1 = std::conj(lambda1), c2 = std::conj(lambda2);
    for (int i = 0; i < space.dim(); ++i) {
        Mono mono = space.basis()[std::size_t(i)];
        c(i) = std::pow(c1, mono.m) * std::pow(c2, mono.n) / space.norms_sq()(i);
    }
    return CoeffVector(space, std::move(c));
}

// ---------------------------------------------------------------------------
// operators on the truncation, in monomial coordinates

namespace detail {

inline double backward_shift_factor(double alpha, int k) {
    return k == 0 ? 0.0 : double(k) / (double(k) + alpha + 1.0);
}

} // namespace detail

/// Matrix of the adjoint of multiplication by z on the monomial basis:
/// z^m w^n is sent to m/(m+alpha+1) z^(m-1) w^n (Hardy backward shift at
/// alpha = -1, where the factor reduces to 1).
inline Eigen::MatrixXcd adjoint_shift_z(const TruncatedSpace& space) {
    Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(space.dim(), space.dim());
    for (int j = 0; j < space.dim(); ++j) {
        Mono mono = space.basis()[std::size_t(j)];
        if (mono.m > 0)
            A(space.index_of(mono.m - 1, mono.n), j) = detail::backward_shift_factor(space.alpha(), mono.m);
    }
    return A;
}

inline Eigen::MatrixXcd adjoint_shift_w(const TruncatedSpace& space) {
    Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(space.dim(), space.dim());
    for (int j = 0; j < space.dim(); ++j) {
        Mono mono = space.basis()[std::size_t(j)];
        if (mono.n > 0)
            A(space.index_of(mono.m, mono.n - 1), j) = detail::backward_shift_factor(space.alpha(), mono.n);
    }
    return A;
}

/// Diagonal of Id - M_z M_z^* - M_w M_w^* + M_zw M_zw^* on the monomial
/// basis, computed from the four-term expression for every (m, n).
inline Eigen::VectorXd defect_diagonal(const TruncatedSpace& space) {
    Eigen::VectorXd d(space.dim());
    for (int i = 0; i < space.dim(); ++i) {
        Mono mono = space.basis()[std::size_t(i)];
        double am = detail::backward_shift_factor(space.alpha(), mono.m);
        double an = detail::backward_shift_factor(space.alpha(), mono.n);
        d(i) = 1.0 - am - an + am * an;
    }
    return d;
}

/// Multiplication by p followed by truncation to the cap, in monomial
/// coordinates (a plain convolution with overflow rows dropped).
inline Eigen::MatrixXcd multiplication_matrix(const TruncatedSpace& space, const Poly2& p) {
    Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(space.dim(), space.dim());
    for (int j = 0; j < space.dim(); ++j) {
        Mono mono = space.basis()[std::size_t(j)];
        for (const auto& [pm, coef] : p.terms()) {
            int m = mono.m + pm.m, n = mono.n + pm.n;
            if (m + n <= space.degree_cap()) A(space.index_of(m, n), j) += coef;
        }
    }
    return A;
}

/// Conversions between monomial coordinates and coordinates in the
/// orthonormalized monomial basis.
inline Eigen::VectorXcd to_orthonormal(const TruncatedSpace& space, const Eigen::VectorXcd& mono_coords) {
    return mono_coords.array() * space.norms().array().cast<cplx>();
}

inline Eigen::VectorXcd from_orthonormal(const TruncatedSpace& space, const Eigen::VectorXcd& on_coords) {
    return on_coords.array() / space.norms().array().cast<cplx>();
}

/// Rewrite a monomial-coordinate operator in the orthonormal basis.
inline Eigen::MatrixXcd operator_to_orthonormal(const TruncatedSpace& space, const Eigen::MatrixXcd& mono_op) {
    Eigen::VectorXd n = space.norms();
    return n.cast<cplx>().asDiagonal() * mono_op * n.cwiseInverse().cast<cplx>().asDiagonal();
}

} // namespace bml
