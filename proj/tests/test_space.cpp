#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "bml/space.hpp"

using namespace bml;

TEST_CASE("monomial norms match the Gamma closed form") {
    TruncatedSpace hardy(WeightIndex(-1.0), 8);
    for (int m = 0; m <= 8; ++m)
        for (int n = 0; m + n <= 8; ++n) CHECK(hardy.monomial_norm(m, n) == 1.0);

    TruncatedSpace bergman(WeightIndex(0.0), 8);
    // Gamma(4)Gamma(2)/Gamma(5) = 6/24, so ||z^3|| = 1/2.
    CHECK(bergman.monomial_norm(3, 0) == doctest::Approx(0.5).epsilon(1e-14));
    for (int m = 0; m <= 8; ++m)
        CHECK(bergman.monomial_norm(m, 0) == doctest::Approx(1.0 / std::sqrt(m + 1.0)).epsilon(1e-14));

    TruncatedSpace alpha1(WeightIndex(1.0), 4);
    // each factor is Gamma(2)Gamma(3)/Gamma(4) = 1/3, so the norm is 1/3
    CHECK(alpha1.monomial_norm(1, 1) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));

    CHECK_THROWS_AS(bergman.monomial_norm(5, 4), OutOfRange);
    CHECK_THROWS_AS(WeightIndex(-1.5), OutOfRange);
}

TEST_CASE("norms are positive and log-convex in m") {
    for (double alpha : {-1.0, 0.0, 2.5}) {
        TruncatedSpace space(WeightIndex(alpha), 40);
        for (int n : {0, 3}) {
            for (int m = 0; m + n <= 38; ++m) {
                double a = std::log(space.monomial_norm(m, n));
                double b = std::log(space.monomial_norm(m + 1, n));
                double c = std::log(space.monomial_norm(m + 2, n));
                CHECK(a + c - 2.0 * b >= -1e-12);
                CHECK(space.monomial_norm(m, n) > 0.0);
            }
        }
    }
}

TEST_CASE("inner product on monomials") {
    TruncatedSpace space(WeightIndex(0.0), 4);
    CoeffVector z = poly_to_vector(space, Poly2::variable_z());
    CoeffVector w = poly_to_vector(space, Poly2::variable_w());
    CoeffVector one = poly_to_vector(space, Poly2::one());
    CHECK(inner(z, z) == cplx{0.5, 0.0});
    CHECK(inner(z, w) == cplx{0.0, 0.0});
    CHECK(inner(one, one) == cplx{1.0, 0.0});

    TruncatedSpace other(WeightIndex(0.0), 5);
    CoeffVector u = poly_to_vector(other, Poly2::one());
    CHECK_THROWS_AS(inner(one, u), SpaceMismatch);
    CHECK_THROWS_AS(CoeffVector(space, Eigen::VectorXcd::Zero(3)), SpaceMismatch);

    // Hermitian symmetry on random vectors
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Eigen::VectorXcd a(space.dim()), b(space.dim());
    for (int i = 0; i < space.dim(); ++i) {
        a(i) = cplx(dist(rng), dist(rng));
        b(i) = cplx(dist(rng), dist(rng));
    }
    CoeffVector fa(space, a), fb(space, b);
    CHECK(std::abs(inner(fa, fb) - std::conj(inner(fb, fa))) < 1e-14);
}

TEST_CASE("kernel vectors reproduce point evaluation") {
    TruncatedSpace space(WeightIndex(-1.0), 10);
    CoeffVector k0 = kernel_vector(space, 0.0, 0.0);
    CHECK(k0.coords(0) == cplx{1.0, 0.0});
    CHECK(k0.coords.tail(space.dim() - 1).norm() == 0.0);

    // alpha = -1, lambda = (0.5, 0): coefficient of z^m is 0.5^m
    CoeffVector kg = kernel_vector(space, 0.5, 0.0);
    for (int m = 0; m <= 10; ++m)
        CHECK(std::abs(kg.coords(space.index_of(m, 0)) - std::pow(cplx(0.5), m)) < 1e-15);

    TruncatedSpace bergman(WeightIndex(0.0), 9);
    Poly2 f = parse_poly("z^2*w");
    cplx l1{0.3, 0.0}, l2{0.0, 0.4};
    CoeffVector fk = poly_to_vector(bergman, f);
    cplx got = inner(fk, kernel_vector(bergman, l1, l2));
    CHECK(std::abs(got - cplx(0.0, 0.036)) < 1e-14);

    // random reproducing checks
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> dist(-0.63, 0.63);
    for (double alpha : {-1.0, 0.0, 1.7}) {
        TruncatedSpace s(WeightIndex(alpha), 12);
        for (int trial = 0; trial < 20; ++trial) {
            Poly2 p;
            p.add_term(trial % 5, trial % 3, {dist(rng), dist(rng)});
            p.add_term(1, 1, {dist(rng), dist(rng)});
            p.add_term(0, 0, {dist(rng), dist(rng)});
            cplx l1r{dist(rng), dist(rng)}, l2r{dist(rng), dist(rng)};
            cplx lhs = inner(poly_to_vector(s, p), kernel_vector(s, l1r, l2r));
            cplx rhs = p.eval(l1r, l2r);
            CHECK(std::abs(lhs - rhs) <= 1e-12 * (1.0 + std::abs(rhs)));
        }
    }

    CHECK_THROWS_AS(kernel_vector(space, cplx(1.0, 0.0), cplx(0.0, 0.0)), PointOutsideBidisk);
}

TEST_CASE("backward shifts act by the weighted formula") {
    TruncatedSpace bergman(WeightIndex(0.0), 6);
    Eigen::MatrixXcd Az = adjoint_shift_z(bergman);
    // M_z^*(z^3) = (3/4) z^2 at alpha = 0
    Eigen::VectorXcd z3 = poly_to_vector(bergman, Poly2::monomial(3, 0)).coords;
    Eigen::VectorXcd img = Az * z3;
    CHECK(std::abs(img(bergman.index_of(2, 0)) - cplx(0.75)) < 1e-15);
    CHECK(img.norm() == doctest::Approx(0.75).epsilon(1e-14));

    // M_z^*(w^n) = 0
    Eigen::VectorXcd wn = poly_to_vector(bergman, Poly2::monomial(0, 4)).coords;
    CHECK((Az * wn).norm() == 0.0);

    TruncatedSpace hardy(WeightIndex(-1.0), 6);
    Eigen::MatrixXcd AzH = adjoint_shift_z(hardy);
    Eigen::VectorXcd z2w = poly_to_vector(hardy, Poly2::monomial(2, 1)).coords;
    Eigen::VectorXcd zw = poly_to_vector(hardy, Poly2::monomial(1, 1)).coords;
    CHECK((AzH * z2w - zw).norm() == 0.0);
}

TEST_CASE("backward shift is the orthonormal-basis adjoint of multiplication") {
    for (double alpha : {-1.0, 0.0, 1.5}) {
        TruncatedSpace space(WeightIndex(alpha), 7);
        Eigen::MatrixXcd mz_on = operator_to_orthonormal(space, multiplication_matrix(space, Poly2::variable_z()));
        Eigen::MatrixXcd adj_on = operator_to_orthonormal(space, adjoint_shift_z(space));
        // rows that multiplication truncates away carry the edge difference;
        // compare on columns whose image stays inside the cap
        Eigen::MatrixXcd diff = adj_on - mz_on.adjoint();
        double worst = 0.0;
        for (int j = 0; j < space.dim(); ++j) {
            Mono mono = space.basis()[std::size_t(j)];
            if (mono.degree() + 1 <= space.degree_cap())
                for (int i = 0; i < space.dim(); ++i) worst = std::max(worst, std::abs(diff(j, i)));
        }
        CHECK(worst < 1e-12);

        Eigen::MatrixXcd mw_on = operator_to_orthonormal(space, multiplication_matrix(space, Poly2::variable_w()));
        Eigen::MatrixXcd adjw_on = operator_to_orthonormal(space, adjoint_shift_w(space));
        Eigen::MatrixXcd diffw = adjw_on - mw_on.adjoint();
        double worstw = 0.0;
        for (int j = 0; j < space.dim(); ++j) {
            Mono mono = space.basis()[std::size_t(j)];
            if (mono.degree() + 1 <= space.degree_cap())
                for (int i = 0; i < space.dim(); ++i) worstw = std::max(worstw, std::abs(diffw(j, i)));
        }
        CHECK(worstw < 1e-12);
    }
}

TEST_CASE("defect diagonal matches the closed forms") {
    TruncatedSpace bergman(WeightIndex(0.0), 6);
    Eigen::VectorXd d = defect_diagonal(bergman);
    CHECK(d(bergman.index_of(1, 1)) == doctest::Approx(0.25).epsilon(1e-15));
    for (int m = 1; m <= 5; ++m)
        for (int n = 1; m + n <= 6; ++n)
            CHECK(d(bergman.index_of(m, n)) == doctest::Approx(1.0 / double((m + 1) * (n + 1))).epsilon(1e-13));

    TruncatedSpace hardy(WeightIndex(-1.0), 6);
    Eigen::VectorXd dh = defect_diagonal(hardy);
    CHECK(dh(0) == 1.0);
    CHECK(dh.tail(hardy.dim() - 1).cwiseAbs().maxCoeff() == 0.0);

    TruncatedSpace alpha2(WeightIndex(2.0), 5);
    CHECK(defect_diagonal(alpha2)(alpha2.index_of(3, 0)) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("multiplication then truncation stays a convolution") {
    TruncatedSpace space(WeightIndex(0.5), 5);
    Poly2 p = parse_poly("z*w - 2");
    Eigen::MatrixXcd M = multiplication_matrix(space, p);
    CoeffVector f = poly_to_vector(space, parse_poly("z^2 + w"));
    Eigen::VectorXcd img = M * f.coords;
    Poly2 expect = (p * parse_poly("z^2 + w")).pruned();
    for (const auto& [mono, c] : expect.terms()) {
        if (mono.degree() <= 5) CHECK(std::abs(img(space.index_of(mono.m, mono.n)) - c) < 1e-14);
    }
}
