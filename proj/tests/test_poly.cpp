#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "bml/poly.hpp"

using namespace bml;

namespace {

Poly2 random_poly(std::mt19937_64& rng, int max_deg, int max_terms) {
    std::uniform_int_distribution<int> deg(0, max_deg);
    std::uniform_real_distribution<double> coef(-2.0, 2.0);
    Poly2 p;
    std::uniform_int_distribution<int> nterms(1, max_terms);
    int k = nterms(rng);
    for (int i = 0; i < k; ++i) {
        int m = deg(rng), n = deg(rng);
        p.add_term(m, n, {coef(rng), coef(rng)});
    }
    return p;
}

cplx random_point(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    return {u(rng), u(rng)};
}

} // namespace

TEST_CASE("parse reads term maps directly") {
    Poly2 p = parse_poly("z^2 - w^3");
    CHECK(p.terms().size() == 2);
    CHECK(p.coeff(2, 0) == cplx{1.0, 0.0});
    CHECK(p.coeff(0, 3) == cplx{-1.0, 0.0});

    Poly2 q = parse_poly("(0+1i)*z*w + 2");
    CHECK(q.terms().size() == 2);
    CHECK(q.coeff(1, 1) == cplx{0.0, 1.0});
    CHECK(q.coeff(0, 0) == cplx{2.0, 0.0});

    Poly2 r = parse_poly("z - w + 0.5");
    CHECK(r.terms().size() == 3);
    CHECK(r.coeff(1, 0) == cplx{1.0, 0.0});
    CHECK(r.coeff(0, 1) == cplx{-1.0, 0.0});
    CHECK(r.coeff(0, 0) == cplx{0.5, 0.0});
}

TEST_CASE("parse accepts implicit products, exponent chains and leading signs") {
    CHECK(parse_poly("2z") == parse_poly("2*z"));
    CHECK(parse_poly("z*z*w") == Poly2::monomial(2, 1));
    CHECK(parse_poly("-z^2") == Poly2::monomial(2, 0, -1.0));
    CHECK(parse_poly("(1.5-2i)w") == Poly2::monomial(0, 1, {1.5, -2.0}));
}

TEST_CASE("parse handles grouped subexpressions") {
    Poly2 prod = parse_poly("(z - 0.3)*(z - 0.5)");
    CHECK(prod == parse_poly("z - 0.3") * parse_poly("z - 0.5"));
    CHECK(parse_poly("(z - w)^2") == parse_poly("z^2 - 2*z*w + w^2"));
    CHECK(parse_poly("z^2*(1 - 0.5*w) - (w - 0.5)") == parse_poly("z^2 - 0.5*z^2*w - w + 0.5"));
    CHECK_THROWS_AS(parse_poly("(z + w"), ParseError);
}

TEST_CASE("parse failures carry byte offsets") {
    CHECK_THROWS_AS(parse_poly(""), ParseError);
    try {
        parse_poly("z + * w");
        CHECK(false);
    } catch (const ParseError& e) {
        CHECK(e.offset() == 4);
    }
    try {
        parse_poly("z^2000000");
        CHECK(false);
    } catch (const ParseError& e) {
        CHECK(e.offset() == 2);
    }
}

TEST_CASE("print then parse is the identity on the term map") {
    std::mt19937_64 rng(20240601);
    for (int trial = 0; trial < 200; ++trial) {
        Poly2 p = random_poly(rng, 6, 8);
        Poly2 back = parse_poly(p.to_string());
        CHECK(back == p);
    }
    CHECK(parse_poly(Poly2::zero().to_string()).is_zero());

    // extreme magnitudes survive the round trip bit for bit
    Poly2 wild;
    wild.set(2, 0, {1e300, -3e-308});
    wild.set(0, 1, {-7.125e-300, 2.5e200});
    wild.set(0, 0, {0.1, 0.2});
    CHECK(parse_poly(wild.to_string()) == wild);
}

TEST_CASE("scalar multiples") {
    Poly2 p = parse_poly("z - w");
    CHECK(p.scale({0.0, 2.0}) == parse_poly("(0+2i)*z - (0+2i)*w"));
    CHECK(p.scale(0.0).is_zero());
}

TEST_CASE("evaluation hits known zeros") {
    CHECK(parse_poly("z - w").eval(0.3, 0.3) == cplx{0.0, 0.0});
    CHECK(parse_poly("z^2 - w^3").eval(1.0, 1.0) == cplx{0.0, 0.0});
    CHECK(parse_poly("z - w + 0.5").eval(-1.0, -0.5) == cplx{0.0, 0.0});
}

TEST_CASE("ring operations") {
    CHECK(parse_poly("z - w") * parse_poly("z + w") == parse_poly("z^2 - w^2"));
    CHECK(parse_poly("z^2*w").partial_z() == parse_poly("2*z*w"));
    CHECK((parse_poly("z^3 - w") * Poly2::zero()).is_zero());
    CHECK(Poly2::zero().degree() == -1);
    CHECK(parse_poly("z*w^2").degree() == 3);

    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        Poly2 p = random_poly(rng, 5, 6), q = random_poly(rng, 5, 6);
        CHECK((p * q).degree() == p.degree() + q.degree());
    }
}

TEST_CASE("eval is multiplicative on random samples") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 100; ++trial) {
        Poly2 p = random_poly(rng, 5, 6), q = random_poly(rng, 5, 6);
        cplx z = random_point(rng), w = random_point(rng);
        cplx lhs = (p * q).eval(z, w);
        cplx rhs = p.eval(z, w) * q.eval(z, w);
        CHECK(std::abs(lhs - rhs) <= 1e-12 * (1.0 + std::abs(rhs)));
    }
}

TEST_CASE("slice roots: cube roots of 0.512^2 have modulus 0.64") {
    auto res = roots_in_w(parse_poly("z^2 - w^3"), 0.512);
    REQUIRE(res.roots.size() == 3);
    for (cplx r : res.roots) {
        CHECK(std::abs(std::abs(r) - 0.64) < 1e-12);
        CHECK(std::abs(r * r * r - cplx(0.262144)) < 1e-12);
    }
}

TEST_CASE("slice roots: linear and constant-in-z slices") {
    auto lin = roots_in_w(parse_poly("z - w"), 0.3);
    REQUIRE(lin.roots.size() == 1);
    CHECK(std::abs(lin.roots[0] - cplx(0.3)) < 1e-14);

    auto quad = roots_in_w(parse_poly("w^2 - 1"), cplx(0.7, 0.1));
    REQUIRE(quad.roots.size() == 2);
    CHECK(std::abs(quad.roots[0] - cplx(-1.0)) < 1e-12);
    CHECK(std::abs(quad.roots[1] - cplx(1.0)) < 1e-12);
}

TEST_CASE("identically zero slices are rejected") {
    CHECK_THROWS_AS(roots_in_w(parse_poly("z*w + z"), 0.0), IdenticallyZeroSlice);
}

TEST_CASE("leading-coefficient collapse is stripped and recorded") {
    // (1 - z) w^2 + w: at z0 = 1 the quadratic coefficient vanishes.
    Poly2 p = parse_poly("w^2 - z*w^2 + w");
    auto res = roots_in_w(p, 1.0);
    CHECK(res.stripped_leading == 1);
    REQUIRE(res.roots.size() == 1);
    CHECK(std::abs(res.roots[0]) < 1e-12);
}

TEST_CASE("root count and residual bound on random slices") {
    std::mt19937_64 rng(2024);
    int tested = 0;
    for (int trial = 0; trial < 120; ++trial) {
        Poly2 p = random_poly(rng, 6, 8);
        if (p.deg_w() < 1) continue;
        cplx z0 = 0.7 * random_point(rng);
        std::vector<cplx> slice = p.slice_in_w(z0);
        double scale = 0.0;
        for (cplx c : slice) scale += std::abs(c);
        RootsResult res;
        try {
            res = roots_in_w(p, z0);
        } catch (const IdenticallyZeroSlice&) {
            continue;
        }
        CHECK(int(res.roots.size()) == int(slice.size()) - 1 - res.stripped_leading);
        for (cplx r : res.roots) {
            double residual = std::abs(p.eval(z0, r));
            // certified only away from huge roots; scale by the slice size
            double bound = 1e-8 * (1.0 + scale) * std::max(1.0, std::pow(std::abs(r), double(p.deg_w())));
            CHECK(residual <= bound);
        }
        ++tested;
    }
    CHECK(tested > 40);
}

TEST_CASE("newton polish tightens roots when requested") {
    RootsOptions opts;
    opts.newton_steps = 2;
    auto res = roots_in_w(parse_poly("w^4 - 0.0001"), 0.5, opts);
    REQUIRE(res.roots.size() == 4);
    for (cplx r : res.roots) CHECK(std::abs(std::abs(r) - 0.1) < 1e-13);
}

TEST_CASE("ideal specs validate generators") {
    CHECK_THROWS_AS(IdealSpec({}, "empty"), OutOfRange);
    CHECK_THROWS_AS(IdealSpec({Poly2::zero()}, "zero"), OutOfRange);
    IdealSpec ideal = parse_ideal("z - w; w^2");
    CHECK(ideal.generators.size() == 2);
}

TEST_CASE("swap exchanges the variables") {
    Poly2 p = parse_poly("z^2*w - 3*w^4");
    Poly2 s = p.swapped();
    CHECK(s.coeff(1, 2) == cplx{1.0, 0.0});
    CHECK(s.coeff(4, 0) == cplx{-3.0, 0.0});
}
