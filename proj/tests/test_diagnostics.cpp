#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "bml/diagnostics.hpp"
#include "bml/variety.hpp"

using namespace bml;

namespace {

QuotientBasis make_quotient(const std::string& ideal, double alpha, int cap) {
    TruncatedSpace space(WeightIndex(alpha), cap);
    return build_quotient(build_submodule(parse_ideal(ideal), space, 1e-10), 2);
}

// 1D weighted-shift oracle on the disk with weight index beta:
// the shift has squared weights (n+1)/(n+beta+2).
double shift_weight_sq(double beta, int n) { return (n + 1.0) / (n + beta + 2.0); }

double shift_commutator_eig(double beta, int n) {
    double prev = n == 0 ? 0.0 : shift_weight_sq(beta, n - 1);
    return shift_weight_sq(beta, n) - prev;
}

} // namespace

TEST_CASE("commutator plateau for the z^2 quotient") {
    const int cap = 12;
    QuotientBasis q = make_quotient("z^2", 0.0, cap);
    Eigen::VectorXd sv = commutator_spectrum(q, Poly2::variable_z(), Poly2::variable_z(), 2);
    REQUIRE(sv.size() == q.interior_dim(2));
    int plateau = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (std::abs(sv(i) - 0.5) < 1e-9) ++plateau;
    // interior holds w^n for n <= cap-2 and z w^n for n <= cap-3, all on the plateau
    CHECK(plateau >= cap - 1);
    CHECK(sv(0) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("commutator of the diagonal quotient matches the weighted-shift oracle") {
    QuotientBasis q = make_quotient("z - w", -1.0, 14);
    Eigen::VectorXd sv = commutator_spectrum(q, Poly2::variable_z(), Poly2::variable_z(), 2);
    CHECK(sv(0) == doctest::Approx(shift_commutator_eig(0.0, 0)).epsilon(1e-10));
    CHECK(sv(0) == doctest::Approx(0.5).epsilon(1e-10));
    for (int n = 1; n <= 5; ++n)
        CHECK(sv(n) == doctest::Approx(shift_commutator_eig(0.0, n)).epsilon(1e-8));
}

TEST_CASE("the identity commutes") {
    QuotientBasis q = make_quotient("z^2 - w^3", 1.0, 8);
    Eigen::VectorXd sv = commutator_spectrum(q, Poly2::one(), Poly2::one(), 2);
    CHECK(sv.maxCoeff() < 1e-13);
}

TEST_CASE("unitarity defects of the diagonal quotient") {
    QuotientBasis q = make_quotient("z - w", -1.0, 14);
    UnitarityDefects d = essential_unitarity(q, Poly2::variable_z(), 2);
    // left defect 1 - ||B^* e_n||^2 = 1 at n = 0, then 1/(n+1)
    CHECK(d.left(0) == doctest::Approx(1.0).epsilon(1e-10));
    for (int n = 1; n <= 6; ++n)
        CHECK(d.left(n) == doctest::Approx(1.0 / (n + 1.0)).epsilon(1e-8));
    // right defect 1 - ||B e_n||^2 = 1/(n+2)
    for (int n = 0; n <= 6; ++n)
        CHECK(d.right(n) == doctest::Approx(1.0 / (n + 2.0)).epsilon(1e-8));
}

TEST_CASE("w-defect plateau persists on the z^2 quotient as the cap grows") {
    const double alpha = 0.0;
    std::vector<double> at_n2;
    for (int cap : {10, 14}) {
        QuotientBasis q = make_quotient("z^2", alpha, cap);
        UnitarityDefects d = essential_unitarity(q, Poly2::variable_w(), 2);
        // defect eigenvalue 1/(n + alpha + 2) on the w^n directions
        bool found = false;
        for (Eigen::Index i = 0; i < d.right.size(); ++i)
            if (std::abs(d.right(i) - 1.0 / (2.0 + alpha + 2.0)) < 1e-9) found = true;
        CHECK(found);
        at_n2.push_back(d.right(0));
    }
    CHECK(at_n2[0] == doctest::Approx(at_n2[1]).epsilon(1e-9));
}

TEST_CASE("unit ideal yields empty spectra") {
    QuotientBasis q = make_quotient("1", 0.0, 6);
    CHECK(q.dim() == 0);
    CHECK(commutator_spectrum(q, Poly2::variable_z(), Poly2::variable_z(), 2).size() == 0);
    UnitarityDefects d = essential_unitarity(q, Poly2::variable_w(), 2);
    CHECK(d.left.size() == 0);
    CHECK(d.right.size() == 0);
}

TEST_CASE("Macaev statistics") {
    MacaevStat single = macaev_stat({1.0, 0.0, 0.0, 0.0});
    CHECK(single.sigma[0] == 1.0 / std::log(2.0));
    CHECK(single.sup == doctest::Approx(1.4427).epsilon(1e-4));
    CHECK(single.bounded_trend);

    std::vector<double> harmonic;
    for (int kk = 0; kk < 64; ++kk) harmonic.push_back(1.0 / (kk + 1.0));
    MacaevStat h = macaev_stat(harmonic);
    // sigma equals the hand-computed partial sums exactly
    double partial = 1.0;
    for (std::size_t n = 1; n < harmonic.size(); ++n) {
        partial += harmonic[n];
        CHECK(h.sigma[n - 1] == partial / std::log(double(n) + 1.0));
    }
    CHECK(h.sup < 2.2);
    CHECK(h.sigma.back() > 0.9);

    MacaevStat flat = macaev_stat(std::vector<double>(64, 1.0));
    CHECK_FALSE(flat.bounded_trend);
}

TEST_CASE("kernel dimensions on the diagonal quotient") {
    QuotientBasis q = make_quotient("z - w", -1.0, 16);
    OperatorMatrix a = compress(parse_poly("z - 0.5"), q);
    CHECK(kernel_dim(a, 1e-7, 2) == 0);
    CHECK(kernel_dim(adjoint(a), 1e-7, 2) == 1);

    OperatorMatrix id = identity_like(a);
    CHECK(kernel_dim(id, 1e-7, 2) == 0);

    OperatorMatrix two = compress(parse_poly("(z - 0.3)*(z - 0.5)"), q);
    CHECK(kernel_dim(adjoint(two), 1e-7, 2) == 2);
    CHECK(kernel_dim(two, 1e-7, 2) == 0);
}

TEST_CASE("index estimates are stable and additive") {
    IdealSpec diag = parse_ideal("z - w");
    std::vector<int> degrees{16, 20};

    IndexEstimate one = estimate_index(diag, -1.0, Poly2::one(), degrees);
    CHECK(one.index == 0);
    CHECK(one.stable);

    IndexEstimate half = estimate_index(diag, -1.0, parse_poly("z - 0.5"), degrees);
    CHECK(half.index == -1);
    CHECK(half.stable);

    IndexEstimate third = estimate_index(diag, -1.0, parse_poly("z - 0.3"), degrees);
    IndexEstimate prod = estimate_index(diag, -1.0, parse_poly("(z - 0.3)*(z - 0.5)"), degrees);
    CHECK(prod.index == -2);
    CHECK(prod.stable);
    CHECK(prod.index == half.index + third.index);
}

TEST_CASE("cross projection of a quotient with itself") {
    QuotientBasis q = make_quotient("z - w", -1.0, 10);
    CrossProjection cp = cross_projection(q, q, 2);
    CHECK(cp.norm == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(cp.tail == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(cross_projection_norm(q, q, 2) == cp.norm);
}

TEST_CASE("cross projection tails separate disjoint and shared varieties") {
    std::vector<double> disjoint_tails, shared_tails;
    for (int cap : {10, 14, 18}) {
        TruncatedSpace space(WeightIndex(-1.0), cap);
        QuotientBasis q1 = build_quotient(build_submodule(parse_ideal("z - w"), space, 1e-10), 2);
        QuotientBasis q2 = build_quotient(build_submodule(parse_ideal("z + w"), space, 1e-10), 2);
        QuotientBasis q3 = build_quotient(build_submodule(parse_ideal("z*w - w^2"), space, 1e-10), 2);
        disjoint_tails.push_back(cross_projection(q1, q2, 2).tail);
        shared_tails.push_back(cross_projection(q1, q3, 2).tail);
    }
    CHECK(disjoint_tails[1] < disjoint_tails[0]);
    CHECK(disjoint_tails[2] < disjoint_tails[1]);
    // exact interleaving spectrum 1/(2j+1) on the even diagonal overlaps
    CHECK(disjoint_tails[0] == doctest::Approx(1.0 / 9.0).epsilon(1e-8));
    for (double t : shared_tails) CHECK(t > 0.9);
    CHECK_THROWS_AS(cross_projection(make_quotient("z - w", -1.0, 10), make_quotient("z + w", -1.0, 12), 2),
                    SpaceMismatch);
}

TEST_CASE("spectrum probes distinguish boundary variety points") {
    std::vector<double> on_variety, off_variety;
    for (int cap : {10, 14, 18}) {
        QuotientBasis q = make_quotient("z - w", -1.0, cap);
        on_variety.push_back(spectrum_probe(q, 1.0, 1.0, 2).value);
        off_variety.push_back(spectrum_probe(q, 1.0, -1.0, 2).value);
    }
    CHECK(on_variety[1] < on_variety[0]);
    CHECK(on_variety[2] < on_variety[1]);
    for (double v : off_variety) CHECK(v > 0.5);

    QuotientBasis q = make_quotient("z - w", -1.0, 10);
    CHECK_THROWS_AS(spectrum_probe(q, 0.5, 0.5, 2), OutOfRange);
    SpectrumProbe empty = spectrum_probe(make_quotient("1", -1.0, 6), 1.0, 1.0, 2);
    CHECK(empty.points.empty());
}

TEST_CASE("probes agree with the boundary cloud of a distinguished curve") {
    Poly2 p = parse_poly("z - w");
    BoundaryCloud cloud = boundary_cloud(p, 16);
    REQUIRE(!cloud.points.empty());
    const CloudPoint& pt = cloud.points[cloud.points.size() / 3];

    std::vector<double> on_cloud, off_cloud;
    for (int cap : {10, 14, 18}) {
        QuotientBasis q = make_quotient("z - w", -1.0, cap);
        on_cloud.push_back(spectrum_probe(q, pt.z, pt.w, 2).value);
        // rotate the w-angle half a turn away from the cloud
        off_cloud.push_back(spectrum_probe(q, pt.z, -pt.w, 2).value);
    }
    CHECK(on_cloud[1] < on_cloud[0]);
    CHECK(on_cloud[2] < on_cloud[1]);
    for (double v : off_cloud) CHECK(v > 0.5);
}

TEST_CASE("tail verdicts separate plateau from decay") {
    std::vector<double> plateau_tails, compact_tails;
    std::vector<int> dims;
    for (int cap : {10, 14, 18}) {
        QuotientBasis zsq = make_quotient("z^2", 0.0, cap);
        Eigen::VectorXd sv = commutator_spectrum(zsq, Poly2::variable_z(), Poly2::variable_z(), 2);
        plateau_tails.push_back(tail_statistic(sv, zsq.interior_dim(2)));

        QuotientBasis diag = make_quotient("z - w", -1.0, cap);
        Eigen::VectorXd sd = commutator_spectrum(diag, Poly2::variable_z(), Poly2::variable_z(), 2);
        compact_tails.push_back(tail_statistic(sd, diag.interior_dim(2)));
        dims.push_back(diag.interior_dim(2));
    }
    std::vector<int> zdims;
    for (int cap : {10, 14, 18}) zdims.push_back(make_quotient("z^2", 0.0, cap).interior_dim(2));
    CHECK(tail_verdict(plateau_tails, zdims) == CompactnessVerdict::ConsistentWithNonCompact);
    CHECK(tail_verdict(compact_tails, dims) == CompactnessVerdict::ConsistentWithCompact);
    CHECK(to_string(CompactnessVerdict::Inconclusive) == "inconclusive");
}
