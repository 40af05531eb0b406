#pragma once

// Operator probes on truncated quotient modules: commutator spectra,
// unitarity defects, Macaev statistics, kernel dimensions, index
// estimates, cross-projection spectra and boundary spectrum probes.
//
// Every spectrum is reported on an interior compression and is meaningful
// together with its (degree cap, interior margin) provenance; sweeping the
// cap and comparing tails is what turns these finite sections into
// compactness evidence.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bml/quotient.hpp"

namespace bml {

// ---------------------------------------------------------------------------
// commutators and defects

/// Singular values, descending, of the interior compression of
/// [S_p1^*, S_p2] = S_p1^* S_p2 - S_p2 S_p1^*.
inline Eigen::VectorXd commutator_spectrum(const QuotientBasis& q, const Poly2& p1, const Poly2& p2, int k) {
    OperatorMatrix a = compress(p1, q);
    OperatorMatrix b = compress(p2, q);
    OperatorMatrix comm = a;
    comm.mat = a.mat.adjoint() * b.mat - b.mat * a.mat.adjoint();
    return singular_values(interior_compress(comm, k).mat);
}

struct UnitarityDefects {
    Eigen::VectorXd left;  // interior spectrum of Id - S S^*
    Eigen::VectorXd right; // interior spectrum of Id - S^* S
};

inline UnitarityDefects essential_unitarity(const QuotientBasis& q, const Poly2& p, int k) {
    OperatorMatrix a = compress(p, q);
    Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(a.dim(), a.dim());
    OperatorMatrix left = a, right = a;
    left.mat = id - a.mat * a.mat.adjoint();
    right.mat = id - a.mat.adjoint() * a.mat;
    return {singular_values(interior_compress(left, k).mat),
            singular_values(interior_compress(right, k).mat)};
}

// ---------------------------------------------------------------------------
// Macaev statistics

struct MacaevStat {
    std::vector<double> values; // input singular values, descending
    std::vector<double> sigma;  // sigma(n) = (sum_{k<=n} s_k) / ln(n+1), n = 1, 2, ...
    double sup = 0.0;
    double tail_slope = 0.0;    // sigma(last) - sigma(middle); positive means still growing
    bool bounded_trend = true;
};

inline MacaevStat macaev_stat(const std::vector<double>& descending) {
    MacaevStat st;
    st.values = descending;
    if (descending.size() < 2) return st;
    double partial = descending[0];
    for (std::size_t n = 1; n < descending.size(); ++n) {
        partial += descending[n];
        st.sigma.push_back(partial / std::log(double(n) + 1.0));
    }
    st.sup = *std::max_element(st.sigma.begin(), st.sigma.end());
    double mid = st.sigma[st.sigma.size() / 2];
    st.tail_slope = st.sigma.back() - mid;
    st.bounded_trend = st.tail_slope <= 1e-12;
    return st;
}

inline std::vector<double> to_std(const Eigen::VectorXd& v) {
    return std::vector<double>(v.data(), v.data() + v.size());
}

/// Merge several descending spectra into one descending sequence.
inline std::vector<double> merge_descending(const std::vector<Eigen::VectorXd>& parts) {
    std::vector<double> all;
    for (const auto& p : parts) all.insert(all.end(), p.data(), p.data() + p.size());
    std::sort(all.rbegin(), all.rend());
    return all;
}

// ---------------------------------------------------------------------------
// kernels and the index

/// Numerical kernel dimension of the operator restricted to the interior
/// domain (full codomain): the count of singular values whose squares fall
/// below threshold times the largest squared singular value.
inline int kernel_dim(const OperatorMatrix& a, double threshold, int k) {
    if (!(threshold > 0.0)) throw OutOfRange("kernel threshold must be positive");
    Eigen::MatrixXcd m = interior_domain_matrix(a, k);
    if (m.cols() == 0) return 0;
    Eigen::VectorXd sv = singular_values(m);
    const double top = sv(0);
    if (top == 0.0) return int(sv.size());
    int count = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        double rel = sv(i) / top;
        if (rel * rel <= threshold) ++count;
    }
    return count;
}

struct IndexLevel {
    int degree_cap = 0;
    int dim_ker = 0;
    int dim_ker_adjoint = 0;
    int index = 0;
};

struct IndexEstimate {
    int index = 0;
    bool stable = false; // identical across the last two degree levels
    std::vector<IndexLevel> levels;
};

/// dim ker S_p - dim ker S_p^* over a prebuilt degree sweep, accepted only
/// when the last two levels agree.
inline IndexEstimate estimate_index(const std::vector<const QuotientBasis*>& sweep, const Poly2& p,
                                    double kernel_tol, int k) {
    IndexEstimate est;
    for (const QuotientBasis* q : sweep) {
        OperatorMatrix a = compress(p, *q);
        IndexLevel lv;
        lv.degree_cap = q->space.degree_cap();
        lv.dim_ker = kernel_dim(a, kernel_tol, k);
        lv.dim_ker_adjoint = kernel_dim(adjoint(a), kernel_tol, k);
        lv.index = lv.dim_ker - lv.dim_ker_adjoint;
        est.levels.push_back(lv);
    }
    if (!est.levels.empty()) est.index = est.levels.back().index;
    est.stable = est.levels.size() >= 2 &&
                 est.levels[est.levels.size() - 1].index == est.levels[est.levels.size() - 2].index;
    return est;
}

inline IndexEstimate estimate_index(const IdealSpec& ideal, double alpha, const Poly2& p,
                                    const std::vector<int>& degrees, double kernel_tol = 1e-7, int k = 2,
                                    double rank_tol = 1e-10, int buffer = 2) {
    std::vector<QuotientBasis> built;
    built.reserve(degrees.size());
    for (int cap : degrees)
        built.push_back(build_quotient(build_submodule(ideal, TruncatedSpace(WeightIndex(alpha), cap), rank_tol), buffer));
    std::vector<const QuotientBasis*> sweep;
    for (const auto& q : built) sweep.push_back(&q);
    return estimate_index(sweep, p, kernel_tol, k);
}

// ---------------------------------------------------------------------------
// cross projections

struct CrossProjection {
    Eigen::VectorXd values; // singular values of the compressed P_Q1 P_Q2, descending
    double norm = 0.0;
    double tail = 0.0;      // value at half the smaller interior dimension
    int interior_dim = 0;
};

/// Spectrum of P_Q1 P_Q2 compressed to ambient degree <= N - k. The leading
/// value is the operator norm of the compression; the tail entry is the
/// trend statistic used for asymptotic-orthogonality evidence.
inline CrossProjection cross_projection(const QuotientBasis& q1, const QuotientBasis& q2, int k) {
    if (q1.space.degree_cap() != q2.space.degree_cap() || q1.space.alpha() != q2.space.alpha())
        throw SpaceMismatch("cross projections need a common ambient space");
    const int cut = TruncatedSpace::dimension_of(q1.space.degree_cap() - k);
    Eigen::MatrixXcd overlap = q1.on_basis.adjoint() * q2.on_basis;
    Eigen::MatrixXcd compressed =
        q1.on_basis.topRows(cut) * (overlap * q2.on_basis.topRows(cut).adjoint());
    CrossProjection cp;
    cp.values = singular_values(compressed);
    cp.norm = cp.values.size() > 0 ? cp.values(0) : 0.0;
    cp.interior_dim = std::min(q1.interior_dim(k), q2.interior_dim(k));
    if (cp.values.size() > 0) {
        Eigen::Index idx = std::min<Eigen::Index>(cp.interior_dim / 2, cp.values.size() - 1);
        cp.tail = cp.values(idx);
    }
    return cp;
}

/// Operator norm of the compressed projection product.
inline double cross_projection_norm(const QuotientBasis& q1, const QuotientBasis& q2, int k) {
    return cross_projection(q1, q2, k).norm;
}

/// Tail statistic of a descending spectrum at half the interior dimension.
inline double tail_statistic(const Eigen::VectorXd& descending, int interior_dim) {
    if (descending.size() == 0) return 0.0;
    Eigen::Index idx = std::min<Eigen::Index>(interior_dim / 2, descending.size() - 1);
    return descending(std::max<Eigen::Index>(idx, 0));
}

// ---------------------------------------------------------------------------
// spectrum probes

struct ProbePoint {
    double radius = 1.0;
    double forward = 0.0; // smallest singular value of the stacked pair on the interior domain
    double adjoint = 0.0; // same for the stacked adjoints
};

struct SpectrumProbe {
    cplx lambda1, lambda2;
    std::vector<ProbePoint> points;
    double forward_min = 0.0;
    double adjoint_min = 0.0;
    double value = 0.0; // min over points and both directions
    int interior_dim = 0;
};

/// Smallest singular value of [S_z - l1; S_w - l2] and of the adjoint pair
/// on the interior domain, at the boundary point and at radial approach
/// points r * lambda.
inline SpectrumProbe spectrum_probe(const QuotientBasis& q, cplx lambda1, cplx lambda2, int k,
                                    const std::vector<double>& radii = {0.9, 0.99}) {
    const double mod = std::max(std::abs(lambda1), std::abs(lambda2));
    if (std::abs(mod - 1.0) > 1e-9) throw OutOfRange("probe point must touch the distinguished boundary");

    SpectrumProbe probe;
    probe.lambda1 = lambda1;
    probe.lambda2 = lambda2;
    probe.interior_dim = q.interior_dim(k);
    if (q.dim() == 0 || probe.interior_dim == 0) return probe;

    OperatorMatrix az = compress(Poly2::variable_z(), q);
    OperatorMatrix aw = compress(Poly2::variable_w(), q);
    std::vector<int> sel = az.interior_indices(k);
    const Eigen::Index m = Eigen::Index(sel.size());
    const Eigen::Index dim = az.mat.rows();

    std::vector<double> all_r = radii;
    all_r.push_back(1.0);
    for (double r : all_r) {
        cplx l1 = r * lambda1, l2 = r * lambda2;
        Eigen::MatrixXcd fz = az.mat, fw = aw.mat;
        fz.diagonal().array() -= l1;
        fw.diagonal().array() -= l2;
        Eigen::MatrixXcd stack_f(2 * dim, m), stack_a(2 * dim, m);
        for (Eigen::Index j = 0; j < m; ++j) {
            stack_f.col(j).head(dim) = fz.col(sel[std::size_t(j)]);
            stack_f.col(j).tail(dim) = fw.col(sel[std::size_t(j)]);
            stack_a.col(j).head(dim) = fz.adjoint().col(sel[std::size_t(j)]);
            stack_a.col(j).tail(dim) = fw.adjoint().col(sel[std::size_t(j)]);
        }
        ProbePoint pt;
        pt.radius = r;
        pt.forward = singular_values(stack_f).minCoeff();
        pt.adjoint = singular_values(stack_a).minCoeff();
        probe.points.push_back(pt);
    }
    probe.forward_min = probe.points[0].forward;
    probe.adjoint_min = probe.points[0].adjoint;
    for (const auto& pt : probe.points) {
        probe.forward_min = std::min(probe.forward_min, pt.forward);
        probe.adjoint_min = std::min(probe.adjoint_min, pt.adjoint);
    }
    probe.value = std::min(probe.forward_min, probe.adjoint_min);
    return probe;
}

// ---------------------------------------------------------------------------
// compactness trend verdict

enum class CompactnessVerdict { ConsistentWithCompact, ConsistentWithNonCompact, Inconclusive };

inline std::string to_string(CompactnessVerdict v) {
    switch (v) {
        case CompactnessVerdict::ConsistentWithCompact: return "consistent-with-compact";
        case CompactnessVerdict::ConsistentWithNonCompact: return "consistent-with-non-compact";
        default: return "inconclusive";
    }
}

/// Compare tail statistics across a degree sweep. Tails that shrink at
/// least in proportion to the interior growth (a ratio of 0.5 across a
/// doubling of the interior dimension) are compactness evidence; tails
/// that hold their level are plateau evidence.
inline CompactnessVerdict tail_verdict(const std::vector<double>& tails, const std::vector<int>& dims) {
    if (tails.size() < 2 || dims.size() != tails.size()) return CompactnessVerdict::Inconclusive;
    if (dims.front() <= 0 || dims.back() <= dims.front()) return CompactnessVerdict::Inconclusive;
    const double noise = 1e-12;
    if (tails.front() <= noise && tails.back() <= noise) return CompactnessVerdict::ConsistentWithCompact;
    if (tails.front() <= noise) return CompactnessVerdict::Inconclusive;
    const double ratio = tails.back() / tails.front();
    const double scale = double(dims.front()) / double(dims.back());
    if (ratio <= scale) return CompactnessVerdict::ConsistentWithCompact;
    if (ratio >= 0.9) return CompactnessVerdict::ConsistentWithNonCompact;
    return CompactnessVerdict::Inconclusive;
}

} // namespace bml
