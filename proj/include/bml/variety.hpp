#pragma once

// Geometry of a plane-curve zero set inside the bidisk: fiber sampling for
// the rank, a radial-tracking verdict on whether the closure meets the
// boundary only at the torus, and boundary point clouds for spectrum
// comparison.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "bml/poly.hpp"

namespace bml {

struct VarietyRank {
    int m = 0; // max fiber count in w over sampled z
    int n = 0; // max fiber count in z over sampled w
    int samples = 0;
    int degenerate_slices = 0;
    cplx witness_z{0.0, 0.0}; // sample attaining m
    cplx witness_w{0.0, 0.0}; // sample attaining n
};

/// Sample fibers over random disk points and report the maximal interior
/// root counts, multiplicity included.
inline VarietyRank variety_rank(const Poly2& p, int samples, double margin = 0.01,
                                std::uint64_t seed = 12345) {
    if (p.is_zero()) throw OutOfRange("rank of the zero polynomial");
    if (samples < 1) throw OutOfRange("need at least one sample");

    VarietyRank rank;
    rank.samples = samples;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    auto draw = [&]() {
        double r = std::sqrt(unit(rng));
        double t = 2.0 * std::numbers::pi * unit(rng);
        return cplx{r * std::cos(t), r * std::sin(t)};
    };

    for (int s = 0; s < samples; ++s) {
        cplx lambda = draw();
        try {
            RootsResult res = roots_in_w(p, lambda);
            int count = 0;
            for (cplx root : res.roots)
                if (std::abs(root) < 1.0 - margin) ++count;
            if (count > rank.m) {
                rank.m = count;
                rank.witness_z = lambda;
            }
        } catch (const IdenticallyZeroSlice&) {
            ++rank.degenerate_slices;
        }
        cplx mu = draw();
        try {
            RootsResult res = roots_in_z(p, mu);
            int count = 0;
            for (cplx root : res.roots)
                if (std::abs(root) < 1.0 - margin) ++count;
            if (count > rank.n) {
                rank.n = count;
                rank.witness_w = mu;
            }
        } catch (const IdenticallyZeroSlice&) {
            ++rank.degenerate_slices;
        }
    }
    return rank;
}

// ---------------------------------------------------------------------------
// distinguished verdict

enum class Verdict { Distinguished, NotDistinguished, Inconclusive };

inline std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::Distinguished: return "distinguished";
        case Verdict::NotDistinguished: return "not_distinguished";
        default: return "inconclusive";
    }
}

struct RadialRow {
    double radius = 0.0;
    double max_gap = 0.0; // max over fibers of 1 - |interior root|
};

struct DistinguishedVerdict {
    Verdict verdict = Verdict::Inconclusive;
    std::vector<std::pair<cplx, cplx>> witnesses; // closure points stuck inside one disk factor
    std::vector<RadialRow> table_w;               // fibers in w over z-circles
    std::vector<RadialRow> table_z;               // fibers in z over w-circles
    std::vector<double> radii;
    int angles = 0;
    double delta = 0.0;
};

namespace detail {

struct SideScan {
    std::vector<RadialRow> table;
    std::vector<std::pair<cplx, cplx>> offenders; // (circle point, stuck root) at the largest radius
    double max_gap_final = 0.0;
};

/// Track fiber roots of p(r e^{i t}, .) over growing radii; a track whose
/// distance to the circle stays above 2*delta at every radius marks a
/// closure point off the torus.
inline SideScan scan_side(const Poly2& p, const std::vector<double>& radii, int angles, double delta) {
    SideScan scan;
    scan.table.resize(radii.size());
    for (std::size_t ri = 0; ri < radii.size(); ++ri) scan.table[ri].radius = radii[ri];

    for (int a = 0; a < angles; ++a) {
        double theta = 2.0 * std::numbers::pi * double(a) / double(angles);
        cplx dir{std::cos(theta), std::sin(theta)};

        std::vector<std::vector<cplx>> per_radius;
        bool degenerate = false;
        for (double r : radii) {
            try {
                per_radius.push_back(roots_in_w(p, r * dir).roots);
            } catch (const IdenticallyZeroSlice&) {
                degenerate = true;
                break;
            }
        }
        if (degenerate) continue;

        for (std::size_t ri = 0; ri < radii.size(); ++ri)
            for (cplx root : per_radius[ri])
                if (std::abs(root) < 1.0)
                    scan.table[ri].max_gap = std::max(scan.table[ri].max_gap, 1.0 - std::abs(root));

        // nearest-point tracking from the smallest radius outward
        for (cplx start : per_radius[0]) {
            cplx current = start;
            bool stuck = std::abs(current) < 1.0 && (1.0 - std::abs(current)) > 2.0 * delta;
            for (std::size_t ri = 1; ri < radii.size() && stuck; ++ri) {
                const auto& roots = per_radius[ri];
                if (roots.empty()) {
                    stuck = false;
                    break;
                }
                cplx best = roots[0];
                for (cplx cand : roots)
                    if (std::abs(cand - current) < std::abs(best - current)) best = cand;
                current = best;
                stuck = std::abs(current) < 1.0 && (1.0 - std::abs(current)) > 2.0 * delta;
            }
            if (stuck) scan.offenders.emplace_back(radii.back() * dir, current);
        }
    }
    scan.max_gap_final = scan.table.back().max_gap;
    return scan;
}

} // namespace detail

/// Radial-decay classification of the closure of Z(p) in the closed bidisk.
inline DistinguishedVerdict distinguished_verdict(const Poly2& p,
                                                  std::vector<double> radii = {0.9, 0.99, 0.999},
                                                  int angles = 256, double delta = 0.05) {
    if (p.degree() < 1) throw OutOfRange("verdict needs a nonconstant polynomial");
    std::sort(radii.begin(), radii.end());

    DistinguishedVerdict out;
    out.radii = radii;
    out.angles = angles;
    out.delta = delta;

    detail::SideScan w_side = detail::scan_side(p, radii, angles, delta);
    detail::SideScan z_side = detail::scan_side(p.swapped(), radii, angles, delta);
    out.table_w = w_side.table;
    out.table_z = z_side.table;

    for (const auto& [circle, root] : w_side.offenders) out.witnesses.emplace_back(circle, root);
    for (const auto& [circle, root] : z_side.offenders) out.witnesses.emplace_back(root, circle);

    if (!out.witnesses.empty())
        out.verdict = Verdict::NotDistinguished;
    else if (w_side.max_gap_final <= delta && z_side.max_gap_final <= delta)
        out.verdict = Verdict::Distinguished;
    else
        out.verdict = Verdict::Inconclusive;
    return out;
}

// ---------------------------------------------------------------------------
// boundary clouds

struct CloudPoint {
    double theta_z = 0.0;
    double theta_w = 0.0;
    cplx z{0.0, 0.0};
    cplx w{0.0, 0.0};
};

struct BoundaryCloud {
    std::vector<CloudPoint> points;
};

/// Solve the fibers over a grid of circle points and keep roots on the unit
/// circle (within 1e-6, normalized to modulus one), both orientations,
/// deduplicated in angle space.
inline BoundaryCloud boundary_cloud(const Poly2& p, int count = 256) {
    if (p.degree() < 1) throw OutOfRange("cloud needs a nonconstant polynomial");
    const double keep_tol = 1e-6;
    BoundaryCloud cloud;

    auto angle = [](cplx v) {
        double t = std::arg(v);
        if (t < 0.0) t += 2.0 * std::numbers::pi;
        return t;
    };

    auto scan = [&](const Poly2& poly, bool swapped) {
        for (int a = 0; a < count; ++a) {
            double theta = 2.0 * std::numbers::pi * double(a) / double(count);
            cplx zc{std::cos(theta), std::sin(theta)};
            std::vector<cplx> roots;
            try {
                roots = roots_in_w(poly, zc).roots;
            } catch (const IdenticallyZeroSlice&) {
                continue;
            }
            for (cplx root : roots) {
                double mod = std::abs(root);
                if (mod < 1.0 - keep_tol || mod > 1.0 + keep_tol) continue;
                cplx wc = root / mod;
                CloudPoint pt;
                if (!swapped) {
                    pt.z = zc;
                    pt.w = wc;
                } else {
                    pt.z = wc;
                    pt.w = zc;
                }
                pt.theta_z = angle(pt.z);
                pt.theta_w = angle(pt.w);
                cloud.points.push_back(pt);
            }
        }
    };
    scan(p, false);
    scan(p.swapped(), true);

    std::sort(cloud.points.begin(), cloud.points.end(), [](const CloudPoint& a, const CloudPoint& b) {
        if (a.theta_z != b.theta_z) return a.theta_z < b.theta_z;
        return a.theta_w < b.theta_w;
    });
    std::vector<CloudPoint> dedup;
    for (const auto& pt : cloud.points) {
        bool dup = false;
        for (auto it = dedup.rbegin(); it != dedup.rend(); ++it) {
            if (pt.theta_z - it->theta_z > 1e-8) break;
            if (std::abs(pt.theta_w - it->theta_w) <= 1e-8) {
                dup = true;
                break;
            }
        }
        if (!dup) dedup.push_back(pt);
    }
    cloud.points.swap(dedup);
    return cloud;
}

} // namespace bml
