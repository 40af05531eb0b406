#pragma once

// Report assembly for the command-line surface: every command produces a
// JSON envelope (schema "bml/1") echoing its full configuration, plus
// optional CSV tables of singular values. Identical configurations and
// seeds reproduce the numeric payload exactly.

#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bml/diagnostics.hpp"
#include "bml/grassmann.hpp"
#include "bml/quotient.hpp"
#include "bml/variety.hpp"

namespace bml {

using nlohmann::json;

inline constexpr const char* kSchema = "bml/1";
inline constexpr const char* kToolVersion = "0.1.0";

struct RunConfig {
    std::string command;
    std::string ideal_text;
    std::string ideal2_text;
    std::string poly_text;
    std::string matrix_text;
    double alpha = -1.0;
    std::vector<int> degrees{12, 16, 20};
    int buffer = 2;
    double rank_tol = 1e-10;
    double kernel_tol = 1e-7;
    double support_tol = 1e-8;
    double delta = 0.05;
    double margin = 0.01;
    int samples = 400;
    int angles = 256;
    std::vector<double> radii{0.9, 0.99, 0.999};
    std::vector<std::pair<double, double>> probes; // boundary angles (theta_z, theta_w)
    std::uint64_t seed = 12345;
    int gr_copies = 2;
    int gr_degree = 4;
    int gr_action_cap = 1;
    int gr_trials = 8;
    bool shift_by_w = false;
    std::string out_path;
    std::string csv_dir;
};

inline json to_json(const RunConfig& cfg) {
    json j;
    j["command"] = cfg.command;
    if (!cfg.ideal_text.empty()) j["ideal"] = cfg.ideal_text;
    if (!cfg.ideal2_text.empty()) j["ideal2"] = cfg.ideal2_text;
    if (!cfg.poly_text.empty()) j["poly"] = cfg.poly_text;
    if (!cfg.matrix_text.empty()) j["matrix"] = cfg.matrix_text;
    j["alpha"] = cfg.alpha;
    j["degrees"] = cfg.degrees;
    j["buffer"] = cfg.buffer;
    j["rank_tol"] = cfg.rank_tol;
    j["kernel_tol"] = cfg.kernel_tol;
    j["support_tol"] = cfg.support_tol;
    j["delta"] = cfg.delta;
    j["margin"] = cfg.margin;
    j["samples"] = cfg.samples;
    j["angles"] = cfg.angles;
    j["radii"] = cfg.radii;
    j["seed"] = cfg.seed;
    if (cfg.command == "grassmann") {
        j["m"] = cfg.gr_copies;
        j["degree"] = cfg.gr_degree;
        j["action_cap"] = cfg.gr_action_cap;
        j["trials"] = cfg.gr_trials;
        j["shift_by_w"] = cfg.shift_by_w;
    }
    if (!cfg.probes.empty()) {
        json p = json::array();
        for (const auto& [tz, tw] : cfg.probes) p.push_back({tz, tw});
        j["probes"] = p;
    }
    return j;
}

inline json vector_json(const Eigen::VectorXd& v) {
    json arr = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
    return arr;
}

inline json cplx_json(cplx v) { return json::array({v.real(), v.imag()}); }

// ---------------------------------------------------------------------------
// CSV helpers (fixed %.17g formatting for byte-stable archives)

class CsvWriter {
public:
    explicit CsvWriter(const std::filesystem::path& path) : out_(path) {
        if (!out_) throw std::invalid_argument("cannot open CSV output: " + path.string());
    }
    void header(const std::string& line) { out_ << line << "\n"; }
    void row(const std::vector<double>& values, const std::vector<long>& ints = {}) {
        bool first = true;
        for (long v : ints) {
            if (!first) out_ << ",";
            out_ << v;
            first = false;
        }
        char buf[64];
        for (double v : values) {
            if (!first) out_ << ",";
            std::snprintf(buf, sizeof(buf), "%.17g", v);
            out_ << buf;
            first = false;
        }
        out_ << "\n";
    }

private:
    std::ofstream out_;
};

// ---------------------------------------------------------------------------
// command payloads

namespace detail_report {

inline QuotientBasis build_level(const IdealSpec& ideal, double alpha, int cap, const RunConfig& cfg) {
    TruncatedSpace space(WeightIndex(alpha), cap);
    return build_quotient(build_submodule(ideal, space, cfg.rank_tol), cfg.buffer, cfg.support_tol);
}

} // namespace detail_report

inline json analyze_payload(const RunConfig& cfg) {
    IdealSpec ideal = parse_ideal(cfg.ideal_text);
    const Poly2 z = Poly2::variable_z(), w = Poly2::variable_w();
    const std::vector<std::pair<std::string, std::pair<Poly2, Poly2>>> pairs = {
        {"zz", {z, z}}, {"zw", {z, w}}, {"wz", {w, z}}, {"ww", {w, w}}};

    json levels = json::array();
    std::map<std::string, std::vector<double>> tails;
    std::vector<int> dims;

    std::vector<QuotientBasis> built;
    for (int cap : cfg.degrees) built.push_back(detail_report::build_level(ideal, cfg.alpha, cap, cfg));

    std::optional<CsvWriter> csv, defect_csv;
    if (!cfg.csv_dir.empty()) {
        std::filesystem::create_directories(cfg.csv_dir);
        csv.emplace(std::filesystem::path(cfg.csv_dir) / "commutators.csv");
        csv->header("N,buffer,family,index,value");
        defect_csv.emplace(std::filesystem::path(cfg.csv_dir) / "defects.csv");
        defect_csv->header("N,buffer,symbol,side,index,value");
    }

    for (std::size_t li = 0; li < built.size(); ++li) {
        const QuotientBasis& q = built[li];
        const int cap = cfg.degrees[li];
        json level;
        level["N"] = cap;
        level["quotient_dim"] = q.dim();
        level["submodule_rank"] = q.submodule_rank;

        for (int k : {cfg.buffer, cfg.buffer + 2}) {
            json block;
            block["buffer"] = k;
            block["interior_dim"] = q.interior_dim(k);

            std::vector<Eigen::VectorXd> merged_parts;
            json comms;
            for (std::size_t fam = 0; fam < pairs.size(); ++fam) {
                const auto& [name, pq] = pairs[fam];
                Eigen::VectorXd sv = commutator_spectrum(q, pq.first, pq.second, k);
                comms[name] = vector_json(sv);
                merged_parts.push_back(sv);
                if (csv && k == cfg.buffer)
                    for (Eigen::Index i = 0; i < sv.size(); ++i) csv->row({sv(i)}, {cap, k, long(fam), i});
                if (k == cfg.buffer) tails[name].push_back(tail_statistic(sv, q.interior_dim(k)));
            }
            block["commutators"] = comms;

            json defects;
            const std::vector<std::pair<std::string, Poly2>> symbols{{"z", z}, {"w", w}};
            for (std::size_t si = 0; si < symbols.size(); ++si) {
                UnitarityDefects d = essential_unitarity(q, symbols[si].second, k);
                defects[symbols[si].first] = {{"left", vector_json(d.left)}, {"right", vector_json(d.right)}};
                if (defect_csv && k == cfg.buffer) {
                    for (Eigen::Index i = 0; i < d.left.size(); ++i)
                        defect_csv->row({d.left(i)}, {cap, k, long(si), 0, i});
                    for (Eigen::Index i = 0; i < d.right.size(); ++i)
                        defect_csv->row({d.right(i)}, {cap, k, long(si), 1, i});
                }
            }
            block["defects"] = defects;

            MacaevStat mac = macaev_stat(merge_descending(merged_parts));
            block["macaev"] = {{"sup", mac.sup},
                               {"tail_slope", mac.tail_slope},
                               {"bounded_trend", mac.bounded_trend},
                               {"sigma", mac.sigma}};

            OperatorMatrix az = compress(z, q), aw = compress(w, q);
            block["kernel_dims"] = {{"z", kernel_dim(az, cfg.kernel_tol, k)},
                                    {"z_adjoint", kernel_dim(adjoint(az), cfg.kernel_tol, k)},
                                    {"w", kernel_dim(aw, cfg.kernel_tol, k)},
                                    {"w_adjoint", kernel_dim(adjoint(aw), cfg.kernel_tol, k)}};
            level["blocks"].push_back(block);
        }

        if (!cfg.probes.empty()) {
            json probes = json::array();
            for (const auto& [tz, tw] : cfg.probes) {
                cplx l1 = std::polar(1.0, tz), l2 = std::polar(1.0, tw);
                SpectrumProbe probe = spectrum_probe(q, l1, l2, cfg.buffer);
                json pj;
                pj["lambda"] = {cplx_json(l1), cplx_json(l2)};
                pj["interior_dim"] = probe.interior_dim;
                pj["forward_min"] = probe.forward_min;
                pj["adjoint_min"] = probe.adjoint_min;
                pj["value"] = probe.value;
                json pts = json::array();
                for (const auto& pt : probe.points)
                    pts.push_back({{"radius", pt.radius}, {"forward", pt.forward}, {"adjoint", pt.adjoint}});
                pj["points"] = pts;
                probes.push_back(pj);
            }
            level["probes"] = probes;
        }
        dims.push_back(q.interior_dim(cfg.buffer));
        levels.push_back(level);
    }

    json verdicts;
    for (const auto& [name, tail_list] : tails) verdicts[name] = to_string(tail_verdict(tail_list, dims));

    json payload;
    payload["ideal"] = cfg.ideal_text;
    payload["alpha"] = cfg.alpha;
    payload["levels"] = levels;
    payload["verdicts"] = verdicts;
    if (!cfg.poly_text.empty()) {
        std::vector<const QuotientBasis*> sweep;
        for (const auto& q : built) sweep.push_back(&q);
        IndexEstimate est = estimate_index(sweep, parse_poly(cfg.poly_text), cfg.kernel_tol, cfg.buffer);
        json lv = json::array();
        for (const auto& l : est.levels)
            lv.push_back({{"N", l.degree_cap},
                          {"dim_ker", l.dim_ker},
                          {"dim_ker_adjoint", l.dim_ker_adjoint},
                          {"index", l.index}});
        payload["index"] = {{"poly", cfg.poly_text}, {"value", est.index}, {"stable", est.stable}, {"levels", lv}};
    }
    return payload;
}

inline json variety_payload(const RunConfig& cfg) {
    Poly2 p = parse_poly(cfg.poly_text);
    json payload;
    payload["poly"] = cfg.poly_text;

    VarietyRank rank = variety_rank(p, cfg.samples, cfg.margin, cfg.seed);
    payload["rank"] = {{"m", rank.m},
                       {"n", rank.n},
                       {"samples", rank.samples},
                       {"degenerate_slices", rank.degenerate_slices},
                       {"witness_z", cplx_json(rank.witness_z)},
                       {"witness_w", cplx_json(rank.witness_w)}};

    DistinguishedVerdict v = distinguished_verdict(p, cfg.radii, cfg.angles, cfg.delta);
    json witnesses = json::array();
    for (const auto& [wz, ww] : v.witnesses) witnesses.push_back({cplx_json(wz), cplx_json(ww)});
    json table_w = json::array(), table_z = json::array();
    for (const auto& row : v.table_w) table_w.push_back({{"radius", row.radius}, {"max_gap", row.max_gap}});
    for (const auto& row : v.table_z) table_z.push_back({{"radius", row.radius}, {"max_gap", row.max_gap}});
    payload["verdict"] = {{"value", to_string(v.verdict)},
                          {"delta", v.delta},
                          {"angles", v.angles},
                          {"radii", v.radii},
                          {"witnesses", witnesses},
                          {"radial_table_w", table_w},
                          {"radial_table_z", table_z}};

    BoundaryCloud cloud = boundary_cloud(p, cfg.angles);
    payload["boundary_cloud"] = {{"count", cloud.points.size()}};
    if (!cfg.csv_dir.empty()) {
        std::filesystem::create_directories(cfg.csv_dir);
        CsvWriter csv(std::filesystem::path(cfg.csv_dir) / "boundary_cloud.csv");
        csv.header("theta_z,theta_w");
        for (const auto& pt : cloud.points) csv.row({pt.theta_z, pt.theta_w});
    }
    return payload;
}

inline json grassmann_payload(const RunConfig& cfg) {
    PolyMatrix a = parse_poly_matrix(cfg.matrix_text);
    if (cfg.shift_by_w) {
        PolyMatrix shifted(a.m);
        for (int i = 0; i < a.m; ++i)
            for (int j = 0; j < a.m; ++j) {
                shifted.at(i, j) = cplx(-1.0) * a.at(i, j);
                if (i == j) shifted.at(i, j) = shifted.at(i, j) + Poly2::variable_w();
            }
        a = shifted;
    }

    GrassmannBasis basis = build_grassmann(cfg.gr_copies, cfg.gr_degree, cfg.gr_action_cap, cfg.rank_tol);
    DeterminantCheck check = verify_determinant_identity(basis, a, cfg.gr_trials, cfg.seed);

    json payload;
    payload["m"] = cfg.gr_copies;
    payload["degree"] = cfg.gr_degree;
    payload["action_cap"] = cfg.gr_action_cap;
    payload["base_dim"] = basis.dim();
    payload["total_dim"] = basis.space.total_dim();
    payload["det"] = check.det.to_string();
    payload["trials"] = check.trials;
    payload["max_identity_residual"] = check.max_identity_residual;
    payload["max_invariance_residual"] = check.max_invariance_residual;
    return payload;
}

inline json sweep_payload(const RunConfig& cfg) {
    IdealSpec ideal = parse_ideal(cfg.ideal_text);
    json levels = json::array();
    Eigen::VectorXcd prev_proj;
    int prev_cap = 0;

    const std::vector<Poly2> probes = {Poly2::one(), Poly2::variable_z(), Poly2::variable_w(),
                                       Poly2::variable_z() * Poly2::variable_w()};
    for (int cap : cfg.degrees) {
        QuotientBasis q = detail_report::build_level(ideal, cfg.alpha, cap, cfg);
        json level;
        level["N"] = cap;
        level["ambient_dim"] = q.space.dim();
        level["submodule_rank"] = q.submodule_rank;
        level["quotient_dim"] = q.dim();
        level["interior_dims"] = {{"b", q.interior_dim(cfg.buffer)}, {"b_plus_2", q.interior_dim(cfg.buffer + 2)}};

        Eigen::VectorXcd probe_vec = Eigen::VectorXcd::Zero(q.space.dim());
        for (const Poly2& p : probes)
            probe_vec += to_orthonormal(q.space, poly_to_vector(q.space, p).coords);
        probe_vec /= probe_vec.norm();
        Eigen::VectorXcd proj = q.projector() * probe_vec;
        if (prev_proj.size() > 0) {
            int common = TruncatedSpace::dimension_of(prev_cap);
            level["projection_delta"] = (proj.head(common) - prev_proj.head(common)).norm();
        }
        prev_proj = proj;
        prev_cap = cap;
        levels.push_back(level);
    }
    json payload;
    payload["ideal"] = cfg.ideal_text;
    payload["alpha"] = cfg.alpha;
    payload["levels"] = levels;
    return payload;
}

inline json index_payload(const RunConfig& cfg) {
    IdealSpec ideal = parse_ideal(cfg.ideal_text);
    Poly2 p = parse_poly(cfg.poly_text);
    IndexEstimate est =
        estimate_index(ideal, cfg.alpha, p, cfg.degrees, cfg.kernel_tol, cfg.buffer, cfg.rank_tol, cfg.buffer);
    json lv = json::array();
    for (const auto& l : est.levels)
        lv.push_back({{"N", l.degree_cap},
                      {"dim_ker", l.dim_ker},
                      {"dim_ker_adjoint", l.dim_ker_adjoint},
                      {"index", l.index}});
    json payload;
    payload["ideal"] = cfg.ideal_text;
    payload["poly"] = cfg.poly_text;
    payload["alpha"] = cfg.alpha;
    payload["kernel_tol"] = cfg.kernel_tol;
    payload["index"] = est.index;
    payload["stable"] = est.stable;
    payload["levels"] = lv;
    return payload;
}

inline json orthogonality_payload(const RunConfig& cfg) {
    IdealSpec ideal1 = parse_ideal(cfg.ideal_text);
    IdealSpec ideal2 = parse_ideal(cfg.ideal2_text);
    json levels = json::array();
    std::optional<CsvWriter> csv;
    if (!cfg.csv_dir.empty()) {
        std::filesystem::create_directories(cfg.csv_dir);
        csv.emplace(std::filesystem::path(cfg.csv_dir) / "cross_projection.csv");
        csv->header("N,index,value");
    }
    for (int cap : cfg.degrees) {
        QuotientBasis q1 = detail_report::build_level(ideal1, cfg.alpha, cap, cfg);
        QuotientBasis q2 = detail_report::build_level(ideal2, cfg.alpha, cap, cfg);
        CrossProjection cp = cross_projection(q1, q2, cfg.buffer);
        json level;
        level["N"] = cap;
        level["norm"] = cp.norm;
        level["tail"] = cp.tail;
        level["interior_dim"] = cp.interior_dim;
        Eigen::VectorXd head = cp.values.head(std::min<Eigen::Index>(cp.values.size(), 16));
        level["leading_values"] = vector_json(head);
        if (csv)
            for (Eigen::Index i = 0; i < cp.values.size(); ++i) csv->row({cp.values(i)}, {cap, i});
        levels.push_back(level);
    }
    json payload;
    payload["ideal"] = cfg.ideal_text;
    payload["ideal2"] = cfg.ideal2_text;
    payload["alpha"] = cfg.alpha;
    payload["levels"] = levels;
    return payload;
}

// ---------------------------------------------------------------------------
// envelope

inline void validate(const RunConfig& cfg) {
    if (!(cfg.rank_tol > 0.0) || !(cfg.kernel_tol > 0.0) || !(cfg.support_tol > 0.0) || !(cfg.delta > 0.0))
        throw OutOfRange("tolerances must be positive");
    if (cfg.degrees.empty()) throw OutOfRange("degree list is empty");
    for (std::size_t i = 1; i < cfg.degrees.size(); ++i)
        if (cfg.degrees[i] <= cfg.degrees[i - 1]) throw OutOfRange("degree list must be strictly increasing");
}

inline json run_command(const RunConfig& cfg) {
    validate(cfg);
    json payload;
    if (cfg.command == "analyze")
        payload = analyze_payload(cfg);
    else if (cfg.command == "variety")
        payload = variety_payload(cfg);
    else if (cfg.command == "grassmann")
        payload = grassmann_payload(cfg);
    else if (cfg.command == "sweep")
        payload = sweep_payload(cfg);
    else if (cfg.command == "index")
        payload = index_payload(cfg);
    else if (cfg.command == "orthogonality")
        payload = orthogonality_payload(cfg);
    else
        throw OutOfRange("unknown command: " + cfg.command);

    json envelope;
    envelope["schema"] = kSchema;
    envelope["tool"] = {{"name", "bml"}, {"version", kToolVersion}};
    char stamp[32];
    std::time_t now = std::time(nullptr);
    std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    envelope["generated_utc"] = stamp;
    envelope["config"] = to_json(cfg);
    envelope["payload"] = payload;
    return envelope;
}

inline void write_envelope(const json& envelope, const std::string& out_path) {
    if (out_path.empty()) return;
    std::ofstream out(out_path);
    if (!out) throw std::invalid_argument("cannot open output path: " + out_path);
    out << envelope.dump(2) << "\n";
}

} // namespace bml
