// Command-line surface for the quotient-module laboratory: builds truncated
// quotients of weighted Bergman spaces on the bidisk and serializes
// diagnostics, variety geometry and tensor-quotient checks.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bml/report.hpp"

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
}

template <typename T>
std::vector<T> parse_list(const std::string& text) {
    std::vector<T> out;
    std::stringstream ss(text);
    std::string piece;
    while (std::getline(ss, piece, ',')) {
        std::stringstream conv(trim(piece));
        T v;
        conv >> v;
        if (conv.fail()) throw bml::ParseError("bad list entry in config: " + piece, 0);
        out.push_back(v);
    }
    return out;
}

/// Flat "key = value" configuration. Applied before flag parsing, so flags
/// override file values.
void load_config_file(const std::string& path, bml::RunConfig& cfg) {
    std::ifstream in(path);
    if (!in) throw bml::ParseError("cannot open config file: " + path, 0);
    std::string line;
    while (std::getline(in, line)) {
        std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        auto eq = stripped.find('=');
        if (eq == std::string::npos) throw bml::ParseError("config line needs 'key = value': " + line, 0);
        std::string key = trim(stripped.substr(0, eq));
        std::string value = trim(stripped.substr(eq + 1));
        for (char& c : key)
            if (c == '_') c = '-';

        if (key == "alpha") cfg.alpha = std::stod(value);
        else if (key == "degrees") cfg.degrees = parse_list<int>(value);
        else if (key == "buffer") cfg.buffer = std::stoi(value);
        else if (key == "rank-tol") cfg.rank_tol = std::stod(value);
        else if (key == "kernel-tol") cfg.kernel_tol = std::stod(value);
        else if (key == "support-tol") cfg.support_tol = std::stod(value);
        else if (key == "delta") cfg.delta = std::stod(value);
        else if (key == "margin") cfg.margin = std::stod(value);
        else if (key == "samples") cfg.samples = std::stoi(value);
        else if (key == "angles") cfg.angles = std::stoi(value);
        else if (key == "radii") cfg.radii = parse_list<double>(value);
        else if (key == "seed") cfg.seed = std::stoull(value);
        else if (key == "ideal") cfg.ideal_text = value;
        else if (key == "ideal2") cfg.ideal2_text = value;
        else if (key == "poly") cfg.poly_text = value;
        else if (key == "matrix") cfg.matrix_text = value;
        else if (key == "m") cfg.gr_copies = std::stoi(value);
        else if (key == "degree") cfg.gr_degree = std::stoi(value);
        else if (key == "action-cap") cfg.gr_action_cap = std::stoi(value);
        else if (key == "trials") cfg.gr_trials = std::stoi(value);
        else if (key == "shift-by-w") cfg.shift_by_w = value == "true" || value == "1";
        else if (key == "out") cfg.out_path = value;
        else if (key == "csv-dir") cfg.csv_dir = value;
        else throw bml::ParseError("unknown config key: " + key, 0);
    }
}

void add_common(CLI::App* cmd, bml::RunConfig& cfg, std::string& config_path) {
    cmd->add_option("--config", config_path, "flat key = value configuration file; flags override");
    cmd->add_option("--alpha", cfg.alpha, "weight index of the space (-1 selects the Hardy space)");
    cmd->add_option("--degrees", cfg.degrees, "degree caps to sweep")->delimiter(',');
    cmd->add_option("--buffer", cfg.buffer, "interior margin; symbols of degree up to this compress cleanly");
    cmd->add_option("--rank-tol", cfg.rank_tol, "relative rank tolerance of the submodule SVD");
    cmd->add_option("--kernel-tol", cfg.kernel_tol, "relative kernel tolerance on squared singular values");
    cmd->add_option("--support-tol", cfg.support_tol, "mass tolerance of the quotient grading");
    cmd->add_option("--delta", cfg.delta, "boundary-gap threshold of the variety verdict");
    cmd->add_option("--samples", cfg.samples, "fiber samples for the variety rank");
    cmd->add_option("--seed", cfg.seed, "random seed echoed into the report");
    cmd->add_option("--out", cfg.out_path, "write the JSON report here");
    cmd->add_option("--csv-dir", cfg.csv_dir, "write CSV tables into this directory");
}

int run(const bml::RunConfig& cfg, bool quiet) {
    bml::json envelope = bml::run_command(cfg);
    bml::write_envelope(envelope, cfg.out_path);
    if (!quiet) std::cout << envelope["payload"].dump(2) << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for quotient modules of weighted Bergman spaces over the bidisk"};
    app.require_subcommand(1);
    app.fallthrough();

    bml::RunConfig cfg;
    bool quiet = false;
    app.add_flag("--quiet", quiet, "suppress the payload dump on stdout");

    // file values are loaded before flag parsing so that flags win
    std::string config_path;
    for (int i = 1; i + 1 < argc; ++i)
        if (std::string(argv[i]) == "--config") config_path = argv[i + 1];
    if (!config_path.empty()) {
        try {
            load_config_file(config_path, cfg);
        } catch (const std::exception& e) {
            std::cerr << "input error: " << e.what() << "\n";
            return 2;
        }
    }

    std::vector<double> probe_a, probe_b;

    CLI::App* analyze = app.add_subcommand("analyze", "essential-normality diagnostics over a degree sweep");
    analyze->add_option("--ideal", cfg.ideal_text, "ideal generators, ';' separated")->required();
    analyze->add_option("--poly", cfg.poly_text, "optional symbol whose index is estimated alongside");
    analyze->add_option("--probe-z", probe_a, "boundary probe angles in z (radians)")->delimiter(',');
    analyze->add_option("--probe-w", probe_b, "boundary probe angles in w (radians)")->delimiter(',');
    add_common(analyze, cfg, config_path);

    CLI::App* variety = app.add_subcommand("variety", "fiber rank, distinguished verdict and boundary cloud");
    variety->add_option("--poly", cfg.poly_text, "defining polynomial")->required();
    variety->add_option("--angles", cfg.angles, "boundary angles per scan");
    variety->add_option("--radii", cfg.radii, "radial approach radii")->delimiter(',');
    variety->add_option("--margin", cfg.margin, "interior margin for fiber counting");
    add_common(variety, cfg, config_path);

    CLI::App* grassmann = app.add_subcommand("grassmann", "antisymmetric tensor quotient determinant checks");
    grassmann->add_option("--matrix", cfg.matrix_text, "matrix of polynomials, e.g. [[0,z],[z,0]]")->required();
    grassmann->add_option("--m", cfg.gr_copies, "tensor copies (2 or 3)");
    grassmann->add_option("--degree", cfg.gr_degree, "per-slot bidegree cap");
    grassmann->add_option("--action-cap", cfg.gr_action_cap, "degree cap of the difference actions");
    grassmann->add_option("--trials", cfg.gr_trials, "random quotient vectors per check");
    grassmann->add_flag("--shift-by-w", cfg.shift_by_w, "replace the matrix A by w*I - A");
    add_common(grassmann, cfg, config_path);

    CLI::App* sweep = app.add_subcommand("sweep", "dimension and convergence telemetry over a degree sweep");
    sweep->add_option("--ideal", cfg.ideal_text, "ideal generators, ';' separated")->required();
    add_common(sweep, cfg, config_path);

    CLI::App* index = app.add_subcommand("index", "kernel-count index estimate of a compressed symbol");
    index->add_option("--ideal", cfg.ideal_text, "ideal generators, ';' separated")->required();
    index->add_option("--poly", cfg.poly_text, "symbol, nonvanishing on the boundary variety")->required();
    add_common(index, cfg, config_path);

    CLI::App* orth = app.add_subcommand("orthogonality", "cross-projection spectra of two quotients");
    orth->add_option("--ideal", cfg.ideal_text, "first ideal")->required();
    orth->add_option("--ideal2", cfg.ideal2_text, "second ideal")->required();
    add_common(orth, cfg, config_path);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        app.exit(e);
        return 2;
    }

    for (std::size_t i = 0; i < probe_a.size() && i < probe_b.size(); ++i)
        cfg.probes.emplace_back(probe_a[i], probe_b[i]);

    for (CLI::App* sub : {analyze, variety, grassmann, sweep, index, orth})
        if (sub->parsed()) cfg.command = sub->get_name();

    try {
        return run(cfg, quiet);
    } catch (const bml::ParseError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    }
}
