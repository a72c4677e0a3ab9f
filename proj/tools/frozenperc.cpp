// frozenperc: command-line front end for simulation, estimation, experiments
// and rendering. Options may also come from a config file (--config), written
// as TOML/INI "key = value" lines; section names select subcommands, e.g.
//
//   seed = 7
//   [simulate]
//   rule = "diam"
//   N = 30
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "frozenperc/estimators.hpp"
#include "frozenperc/experiments.hpp"
#include "frozenperc/frozen.hpp"
#include "frozenperc/render.hpp"

using namespace frozenperc;

namespace {

struct ProcessArgs {
    std::string rule = "diam";
    std::string boundary = "original";
    double n = 30.0;
    double domain = 0.0;  // 0 selects 4N
};

void add_process_flags(CLI::App* cmd, ProcessArgs& a) {
    cmd->add_option("--rule", a.rule, "Size rule: diam | vol")->capture_default_str();
    cmd->add_option("--boundary", a.boundary, "Boundary rule: original | modified")->capture_default_str();
    cmd->add_option("--N", a.n, "Freezing threshold N (>= 1)")->capture_default_str();
    cmd->add_option("--domain", a.domain, "Radius of the simulated box (0: 4N)")->capture_default_str();
}

ProcessConfig to_config(const ProcessArgs& a, std::uint64_t seed) {
    ProcessConfig c;
    c.size_rule = parse_size_rule(a.rule);
    c.boundary_rule = parse_boundary_rule(a.boundary);
    c.threshold = a.n;
    c.domain = Region::box(a.domain > 0.0 ? a.domain : 4.0 * a.n);
    c.seed = seed;
    c.validate();
    return c;
}

Orientation parse_orientation(const std::string& s) {
    if (s == "horizontal" || s == "h") return Orientation::horizontal;
    if (s == "vertical" || s == "v") return Orientation::vertical;
    throw std::invalid_argument("unknown orientation '" + s + "'");
}

Color parse_color(const std::string& s) {
    if (s == "black") return Color::black;
    if (s == "white") return Color::white;
    throw std::invalid_argument("unknown color '" + s + "'");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Frozen percolation on the triangular lattice"};
    app.require_subcommand(1);
    app.failure_message(CLI::FailureMessage::help);
    app.set_config("--config", "", "Read options from a TOML/INI file");

    std::uint64_t seed = 1;
    std::int64_t replicas = 100;
    unsigned workers = 0;
    app.add_option("--seed", seed, "Base seed")->capture_default_str();
    app.add_option("--replicas", replicas, "Monte Carlo replicas")->capture_default_str();
    app.add_option("--workers", workers, "Worker threads (0: hardware concurrency)")->capture_default_str();

    // simulate
    ProcessArgs sim;
    std::string sim_out;
    auto* simulate = app.add_subcommand("simulate", "Run one frozen-percolation process and dump its final state");
    add_process_flags(simulate, sim);
    simulate->add_option("--seed", seed, "Field seed");
    simulate->add_option("--out", sim_out, "Output file for the binary final state")->required();

    // estimate
    std::string estimand;
    int est_n = 16, est_m = 4, max_n = 1024;
    double p = kCriticalP, radius = 0.0, width = 0.0, height = 0.0;
    double p_white = kCriticalP;
    std::string orientation = "horizontal", color = "black";
    auto* estimate = app.add_subcommand("estimate", "Monte Carlo estimate, printed as JSON");
    estimate->add_option("estimand", estimand, "pi1 | pi4 | L | theta | crossing | net")
        ->required()
        ->check(CLI::IsMember({"pi1", "pi4", "L", "theta", "crossing", "net"}));
    estimate->add_option("--n", est_n, "Scale n (pi1, pi4, net)")->capture_default_str();
    estimate->add_option("--m", est_m, "Net mesh m")->capture_default_str();
    estimate->add_option("--p", p, "Parameter p")->capture_default_str();
    estimate->add_option("--p-white", p_white, "White parameter of the passage-site count (pi4)")
        ->capture_default_str();
    estimate->add_option("--radius", radius, "Box radius M for theta (0: 2n)");
    estimate->add_option("--width", width, "Rectangle width for crossing (0: 2n)");
    estimate->add_option("--height", height, "Rectangle height for crossing (0: n)");
    estimate->add_option("--orientation", orientation, "horizontal | vertical")->capture_default_str();
    estimate->add_option("--color", color, "black | white")->capture_default_str();
    estimate->add_option("--max-n", max_n, "Largest scale scanned for L")->capture_default_str();
    estimate->add_option("--seed", seed, "Base seed");
    estimate->add_option("--replicas", replicas, "Monte Carlo replicas");

    // experiment
    std::string experiment;
    ProcessArgs ex;
    ex.n = 64.0;
    double k = 1.0;
    std::optional<double> pi4_hat;
    std::int64_t pi4_replicas = 200;
    std::vector<double> lambdas{0.5, 2.0, 8.0}, epsilons{0.05}, m_grid;
    std::string out_dir = ".";
    auto* exp = app.add_subcommand("experiment", "Run a registered experiment; writes <name>.csv and <name>.json");
    exp->add_option("name", experiment, "freeze-window | origin-freeze | macro-cluster | volume-scan")
        ->required()
        ->check(CLI::IsMember({"freeze-window", "origin-freeze", "macro-cluster", "volume-scan"}));
    add_process_flags(exp, ex);
    exp->add_option("--K", k, "Observation box B_{KN} (freeze-window)")->capture_default_str();
    exp->add_option("--lambdas", lambdas, "Lambda grid (freeze-window)")->delimiter(',');
    exp->add_option("--pi4", pi4_hat, "Known pi4(N); estimated when omitted (freeze-window)");
    exp->add_option("--pi4-replicas", pi4_replicas, "Replicas for the pi4(N) estimate")->capture_default_str();
    exp->add_option("--epsilons", epsilons, "Epsilon grid (macro-cluster)")->delimiter(',');
    exp->add_option("--m-grid", m_grid, "Box radii m (volume-scan)")->delimiter(',');
    exp->add_option("--out-dir", out_dir, "Output directory")->capture_default_str();
    exp->add_option("--seed", seed, "Base seed");
    exp->add_option("--replicas", replicas, "Monte Carlo replicas");

    // render
    std::string render_in, render_out;
    RenderOptions ropt;
    auto* rnd = app.add_subcommand("render", "Render a final-state dump as PNG");
    rnd->add_option("--in", render_in, "Final state written by `simulate`")->required()->check(CLI::ExistingFile);
    rnd->add_option("--out", render_out, "PNG path")->required();
    rnd->add_option("--half-width", ropt.half_width, "Half the pixel width of a site")->capture_default_str();
    rnd->add_option("--row-height", ropt.row_height, "Pixel height of a lattice row")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (simulate->parsed()) {
            const FinalState fs = run(to_config(sim, seed));
            std::ofstream out(sim_out, std::ios::binary);
            if (!out) throw std::runtime_error("cannot write " + sim_out);
            fs.save(out);
            if (!out.flush()) throw std::runtime_error("write failed: " + sim_out);
            return 0;
        }
        if (estimate->parsed()) {
            nlohmann::json result;
            if (estimand == "pi1") {
                result = estimate_pi1(est_n, replicas, seed, workers).to_json();
            } else if (estimand == "pi4") {
                result = estimate_pi4(est_n, replicas, seed, workers, p, p_white).to_json();
            } else if (estimand == "L") {
                result = estimate_L(p, replicas, seed, max_n, workers).to_json();
            } else if (estimand == "theta") {
                result = estimate_theta(p, radius > 0.0 ? radius : 2.0 * est_n, replicas, seed, workers).to_json();
            } else if (estimand == "crossing") {
                result = estimate_crossing(width > 0.0 ? width : 2.0 * est_n, height > 0.0 ? height : 1.0 * est_n,
                                           parse_orientation(orientation), p, replicas, seed, parse_color(color),
                                           workers)
                             .to_json();
            } else {
                result = estimate_net_prob(est_m, est_n, p, replicas, seed, workers).to_json();
            }
            std::cout << result.dump(2) << '\n';
            return 0;
        }
        if (exp->parsed()) {
            ExperimentOptions opt;
            opt.replicas = replicas;
            opt.base_seed = seed;
            opt.domain_radius = ex.domain;
            opt.workers = workers;
            const BoundaryRule boundary = parse_boundary_rule(ex.boundary);
            ExperimentResult res;
            if (experiment == "freeze-window") {
                res = exp_freeze_time_window(ex.n, k, lambdas, opt, pi4_hat, pi4_replicas);
            } else if (experiment == "origin-freeze") {
                res = exp_origin_freeze(ex.n, all_variants(), opt);
            } else if (experiment == "macro-cluster") {
                res = exp_macro_cluster(ex.n, epsilons, boundary, opt);
            } else {
                if (m_grid.empty()) m_grid = {ex.n / 4, ex.n / 2, ex.n, 2 * ex.n};
                res = exp_volume_scale_scan(ex.n, m_grid, boundary, opt);
            }
            res.write(out_dir);
            std::cout << res.summary_json()["summary"].dump(2) << '\n';
            return 0;
        }
        std::ifstream in(render_in, std::ios::binary);
        render(FinalState::load(in), render_out, ropt);
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
