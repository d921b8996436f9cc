#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "commands.hpp"

namespace {

using namespace varunc;
using namespace varunc::cli;

struct usage_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<double> parse_list(const std::string& text, std::size_t expected, const char* flag) {
    std::vector<double> values;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != item.size()) {
            throw usage_error(std::string(flag) + ": '" + item + "' is not a number");
        }
        values.push_back(v);
    }
    if (values.size() != expected) {
        throw usage_error(std::string(flag) + " expects " + std::to_string(expected) + " comma-separated values");
    }
    return values;
}

BlochVector parse_bloch(const std::string& text) {
    const auto v = parse_list(text, 3, "--bloch");
    return {v[0], v[1], v[2]};
}

PauliObservable parse_observable(const std::string& text, const char* flag) {
    const auto v = parse_list(text, 4, flag);
    return {v[0], v[1], v[2], v[3]};
}

/// "v" pins the axis; "lo,hi" spans it with the given number of steps.
Range parse_axis(const std::string& text, std::size_t steps, const char* flag) {
    if (text.find(',') == std::string::npos) return Range::fixed(parse_list(text, 1, flag)[0]);
    const auto v = parse_list(text, 2, flag);
    return {v[0], v[1], steps};
}

Format parse_format(const std::string& text) {
    if (text == "csv") return Format::csv;
    if (text == "json") return Format::json;
    throw usage_error("--format must be csv or json");
}

struct Options {
    std::uint64_t seed = default_seed;
    std::string output = "-";
    std::optional<std::string> format;
    std::optional<std::size_t> samples;
    std::string bloch = "0,0,0";
    std::string obs_a = "1,0,0,0";
    std::string obs_b = "0,0,1,0";
    std::optional<std::string> alpha;
    std::optional<std::string> lambda;
    double omega = 0.0;
    std::optional<double> t_end;
    double step = 1e-3;
    std::optional<std::string> source;
    std::uint64_t shots = 1000000;
    bool fig2 = false;
    bool fig3 = false;
    std::size_t steps = 50;
    std::optional<std::string> sidecar;
};

double scalar(const std::optional<std::string>& text, double fallback, const char* flag) {
    return text ? parse_list(*text, 1, flag)[0] : fallback;
}

void add_common(CLI::App* cmd, Options& o) {
    cmd->add_option("--seed", o.seed, "RNG seed (default 0)");
    cmd->add_option("--output,-o", o.output, "output file, '-' for standard output");
    cmd->add_option("--format", o.format, "csv or json");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Variance-based uncertainty relations and mixedness for a single qubit"};
    app.require_subcommand(1);
    Options o;

    auto* verify = app.add_subcommand("verify", "run every invariant check and summarize residuals");
    add_common(verify, o);
    verify->add_option("--samples", o.samples, "random samples per property");

    auto* report = app.add_subcommand("report", "all relation bounds for one state and observable pair");
    add_common(report, o);
    report->add_option("--bloch", o.bloch, "Bloch vector x,y,z");
    report->add_option("--obs-a", o.obs_a, "observable A as a1,a2,a3,a4 over (sx, sy, sz, I)");
    report->add_option("--obs-b", o.obs_b, "observable B as b1,b2,b3,b4");

    auto* simulate = app.add_subcommand("simulate", "feedback-controlled qubit trajectory");
    add_common(simulate, o);
    simulate->add_option("--alpha", o.alpha, "initial angle in radians (default pi/4)");
    simulate->add_option("--lambda", o.lambda, "feedback strength (default 0)");
    simulate->add_option("--omega", o.omega, "Rabi frequency (default 0)");
    simulate->add_option("--t-end", o.t_end, "final time (default 5)");
    simulate->add_option("--step", o.step, "RK4 step (default 1e-3)");
    simulate->add_option("--source", o.source, "analytic, numeric or both (default analytic)");

    auto* sweep_cmd = app.add_subcommand("sweep", "tightness ratios over an (alpha, lambda, t) grid");
    add_common(sweep_cmd, o);
    auto* fig2 = sweep_cmd->add_flag("--fig2", o.fig2, "alpha x t grid at lambda = 1");
    auto* fig3 = sweep_cmd->add_flag("--fig3", o.fig3, "lambda x t grid at alpha = pi/4");
    fig2->excludes(fig3);
    sweep_cmd->add_option("--steps", o.steps, "points per swept axis (default 50)");
    sweep_cmd->add_option("--alpha", o.alpha, "alpha value or lo,hi range (default: the --fig2 alpha axis)")->excludes(fig2)->excludes(fig3);
    sweep_cmd->add_option("--lambda", o.lambda, "lambda value or lo,hi range")->excludes(fig2)->excludes(fig3);
    sweep_cmd->add_option("--t-end", o.t_end, "t runs over [t_end/steps, t_end] (default 3)");
    sweep_cmd->add_option("--obs-a", o.obs_a, "observable A (default sigma_x)");
    sweep_cmd->add_option("--obs-b", o.obs_b, "observable B (default sigma_z)");
    sweep_cmd->add_option("--source", o.source, "analytic or numeric (default analytic)");
    sweep_cmd->add_option("--omega", o.omega, "Rabi frequency, numeric source only");
    sweep_cmd->add_option("--step", o.step, "RK4 step, numeric source only");
    sweep_cmd->add_option("--sidecar", o.sidecar, "sidecar JSON path (default <output>.json, or stderr)");

    auto* estimate = app.add_subcommand("estimate", "mixedness from simulated measurement counts");
    add_common(estimate, o);
    estimate->add_option("--bloch", o.bloch, "Bloch vector x,y,z");
    estimate->add_option("--obs-a", o.obs_a, "observable A (default sigma_x)");
    estimate->add_option("--obs-b", o.obs_b, "observable B (default sigma_z)");
    estimate->add_option("--shots", o.shots, "shots per measured observable (default 1e6)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return usage;
    }

    std::unique_ptr<std::ofstream> file;
    std::unique_ptr<std::ofstream> sidecar_file;
    try {
        std::ostream* out = &std::cout;
        if (o.output != "-") {
            file = std::make_unique<std::ofstream>(o.output, std::ios::binary);
            if (!*file) throw usage_error("cannot open " + o.output);
            out = file.get();
        }
        Sinks sinks{*out, std::cerr};
        auto format_or = [&](Format fallback) { return o.format ? parse_format(*o.format) : fallback; };

        if (verify->parsed()) {
            return cmd_verify({o.samples, o.seed, format_or(Format::csv)}, sinks);
        }
        if (report->parsed()) {
            return cmd_report({parse_bloch(o.bloch), parse_observable(o.obs_a, "--obs-a"),
                               parse_observable(o.obs_b, "--obs-b"), format_or(Format::json)},
                              sinks);
        }
        if (simulate->parsed()) {
            SimulateConfig cfg;
            cfg.alpha = scalar(o.alpha, cfg.alpha, "--alpha");
            cfg.lambda = scalar(o.lambda, cfg.lambda, "--lambda");
            cfg.omega = o.omega;
            cfg.t_end = o.t_end.value_or(cfg.t_end);
            cfg.step = o.step;
            const std::string source = o.source.value_or("analytic");
            if (source == "analytic") cfg.source = SimulateSource::analytic;
            else if (source == "numeric") cfg.source = SimulateSource::numeric;
            else if (source == "both") cfg.source = SimulateSource::both;
            else throw usage_error("--source must be analytic, numeric or both");
            cfg.format = format_or(Format::csv);
            return cmd_simulate(cfg, sinks);
        }
        if (sweep_cmd->parsed()) {
            SweepConfig cfg;
            if (o.steps < 1) throw usage_error("--steps must be positive");
            if (o.fig2 || o.fig3) {
                if (o.t_end) throw usage_error("--t-end cannot be combined with a figure preset");
                cfg.grid = o.fig2 ? SweepGrid::fig2(o.steps) : SweepGrid::fig3(o.steps);
            } else {
                cfg.grid.alpha = o.alpha ? parse_axis(*o.alpha, o.steps, "--alpha") : SweepGrid::fig2(o.steps).alpha;
                cfg.grid.lambda = o.lambda ? parse_axis(*o.lambda, o.steps, "--lambda") : Range::fixed(1.0);
                const double t_end = o.t_end.value_or(3.0);
                cfg.grid.t = o.steps == 1 ? Range::fixed(t_end)
                                          : Range{t_end / static_cast<double>(o.steps), t_end, o.steps};
            }
            cfg.grid.a = parse_observable(o.obs_a, "--obs-a");
            cfg.grid.b = parse_observable(o.obs_b, "--obs-b");
            cfg.grid.omega = o.omega;
            cfg.grid.step = o.step;
            const std::string source = o.source.value_or("analytic");
            if (source == "analytic") cfg.source = DynamicsSource::analytic;
            else if (source == "numeric") cfg.source = DynamicsSource::numeric;
            else throw usage_error("--source must be analytic or numeric");
            cfg.seed = o.seed;
            cfg.format = format_or(Format::csv);

            std::optional<std::string> side_path = o.sidecar;
            if (!side_path && o.output != "-") side_path = o.output + ".json";
            if (side_path) {
                sidecar_file = std::make_unique<std::ofstream>(*side_path, std::ios::binary);
                if (!*sidecar_file) throw usage_error("cannot open " + *side_path);
                sinks.sidecar = sidecar_file.get();
            }
            return cmd_sweep(cfg, sinks);
        }
        if (estimate->parsed()) {
            return cmd_estimate({parse_bloch(o.bloch), parse_observable(o.obs_a, "--obs-a"),
                                 parse_observable(o.obs_b, "--obs-b"), o.shots, o.seed, format_or(Format::json)},
                                sinks);
        }
    } catch (const usage_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return usage;
    } catch (const varunc::error& e) {
        // Invalid inputs (states outside the Bloch ball, bad grids, unstable steps).
        std::cerr << "error: " << e.what() << '\n';
        return usage;
    }
    return usage;
}
