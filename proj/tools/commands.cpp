#include "commands.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <ostream>
#include <sstream>
#include <vector>

#include "json.hpp"

#include "varunc/feedback.hpp"
#include "varunc/properties.hpp"
#include "varunc/relations.hpp"

namespace varunc::cli {

using nlohmann::ordered_json;

std::string format_number(double v) {
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

namespace {

std::string cell(const std::optional<double>& v) { return v ? format_number(*v) : std::string(); }

ordered_json nullable(const std::optional<double>& v) {
    return v ? ordered_json(*v) : ordered_json(nullptr);
}

ordered_json coefficients(const PauliObservable& o) { return ordered_json::array({o.a1, o.a2, o.a3, o.a4}); }

ordered_json range_json(const Range& r) {
    return ordered_json{{"lo", r.lo}, {"hi", r.hi}, {"steps", r.steps}};
}

/// Writes a flat object either as JSON or as a two-line CSV (header, values).
void write_record(const ordered_json& record, Format format, std::ostream& out) {
    if (format == Format::json) {
        out << record.dump(2) << '\n';
        return;
    }
    std::string header, values;
    for (auto it = record.begin(); it != record.end(); ++it) {
        if (it != record.begin()) {
            header += ',';
            values += ',';
        }
        header += it.key();
        if (it->is_number_float()) {
            values += format_number(it->get<double>());
        } else if (!it->is_null()) {
            values += it->is_string() ? it->get<std::string>() : it->dump();
        }
    }
    out << header << '\n' << values << '\n';
}

/// Runs a command into a string, for the determinism checks.
template <class Config, class Command>
std::string capture(Command command, const Config& cfg) {
    std::ostringstream out, err, side;
    command(cfg, Sinks{out, err, &side});
    return out.str() + '\x1e' + side.str();
}

std::vector<properties::Result> determinism_checks() {
    std::vector<properties::Result> out;
    auto check = [&](const char* name, const std::string& first, const std::string& second) {
        out.push_back({"cli", std::string("byte-identical output on rerun: ") + name, 2,
                       first == second ? 0.0 : 1.0, 0.0});
    };
    ReportConfig report{{0.2, -0.3, 0.5}, {1, 0.5, 0, 0}, {0, 0, 1, 2}};
    check("report", capture(cmd_report, report), capture(cmd_report, report));
    SimulateConfig sim;
    sim.lambda = 0.7;
    sim.t_end = 0.5;
    sim.source = SimulateSource::both;
    check("simulate", capture(cmd_simulate, sim), capture(cmd_simulate, sim));
    SweepConfig sweep;
    sweep.grid = SweepGrid::fig2(5);
    check("sweep", capture(cmd_sweep, sweep), capture(cmd_sweep, sweep));
    EstimateConfig est;
    est.bloch = {0.1, 0.2, 0.3};
    est.shots = 1000;
    est.seed = 7;
    check("estimate", capture(cmd_estimate, est), capture(cmd_estimate, est));
    return out;
}

}  // namespace

int cmd_verify(const VerifyConfig& cfg, const Sinks& sinks) {
    properties::Config pc;
    pc.samples = cfg.samples;
    pc.seed = cfg.seed;
    std::vector<properties::Result> results = properties::run_all(pc);
    for (auto& r : determinism_checks()) results.push_back(std::move(r));

    const auto passed = static_cast<std::size_t>(
        std::count_if(results.begin(), results.end(), [](const auto& r) { return r.passed(); }));
    if (cfg.format == Format::json) {
        ordered_json doc{{"seed", cfg.seed}, {"passed", passed == results.size()}, {"properties", ordered_json::array()}};
        for (const auto& r : results) {
            doc["properties"].push_back({{"module", r.module},
                                         {"property", r.name},
                                         {"samples", r.samples},
                                         {"max_residual", r.max_residual},
                                         {"threshold", r.threshold},
                                         {"passed", r.passed()}});
        }
        sinks.out << doc.dump(2) << '\n';
    } else {
        sinks.out << "status,module,property,samples,max_residual,threshold\n";
        for (const auto& r : results) {
            sinks.out << (r.passed() ? "PASS" : "FAIL") << ',' << r.module << ",\"" << r.name << "\","
                      << r.samples << ',' << format_number(r.max_residual) << ','
                      << format_number(r.threshold) << '\n';
        }
    }
    sinks.err << passed << '/' << results.size() << " properties passed\n";
    return passed == results.size() ? ok : failure;
}

int cmd_report(const ReportConfig& cfg, const Sinks& sinks) {
    const QubitState s(cfg.bloch);
    const RelationReport r = relation_report(s, cfg.a, cfg.b);
    ordered_json doc{{"varA", r.varA},
                     {"varB", r.varB},
                     {"product", r.product},
                     {"rur_bound", r.rur_bound},
                     {"sur_bound", r.sur_bound},
                     {"eq19_bound", r.eq19_bound},
                     {"remainder", r.remainder},
                     {"equality_residual", r.equality_residual},
                     {"sum_lhs", r.sum_lhs},
                     {"sum_bound", r.sum_bound},
                     {"entropy_sum", nullable(r.entropy_sum)},
                     {"entropy_bound", nullable(r.entropy_bound)},
                     {"mixedness", mixedness(s)},
                     {"mixedness_estimate", nullptr}};
    try {
        doc["mixedness_estimate"] = estimate_mixedness(s, cfg.a, cfg.b);
    } catch (const error& e) {
        if (e.code() != errc::collinear_observables) throw;
        doc["reason"] = to_string(e.code());
    }
    if (!r.entropy_sum) doc["entropy_reason"] = to_string(errc::degenerate_spectrum);
    write_record(doc, cfg.format, sinks.out);
    return ok;
}

int cmd_simulate(const SimulateConfig& cfg, const Sinks& sinks) {
    const FeedbackParams params{cfg.omega, cfg.lambda, cfg.alpha};
    const bool want_analytic = cfg.source != SimulateSource::numeric;
    const bool want_numeric = cfg.source != SimulateSource::analytic;
    if (want_analytic && cfg.omega != 0.0) {
        sinks.err << "error: the analytic source requires --omega 0\n";
        return usage;
    }

    const std::vector<double> times = time_grid(cfg.t_end, cfg.step);
    Trajectory traj;
    if (want_numeric) traj = integrate(params, cfg.t_end, cfg.step);
    const std::vector<std::string> columns =
        cfg.source == SimulateSource::both
            ? std::vector<std::string>{"t", "rho11", "re_rho12", "im_rho12", "mixedness", "rho11_numeric", "max_abs_dev"}
            : std::vector<std::string>{"t", "rho11", "re_rho12", "im_rho12", "mixedness"};

    ordered_json rows = ordered_json::array();
    if (cfg.format == Format::csv) {
        for (std::size_t k = 0; k < columns.size(); ++k) sinks.out << (k ? "," : "") << columns[k];
        sinks.out << '\n';
    }
    for (std::size_t k = 0; k < times.size(); ++k) {
        const double t = times[k];
        const QubitState primary = want_analytic ? analytic_state(params, t) : traj.states[k];
        std::vector<double> values{t, primary.excited_population(), primary.coherence().real(),
                                   primary.coherence().imag(), mixedness(primary)};
        if (want_analytic && want_numeric) {
            values.push_back(traj.states[k].excited_population());
            values.push_back(varunc::detail::max_abs(traj.states[k].matrix() - primary.matrix()));
        }
        if (cfg.format == Format::csv) {
            for (std::size_t c = 0; c < values.size(); ++c) sinks.out << (c ? "," : "") << format_number(values[c]);
            sinks.out << '\n';
        } else {
            ordered_json row;
            for (std::size_t c = 0; c < values.size(); ++c) row[columns[c]] = values[c];
            rows.push_back(std::move(row));
        }
    }
    if (cfg.format == Format::json) sinks.out << rows.dump(2) << '\n';
    return ok;
}

int cmd_sweep(const SweepConfig& cfg, const Sinks& sinks) {
    const std::vector<TightnessPoint> points = sweep(cfg.grid, cfg.source);
    const double tolerance = 1e-9;
    const OrderingViolations v = count_ordering_violations(points, tolerance);

    if (cfg.format == Format::csv) {
        sinks.out << "alpha,lambda,t,ti1,ti2,ti3\n";
        for (const auto& p : points) {
            sinks.out << format_number(p.alpha) << ',' << format_number(p.lambda) << ',' << format_number(p.t) << ','
                      << cell(p.ti1) << ',' << cell(p.ti2) << ',' << cell(p.ti3) << '\n';
        }
    } else {
        ordered_json rows = ordered_json::array();
        for (const auto& p : points) {
            rows.push_back({{"alpha", p.alpha}, {"lambda", p.lambda}, {"t", p.t},
                            {"ti1", nullable(p.ti1)}, {"ti2", nullable(p.ti2)}, {"ti3", nullable(p.ti3)}});
        }
        sinks.out << rows.dump(2) << '\n';
    }

    auto undefined = [&](auto member) {
        return std::count_if(points.begin(), points.end(), [&](const TightnessPoint& p) { return !(p.*member); });
    };
    const ordered_json sidecar{
        {"grid",
         {{"alpha", range_json(cfg.grid.alpha)},
          {"lambda", range_json(cfg.grid.lambda)},
          {"t", range_json(cfg.grid.t)},
          {"obs_a", coefficients(cfg.grid.a)},
          {"obs_b", coefficients(cfg.grid.b)},
          {"source", cfg.source == DynamicsSource::analytic ? "analytic" : "numeric"},
          {"omega", cfg.grid.omega},
          {"step", cfg.grid.step}}},
        {"seed", cfg.seed},
        {"points", points.size()},
        {"undefined", {{"ti1", undefined(&TightnessPoint::ti1)},
                       {"ti2", undefined(&TightnessPoint::ti2)},
                       {"ti3", undefined(&TightnessPoint::ti3)}}},
        {"ordering",
         {{"tolerance", tolerance},
          {"compared", v.compared},
          {"ti1_gt_ti2", v.over_ti2},
          {"ti1_gt_ti3", v.over_ti3},
          {"violations", v.over_ti2 + v.over_ti3},
          {"worst_excess", v.worst_excess}}}};
    std::ostream& side = sinks.sidecar != nullptr ? *sinks.sidecar : sinks.err;
    side << sidecar.dump(2) << '\n';
    return ok;
}

int cmd_estimate(const EstimateConfig& cfg, const Sinks& sinks) {
    const QubitState s(cfg.bloch);
    if (cfg.shots == 0) {
        sinks.err << "error: --shots must be positive\n";
        return usage;
    }
    ordered_json doc{{"shots", cfg.shots}, {"seed", cfg.seed}};
    try {
        const MixednessEstimate e =
            estimate_mixedness_from_counts(simulate_estimator_counts(s, cfg.a, cfg.b, cfg.shots, cfg.seed));
        const double truth = mixedness(s);
        doc["estimate"] = e.estimate;
        doc["std_error"] = e.std_error;
        doc["true_mixedness"] = truth;
        if (e.std_error > 0.0) {
            doc["z_score"] = (e.estimate - truth) / e.std_error;
        } else {
            // Zero spread: every frequency sat at 0 or 1.
            doc["z_score"] = e.estimate == truth ? ordered_json(0.0) : ordered_json(nullptr);
        }
    } catch (const error& e) {
        if (e.code() != errc::collinear_observables) throw;
        doc["estimate"] = nullptr;
        doc["reason"] = to_string(e.code());
        write_record(doc, cfg.format, sinks.out);
        sinks.err << "error: observables are collinear; the estimator is undefined\n";
        return failure;
    }
    write_record(doc, cfg.format, sinks.out);
    return ok;
}

}  // namespace varunc::cli
