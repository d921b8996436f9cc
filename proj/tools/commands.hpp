#pragma once

// Command implementations behind the varunc executable. Each command writes
// its artifact to a stream and returns the process exit code, so tests can
// drive them without spawning processes.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "varunc/qubit.hpp"
#include "varunc/tightness.hpp"

namespace varunc::cli {

enum exit_code : int { ok = 0, failure = 1, usage = 2 };

enum class Format { csv, json };

/// Fixed seed used when --seed is absent.
inline constexpr std::uint64_t default_seed = 0;

struct Sinks {
    std::ostream& out;
    std::ostream& err;
    /// Sweep sidecar JSON; falls back to err when null.
    std::ostream* sidecar = nullptr;
};

struct VerifyConfig {
    std::optional<std::size_t> samples;
    std::uint64_t seed = default_seed;
    Format format = Format::csv;
};

struct ReportConfig {
    BlochVector bloch{};
    PauliObservable a = PauliObservable::sigma_x();
    PauliObservable b = PauliObservable::sigma_z();
    Format format = Format::json;
};

enum class SimulateSource { analytic, numeric, both };

struct SimulateConfig {
    double alpha = 0.7853981633974483;
    double lambda = 0.0;
    double omega = 0.0;
    double t_end = 5.0;
    double step = 1e-3;
    SimulateSource source = SimulateSource::analytic;
    Format format = Format::csv;
};

struct SweepConfig {
    SweepGrid grid = SweepGrid::fig2(50);
    DynamicsSource source = DynamicsSource::analytic;
    std::uint64_t seed = default_seed;
    Format format = Format::csv;
};

struct EstimateConfig {
    BlochVector bloch{};
    PauliObservable a = PauliObservable::sigma_x();
    PauliObservable b = PauliObservable::sigma_z();
    std::uint64_t shots = 1000000;
    std::uint64_t seed = default_seed;
    Format format = Format::json;
};

int cmd_verify(const VerifyConfig& cfg, const Sinks& sinks);
int cmd_report(const ReportConfig& cfg, const Sinks& sinks);
int cmd_simulate(const SimulateConfig& cfg, const Sinks& sinks);
int cmd_sweep(const SweepConfig& cfg, const Sinks& sinks);
int cmd_estimate(const EstimateConfig& cfg, const Sinks& sinks);

/// Shortest round-trip decimal form; the CSV cell format.
std::string format_number(double v);

}  // namespace varunc::cli
