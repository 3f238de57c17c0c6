#pragma once

#include "mkg/data.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace mkg::cli
{

enum class Command
{
    simulate,
    drift_sweep,
    estimates,
    nosmoothing,
    selftest
};

Command parse_command(const std::string& name);
std::string command_name(Command c);

struct RunConfig
{
    Command command = Command::simulate;
    int grid = 32;
    double box = 6.283185307179586;
    double s = 0.9;
    double N = 8.0;
    std::vector<double> N_list; // empty: per-command default, see effective_N_list
    double dt = 0.005;
    double t_end = 1.0;
    std::uint64_t seed = 0;
    std::string out = ".";

    Preset preset = Preset::random_band;
    double k_lo = 1.0;
    double k_hi = 4.0;
    double amplitude = 0.02;
    double spectral_slope = 0.0;
    double eps = 0.01;

    int reproject_every = 1;
    int record_every = 1;
    double cg_tol = 1e-10;
    int cg_max_iter = 500;

    double target_H = 1.0;
    int sample_every = 1;

    long samples = 0; // 0: 100000 for estimates, 1000000 for nosmoothing
    long comm_samples = 2000;
    long field_samples = 100;
    std::string fft_planner = "estimate";

    std::vector<double> effective_N_list() const;
    long effective_samples() const;
    DataSpec data_spec() const;

    bool operator==(const RunConfig&) const = default;
};

// Ordered (key, value) pairs; later entries win.
using Overrides = std::vector<std::pair<std::string, std::string>>;

// Whitespace-separated `key = value` pairs, `#` to end of line is a comment.
// Throws ConfigError naming the key on unknown keys, bad values or ranges.
RunConfig parse_config(const std::string& text, const Overrides& overrides = {});

// Resolved config as `key = value` lines, each prefixed by `prefix`.
std::string describe(const RunConfig& cfg, const std::string& prefix = "");

// Key reference with defaults, for --help.
std::string key_help();

// Runs the command, writing artifacts under cfg.out. Returns the exit status:
// 0 success, 1 numerical failure or failed selftest, 2 configuration error.
int run(const RunConfig& cfg, std::ostream& log, std::ostream& err);

} // namespace mkg::cli
