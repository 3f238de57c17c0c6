#include "mkg/cli.hpp"

#include "mkg/dynamics.hpp"
#include "mkg/estimates.hpp"
#include "mkg/fft.hpp"
#include "mkg/imethod.hpp"
#include "mkg/selftest.hpp"
#include "mkg/snapshot.hpp"

#include <nlohmann/json.hpp>

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>

namespace mkg::cli
{

namespace
{

const std::map<std::string, Command> command_names = {{"simulate", Command::simulate},
                                                      {"drift-sweep", Command::drift_sweep},
                                                      {"estimates", Command::estimates},
                                                      {"nosmoothing", Command::nosmoothing},
                                                      {"selftest", Command::selftest}};

[[noreturn]] void bad(const std::string& key, const std::string& what)
{
    throw ConfigError(key + ": " + what);
}

template <class T> T parse_number(const std::string& key, const std::string& v, const char* kind)
{
    T out{};
    const char* end = v.data() + v.size();
    const auto [p, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc() || p != end)
        bad(key, std::string("expected ") + kind + ", got '" + v + "'");
    return out;
}

double as_double(const std::string& k, const std::string& v)
{
    const double x = parse_number<double>(k, v, "a number");
    if (!std::isfinite(x))
        bad(k, "must be finite");
    return x;
}
int as_int(const std::string& k, const std::string& v) { return parse_number<int>(k, v, "an integer"); }
long as_long(const std::string& k, const std::string& v) { return parse_number<long>(k, v, "an integer"); }

std::string fmt(double x)
{
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

std::string fmt_list(const std::vector<double>& xs)
{
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i)
        s += (i ? "," : "") + fmt(xs[i]);
    return s;
}

struct Key
{
    std::string name;
    std::string help;
    std::function<void(RunConfig&, const std::string&)> set;
    std::function<std::string(const RunConfig&)> get;
};

#define MKG_KEY(field, help, parse, show)                                                                            \
    Key                                                                                                              \
    {                                                                                                                \
        #field, help, [](RunConfig& c, const std::string& v) { c.field = parse(#field, v); },                     \
            [](const RunConfig& c) { return show(c.field); }                                                         \
    }

std::string show_int(long x) { return std::to_string(x); }
std::string show_str(const std::string& x) { return x; }
std::string as_str(const std::string&, const std::string& v) { return v; }

const std::vector<Key>& keys()
{
    static const std::vector<Key> table = {
        {"command", "simulate | drift-sweep | estimates | nosmoothing | selftest",
         [](RunConfig& c, const std::string& v) { c.command = parse_command(v); },
         [](const RunConfig& c) { return command_name(c.command); }},
        MKG_KEY(grid, "points per axis (power of two >= 8)", as_int, show_int),
        MKG_KEY(box, "box side length L", as_double, fmt),
        MKG_KEY(s, "Sobolev exponent of the I-operator, in (1/2, 1)", as_double, fmt),
        MKG_KEY(N, "I-operator frequency for simulate and estimates", as_double, fmt),
        {"N_list", "comma-separated N values; default 4,8,16 (50,100,200 for nosmoothing)",
         [](RunConfig& c, const std::string& v) {
             c.N_list.clear();
             std::stringstream ss(v);
             std::string item;
             while (std::getline(ss, item, ','))
                 c.N_list.push_back(as_double("N_list", item));
             if (c.N_list.empty())
                 bad("N_list", "must not be empty");
         },
         [](const RunConfig& c) { return fmt_list(c.effective_N_list()); }},
        MKG_KEY(dt, "time step (at most half the grid spacing)", as_double, fmt),
        MKG_KEY(t_end, "final time", as_double, fmt),
        {"seed", "random seed (u64)",
         [](RunConfig& c, const std::string& v) { c.seed = parse_number<std::uint64_t>("seed", v, "an unsigned integer"); },
         [](const RunConfig& c) { return std::to_string(c.seed); }},
        MKG_KEY(out, "output directory", as_str, show_str),
        {"preset", "initial data: zero | plane-wave | random-band | appendix",
         [](RunConfig& c, const std::string& v) {
             try
             {
                 c.preset = parse_preset(v);
             }
             catch (const ConfigError&)
             {
                 bad("preset", "unknown preset '" + v + "'");
             }
         },
         [](const RunConfig& c) { return preset_name(c.preset); }},
        MKG_KEY(k_lo, "random-band lower wavenumber", as_double, fmt),
        MKG_KEY(k_hi, "random-band upper wavenumber", as_double, fmt),
        MKG_KEY(amplitude, "random-band RMS amplitude per component", as_double, fmt),
        MKG_KEY(spectral_slope, "random-band spectrum |c_k| ~ |k|^-slope", as_double, fmt),
        MKG_KEY(eps, "appendix data amplitude and nosmoothing epsilon", as_double, fmt),
        MKG_KEY(reproject_every, "steps between Coulomb-gauge reprojections", as_int, show_int),
        MKG_KEY(record_every, "steps between trajectory rows", as_int, show_int),
        MKG_KEY(cg_tol, "relative CG tolerance for A0", as_double, fmt),
        MKG_KEY(cg_max_iter, "CG iteration cap", as_int, show_int),
        MKG_KEY(target_H, "drift-sweep rescales until max H[I Phi(0)] <= target_H", as_double, fmt),
        MKG_KEY(sample_every, "drift-sweep steps between Hamiltonian samples", as_int, show_int),
        {"samples", "Monte Carlo samples; default 100000 (1000000 for nosmoothing)",
         [](RunConfig& c, const std::string& v) { c.samples = as_long("samples", v); },
         [](const RunConfig& c) { return std::to_string(c.effective_samples()); }},
        MKG_KEY(comm_samples, "samples per M for the commutator estimate", as_long, show_int),
        MKG_KEY(field_samples, "samples for the grid-field estimates", as_long, show_int),
        MKG_KEY(fft_planner, "estimate | measure", as_str, show_str),
    };
    return table;
}

#undef MKG_KEY

const Key& find_key(const std::string& name)
{
    for (const Key& k : keys())
        if (k.name == name)
            return k;
    bad(name, "unknown key");
}

void validate(const RunConfig& c)
{
    if (c.grid < 8 || (c.grid & (c.grid - 1)) != 0)
        bad("grid", "must be a power of two >= 8");
    if (!(c.box > 0.0))
        bad("box", "must be positive");
    if (!(c.s > 0.5 && c.s < 1.0))
        bad("s", "must lie in (1/2, 1)");
    if (!(c.N >= 1.0))
        bad("N", "must be >= 1");
    for (double n : c.N_list)
        if (!(n >= 1.0))
            bad("N_list", "entries must be >= 1");
    if (!(c.dt > 0.0))
        bad("dt", "must be positive");
    if (c.dt > 0.5 * c.box / c.grid)
        bad("dt", "must be at most half the grid spacing " + fmt(c.box / c.grid));
    if (!(c.t_end >= 0.0))
        bad("t_end", "must be nonnegative");
    if (c.out.empty())
        bad("out", "must not be empty");
    if (!(c.k_lo >= 0.0))
        bad("k_lo", "must be nonnegative");
    if (!(c.k_hi > c.k_lo))
        bad("k_hi", "must exceed k_lo");
    if (!(c.amplitude >= 0.0))
        bad("amplitude", "must be nonnegative");
    if (!(c.eps > 0.0 && c.eps < 1.0))
        bad("eps", "must lie in (0, 1)");
    if (c.reproject_every < 1)
        bad("reproject_every", "must be >= 1");
    if (c.record_every < 1)
        bad("record_every", "must be >= 1");
    if (!(c.cg_tol > 0.0 && c.cg_tol < 1.0))
        bad("cg_tol", "must lie in (0, 1)");
    if (c.cg_max_iter < 1)
        bad("cg_max_iter", "must be >= 1");
    if (!(c.target_H > 0.0))
        bad("target_H", "must be positive");
    if (c.sample_every < 1)
        bad("sample_every", "must be >= 1");
    if (c.samples < 0)
        bad("samples", "must be nonnegative");
    if (c.command == Command::nosmoothing && c.effective_samples() < 100000)
        bad("samples", "nosmoothing needs at least 100000");
    if (c.command == Command::nosmoothing)
        for (double n : c.effective_N_list())
            if (n < 50.0)
                bad("N_list", "nosmoothing needs N >= 50");
    if (c.comm_samples < 1)
        bad("comm_samples", "must be >= 1");
    if (c.field_samples < 1)
        bad("field_samples", "must be >= 1");
    if (c.fft_planner != "estimate" && c.fft_planner != "measure")
        bad("fft_planner", "must be estimate or measure");
}

// ---------------------------------------------------------------------------

std::filesystem::path prepare_out(const RunConfig& c)
{
    const std::filesystem::path dir(c.out);
    std::filesystem::create_directories(dir);
    return dir;
}

std::ofstream open_artifact(const std::filesystem::path& p)
{
    std::ofstream f(p);
    if (!f)
        throw std::runtime_error("cannot open " + p.string());
    f.precision(17);
    return f;
}

elliptic::EllipticConfig elliptic_config(const RunConfig& c) { return {c.cg_tol, c.cg_max_iter}; }

dynamics::StepConfig step_config(const RunConfig& c)
{
    dynamics::StepConfig sc;
    sc.dt = c.dt;
    sc.t_end = c.t_end;
    sc.reproject_every = c.reproject_every;
    sc.record_every = c.record_every;
    sc.bracket_s = c.s;
    sc.elliptic = elliptic_config(c);
    return sc;
}

nlohmann::ordered_json config_json(const RunConfig& c)
{
    nlohmann::ordered_json j;
    for (const Key& k : keys())
        j[k.name] = k.get(c);
    return j;
}

int run_simulate(const RunConfig& c, std::ostream& log)
{
    const Grid g(c.grid, c.box);
    const imethod::IContext ctx = imethod::IContext::make(g, c.s, c.N);
    const GaugeState init = make_initial_state(g, c.data_spec(), elliptic_config(c));
    const dynamics::StepConfig sc = step_config(c);

    std::map<int, double> HI;
    const dynamics::Trajectory tr = dynamics::evolve(init, sc, [&](const GaugeState& st, int k) {
        if (k % c.record_every == 0)
            HI[k] = imethod::modified_hamiltonian(st, ctx);
    });
    if (!HI.count(tr.steps))
        HI[tr.steps] = imethod::modified_hamiltonian(tr.final_state, ctx);

    const auto dir = prepare_out(c);
    {
        std::ofstream f = open_artifact(dir / "trajectory.csv");
        f << describe(c, "# ") << "t,H,H_I,divA_rel,bracket_norm_s,mass_L2_phi\n";
        auto it = HI.begin();
        for (const dynamics::TrajectoryRow& r : tr.rows)
        {
            f << r.t << ',' << r.H << ',' << it->second << ',' << r.divA_rel << ',' << r.bracket_norm_s << ','
              << r.mass_L2_phi << '\n';
            ++it;
        }
    }
    write_snapshot((dir / "final.mkg").string(), tr.final_state);
    {
        std::ofstream f = open_artifact(dir / "final.json");
        nlohmann::ordered_json j;
        j["config"] = config_json(c);
        j["snapshot"] = "final.mkg";
        j["time"] = tr.final_state.time;
        j["steps"] = tr.steps;
        j["dt"] = tr.dt;
        f << j.dump(2) << '\n';
    }
    const double H0 = tr.rows.front().H, H1 = tr.rows.back().H;
    log << "simulate: " << tr.steps << " steps, H " << H0 << " -> " << H1 << '\n';
    return 0;
}

int run_drift(const RunConfig& c, std::ostream& log)
{
    const Grid g(c.grid, c.box);
    const GaugeState init = make_initial_state(g, c.data_spec(), elliptic_config(c));
    imethod::DriftOptions opt;
    opt.s = c.s;
    opt.target_H = c.target_H;
    opt.sample_every = c.sample_every;
    const imethod::DriftReport rep = imethod::drift_experiment(init, c.t_end, c.effective_N_list(), opt, step_config(c));

    const auto dir = prepare_out(c);
    std::ofstream f = open_artifact(dir / "drift.csv");
    f << describe(c, "# ") << "N,H0,sup_drift,T\n";
    for (const imethod::DriftRow& r : rep.rows)
        f << r.N << ',' << r.H0 << ',' << r.sup_drift << ',' << r.T << '\n';
    f << "# slope = " << rep.slope << '\n';
    f << "# lambda = " << rep.lambda << '\n';
    f << "# integrator_error = " << rep.integrator_error << '\n';
    for (const std::string& w : rep.warnings)
        f << "# warning: " << w << '\n';
    for (const std::string& w : rep.warnings)
        log << "warning: " << w << '\n';
    log << "drift-sweep: " << rep.rows.size() << " rows, slope " << rep.slope << ", lambda " << rep.lambda << '\n';
    return 0;
}

nlohmann::ordered_json report_json(const estimates::EstimateReport& r)
{
    nlohmann::ordered_json j;
    j["name"] = r.name;
    j["samples"] = r.samples;
    j["max_ratio"] = r.max_ratio;
    j["p50"] = r.p50;
    j["p99"] = r.p99;
    nlohmann::ordered_json p = nlohmann::ordered_json::object();
    for (const auto& [k, v] : r.params)
        p[k] = v;
    j["params"] = p;
    j["seed"] = r.seed;
    return j;
}

int run_estimates(const RunConfig& c, std::ostream& log)
{
    namespace est = mkg::estimates;
    const long n = c.effective_samples();
    const Grid g(c.grid, c.box);
    std::vector<est::EstimateReport> reps;
    reps.push_back(est::sample_symbol_bound(n, c.seed));
    for (double M : {c.N, 2.0 * c.N, 4.0 * c.N})
        reps.push_back(est::sample_commutator(c.N, M, c.s, c.comm_samples, c.seed));
    for (double N : c.effective_N_list())
        reps.push_back(est::sample_i_loss(N, c.s, n, c.seed));
    const est::ProductExponents mult{.s = -1.0, .s1 = c.s, .s2 = c.s - 1.0, .homogeneous_target = true};
    reps.push_back(est::sample_product_norm(g, mult, c.field_samples, c.seed));
    reps.push_back(est::sample_bernstein(g, g.k_resolved() / 2, c.field_samples, c.seed));
    reps.push_back(est::sample_cz(g, c.field_samples, c.seed));
    reps.push_back(est::sample_h_bound(g, c.field_samples, c.seed));

    nlohmann::ordered_json j;
    j["config"] = config_json(c);
    j["reports"] = nlohmann::ordered_json::array();
    for (const auto& r : reps)
    {
        j["reports"].push_back(report_json(r));
        log << r.name << ": max " << r.max_ratio << " p99 " << r.p99 << " (" << r.samples << " samples)\n";
    }
    const auto dir = prepare_out(c);
    std::ofstream f = open_artifact(dir / "estimates.json");
    f << j.dump(2) << '\n';
    return 0;
}

int run_nosmoothing(const RunConfig& c, std::ostream& log)
{
    const auto dir = prepare_out(c);
    std::ofstream f = open_artifact(dir / "nosmoothing.csv");
    f << describe(c, "# ") << "N,value,std_error,eps_cubed,time_panels,samples\n";
    for (double N : c.effective_N_list())
    {
        estimates::NoSmoothingOptions o;
        o.N = N;
        o.eps = c.eps;
        o.s = c.s;
        o.samples = c.effective_samples();
        o.seed = c.seed;
        const estimates::NoSmoothingResult r = estimates::nosmoothing_integral(o);
        f << N << ',' << r.value << ',' << r.std_error << ',' << r.eps_cubed << ',' << r.time_panels << ','
          << r.samples << '\n';
        log << "nosmoothing N=" << N << ": " << r.value << " +- " << r.std_error << " (eps^3 = " << r.eps_cubed
            << ")\n";
    }
    return 0;
}

int run_selftest(const RunConfig& c, std::ostream& log)
{
    const std::vector<CheckResult> checks = mkg::run_selftest(32);
    int passed = 0;
    const auto dir = prepare_out(c);
    std::ofstream f = open_artifact(dir / "selftest.csv");
    f << describe(c, "# ") << "check,error,tol,pass\n";
    for (const CheckResult& r : checks)
    {
        passed += r.pass;
        f << '"' << r.name << "\"," << r.error << ',' << r.tol << ',' << (r.pass ? 1 : 0) << '\n';
        log << (r.pass ? "PASS " : "FAIL ") << r.name << " (error " << r.error << ")\n";
    }
    log << "selftest: " << passed << "/" << checks.size() << " passed\n";
    return passed == static_cast<int>(checks.size()) ? 0 : 1;
}

} // namespace

Command parse_command(const std::string& name)
{
    const auto it = command_names.find(name);
    if (it == command_names.end())
        bad("command", "unknown command '" + name + "'");
    return it->second;
}

std::string command_name(Command c)
{
    for (const auto& [k, v] : command_names)
        if (v == c)
            return k;
    return "?";
}

std::vector<double> RunConfig::effective_N_list() const
{
    if (!N_list.empty())
        return N_list;
    if (command == Command::nosmoothing)
        return {50.0, 100.0, 200.0};
    return {4.0, 8.0, 16.0};
}

long RunConfig::effective_samples() const
{
    if (samples > 0)
        return samples;
    return command == Command::nosmoothing ? 1000000 : 100000;
}

DataSpec RunConfig::data_spec() const
{
    DataSpec d;
    d.preset = preset;
    d.k_lo = k_lo;
    d.k_hi = k_hi;
    d.amplitude = amplitude;
    d.spectral_slope = spectral_slope;
    d.eps = eps;
    d.N = N;
    d.s = s;
    d.seed = seed;
    return d;
}

RunConfig parse_config(const std::string& text, const Overrides& overrides)
{
    Overrides pairs;
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line))
    {
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        // Normalize "k = v" to "k=v" so pairs split on whitespace.
        std::string packed;
        for (std::size_t i = 0; i < line.size(); ++i)
        {
            if (line[i] == '=')
            {
                while (!packed.empty() && std::isspace(static_cast<unsigned char>(packed.back())))
                    packed.pop_back();
                packed += '=';
                while (i + 1 < line.size() && std::isspace(static_cast<unsigned char>(line[i + 1])))
                    ++i;
            }
            else
                packed += line[i];
        }
        std::istringstream tokens(packed);
        std::string tok;
        while (tokens >> tok)
        {
            const auto eq = tok.find('=');
            if (eq == std::string::npos || eq == 0)
                bad(eq == 0 ? "(empty)" : tok, "expected key = value");
            pairs.emplace_back(tok.substr(0, eq), tok.substr(eq + 1));
        }
    }
    pairs.insert(pairs.end(), overrides.begin(), overrides.end());

    RunConfig c;
    for (const auto& [k, v] : pairs)
    {
        const Key& key = find_key(k);
        if (v.empty())
            bad(k, "missing value");
        key.set(c, v);
    }
    validate(c);
    return c;
}

std::string describe(const RunConfig& cfg, const std::string& prefix)
{
    std::string s;
    for (const Key& k : keys())
        s += prefix + k.name + " = " + k.get(cfg) + "\n";
    return s;
}

std::string key_help()
{
    const RunConfig d;
    std::string s = "Config keys (flat key = value, # comments):\n";
    for (const Key& k : keys())
    {
        std::string name = "  " + k.name;
        name.resize(20, ' ');
        s += name + k.help + " [default " + k.get(d) + "]\n";
    }
    return s;
}

int run(const RunConfig& cfg, std::ostream& log, std::ostream& err)
{
    try
    {
        set_fft_planner(cfg.fft_planner == "measure" ? Planner::measure : Planner::estimate);
        switch (cfg.command)
        {
        case Command::simulate:
            return run_simulate(cfg, log);
        case Command::drift_sweep:
            return run_drift(cfg, log);
        case Command::estimates:
            return run_estimates(cfg, log);
        case Command::nosmoothing:
            return run_nosmoothing(cfg, log);
        case Command::selftest:
            return run_selftest(cfg, log);
        }
    }
    catch (const ConfigError& e)
    {
        err << "config error: " << e.what() << '\n';
        return 2;
    }
    catch (const std::exception& e)
    {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}

} // namespace mkg::cli
