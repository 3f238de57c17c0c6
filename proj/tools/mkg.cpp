#include "mkg/cli.hpp"
#include "mkg/grid.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

int main(int argc, char** argv)
{
    CLI::App app{"Maxwell-Klein-Gordon experiment runner"};
    app.footer(mkg::cli::key_help());
    app.require_subcommand(1, 1);

    std::string config_path, opt_N, opt_N_list, opt_seed, opt_out, opt_grid, opt_box, opt_s, opt_dt, opt_t_end;
    for (const char* name : {"simulate", "drift-sweep", "estimates", "nosmoothing", "selftest"})
    {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "flat key = value config file");
        sub->add_option("--grid", opt_grid, "points per axis");
        sub->add_option("--box", opt_box, "box side length");
        sub->add_option("--s", opt_s, "I-operator exponent");
        auto* n = sub->add_option("--N", opt_N, "I-operator frequency");
        sub->add_option("--N-list", opt_N_list, "comma-separated N values")->excludes(n);
        sub->add_option("--dt", opt_dt, "time step");
        sub->add_option("--t-end", opt_t_end, "final time");
        sub->add_option("--seed", opt_seed, "random seed");
        sub->add_option("--out", opt_out, "output directory");
    }
    CLI11_PARSE(app, argc, argv);

    std::string text;
    if (!config_path.empty())
    {
        std::ifstream f(config_path);
        if (!f)
        {
            std::cerr << "config error: config: cannot read '" << config_path << "'\n";
            return 2;
        }
        std::ostringstream ss;
        ss << f.rdbuf();
        text = ss.str();
    }

    mkg::cli::Overrides ov = {{"command", app.get_subcommands().front()->get_name()}};
    const std::pair<const char*, const std::string*> flags[] = {
        {"grid", &opt_grid}, {"box", &opt_box}, {"s", &opt_s},          {"N", &opt_N},       {"N_list", &opt_N_list},
        {"dt", &opt_dt},     {"t_end", &opt_t_end}, {"seed", &opt_seed}, {"out", &opt_out}};
    for (const auto& [key, value] : flags)
        if (!value->empty())
            ov.emplace_back(key, *value);

    mkg::cli::RunConfig cfg;
    try
    {
        cfg = mkg::cli::parse_config(text, ov);
    }
    catch (const mkg::ConfigError& e)
    {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    }
    return mkg::cli::run(cfg, std::cout, std::cerr);
}
