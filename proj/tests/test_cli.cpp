#include "mkg/cli.hpp"
#include "mkg/grid.hpp"

#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace mkg;
using namespace mkg::cli;

namespace
{

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream f(p);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::filesystem::path scratch_dir(const std::string& name)
{
    const auto dir = std::filesystem::temp_directory_path() / ("mkg_test_cli_" + name);
    std::filesystem::remove_all(dir);
    return dir;
}

std::string error_of(const std::string& text, const Overrides& ov = {})
{
    try
    {
        parse_config(text, ov);
    }
    catch (const ConfigError& e)
    {
        return e.what();
    }
    return "";
}

int run_quiet(const RunConfig& c)
{
    std::ostringstream log, err;
    return run(c, log, err);
}

} // namespace

TEST_CASE("config parsing")
{
    const RunConfig c = parse_config("grid=32 box=6.2831853 s=0.9 N=8 dt=0.005 t_end=1.0");
    CHECK(c.command == Command::simulate);
    CHECK(c.grid == 32);
    CHECK(c.box == doctest::Approx(6.2831853));
    CHECK(c.N == 8.0);
    CHECK(c.t_end == 1.0);

    const RunConfig d = parse_config("# header\ngrid = 64   # trailing\n\nN_list = 2,4\npreset=appendix\n");
    CHECK(d.grid == 64);
    CHECK(d.N_list == std::vector<double>{2.0, 4.0});
    CHECK(d.preset == Preset::appendix);

    CHECK(parse_config("").effective_N_list() == std::vector<double>{4.0, 8.0, 16.0});
    CHECK(parse_config("command=nosmoothing").effective_N_list() == std::vector<double>{50.0, 100.0, 200.0});
    CHECK(parse_config("command=nosmoothing").effective_samples() == 1000000);
}

TEST_CASE("config errors name the key")
{
    CHECK(error_of("s=1.2").rfind("s:", 0) == 0);
    CHECK(error_of("bogus=1").rfind("bogus:", 0) == 0);
    CHECK(error_of("grid=3.5").rfind("grid:", 0) == 0);
    CHECK(error_of("grid=48").rfind("grid:", 0) == 0);
    CHECK(error_of("dt=0.5").rfind("dt:", 0) == 0);
    CHECK(error_of("seed=-1").rfind("seed:", 0) == 0);
    CHECK(error_of("preset=sphere").rfind("preset:", 0) == 0);
    CHECK(error_of("k_lo=5 k_hi=4").rfind("k_hi:", 0) == 0);
    CHECK(error_of("N_list=4,x").rfind("N_list:", 0) == 0);
    CHECK(error_of("fft_planner=patient").rfind("fft_planner:", 0) == 0);
    CHECK(error_of("command=nosmoothing N_list=10").rfind("N_list:", 0) == 0);
    CHECK(error_of("grid").rfind("grid:", 0) == 0);
    CHECK(error_of("", {{"s", "0.2"}}).rfind("s:", 0) == 0);
}

TEST_CASE("flags override the file and round-trip")
{
    const std::string text = "grid=16 box=3.0 s=0.8 N=3 dt=0.01 t_end=0.5 seed=9 out=somewhere\n";
    const Overrides flags = {{"grid", "16"}, {"box", "3.0"}, {"s", "0.8"},   {"N", "3"},
                             {"dt", "0.01"}, {"t_end", "0.5"}, {"seed", "9"}, {"out", "somewhere"}};
    CHECK(parse_config("", flags) == parse_config(text));
    CHECK(parse_config(text, {{"s", "0.7"}}).s == 0.7);

    const RunConfig c = parse_config(text);
    CHECK(describe(parse_config(describe(c))) == describe(c));
}

TEST_CASE("simulate on zero data")
{
    const auto dir = scratch_dir("zero");
    const RunConfig c = parse_config("preset=zero grid=16 N=4 dt=0.01 t_end=0.05 out=" + dir.string());
    REQUIRE(run_quiet(c) == 0);
    std::istringstream csv(slurp(dir / "trajectory.csv"));
    std::string line;
    int rows = 0, header = 0;
    while (std::getline(csv, line))
    {
        if (line.rfind("# ", 0) == 0)
        {
            ++header;
            continue;
        }
        if (line.rfind("t,", 0) == 0)
            continue;
        ++rows;
        CHECK(line.substr(line.find(',')) == ",0,0,0,0,0");
    }
    CHECK(rows == 6);
    const std::string resolved = describe(c);
    CHECK(header == static_cast<int>(std::count(resolved.begin(), resolved.end(), '\n')));
    CHECK(std::filesystem::exists(dir / "final.mkg"));
    CHECK(slurp(dir / "final.json").find("\"preset\": \"zero\"") != std::string::npos);
}

TEST_CASE("drift-sweep writes one row per N and is deterministic")
{
    const auto dir = scratch_dir("drift");
    RunConfig c = parse_config("command=drift-sweep grid=16 box=1.5707963267948966 k_lo=4 k_hi=16 amplitude=0.01 "
                               "dt=0.01 t_end=0.05 N_list=4,8,16 target_H=10 out=" + dir.string());
    REQUIRE(run_quiet(c) == 0);
    const std::string first = slurp(dir / "drift.csv");
    int rows = 0;
    std::istringstream csv(first);
    std::string line;
    while (std::getline(csv, line))
        rows += !line.empty() && line[0] != '#' && line[0] != 'N';
    CHECK(rows == 3);
    CHECK(first.find("# slope = ") != std::string::npos);
    REQUIRE(run_quiet(c) == 0);
    CHECK(slurp(dir / "drift.csv") == first);
}

TEST_CASE("run maps failures to exit codes")
{
    const auto dir = scratch_dir("codes");
    // N beyond the resolved band is only detectable once the grid exists.
    CHECK(run_quiet(parse_config("grid=16 N=12 t_end=0.01 dt=0.01 out=" + dir.string())) == 2);
    CHECK(run_quiet(parse_config("command=selftest out=" + dir.string())) == 0);
    CHECK(slurp(dir / "selftest.csv").find(",0\n") == std::string::npos);
}
