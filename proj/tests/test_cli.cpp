#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "conedido/cli/acceptance.hpp"
#include "conedido/cli/commands.hpp"
#include "conedido/cli/config.hpp"
#include "conedido/density.hpp"

using namespace conedido;
using namespace conedido::cli;
namespace fs = std::filesystem;

namespace {

RunConfig parse(std::vector<const char*> args)
{
    args.insert(args.begin(), "conedido");
    return parse_command_line(static_cast<int>(args.size()), args.data());
}

fs::path scratch(const std::string& name)
{
    const auto dir = fs::temp_directory_path() / "conedido_cli_test";
    fs::create_directories(dir);
    return dir / name;
}

nlohmann::json run_json(const RunConfig& cfg, int& status)
{
    std::ostringstream out, log;
    status = run(cfg, out, log);
    return nlohmann::json::parse(out.str());
}

} // namespace

TEST_CASE("flags populate the configuration")
{
    const auto cfg = parse({"profile", "--k", "1", "--c", "0.5", "--tau", "2.0"});
    CHECK(cfg.command == Command::Profile);
    CHECK(cfg.k == 1.0);
    CHECK(cfg.c == 0.5);
    CHECK(cfg.tau == 2.0);
    CHECK(cfg.N == 2);
}

TEST_CASE("flags override the file")
{
    const auto path = scratch("run.cfg");
    {
        std::ofstream f(path);
        f << "# density\ncommand = minimize\nk = 2\nc=1\n\nnodes = 64\n";
    }
    const auto cfg = parse({"minimize", "--config", path.c_str(), "--c", "0.25"});
    CHECK(cfg.k == 2.0);
    CHECK(cfg.c == 0.25);
    CHECK(cfg.nodes == 64);
    CHECK_THROWS_AS(parse({"profile", "--config", path.c_str()}), ConfigError);
}

TEST_CASE("diagnostics name the line or field")
{
    const auto path = scratch("bad.cfg");
    {
        std::ofstream f(path);
        f << "k = 1\nwidth = 3\n";
    }
    try {
        parse({"profile", "--config", path.c_str()});
        FAIL("expected a config error");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find(":2:") != std::string::npos);
    }
    try {
        parse({"profile", "--k", "-1"});
        FAIL("expected a config error");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("'k'") != std::string::npos);
    }
    CHECK_THROWS_AS(parse({"profile", "--nodes", "many"}), ConfigError);
    CHECK_THROWS_AS(parse({"hardy", "--m", "0.5"}), ConfigError);
    CHECK_NOTHROW(parse({"hardy", "--m", "0.5", "--experimental", "true"}));
    CHECK_THROWS_AS(parse({"compare", "--N", "3"}), ConfigError);
    CHECK_THROWS_AS(parse({"frobnicate"}), ConfigError);
    CHECK_THROWS_AS(parse({"profile", "--help"}), HelpRequested);
}

TEST_CASE("profile command")
{
    auto cfg = parse({"profile", "--k", "1", "--c", "0.5", "--tau", "2.0"});
    int status = -1;
    const auto j = run_json(cfg, status);
    CHECK(status == exit_ok);
    const auto d = Density::half_space(1, 0.5);
    CHECK(j["results"]["profile"].get<double>() == doctest::Approx(isoperimetric_profile(d, 2.0)).epsilon(1e-15));
    CHECK(j["results"]["star_radius"].get<double>() == doctest::Approx(star_radius(d, 2.0)).epsilon(1e-15));
    CHECK(j["config"]["k"].get<double>() == 1.0);
    CHECK(j["pass"].get<bool>());
}

TEST_CASE("summaries are deterministic and echo the configuration")
{
    auto cfg = parse({"verify", "--k", "1", "--samples", "20", "--nodes", "64", "--seed", "7"});
    std::ostringstream a, b, log;
    CHECK(run(cfg, a, log) == exit_ok);
    CHECK(run(cfg, b, log) == exit_ok);
    CHECK(a.str() == b.str());
    const auto j = nlohmann::json::parse(a.str());
    for (const auto& name : field_names()) CHECK(j["config"].contains(name));
}

TEST_CASE("commands write their data files")
{
    const auto csv = scratch("profile.csv"), out = scratch("summary.json");
    auto cfg = parse({"minimize", "--k", "1", "--c", "0.5", "--modes", "2:0.3", "--nodes", "128"});
    cfg.csv = csv.string();
    cfg.output = out.string();
    std::ostringstream sink, log;
    CHECK(run(cfg, sink, log) == exit_ok);
    CHECK(sink.str().empty());
    std::ifstream f(out);
    const auto j = nlohmann::json::parse(f);
    CHECK(j["results"]["sup_deviation"].get<double>() <= 1e-3);
    CHECK(fs::file_size(csv) > 0);
}

TEST_CASE("remaining commands run")
{
    int status = -1;
    auto j = run_json(parse({"eigen", "--k", "1", "--nodes", "1024"}), status);
    CHECK(status == exit_ok);
    CHECK(j["results"]["lambda1"].get<double>() == doctest::Approx(2.0).epsilon(1e-3));

    j = run_json(parse({"hardy", "--N", "3", "--k", "1", "--m", "2"}), status);
    CHECK(status == exit_ok);
    CHECK(j["results"]["constant"].get<double>() == doctest::Approx(7.0));

    j = run_json(parse({"rearrange", "--function", "paraboloid", "--k", "1", "--radial", "64", "--angular", "64"}), status);
    CHECK(status == exit_ok);
    CHECK(j["results"]["polya_szego_asserted"].get<bool>());
    j = run_json(parse({"rearrange", "--radial", "256", "--angular", "256"}), status);
    CHECK(status == exit_ok);
    CHECK_FALSE(j["results"]["polya_szego_asserted"].get<bool>());

    j = run_json(parse({"compare", "--radial", "32", "--angular", "32", "--lambda", "3", "--source", "offset"}), status);
    CHECK(status == exit_ok);
    CHECK(j["results"]["qnorm"].size() == 4);

    auto missing = parse({"rearrange", "--function", "input", "--input", "/nonexistent/u.csv"});
    std::ostringstream out, log;
    CHECK_THROWS_AS(run(missing, out, log), ConfigError);
}

TEST_CASE("acceptance helpers")
{
    const auto r = run_criterion(11, true);
    CHECK(r.id == 11);
    CHECK(r.pass);
    CHECK(format_line(r).find("criterion 11 PASS") == 0);
    CHECK_THROWS(run_criterion(12, true));
}
