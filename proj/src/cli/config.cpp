#include "conedido/cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <fstream>
#include <functional>
#include <sstream>

#include <CLI11.hpp>

namespace conedido::cli {

namespace {

constexpr std::pair<Command, const char*> command_table[] = {
    {Command::Profile, "profile"},     {Command::Minimize, "minimize"}, {Command::Verify, "verify"},
    {Command::Rearrange, "rearrange"}, {Command::Compare, "compare"},   {Command::Eigen, "eigen"},
    {Command::Hardy, "hardy"},         {Command::Suite, "suite"},
};

double to_double(const std::string& key, const std::string& v)
{
    std::size_t used = 0;
    double x = 0.0;
    try {
        x = std::stod(v, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != v.size() || v.empty() || !std::isfinite(x))
        throw ConfigError("field '" + key + "': expected a number, got '" + v + "'");
    return x;
}

long long to_integer(const std::string& key, const std::string& v)
{
    std::size_t used = 0;
    long long x = 0;
    try {
        x = std::stoll(v, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != v.size() || v.empty()) throw ConfigError("field '" + key + "': expected an integer, got '" + v + "'");
    return x;
}

int to_int(const std::string& key, const std::string& v)
{
    const long long x = to_integer(key, v);
    if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max())
        throw ConfigError("field '" + key + "': value out of range");
    return static_cast<int>(x);
}

bool to_bool(const std::string& key, const std::string& v)
{
    if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
    if (v == "0" || v == "false" || v == "no" || v == "off") return false;
    throw ConfigError("field '" + key + "': expected true/false, got '" + v + "'");
}

struct Field {
    const char* name;
    std::function<void(RunConfig&, const std::string&)> set;
    std::function<nlohmann::ordered_json(const RunConfig&)> get;
};

#define CONEDIDO_DOUBLE(F) \
    Field{#F, [](RunConfig& c, const std::string& v) { c.F = to_double(#F, v); }, [](const RunConfig& c) { return nlohmann::ordered_json(c.F); }}
#define CONEDIDO_INT(F) \
    Field{#F, [](RunConfig& c, const std::string& v) { c.F = to_int(#F, v); }, [](const RunConfig& c) { return nlohmann::ordered_json(c.F); }}
#define CONEDIDO_STRING(F) \
    Field{#F, [](RunConfig& c, const std::string& v) { c.F = v; }, [](const RunConfig& c) { return nlohmann::ordered_json(c.F); }}

const std::vector<Field>& fields()
{
    static const std::vector<Field> table = {
        CONEDIDO_DOUBLE(a),
        CONEDIDO_DOUBLE(k),
        CONEDIDO_DOUBLE(c),
        CONEDIDO_INT(N),
        CONEDIDO_DOUBLE(tau),
        CONEDIDO_DOUBLE(R),
        CONEDIDO_INT(nodes),
        CONEDIDO_INT(radial),
        CONEDIDO_INT(angular),
        CONEDIDO_STRING(modes),
        CONEDIDO_INT(samples),
        CONEDIDO_INT(max_iterations),
        CONEDIDO_DOUBLE(lambda),
        CONEDIDO_STRING(anisotropy),
        CONEDIDO_STRING(source),
        CONEDIDO_STRING(function),
        CONEDIDO_DOUBLE(m),
        CONEDIDO_STRING(hardy_n),
        Field{"experimental", [](RunConfig& c, const std::string& v) { c.experimental = to_bool("experimental", v); },
              [](const RunConfig& c) { return nlohmann::ordered_json(c.experimental); }},
        CONEDIDO_STRING(preset),
        Field{"seed",
              [](RunConfig& c, const std::string& v) {
                  const long long s = to_integer("seed", v);
                  if (s < 0) throw ConfigError("field 'seed': must be nonnegative");
                  c.seed = static_cast<std::uint64_t>(s);
              },
              [](const RunConfig& c) { return nlohmann::ordered_json(c.seed); }},
        CONEDIDO_DOUBLE(tolerance),
        CONEDIDO_STRING(input),
        CONEDIDO_STRING(output),
        CONEDIDO_STRING(csv),
        CONEDIDO_STRING(trace),
    };
    return table;
}

#undef CONEDIDO_DOUBLE
#undef CONEDIDO_INT
#undef CONEDIDO_STRING

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

void require(bool ok, const std::string& field, const std::string& msg)
{
    if (!ok) throw ConfigError("field '" + field + "': " + msg);
}

bool one_of(const std::string& v, std::initializer_list<const char*> options)
{
    for (const char* o : options)
        if (v == o) return true;
    return false;
}

} // namespace

const char* command_name(Command c)
{
    for (const auto& [cmd, name] : command_table)
        if (cmd == c) return name;
    return "?";
}

std::optional<Command> parse_command(const std::string& s)
{
    for (const auto& [cmd, name] : command_table)
        if (s == name) return cmd;
    return std::nullopt;
}

std::vector<std::string> field_names()
{
    std::vector<std::string> out;
    for (const auto& f : fields()) out.emplace_back(f.name);
    return out;
}

void set_field(RunConfig& cfg, const std::string& key, const std::string& value)
{
    for (const auto& f : fields())
        if (key == f.name) {
            f.set(cfg, value);
            return;
        }
    throw ConfigError("unknown field '" + key + "'");
}

void RunConfig::validate() const
{
    require(a > 0.0, "a", "must be positive");
    require(k >= 0.0, "k", "must be nonnegative");
    require(c >= 0.0, "c", "must be nonnegative");
    require(N >= 1, "N", "must be at least 1");
    require(tau >= 0.0, "tau", "must be nonnegative");
    require(R > 0.0, "R", "must be positive");
    require(nodes >= 16, "nodes", "must be at least 16");
    require(radial >= 4, "radial", "must be at least 4");
    require(angular >= 4, "angular", "must be at least 4");
    require(samples >= 1, "samples", "must be positive");
    require(max_iterations >= 1, "max_iterations", "must be positive");
    require(lambda >= 1.0, "lambda", "must be at least 1");
    require(one_of(anisotropy, {"isotropic", "diagonal", "rotating"}), "anisotropy",
            "expected isotropic, diagonal or rotating");
    require(one_of(source, {"one", "linear", "bump", "offset"}), "source", "expected one, linear, bump or offset");
    require(one_of(function, {"abs", "paraboloid", "bump", "sector", "input"}), "function",
            "expected abs, paraboloid, bump, sector or input");
    require(m >= 0.0, "m", "must be nonnegative");
    require(experimental || m == std::floor(m), "m", "must be an integer unless experimental=true");
    require(one_of(preset, {"quick", "acceptance"}), "preset", "expected quick or acceptance");
    require(tolerance > 0.0, "tolerance", "must be positive");

    std::istringstream ns(hardy_n);
    std::string item;
    int count = 0;
    while (std::getline(ns, item, ',')) {
        const int n = to_int("hardy_n", trim(item));
        require(n >= 2, "hardy_n", "entries must be at least 2");
        ++count;
    }
    require(count > 0, "hardy_n", "needs at least one entry");

    std::istringstream ms(modes);
    while (std::getline(ms, item, ',')) {
        const auto colon = item.find(':');
        require(colon != std::string::npos, "modes", "entries must look like i:eps");
        const int i = to_int("modes", trim(item.substr(0, colon)));
        to_double("modes", trim(item.substr(colon + 1)));
        require(i >= 1, "modes", "mode numbers must be positive");
    }
    if (command == Command::Compare || command == Command::Rearrange)
        require(N == 2, "N", "grid commands are planar (N = 2)");
    if (command == Command::Minimize || command == Command::Verify)
        require(N == 2, "N", "profile commands are planar (N = 2)");
    if (command == Command::Rearrange && function == "input")
        require(!input.empty(), "input", "function=input needs an input file");
}

nlohmann::ordered_json RunConfig::to_json() const
{
    nlohmann::ordered_json j;
    j["command"] = command_name(command);
    for (const auto& f : fields()) j[f.name] = f.get(*this);
    return j;
}

std::map<std::string, std::string> read_config_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::map<std::string, std::string> out;
    std::string line;
    int lineno = 0;
    const auto names = field_names();
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key=value");
        const std::string key = trim(line.substr(0, eq));
        if (key != "command" && std::find(names.begin(), names.end(), key) == names.end())
            throw ConfigError(path + ":" + std::to_string(lineno) + ": unknown field '" + key + "'");
        out[key] = trim(line.substr(eq + 1));
    }
    return out;
}

RunConfig parse_command_line(int argc, const char* const* argv)
{
    CLI::App app{"Weighted isoperimetric checks in half-spaces", "conedido"};
    app.require_subcommand(1);
    std::string config_path;
    std::map<std::string, std::string> flags;
    for (const auto& [cmd, name] : command_table) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "key=value file; flags override its entries");
        for (const auto& f : fields()) {
            const std::string key = f.name;
            sub->add_option_function<std::string>("--" + key, [&flags, key](const std::string& v) { flags[key] = v; });
        }
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        throw HelpRequested{app.help()};
    } catch (const CLI::CallForAllHelp&) {
        throw HelpRequested{app.help("", CLI::AppFormatMode::All)};
    } catch (const CLI::ParseError& e) {
        throw ConfigError(e.what());
    }

    RunConfig cfg;
    for (const auto& [cmd, name] : command_table)
        if (app.got_subcommand(name)) cfg.command = cmd;

    std::map<std::string, std::string> merged;
    if (!config_path.empty()) {
        merged = read_config_file(config_path);
        if (auto it = merged.find("command"); it != merged.end()) {
            if (it->second != command_name(cfg.command))
                throw ConfigError("config file command '" + it->second + "' differs from '" +
                                  command_name(cfg.command) + "'");
            merged.erase(it);
        }
    }
    for (const auto& [key, value] : flags) merged[key] = value;
    for (const auto& [key, value] : merged) set_field(cfg, key, value);
    cfg.validate();
    return cfg;
}

} // namespace conedido::cli
