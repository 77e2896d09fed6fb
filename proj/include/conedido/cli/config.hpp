#pragma once
//
// Run configuration: flat key=value files merged with command-line flags
// (flags win), validated before dispatch.
//

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace conedido::cli {

enum class Command { Profile, Minimize, Verify, Rearrange, Compare, Eigen, Hardy, Suite };

const char* command_name(Command c);
std::optional<Command> parse_command(const std::string& s);

/// Bad configuration: reported with exit status 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    Command command = Command::Profile;

    // density
    double a = 1.0;
    double k = 0.0;
    double c = 0.0;
    int N = 2;

    // geometry and grids
    double tau = 1.0;    // measure for `profile`
    double R = 1.0;      // base radius for profiles, domain radius for PDE problems
    int nodes = 512;     // angular nodes (profiles, eigenproblems)
    int radial = 128;    // radial grid intervals
    int angular = 128;   // angular grid intervals
    std::string modes = "2:0.3";  // sine modes i:eps of the initial profile
    int samples = 1000;  // random profiles for `verify`
    int max_iterations = 100000;

    // PDE
    double lambda = 1.0;
    std::string anisotropy = "diagonal";  // isotropic | diagonal | rotating
    std::string source = "one";           // one | linear | bump | offset
    std::string function = "abs";         // built-in field for `rearrange`

    // Hardy
    double m = 0.0;
    std::string hardy_n = "4,8,16,32";
    bool experimental = false;

    // suite
    std::string preset = "quick";

    std::uint64_t seed = 1;
    double tolerance = 1e-3;

    std::string input;
    std::string output;   // JSON summary path (stdout when empty)
    std::string csv;      // optional CSV/plot data path
    std::string trace;    // flow trace CSV path

    void validate() const;
    nlohmann::ordered_json to_json() const;
};

/// Applies one key=value pair; throws ConfigError naming the field.
void set_field(RunConfig& cfg, const std::string& key, const std::string& value);

/// Names of every settable field, in echo order.
std::vector<std::string> field_names();

/// Reads key=value lines ('#' comments, blank lines allowed). Errors carry the line number.
std::map<std::string, std::string> read_config_file(const std::string& path);

/// Thrown by parse_command_line for --help; carries the formatted text.
struct HelpRequested {
    std::string text;
};

/// Builds the configuration from `command [--key value ...] [--config file]`.
RunConfig parse_command_line(int argc, const char* const* argv);

} // namespace conedido::cli
