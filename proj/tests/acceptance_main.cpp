// Runs the numbered acceptance criteria and prints one line per criterion.

#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "conedido/cli/acceptance.hpp"

int main(int argc, char** argv)
{
    using namespace conedido::cli;
    CLI::App app{"acceptance criteria"};
    bool quick = false;
    std::vector<int> only;
    app.add_flag("--quick", quick, "reduced sample counts");
    app.add_option("--only", only, "criterion ids to run")->delimiter(',')->check(CLI::Range(1, criterion_count));
    CLI11_PARSE(app, argc, argv);

    SuiteOptions opts;
    opts.quick = quick;
    opts.only = only;
    opts.threads = threads_from_env();
    bool ok = true;
    for (const auto& r : run_suite(opts)) {
        std::cout << format_line(r) << std::endl;
        ok = ok && r.pass;
    }
    return ok ? 0 : 1;
}
