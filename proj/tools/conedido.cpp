#include <iostream>

#include "conedido/cli/commands.hpp"
#include "conedido/errors.hpp"

int main(int argc, char** argv)
{
    using namespace conedido;
    using namespace conedido::cli;
    try {
        const RunConfig cfg = parse_command_line(argc, argv);
        return run(cfg, std::cout, std::cerr);
    } catch (const HelpRequested& h) {
        std::cout << h.text;
        return exit_ok;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return exit_config_error;
    } catch (const PreconditionError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return exit_config_error;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return exit_numerical_error;
    } catch (const DomainError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return exit_numerical_error;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_numerical_error;
    }
}
