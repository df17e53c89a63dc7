#include <iostream>

#include <CLI11.hpp>

#include "cli/common.hpp"
#include "emi/error.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Layered-earth EM induction: forward fields, inversion, petrophysics"};
    app.set_version_flag("--version", emi::cli::kVersion);
    app.require_subcommand(1);
    emi::cli::add_forward(app);
    emi::cli::add_survey(app);
    emi::cli::add_invert(app);
    emi::cli::add_petro(app);
    emi::cli::add_tables(app);
    app.footer("Exit codes: 0 ok, 2 usage or validation error, 3 numerical failure.\n"
               "EMI_ASSET_DIR overrides the asset directory (filter tables).\n"
               "EMI_SIMD=scalar disables the AVX2 kernels.");
    emi::cli::set_command_line(argc, argv);
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    } catch (const emi::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const emi::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
