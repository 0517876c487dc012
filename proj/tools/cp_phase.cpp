#include "job.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

int main(int argc, char** argv) {
    using namespace cpphase::cli;

    CLI::App app{"Interference patterns and geometric phases of qubit and qudit channels", "cp-phase"};
    std::string command, config_path, out_path;
    std::optional<double> tol;
    app.add_option("command", command, "pattern | fringe | verify | geomphase | dilate")
        ->required()
        ->check(CLI::IsMember({"pattern", "fringe", "verify", "geomphase", "dilate"}));
    app.add_option("--config", config_path, "job configuration (JSON)")->required();
    app.add_option("--out", out_path, "write CSV (JSON for dilate) to this file");
    app.add_option("--tol", tol, "verify: deviation threshold (1e-10); geomphase: residual warning threshold (1e-6)")
        ->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e, std::cout, std::cerr);
        return exit_input;
    }

    std::ifstream in(config_path, std::ios::binary);
    if (!in) {
        std::cerr << "error: cannot read config file " << config_path << '\n';
        return exit_input;
    }
    std::ostringstream text;
    text << in.rdbuf();

    std::ostringstream report, csv;
    const bool to_file = !out_path.empty();
    const int code = run({command, text.str(), tol}, {report, to_file ? &csv : nullptr}, std::cerr);
    std::cout << report.str();
    if (to_file && (code == exit_ok || code == exit_verification)) {
        std::ofstream out(out_path, std::ios::binary);
        out << csv.str();
        if (!out) {
            std::cerr << "error: cannot write " << out_path << '\n';
            return exit_input;
        }
    }
    return code;
}
