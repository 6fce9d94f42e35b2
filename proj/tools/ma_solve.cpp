// Command-line runner for the Monge-Ampere benchmark problems.
//
//   ma_solve --example ex4 --n 8,16,32 --mode fmg-fas
//   ma_solve --example ex1,ex2,ex3 --n 128,256 --ordering red-black --output csv --workers 3
//
// Exit status: 0 all runs converged, 2 some run did not converge, 1 usage error.

#include <monge_ampere/cli.hpp>

#include <CLI11.hpp>

#include <iostream>
#include <sstream>
#include <string>
#include <vector>

int main(int argc, char** argv) {
    CLI::App app{"Multigrid solver for the Dirichlet Monge-Ampere problem det(D^2 u) = f"};

    std::string examples;
    std::string sizes = "8,16,32";
    std::string mode = "fmg-fas";
    std::string ordering = "lex";
    std::string output = "table";
    std::string dump;
    std::string coarse_guess = "inject";
    ma::SolverConfig cfg;
    int repeat = 1;
    int workers = 1;

    app.add_option("--example", examples, "Example id(s), comma separated: ex1..ex7, quad2d, quad3d")->required();
    app.add_option("--n", sizes, "Grid sizes (cells per axis), comma separated powers of 2")->capture_default_str();
    app.add_option("--mode", mode, "fmg-fas | fas-only | gauss-seidel")->capture_default_str();
    app.add_option("--nu1", cfg.nu1, "Pre-smoothing sweeps")->capture_default_str();
    app.add_option("--nu2", cfg.nu2, "Post-smoothing sweeps")->capture_default_str();
    app.add_option("--tol", cfg.tol, "Relative residual target")->capture_default_str();
    app.add_option("--max-cycles", cfg.max_cycles, "Extra V-cycles allowed after FMG")->capture_default_str();
    app.add_option("--max-gs-iters", cfg.max_gs_iters, "Iteration cap in gauss-seidel mode")->capture_default_str();
    app.add_option("--ordering", ordering, "lex | red-black (2D only)")->capture_default_str();
    app.add_option("--coarse-sweeps", cfg.coarse_sweeps, "Sweeps on the coarsest level")->capture_default_str();
    app.add_option("--coarse-guess", coarse_guess, "inject | halfweight: coarse starting value in a V-cycle")
        ->capture_default_str();
    app.add_option("--output", output, "table | csv")->capture_default_str();
    app.add_option("--dump", dump, "Write the final field(s) to this path");
    app.add_option("--repeat", repeat, "Timed repetitions per solve (median is reported)")->capture_default_str();
    app.add_option("--workers", workers, "Concurrent solves when several examples are given")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    std::vector<ma::cli::RunSpec> specs;
    ma::cli::OutputFormat format{};
    try {
        cfg.mode = ma::cli::parse_mode(mode);
        cfg.ordering = ma::cli::parse_ordering(ordering);
        if (coarse_guess == "inject") cfg.coarse_guess = ma::CoarseGuess::Injection;
        else if (coarse_guess == "halfweight") cfg.coarse_guess = ma::CoarseGuess::HalfWeight;
        else throw ma::ConfigError("unknown coarse guess '" + coarse_guess + "' (expected inject, halfweight)");
        if (output == "table") format = ma::cli::OutputFormat::Table;
        else if (output == "csv") format = ma::cli::OutputFormat::Csv;
        else throw ma::ConfigError("unknown output format '" + output + "' (expected table, csv)");

        const auto ns = ma::cli::parse_sizes(sizes);
        std::string id;
        std::istringstream ids(examples);
        while (std::getline(ids, id, ',')) {
            if (id.empty()) continue;
            ma::cli::RunSpec spec;
            spec.example = id;
            spec.sizes = ns;
            spec.config = cfg;
            spec.output = format;
            spec.repeat = repeat;
            if (!dump.empty()) spec.dump_path = dump;
            spec.validate();
            specs.push_back(std::move(spec));
        }
        if (specs.empty()) throw ma::ConfigError("no example given");
        if (workers < 1) throw ma::ConfigError("workers must be at least 1");
    } catch (const ma::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const ma::DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }

    const auto result = ma::cli::sweep(specs, workers);
    if (format == ma::cli::OutputFormat::Csv) std::cout << ma::cli::format_csv(result.rows);
    else std::cout << ma::cli::format_table(result.rows, cfg.mode);
    return result.status;
}
