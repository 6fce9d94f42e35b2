#pragma once

#include "errors.hpp"
#include "grid.hpp"
#include "multigrid.hpp"
#include "problems.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace ma::cli {

enum class OutputFormat { Table, Csv };

/// One benchmark request: an example solved on a list of grid sizes.
struct RunSpec {
    std::string example;
    std::vector<int> sizes;
    SolverConfig config;
    OutputFormat output = OutputFormat::Table;
    std::optional<std::string> dump_path;
    int repeat = 1;

    void validate() const {
        example_dim(example);
        if (sizes.empty()) throw ConfigError("at least one grid size is required");
        for (int n : sizes)
            if (n < 2 || (n & (n - 1)) != 0) throw ConfigError("grid size " + std::to_string(n) + " is not a power of 2");
        if (repeat < 1) throw ConfigError("repeat must be at least 1");
        config.validate();
        if (example_dim(example) == 3) validate_ordering<3>(config.ordering);
    }
};

struct RunRow {
    std::string example;
    int n = 0;
    double relres = std::nan("");
    std::optional<double> error;
    std::optional<double> order;
    int iter = 0;
    double cpu_seconds = 0.0;
    std::size_t indefinite_updates = 0;
    bool converged = false;
    std::string failure; ///< non-empty when the solve threw
};

struct RunResult {
    std::vector<RunRow> rows;
    int status = 0; ///< 0 all converged, 2 some unconverged
};

inline std::string_view mode_name(SolverMode m) {
    switch (m) {
    case SolverMode::FmgFas: return "fmg-fas";
    case SolverMode::FasOnly: return "fas-only";
    case SolverMode::GaussSeidel: return "gauss-seidel";
    }
    return "?";
}

inline SolverMode parse_mode(std::string_view s) {
    if (s == "fmg-fas") return SolverMode::FmgFas;
    if (s == "fas-only") return SolverMode::FasOnly;
    if (s == "gauss-seidel") return SolverMode::GaussSeidel;
    throw ConfigError("unknown mode '" + std::string(s) + "' (expected fmg-fas, fas-only, gauss-seidel)");
}

inline SweepOrdering parse_ordering(std::string_view s) {
    if (s == "lex") return SweepOrdering::Lexicographic;
    if (s == "red-black") return SweepOrdering::RedBlack;
    throw ConfigError("unknown ordering '" + std::string(s) + "' (expected lex, red-black)");
}

inline std::vector<int> parse_sizes(std::string_view text) {
    std::vector<int> out;
    std::string item;
    std::istringstream is{std::string(text)};
    while (std::getline(is, item, ',')) {
        if (item.empty()) continue;
        std::size_t used = 0;
        int n = 0;
        try {
            n = std::stoi(item, &used);
        } catch (const std::exception&) {
            throw ConfigError("cannot parse grid size '" + item + "'");
        }
        if (used != item.size()) throw ConfigError("cannot parse grid size '" + item + "'");
        out.push_back(n);
    }
    return out;
}

namespace detail {

inline double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

// <stem>_<example>_n<N><ext>, so several runs never overwrite each other
inline std::string dump_name(const std::string& path, const std::string& example, int n) {
    std::filesystem::path p(path);
    const std::string stem = p.stem().string() + "_" + example + "_n" + std::to_string(n);
    return (p.parent_path() / (stem + p.extension().string())).string();
}

template <int Dim>
RunResult run_dim(const RunSpec& spec) {
    const Problem<Dim> problem = catalog<Dim>(spec.example);
    RunResult result;
    for (int n : spec.sizes) {
        RunRow row;
        row.example = spec.example;
        row.n = n;
        try {
            const auto geom = problem.geometry(n);
            const auto rhs = sample_source(problem, geom);
            std::vector<double> times;
            std::optional<SolveResult<Dim>> last;
            for (int k = 0; k < spec.repeat; ++k) {
                last.emplace(solve_with_rhs(problem, rhs, spec.config));
                times.push_back(last->report.wall_time);
            }
            const SolveReport& rep = last->report;
            row.relres = rep.final_relres();
            row.error = rep.error_max;
            row.iter = rep.cycles;
            row.cpu_seconds = median(times);
            row.indefinite_updates = rep.indefinite_updates;
            row.converged = rep.converged;
            if (spec.dump_path) write_field_csv(dump_name(*spec.dump_path, spec.example, n), last->field);
        } catch (const DegenerateNodeError& e) {
            row.failure = e.what();
        } catch (const DataError& e) {
            row.failure = e.what();
        }
        if (!row.converged) result.status = 2;
        result.rows.push_back(std::move(row));
    }
    for (std::size_t i = 1; i < result.rows.size(); ++i) {
        const auto& prev = result.rows[i - 1];
        const auto& cur = result.rows[i];
        if (prev.error && cur.error && cur.n == 2 * prev.n)
            result.rows[i].order = estimate_order({{prev.n, *prev.error}, {cur.n, *cur.error}}).front();
    }
    return result;
}

} // namespace detail

/// Solve the example at every requested size. Configuration problems throw
/// ConfigError; solver failures and non-convergence are recorded in the rows.
inline RunResult run(const RunSpec& spec) {
    spec.validate();
    return example_dim(spec.example) == 2 ? detail::run_dim<2>(spec) : detail::run_dim<3>(spec);
}

/// Run independent specs on up to `workers` threads and merge their rows, ordered by
/// (example, n). A spec that fails validation contributes one row carrying the message.
inline RunResult sweep(const std::vector<RunSpec>& specs, int workers = 1) {
    std::vector<RunResult> results(specs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < specs.size(); i = next++) {
            try {
                results[i] = run(specs[i]);
            } catch (const std::exception& e) {
                RunRow row;
                row.example = specs[i].example;
                row.failure = e.what();
                results[i].rows.push_back(std::move(row));
                results[i].status = 2;
            }
        }
    };
    const int threads = std::clamp(workers, 1, static_cast<int>(std::max<std::size_t>(specs.size(), 1)));
    std::vector<std::thread> pool;
    for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    RunResult merged;
    for (auto& r : results) {
        merged.status = std::max(merged.status, r.status);
        for (auto& row : r.rows) merged.rows.push_back(std::move(row));
    }
    std::stable_sort(merged.rows.begin(), merged.rows.end(), [](const RunRow& a, const RunRow& b) {
        return a.example != b.example ? a.example < b.example : a.n < b.n;
    });
    return merged;
}

inline constexpr std::string_view csv_header = "example,n,relres,error,order,iter,cpu_seconds,indefinite_updates";

namespace detail {

inline std::string full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string fixed(const char* fmt, double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, fmt, v);
    return buf;
}

} // namespace detail

/// CSV with full precision: every printed number parses back to the same double.
inline std::string format_csv(const std::vector<RunRow>& rows) {
    std::ostringstream os;
    os << csv_header << '\n';
    for (const auto& r : rows) {
        os << r.example << ',' << r.n << ',' << detail::full(r.relres) << ','
           << (r.error ? detail::full(*r.error) : "") << ',' << (r.order ? detail::full(*r.order) : "") << ','
           << r.iter << ',' << detail::full(r.cpu_seconds) << ',' << r.indefinite_updates << '\n';
    }
    return os.str();
}

inline std::vector<RunRow> parse_csv(std::string_view text) {
    std::istringstream is{std::string(text)};
    std::string line;
    if (!std::getline(is, line) || line != csv_header) throw DataError("CSV header mismatch");
    std::vector<RunRow> rows;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (!line.empty() && line.back() == ',') cells.emplace_back();
        if (cells.size() != 8) throw DataError("CSV row has " + std::to_string(cells.size()) + " fields: " + line);
        RunRow r;
        r.example = cells[0];
        r.n = std::stoi(cells[1]);
        r.relres = std::stod(cells[2]);
        if (!cells[3].empty()) r.error = std::stod(cells[3]);
        if (!cells[4].empty()) r.order = std::stod(cells[4]);
        r.iter = std::stoi(cells[5]);
        r.cpu_seconds = std::stod(cells[6]);
        r.indefinite_updates = std::stoull(cells[7]);
        rows.push_back(std::move(r));
    }
    return rows;
}

/// Human-readable table laid out like a convergence study:
/// RelRes and Error with 2 significant digits, Order and CPU with 1 decimal.
inline std::string format_table(const std::vector<RunRow>& rows, SolverMode mode) {
    std::ostringstream os;
    std::string current;
    for (const auto& r : rows) {
        if (r.example != current) {
            if (!current.empty()) os << '\n';
            current = r.example;
            os << r.example << " (" << mode_name(mode) << ")\n";
            os << "     N   RelRes    Error  Order  Iter      CPU\n";
        }
        char line[160];
        if (!r.failure.empty()) {
            std::snprintf(line, sizeof line, "%6d  failed: %s\n", r.n, r.failure.c_str());
            os << line;
            continue;
        }
        const std::string err = r.error ? detail::fixed("%.1e", *r.error) : "--";
        const std::string ord = r.order ? detail::fixed("%.1f", *r.order) : "--";
        std::snprintf(line, sizeof line, "%6d  %7.1e  %7s  %5s  %4d  %7.1f%s\n", r.n, r.relres, err.c_str(), ord.c_str(),
                      r.iter, r.cpu_seconds, r.converged ? "" : "  (not converged)");
        os << line;
    }
    return os.str();
}

} // namespace ma::cli
