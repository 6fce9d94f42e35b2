#include <monge_ampere/cli.hpp>

#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

using namespace ma;
using namespace ma::cli;

namespace {

RunSpec spec_for(const std::string& example, std::vector<int> sizes) {
    RunSpec s;
    s.example = example;
    s.sizes = std::move(sizes);
    return s;
}

// Runs the CLI with its output discarded and returns the exit status.
int run_tool(const std::string& args, const std::string& out_file = "/dev/null") {
    const std::string cmd = std::string(MA_SOLVE_PATH) + " " + args + " >" + out_file + " 2>/dev/null";
    const int raw = std::system(cmd.c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST(Parse, Sizes) {
    EXPECT_EQ(parse_sizes("8,16,32"), (std::vector<int>{8, 16, 32}));
    EXPECT_EQ(parse_sizes("64"), (std::vector<int>{64}));
    EXPECT_THROW(parse_sizes("8,x"), ConfigError);
    EXPECT_THROW(parse_sizes("8.5"), ConfigError);
}

TEST(Parse, ModesAndOrderings) {
    EXPECT_EQ(parse_mode("fmg-fas"), SolverMode::FmgFas);
    EXPECT_EQ(parse_mode("fas-only"), SolverMode::FasOnly);
    EXPECT_EQ(parse_mode("gauss-seidel"), SolverMode::GaussSeidel);
    EXPECT_THROW(parse_mode("sor"), ConfigError);
    EXPECT_EQ(parse_ordering("lex"), SweepOrdering::Lexicographic);
    EXPECT_EQ(parse_ordering("red-black"), SweepOrdering::RedBlack);
    EXPECT_THROW(parse_ordering("zebra"), ConfigError);
    for (auto m : {SolverMode::FmgFas, SolverMode::FasOnly, SolverMode::GaussSeidel})
        EXPECT_EQ(parse_mode(mode_name(m)), m);
}

TEST(Spec, Validation) {
    EXPECT_THROW(run(spec_for("ex9", {8})), ConfigError);
    EXPECT_THROW(run(spec_for("ex4", {})), ConfigError);
    EXPECT_THROW(run(spec_for("ex4", {12})), ConfigError);
    auto s = spec_for("ex4", {8});
    s.config.ordering = SweepOrdering::RedBlack;
    EXPECT_THROW(run(s), ConfigError);
    s = spec_for("ex4", {8});
    s.repeat = 0;
    EXPECT_THROW(run(s), ConfigError);
}

TEST(Run, Example4Rows) {
    const auto r = run(spec_for("ex4", {8, 16}));
    ASSERT_EQ(r.rows.size(), 2u);
    EXPECT_EQ(r.status, 0);
    EXPECT_FALSE(r.rows[0].order.has_value());
    ASSERT_TRUE(r.rows[1].order.has_value());
    EXPECT_NEAR(*r.rows[1].order, std::log2(*r.rows[0].error / *r.rows[1].error), 1e-14);
    for (const auto& row : r.rows) {
        EXPECT_TRUE(row.converged);
        EXPECT_LE(row.relres, 1e-6);
        EXPECT_LE(row.iter, 2);
        EXPECT_TRUE(row.failure.empty());
    }
}

TEST(Run, NonConsecutiveSizesHaveNoOrder) {
    const auto r = run(spec_for("quad2d", {8, 32}));
    ASSERT_EQ(r.rows.size(), 2u);
    EXPECT_FALSE(r.rows[1].order.has_value());
}

TEST(Run, UnconvergedSetsStatus) {
    auto s = spec_for("ex4", {8});
    s.config.tol = 1e-300;
    s.config.max_cycles = 0;
    const auto r = run(s);
    EXPECT_EQ(r.status, 2);
    EXPECT_FALSE(r.rows[0].converged);
}

TEST(Sweep, EmptyGivesHeaderOnly) {
    const auto r = sweep({}, 2);
    EXPECT_TRUE(r.rows.empty());
    EXPECT_EQ(r.status, 0);
    EXPECT_EQ(format_csv(r.rows), std::string(csv_header) + "\n");
}

TEST(Sweep, IdenticalSpecsGiveIdenticalRows) {
    const auto r = sweep({spec_for("ex6", {8}), spec_for("ex6", {8})}, 2);
    ASSERT_EQ(r.rows.size(), 2u);
    const auto &a = r.rows[0], &b = r.rows[1];
    EXPECT_EQ(a.relres, b.relres);
    EXPECT_EQ(*a.error, *b.error);
    EXPECT_EQ(a.iter, b.iter);
    EXPECT_EQ(a.indefinite_updates, b.indefinite_updates);
}

TEST(Sweep, RowsAreOrderedByExampleThenSize) {
    const auto r = sweep({spec_for("quad3d", {8, 4}), spec_for("ex1", {16}), spec_for("ex4", {8})}, 3);
    ASSERT_EQ(r.rows.size(), 4u);
    EXPECT_EQ(r.rows[0].example, "ex1");
    EXPECT_EQ(r.rows[1].example, "ex4");
    EXPECT_EQ(r.rows[2].n, 4);
    EXPECT_EQ(r.rows[3].n, 8);
}

TEST(Sweep, FailuresAreRecordedPerRow) {
    const auto r = sweep({spec_for("nope", {8}), spec_for("ex4", {8})}, 1);
    ASSERT_EQ(r.rows.size(), 2u);
    EXPECT_EQ(r.status, 2);
    EXPECT_TRUE(r.rows[0].failure.empty());
    EXPECT_EQ(r.rows[1].example, "nope");
    EXPECT_FALSE(r.rows[1].failure.empty());
}

TEST(Csv, RoundTripIsExact) {
    const auto rows = run(spec_for("ex5", {8, 16})).rows;
    const auto back = parse_csv(format_csv(rows));
    ASSERT_EQ(back.size(), rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        EXPECT_EQ(back[i].example, rows[i].example);
        EXPECT_EQ(back[i].n, rows[i].n);
        EXPECT_EQ(back[i].relres, rows[i].relres);
        EXPECT_EQ(back[i].error, rows[i].error);
        EXPECT_EQ(back[i].order, rows[i].order);
        EXPECT_EQ(back[i].iter, rows[i].iter);
        EXPECT_EQ(back[i].cpu_seconds, rows[i].cpu_seconds);
        EXPECT_EQ(back[i].indefinite_updates, rows[i].indefinite_updates);
    }
    EXPECT_THROW(parse_csv("a,b\n"), DataError);
    EXPECT_THROW(parse_csv(std::string(csv_header) + "\nex4,8,1\n"), DataError);
}

TEST(Table, Layout) {
    RunRow a;
    a.example = "ex4";
    a.n = 8;
    a.relres = 3.1e-7;
    a.error = 1.234e-3;
    a.iter = 1;
    a.cpu_seconds = 0.04;
    a.converged = true;
    RunRow b = a;
    b.n = 16;
    b.error = 2.7e-4;
    b.order = 2.19;
    b.converged = false;
    RunRow c;
    c.example = "ex4";
    c.n = 32;
    c.failure = "no real root";
    const auto t = format_table({a, b, c}, SolverMode::FmgFas);
    EXPECT_NE(t.find("ex4 (fmg-fas)"), std::string::npos);
    EXPECT_NE(t.find("RelRes"), std::string::npos);
    EXPECT_NE(t.find("1.2e-03"), std::string::npos);
    EXPECT_NE(t.find("2.2"), std::string::npos);
    EXPECT_NE(t.find("--"), std::string::npos);
    EXPECT_NE(t.find("(not converged)"), std::string::npos);
    EXPECT_NE(t.find("failed: no real root"), std::string::npos);
}

TEST(Dump, NamesAndContents) {
    EXPECT_EQ(cli::detail::dump_name("out/field.csv", "ex4", 16), "out/field_ex4_n16.csv");
    EXPECT_EQ(cli::detail::dump_name("u", "ex1", 8), "u_ex1_n8");

    const auto dir = std::filesystem::temp_directory_path() / "ma_cli_dump_test";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    auto s = spec_for("quad3d", {4});
    s.dump_path = (dir / "u.csv").string();
    run(s);
    std::ifstream in(dir / "u_quad3d_n4.csv");
    const auto field = read_field_csv<3>(in);
    EXPECT_EQ(field.geometry().n(), 4);
    const auto direct = solve(catalog<3>("quad3d"), 4, SolverConfig{});
    EXPECT_EQ(max_abs_difference(field, direct.field), 0.0);
    std::filesystem::remove_all(dir);
}

TEST(Tool, ExitCodes) {
    EXPECT_EQ(run_tool("--example ex4 --n 8"), 0);
    EXPECT_EQ(run_tool("--example ex1,quad2d --n 8,16 --ordering red-black --output csv --workers 2"), 0);
    EXPECT_EQ(run_tool("--example ex4 --n 8 --tol 1e-300 --max-cycles 0"), 2);
    EXPECT_EQ(run_tool("--example ex4 --n 8 --bogus"), 1);
    EXPECT_EQ(run_tool("--example ex4 --n 12"), 1);
    EXPECT_EQ(run_tool("--example ex4 --ordering red-black"), 1);
    EXPECT_EQ(run_tool("--example ex4 --mode sor"), 1);
    EXPECT_EQ(run_tool("--n 8"), 1);
    EXPECT_EQ(run_tool("--help"), 0);
}

TEST(Tool, CsvOutputParses) {
    const auto out = std::filesystem::temp_directory_path() / "ma_cli_csv_test.csv";
    ASSERT_EQ(run_tool("--example ex4,ex6 --n 8,16 --output csv", out.string()), 0);
    const auto rows = parse_csv(read_file(out));
    std::filesystem::remove(out);
    ASSERT_EQ(rows.size(), 4u);
    EXPECT_EQ(rows[0].example, "ex4");
    EXPECT_EQ(rows[3].example, "ex6");
    EXPECT_TRUE(rows[1].order.has_value());
}
