#include <gtest/gtest.h>
#include <sys/wait.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CliRun {
    int status;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::vector<std::string>> csv_rows(const fs::path& p) {
    std::vector<std::vector<std::string>> rows;
    std::ifstream in(p);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

class Cli : public ::testing::Test {
protected:
    static fs::path dir;

    static void SetUpTestSuite() {
        dir = fs::temp_directory_path() / "tetra_cli_test";
        fs::remove_all(dir);
        fs::create_directories(dir);
        ASSERT_EQ(run("solve --base e").status, 0);
        ASSERT_EQ(run("solve --base 2").status, 0);
    }

    static void TearDownTestSuite() { fs::remove_all(dir); }

    static CliRun run(const std::string& args, const std::string& table_dir = "") {
        const fs::path out = dir / "stdout.txt";
        const fs::path err = dir / "stderr.txt";
        std::string cmd = "cd '" + dir.string() + "' && ";
        cmd += "TETRALIB_TABLE_DIR='" + (table_dir.empty() ? dir.string() : table_dir) + "' ";
        cmd += std::string("'") + TETRA_CLI + "' " + args + " > '" + out.string() + "' 2> '" + err.string() + "'";
        int raw = std::system(cmd.c_str());
        return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, slurp(out), slurp(err)};
    }

    static json error_json(const CliRun& r) {
        EXPECT_EQ(std::count(r.err.begin(), r.err.end(), '\n'), 1) << r.err;
        return json::parse(r.err);
    }
};

fs::path Cli::dir;

}  // namespace

TEST_F(Cli, Fixpoint) {
    CliRun r = run("fixpoint --base e");
    ASSERT_EQ(r.status, 0);
    auto j = json::parse(r.out);
    EXPECT_NEAR(j["L"][0].get<double>(), 0.31813150520476413, 1e-15);
    EXPECT_NEAR(j["L"][1].get<double>(), 1.3372357014306894, 1e-15);
    EXPECT_EQ(j["L_conj"][1].get<double>(), -j["L"][1].get<double>());
    EXPECT_LE(j["residual"].get<double>(), 1e-13);
    EXPECT_NE(r.out.find("0.31813150520476408"), std::string::npos);
}

TEST_F(Cli, Koenigs) {
    CliRun r = run("koenigs --base e --at 0.5,0.1");
    ASSERT_EQ(r.status, 0);
    auto j = json::parse(r.out);
    EXPECT_LE(j["round_trip_error"].get<double>(), 1e-8);
    EXPECT_LE(j["schroeder_residual"].get<double>(), 1e-9);
}

TEST_F(Cli, SolveWritesTableAndProgress) {
    CliRun r = run("solve --base e --nodes 64 --height 4 --out small.json");
    ASSERT_EQ(r.status, 0) << r.err;
    auto j = json::parse(r.out);
    EXPECT_LE(j["residual"].get<double>(), 1e-6);
    EXPECT_GT(j["iterations"].get<int>(), 10);
    EXPECT_NE(r.err.find("sweep 10 "), std::string::npos);
    auto table = json::parse(slurp(dir / "small.json"));
    EXPECT_EQ(table["N"].get<int>(), 64);
    EXPECT_EQ(table["nodes"].size(), 65u);
}

TEST_F(Cli, SolveDefaultTableResidual) {
    auto table = json::parse(slurp(dir / "table_e.json"));
    EXPECT_LE(table["residual"].get<double>(), 1e-9);
}

TEST_F(Cli, BaseOutOfRange) {
    CliRun r = run("solve --base 1.2");
    EXPECT_EQ(r.status, 2);
    EXPECT_EQ(error_json(r)["code"], "BaseOutOfRange");
    EXPECT_TRUE(r.out.empty());
}

TEST_F(Cli, UsageErrors) {
    for (const char* args : {"", "bogus", "sexp", "sexp --at abc", "solve --damping", "verify --criterion D"}) {
        CliRun r = run(args);
        EXPECT_EQ(r.status, 2) << args;
        EXPECT_EQ(error_json(r)["code"], "Usage") << args;
    }
    EXPECT_EQ(run("--help").status, 0);
}

TEST_F(Cli, Evaluations) {
    CliRun r = run("sexp --at 1");
    ASSERT_EQ(r.status, 0);
    EXPECT_NEAR(json::parse(r.out)["sexp"][0].get<double>(), std::exp(1.0), 1e-9);

    r = run("slog --at 1 --format csv");
    ASSERT_EQ(r.status, 0);
    EXPECT_EQ(r.out, "at_re,at_im,slog_re,slog_im\n1,0,0,0\n");

    r = run("iterate --c 1 --at 1");
    EXPECT_NEAR(json::parse(r.out)["iterate"][0].get<double>(), std::exp(1.0), 1e-8);
    r = run("iterate --c -1 --at 2.718281828459045");
    EXPECT_NEAR(json::parse(r.out)["iterate"][0].get<double>(), 1.0, 1e-8);

    r = run("sexp --base 2 --at 3");
    EXPECT_NEAR(json::parse(r.out)["sexp"][0].get<double>(), 16.0, 1e-8);

    r = run("sexp --at 0.5 --digits 6");
    EXPECT_EQ(r.out, "{\"at\":[0.5,0],\"sexp\":[1.64635,0]}\n");
}

TEST_F(Cli, DomainAndNumericalErrors) {
    CliRun r = run("sexp --at=-3");
    EXPECT_EQ(r.status, 2);
    EXPECT_EQ(error_json(r)["code"], "OutsideDomain");
    r = run("sexp --at 5");
    EXPECT_EQ(r.status, 3);
    EXPECT_EQ(error_json(r)["code"], "Overflow");
    r = run("solve --base 8 --out big.json");
    EXPECT_EQ(r.status, 3);
    auto j = error_json(r);
    EXPECT_EQ(j["code"], "NoConvergence");
}

TEST_F(Cli, MissingTable) {
    fs::create_directories(dir / "empty");
    CliRun r = run("verify --criterion C", (dir / "empty").string());
    EXPECT_EQ(r.status, 2);
    auto j = error_json(r);
    EXPECT_EQ(j["code"], "MissingTable");
    EXPECT_NE(j["message"].get<std::string>().find("table_e.json"), std::string::npos);

    r = run("emit-figure --figure fig1 --out f.csv --table nowhere.json");
    EXPECT_EQ(r.status, 2);
    EXPECT_NE(error_json(r)["message"].get<std::string>().find("nowhere.json"), std::string::npos);
}

TEST_F(Cli, VerifyConvergedTable) {
    CliRun r = run("verify --criterion C --samples 300");
    ASSERT_EQ(r.status, 0) << r.err;
    auto j = json::parse(r.out);
    EXPECT_EQ(j["criterion"], "C");
    EXPECT_TRUE(j["passed"].get<bool>());
    EXPECT_EQ(j["sample_count"].get<int>(), 300);
    EXPECT_TRUE(j["witnesses"].empty());
}

TEST_F(Cli, VerifySzekeresFails) {
    CliRun r = run("verify --criterion all --perturb szekeres --samples 200 --out rep.json");
    EXPECT_EQ(r.status, 1);
    auto reports = json::parse(slurp(dir / "rep.json"));
    ASSERT_EQ(reports.size(), 3u);
    int failing = 0;
    for (const auto& rep : reports) {
        EXPECT_EQ(rep["passed"].get<bool>(), rep["witnesses"].empty());
        failing += !rep["passed"].get<bool>();
        for (const auto& w : rep["witnesses"]) {
            EXPECT_TRUE(w.contains("index"));
            EXPECT_EQ(w["location"].size(), 2u);
            EXPECT_TRUE(w["detail"].is_string());
        }
    }
    EXPECT_GE(failing, 1);
}

TEST_F(Cli, VerifyIsDeterministic) {
    ASSERT_EQ(run("verify --criterion B --samples 120 --out b1.json").status, 0);
    ASSERT_EQ(run("verify --criterion B --samples 120 --out b2.json").status, 0);
    EXPECT_EQ(slurp(dir / "b1.json"), slurp(dir / "b2.json"));
}

TEST_F(Cli, Figure1) {
    ASSERT_EQ(run("emit-figure --figure fig1 --out fig1.csv").status, 0);
    auto rows = csv_rows(dir / "fig1.csv");
    ASSERT_EQ(rows.size(), 501u);
    EXPECT_EQ(rows[0], (std::vector<std::string>{"x", "sexp_e", "sexp_2"}));
    EXPECT_EQ(rows[200], (std::vector<std::string>{"0", "1", "1"}));
    EXPECT_EQ(rows[1][0], "-1.99");
    EXPECT_EQ(rows[500][0], "3");
    for (int col : {1, 2}) {
        EXPECT_LT(std::stod(rows[1][col]), -4.0);
        for (std::size_t k = 2; k < rows.size(); ++k) EXPECT_GT(std::stod(rows[k][col]), std::stod(rows[k - 1][col]));
    }
}

TEST_F(Cli, Figure3) {
    ASSERT_EQ(run("emit-figure --figure fig3 --out fig3.csv").status, 0);
    auto rows = csv_rows(dir / "fig3.csv");
    ASSERT_EQ(rows.size(), 101u * 101u + 1u);
    EXPECT_EQ(rows[0], (std::vector<std::string>{"re", "im", "abs", "arg"}));
    int nan_rows = 0;
    for (std::size_t k = 1; k < rows.size(); ++k) nan_rows += rows[k][2] == "nan";
    EXPECT_EQ(nan_rows, 11);
    auto boundary = csv_rows(dir / "fig3_boundary.csv");
    EXPECT_EQ(boundary.size(), 2u * 401u + 1u);
    EXPECT_EQ(boundary[0], (std::vector<std::string>{"curve", "t", "re", "im"}));
}

TEST_F(Cli, Figure4) {
    ASSERT_EQ(run("emit-figure --figure fig4 --out fig4.csv").status, 0);
    auto rows = csv_rows(dir / "fig4.csv");
    ASSERT_EQ(rows.size(), 11u * 601u + 1u);
    double prev = -1e9;
    for (const char* c : {"-1", "-0.5", "0", "0.5", "1"}) {
        for (const auto& row : rows) {
            if (row[0] != c || row[1] != "1") continue;
            double y = std::stod(row[2]);
            EXPECT_GT(y, prev) << c;
            prev = y;
            if (std::string(c) == "1") {
                EXPECT_NEAR(y, std::exp(1.0), 1e-8);
            }
        }
    }
    ASSERT_EQ(run("emit-figure --figure fig4 --out fig4b.csv").status, 0);
    EXPECT_EQ(slurp(dir / "fig4.csv"), slurp(dir / "fig4b.csv"));
}
