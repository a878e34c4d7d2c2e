#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "oracles.hpp"
#include "tsketch/cli.hpp"
#include "tsketch/io.hpp"
#include "tsketch/linalg.hpp"
#include "tsketch/norms.hpp"
#include "tsketch/spectral.hpp"

using namespace tsketch;

namespace {

namespace fs = std::filesystem;

struct TempDir {
    fs::path path;
    TempDir() : path(fs::temp_directory_path() / "tsketch_cli_test") {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

int run(std::initializer_list<const char*> args) {
    std::vector<const char*> argv{"tsketch"};
    argv.insert(argv.end(), args);
    return run_cli(static_cast<int>(argv.size()), argv.data());
}

int run_capture(std::initializer_list<const char*> args, std::string& out) {
    std::ostringstream capture;
    std::streambuf* saved = std::cout.rdbuf(capture.rdbuf());
    const int rc = run(args);
    std::cout.rdbuf(saved);
    out = capture.str();
    return rc;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

}  // namespace

TEST_CASE("gen writes the tensor, planted bases and sidecar") {
    TempDir dir;
    const std::string spec = dir.file("spec.json");
    write_file(spec, R"({"dims":[6,5,4],"ranks":[2,2,2],"core_decay":0.5,"seed":9})");
    const std::string out = dir.file("t.dten");
    REQUIRE(run({"gen", "--spec", spec.c_str(), "--out", out.c_str()}) == 0);

    const DenseTensor t = io::read_dense(out);
    CHECK(t.shape() == Shape({6, 5, 4}));

    const auto sidecar = nlohmann::json::parse(read_file(out + ".json"));
    CHECK(sidecar.at("tensor") == out);
    const auto bases = sidecar.at("planted_bases").get<std::vector<std::string>>();
    REQUIRE(bases.size() == 3);
    const Matrix u1 = io::read_matrix_dense(bases[0]);
    CHECK(u1.rows() == 6);
    CHECK(u1.cols() == 2);
    CHECK_NOTHROW(FactorBasis{u1});  // orthonormal on disk
    CHECK(sidecar.at("spec").at("seed") == 9);
}

TEST_CASE("sketch with full budget densifies back to an identical DTEN") {
    TempDir dir;
    const DenseTensor a = oracles::random_dense(Shape({5, 6, 4}), 77);
    const std::string in = dir.file("a.dten");
    io::write_dense(in, a);

    const std::string sten = dir.file("a.sten");
    const std::string report = dir.file("report.json");
    REQUIRE(run({"sketch", "--in", in.c_str(), "--budget", "120", "--seed", "5", "--out",
                 sten.c_str(), "--report", report.c_str()}) == 0);

    const SparseTensor sk = io::read_sparse(sten);
    CHECK(densify(sk).values() == a.values());  // 120 == total: exact copy

    const std::string round = dir.file("round.dten");
    io::write_dense(round, densify(sk));
    CHECK(read_file(round) == read_file(in));  // byte-identical DTEN round trip

    const auto rep = nlohmann::json::parse(read_file(report));
    CHECK(rep.at("budget_n") == 120);
    CHECK(rep.at("actual_nnz") == sk.nnz());
    CHECK(rep.at("counts").at("large").contains("retained"));
}

TEST_CASE("norm prints the estimate as JSON") {
    TempDir dir;
    const std::string in = dir.file("diag.dten");
    io::write_dense(in, DenseTensor(Shape({2, 2}), {3, 0, 0, 1}));
    std::string out;
    REQUIRE(run_capture({"norm", "--in", in.c_str()}, out) == 0);
    const auto j = nlohmann::json::parse(out);
    CHECK(std::fabs(j.at("value").get<double>() - 3.0) <= 1e-8);
    CHECK(j.at("converged") == true);
    CHECK(j.at("unit_factors").size() == 2);

    // sparse input path
    const std::string sten = dir.file("diag.sten");
    io::write_sparse(sten, sparsify_exact(DenseTensor(Shape({2, 2}), {3, 0, 0, 1})));
    REQUIRE(run_capture({"norm", "--in", sten.c_str()}, out) == 0);
    CHECK(std::fabs(nlohmann::json::parse(out).at("value").get<double>() - 3.0) <= 1e-8);
}

TEST_CASE("hosvd subcommand writes a basis and diagnostics") {
    TempDir dir;
    const std::string spec = dir.file("spec.json");
    write_file(spec, R"({"dims":[8,8,8],"ranks":[2,2,2],"core_decay":0.5,"seed":21})");
    const std::string t = dir.file("t.dten");
    REQUIRE(run({"gen", "--spec", spec.c_str(), "--out", t.c_str()}) == 0);

    const std::string basis = dir.file("u1.dten");
    const std::string diag = dir.file("diag.json");
    REQUIRE(run({"hosvd", "--in", t.c_str(), "--mode", "1", "--rank", "2", "--method",
                 "product", "--budget", "300", "--seed", "4", "--out", basis.c_str(),
                 "--diagnostics", diag.c_str()}) == 0);
    const Matrix u = io::read_matrix_dense(basis);
    CHECK(u.rows() == 8);
    CHECK(u.cols() == 2);
    CHECK_NOTHROW(FactorBasis{u});
    const auto dj = nlohmann::json::parse(read_file(diag));
    CHECK(dj.contains("eigengap"));
    CHECK(dj.contains("sketch_report_1"));
    CHECK(dj.contains("sketch_report_2"));

    // direct/product without a budget is a usage error
    CHECK(run({"hosvd", "--in", t.c_str(), "--mode", "1", "--rank", "2", "--method", "direct",
               "--out", basis.c_str()}) == 2);
}

TEST_CASE("bench runs a plan file to CSV") {
    TempDir dir;
    const std::string plan = dir.file("plan.json");
    write_file(plan, R"({
        "input": {"generator": {"dims": [8,8,8], "ranks": [1,1,1], "seed": 3}},
        "budgets": [64, 128],
        "trials": 2,
        "modes": [1],
        "ranks": [1],
        "estimator": {"restarts": 3, "max_iters": 60, "tol": 1e-7},
        "seed": 11
    })");
    const std::string csv = dir.file("out.csv");
    REQUIRE(run({"bench", "--plan", plan.c_str(), "--out", csv.c_str()}) == 0);
    std::istringstream in(read_file(csv));
    std::string header;
    std::getline(in, header);
    CHECK(header ==
          "budget_n,trial_seed,nnz,rel_spectral_error,subspace_error_mode1,wall_time_ms,"
          "estimator_converged");
    std::size_t rows = 0;
    std::string line;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 4);

    // no output path anywhere -> data error
    CHECK(run({"bench", "--plan", plan.c_str()}) == 3);
}

TEST_CASE("exit codes") {
    TempDir dir;
    // usage: missing required option
    CHECK(run({"sketch", "--in", "x.dten"}) == 2);
    CHECK(run({"nonsense"}) == 2);

    // data: bad magic (format error with byte offset)
    const std::string bad = dir.file("bad.dten");
    write_file(bad, "JUNKJUNKJUNK");
    CHECK(run({"norm", "--in", bad.c_str()}) == 3);

    // data: malformed json spec
    const std::string spec = dir.file("spec.json");
    write_file(spec, "{not json");
    CHECK(run({"gen", "--spec", spec.c_str(), "--out", dir.file("t.dten").c_str()}) == 3);

    // data: rank out of range discovered against the file contents
    const std::string small = dir.file("small.dten");
    io::write_dense(small, oracles::random_dense(Shape({3, 3}), 1));
    CHECK(run({"hosvd", "--in", small.c_str(), "--mode", "1", "--rank", "9", "--out",
               dir.file("u.dten").c_str()}) == 3);

    // numerical: sweep on an all-zero tensor has a zero denominator
    const std::string zeros = dir.file("z.dten");
    io::write_dense(zeros, DenseTensor::zeros(Shape({4, 4, 4})));
    const std::string plan = dir.file("plan.json");
    write_file(plan, std::string(R"({"input": {"file": ")") + zeros +
                         R"("}, "budgets": [8], "trials": 1, "seed": 1})");
    CHECK(run({"bench", "--plan", plan.c_str(), "--out", dir.file("o.csv").c_str()}) == 4);
}
