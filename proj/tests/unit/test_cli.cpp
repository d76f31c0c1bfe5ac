#include "cli.hpp"

#include "isogk/complex_file.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace isogk;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    args.insert(args.begin(), "isogk");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::map<std::string, std::string> key_values(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        const auto eq = line.find('=');
        if (eq != std::string::npos && line.find(' ') == std::string::npos) kv[line.substr(0, eq)] = line.substr(eq + 1);
    }
    return kv;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) out.push_back(line);
    return out;
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("isogk_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string operator/(const std::string& name) const { return (path / name).string(); }
};

void single_error_line(const Result& r, const std::string& reason) {
    CHECK(r.err.rfind("error[" + reason + "]: ", 0) == 0);
    CHECK(std::count(r.err.begin(), r.err.end(), '\n') == 1);
}

const std::string kFixtures = ISOGK_FIXTURE_DIR;

} // namespace

TEST_CASE("build-cap reports a tiny residual and is deterministic") {
    TempDir tmp;
    const Result r4 = run({"build-cap", "--n", "4", "--out", tmp / "c4.json"});
    REQUIRE(r4.code == 0);
    const auto kv = key_values(r4.out);
    CHECK(std::stod(kv.at("residual")) < 1e-10);
    CHECK(std::stoi(kv.at("dimension")) > 0);

    REQUIRE(run({"build-cap", "--n", "5", "--seed", "42", "--out", tmp / "a.json"}).code == 0);
    REQUIRE(run({"build-cap", "--n", "5", "--seed", "42", "--out", tmp / "b.json"}).code == 0);
    CHECK(slurp(tmp / "a.json") == slurp(tmp / "b.json"));
    REQUIRE(run({"build-cap", "--n", "5", "--seed", "43", "--out", tmp / "c.json"}).code == 0);
    CHECK(slurp(tmp / "a.json") != slurp(tmp / "c.json"));
}

TEST_CASE("usage errors exit 2 with one prefixed line") {
    const Result r = run({"build-cap", "--n", "2"});
    CHECK(r.code == 2);
    single_error_line(r, "usage");
    single_error_line(run({}), "usage");
    single_error_line(run({"frobnicate"}), "usage");
    single_error_line(run({"build-cap"}), "usage");
    CHECK(run({"build-cap", "--n", "x"}).code == 2);
    CHECK(run({"--help"}).code == 0);
}

TEST_CASE("numerical failures exit 3") {
    TempDir tmp;
    const Result r = run({"build-cap", "--n", "3", "--k", "2", "--out", tmp / "fold.json"});
    CHECK(r.code == 3);
    single_error_line(r, "numerical");
}

TEST_CASE("check passes fresh files and names the broken edge of the fixture") {
    const Result good = run({"check", kFixtures + "/cap_n5.json"});
    CHECK(good.code == 0);
    CHECK(good.out.find("result=pass") != std::string::npos);

    const Result bad = run({"check", kFixtures + "/cap_n5_perturbed.json"});
    CHECK(bad.code == 1);
    single_error_line(bad, "verification");
    CHECK(bad.err.find("edge 0 (patch 0 u0 / patch 1 v0)") != std::string::npos);

    CHECK(run({"check", kFixtures + "/cap_n5.json", "--k", "0"}).code == 0);
    CHECK(run({"check", kFixtures + "/cap_n5_perturbed.json", "--k", "0"}).code == 0);
    CHECK(run({"check", kFixtures + "/cap_n5.json", "--k", "2"}).code == 1);
}

TEST_CASE("check writes a per-sample report") {
    TempDir tmp;
    REQUIRE(run({"check", kFixtures + "/cap_n5.json", "--samples", "7", "--out", tmp / "r.csv"}).code == 0);
    const auto rows = lines(slurp(tmp / "r.csv"));
    CHECK(rows.front() == "edge,target,s,mismatch");
    CHECK(rows.size() == 1 + 5 * 2 * 7); // geometry and one field per edge
}

TEST_CASE("solve") {
    TempDir tmp;
    const Result p = run({"solve", kFixtures + "/cap_n5.json", "--problem", "project", "--out", tmp / "p.csv"});
    REQUIRE(p.code == 0);
    CHECK(std::stod(key_values(p.out).at("max_sample_error")) < 1e-9);
    const auto csv = lines(slurp(tmp / "p.csv"));
    CHECK(csv.front() == "x,y,u");
    CHECK(csv.size() == 1 + 5 * 25);

    const Result r = run({"solve", kFixtures + "/cap_n5.json", "--problem", "reaction"});
    REQUIRE(r.code == 0);
    const auto kv = key_values(r.out);
    CHECK(std::stod(kv.at("coefficient_error")) < 1e-6);
    CHECK(std::stod(kv.at("lemma_max_mismatch")) < 1e-7);

    const Result missing = run({"solve", tmp / "nope.json"});
    CHECK(missing.code == 2);
    single_error_line(missing, "input");
    CHECK(run({"solve", kFixtures + "/cap_n5.json", "--problem", "heat"}).code == 2);
}

TEST_CASE("export obj: four vertices per patch at resolution 2, faces counterclockwise") {
    TempDir tmp;
    REQUIRE(run({"export", kFixtures + "/cap_n5.json", "--format", "obj", "--resolution", "2", "--out", tmp / "s.obj"})
                .code == 0);
    std::vector<Eigen::Vector3d> v;
    std::vector<std::array<int, 4>> f;
    for (const auto& line : lines(slurp(tmp / "s.obj"))) {
        std::istringstream in(line);
        std::string tag;
        in >> tag;
        if (tag == "v") {
            Eigen::Vector3d x;
            in >> x[0] >> x[1] >> x[2];
            v.push_back(x);
        } else if (tag == "f") {
            std::array<int, 4> q{};
            for (int& i : q) in >> i;
            f.push_back(q);
        }
    }
    CHECK(v.size() == 5 * 4);
    CHECK(f.size() == 5);
    for (const auto& q : f) {
        double twice_area = 0.0;
        for (int i = 0; i < 4; ++i) {
            const auto& a = v[static_cast<std::size_t>(q[static_cast<std::size_t>(i)] - 1)];
            const auto& b = v[static_cast<std::size_t>(q[static_cast<std::size_t>((i + 1) % 4)] - 1)];
            twice_area += a[0] * b[1] - a[1] * b[0];
        }
        CHECK(twice_area > 0.0);
    }
}

TEST_CASE("export csv: row counts and re-evaluation") {
    TempDir tmp;
    const int res = 6;
    REQUIRE(run({"export", kFixtures + "/cap_n5.json", "--what", "field", "--resolution", std::to_string(res), "--out",
                 tmp / "f.csv"})
                .code == 0);
    CHECK(lines(slurp(tmp / "f.csv")).size() == 1 + 5 * res * res);

    REQUIRE(run({"export", kFixtures + "/cap_n5.json", "--what", "surface", "--resolution", std::to_string(res),
                 "--out", tmp / "s.csv"})
                .code == 0);
    const ComplexFile file = read_complex_file(kFixtures + "/cap_n5.json");
    const auto rows = lines(slurp(tmp / "s.csv"));
    CHECK(rows.front() == "patch,u,v,x,y,z");
    double worst = 0.0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        std::istringstream in(rows[i]);
        std::vector<double> cols;
        std::string cell;
        while (std::getline(in, cell, ',')) cols.push_back(std::stod(cell));
        const Eigen::VectorXd x = file.complex.geometry[static_cast<std::size_t>(cols[0])].eval({cols[1], cols[2]});
        worst = std::max(worst, std::max(std::abs(x[0] - cols[3]), std::abs(x[1] - cols[4])));
    }
    CHECK(rows.size() == 1 + 5 * res * res);
    CHECK(worst < 1e-12);

    REQUIRE(run({"export", kFixtures + "/cap_n5.json", "--what", "report", "--out", tmp / "r.csv"}).code == 0);
    CHECK(run({"export", kFixtures + "/cap_n5.json", "--what", "report", "--format", "obj", "--out", tmp / "r.obj"})
              .code == 2);
    CHECK(run({"export", kFixtures + "/cap_n5.json", "--resolution", "1", "--out", tmp / "x.csv"}).code == 2);
}
