#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
};

Run run(const std::string& args) {
    std::string cmd = std::string(MSYM_CLI_PATH) + " " + args + " 2>&1";
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    std::string out;
    std::array<char, 4096> buf;
    while (auto n = fread(buf.data(), 1, buf.size(), p)) out.append(buf.data(), n);
    int st = pclose(p);
    return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, out};
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

const fs::path tmp = fs::temp_directory_path() / "msym_cli_test";

}  // namespace

TEST_CASE("usage and configuration errors") {
    CHECK(run("--help").code == 0);
    CHECK(run("").code == 2);
    CHECK(run("zeros --bogus").code == 2);
    CHECK(run("zeros --modulus 12").code == 2);
    CHECK(run("zeros --chi2 e2pi/7").code == 2);
    CHECK(run("figure1 --x-min 10 --x-max 5 --cache-dir " + tmp.string()).code == 2);
    CHECK(run("sums --curve E17a --modulus 11").code == 2);
}

TEST_CASE("coefficients") {
    auto r = run("coeffs --terms 10");
    REQUIRE(r.code == 0);
    CHECK(r.out.find("n,a_n\n1,1\n2,-2\n3,-1\n4,2\n5,1\n6,2\n7,-2\n") != std::string::npos);
}

TEST_CASE("zeros: empty at T = 0, cached on repeat") {
    fs::remove_all(tmp);
    auto r0 = run("zeros --modulus 11 --chi2 e2pi/5 --T 0 --cache-dir " + tmp.string());
    REQUIRE(r0.code == 0);
    CHECK(r0.out.find("nontrivial zeros: 0") != std::string::npos);
    auto a = run("zeros --modulus 11 --chi2 e2pi/5 --T 12 --cache-dir " + tmp.string());
    auto b = run("zeros --modulus 11 --chi2 e2pi/5 --T 12 --cache-dir " + tmp.string());
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out.find("nontrivial zeros: 0") == std::string::npos);
    auto c = run("zeros --modulus 11 --chi-generator-image 2 --T 12 --cache-dir " + tmp.string());
    CHECK(c.out == a.out);
}

TEST_CASE("figure1 CSV") {
    auto p = tmp / "fig.csv";
    auto r = run("figure1 --x-min 1e3 --x-max 1e4 --x-count 5 --T 10 --cache-dir " + tmp.string() + " --out " +
                 p.string());
    REQUIRE(r.code == 0);
    std::string s = slurp(p);
    CHECK(s.find("# curve: E11a") == 0);
    CHECK(s.find("X,abs_main_term,red_reference\n") != std::string::npos);
    std::istringstream in(s);
    std::string line;
    double last = 0;
    int rows = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#' || line[0] == 'X') continue;
        double x = std::stod(line.substr(0, line.find(',')));
        double red = std::stod(line.substr(line.rfind(',') + 1));
        CHECK(x > last);
        CHECK(red == doctest::Approx(1e-4 * std::pow(x, 0.75)));
        last = x;
        ++rows;
    }
    CHECK(rows == 5);
}

TEST_CASE("sums are byte-identical across runs") {
    std::string base = "sums --x-min 1e3 --x-max 2e4 --x-count 6 --T 10 --cache-dir " + tmp.string();
    auto a = run(base + " --ordering geometric --jobs 1");
    auto b = run(base + " --ordering geometric --jobs 3");
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out.find("X,re,im,abs,main_re,main_im,residual_abs") != std::string::npos);
    auto ar = run(base + " --ordering arithmetic");
    REQUIRE(ar.code == 0);
    CHECK(ar.out.find("derived_residual_abs") != std::string::npos);
    CHECK(run("sums --ordering arithmetic --x-min 484 --x-max 1000 --x-count 2 --T 10 --cache-dir " + tmp.string())
              .code == 2);
}

TEST_CASE("real character: residual equals the value") {
    auto r = run("sums --modulus 17 --x-min 1e3 --x-max 1e4 --x-count 4 --T 10 --cache-dir " + tmp.string());
    REQUIRE(r.code == 0);
    std::istringstream in(r.out);
    std::string line;
    int rows = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#' || line[0] == 'X') continue;
        std::vector<double> v;
        std::stringstream ls(line);
        for (std::string t; std::getline(ls, t, ',');) v.push_back(std::stod(t));
        REQUIRE(v.size() == 7);
        CHECK(v[6] == doctest::Approx(v[3]).epsilon(1e-12));
        ++rows;
    }
    CHECK(rows == 4);
    fs::remove_all(tmp);
}
