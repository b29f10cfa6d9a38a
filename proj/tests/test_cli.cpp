#include "concord/cli.hpp"
#include "concord/format.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace concord;

namespace {

struct Run {
    int status;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out;
    std::ostringstream err;
    const int status = dispatch(args, out, err);
    return {status, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// value of column `name` in a two-line CSV
double column(const std::string& csv, const std::string& name) {
    const auto nl = csv.find('\n');
    const auto header = split(csv.substr(0, nl), ',');
    const auto row = split(csv.substr(nl + 1, csv.find('\n', nl + 1) - nl - 1), ',');
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return parse_number(row[i]);
    }
    FAIL("missing column " << name);
    return 0.0;
}

std::filesystem::path scratch() {
    auto dir = std::filesystem::temp_directory_path() / "concord_cli_test";
    std::filesystem::create_directories(dir);
    return dir;
}

} // namespace

TEST_CASE("analytic examples") {
    auto r = run({"analytic", "var-x2", "--dist", "normal"});
    CHECK(r.status == 0);
    CHECK(r.out == "var-x2,2\n");
    r = run({"analytic", "sigma2-frechet", "--dist", "bernoulli", "--w", "0.5,0,0.5"});
    CHECK(r.status == 0);
    CHECK(r.out == "sigma2-frechet,1\n");
}

TEST_CASE("analytic quantities") {
    CHECK(run({"analytic", "sigma2-beta", "--copula", "gauss:0.5"}).out.rfind("sigma2-beta,0.888", 0) == 0);
    CHECK(run({"analytic", "tau", "--copula", "clayton:2"}).out == "tau,0.5\n");
    CHECK(run({"analytic", "sigma2-tau", "--tau", "0.5"}).out == "sigma2-tau,0.75\n");
    CHECK(run({"analytic", "sigma2-nvm", "--nu", "5", "--rho", "0.5"}).out == "sigma2-nvm,4.25\n");
    CHECK(run({"analytic", "sigma2", "--dist", "normal", "--copula", "gauss:0.5"}).out == "sigma2,1.25\n");
    CHECK(run({"analytic", "prefer", "--dist", "uniform", "--dist2", "normal"}).out == "prefer,first\n");
    CHECK(run({"analytic", "kappa-discrete", "--dist", "bernoulli", "--copula", "M"}).out == "kappa-discrete,1\n");
    const auto sq = run({"analytic", "squared-copula", "--dist", "normal", "--copula", "W", "--u", "0.3", "--v", "0.6"});
    CHECK(parse_number(split(split(sq.out, '\n')[0], ',')[1]) == doctest::Approx(0.3).epsilon(1e-12));
    const auto env = run({"analytic", "envelope", "--dist", "uniform"});
    CHECK(env.out == "best,0.8\nworst,1.8\nbest-attainers,M;W\nworst-attainers,(M+W)/2\n");
}

TEST_CASE("estimate example") {
    const auto r = run({"estimate", "--copula", "gauss:0.5", "--dist", "bernoulli", "--n", "100000", "--seed", "7",
                        "--estimator", "kappa"});
    REQUIRE(r.status == 0);
    const double kappa = column(r.out, "estimate");
    const double sigma2 = column(r.out, "sigma2_hat");
    const double se = column(r.out, "se_sigma2");
    CHECK(std::abs(kappa - 1.0 / 3.0) <= 3.0 * std::sqrt(sigma2 / 100000));
    CHECK(std::abs(sigma2 - 8.0 / 9.0) <= 3.0 * se);
}

TEST_CASE("estimate variants") {
    auto r = run({"estimate", "--copula", "clayton:2", "--dist", "uniform", "--n", "20000", "--shift", "opt"});
    CHECK(r.status == 0);
    CHECK(column(r.out, "shift") != 0.0);
    r = run({"estimate", "--copula", "M", "--dist", "normal", "--n", "1000", "--estimator", "tau"});
    CHECK(column(r.out, "estimate") == 1.0);
    CHECK(column(r.out, "n") == 500);
    r = run({"estimate", "--copula", "W", "--dist", "normal", "--n", "1000", "--estimator", "tau-overlap"});
    CHECK(column(r.out, "estimate") == -1.0);
    const auto dump = scratch() / "sample.csv";
    r = run({"estimate", "--copula", "Pi", "--dist", "normal", "--n", "10", "--dump", dump.string()});
    CHECK(r.status == 0);
    const auto text = slurp(dump);
    CHECK(text.rfind("u,v\n", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 11);
}

TEST_CASE("exit statuses") {
    CHECK(run({}).status == kExitUsage);
    CHECK(run({"frobnicate"}).status == kExitUsage);
    CHECK(run({"analytic", "var-x2", "--dist", "normal", "--bogus", "1"}).status == kExitUsage);
    CHECK(run({"estimate", "--dist", "normal"}).status == kExitUsage);
    CHECK(run({"analytic", "var-x2", "--dist", "t:3"}).status == kExitUsage);
    CHECK(run({"analytic", "no-such-quantity"}).status == kExitUsage);
    CHECK(run({"estimate", "--copula", "gauss:2", "--dist", "normal"}).status == kExitUsage);

    const auto cap = run({"analytic", "sigma2", "--dist", "normal", "--copula", "clayton:2"});
    CHECK(cap.status == kExitCapability);
    CHECK(cap.err.find("no closed form") != std::string::npos);
    CHECK(run({"analytic", "squared-copula", "--dist", "normal", "--copula", "t:0.5,5"}).status == kExitCapability);
    CHECK(run({"analytic", "tau", "--copula", "shuffle:2:2,1:1,1"}).status == kExitCapability);

    CHECK(run({"--help"}).status == kExitOk);
}

TEST_CASE("simulate then figure is idempotent") {
    const auto dir = scratch();
    const std::vector<std::string> grid = {"--grid-points", "3", "--n", "500", "--seed", "5"};
    auto args = std::vector<std::string>{"simulate"};
    args.insert(args.end(), grid.begin(), grid.end());
    args.insert(args.end(), {"--out", (dir / "sim.csv").string()});
    REQUIRE(run(args).status == 0);

    args = {"figure"};
    args.insert(args.end(), grid.begin(), grid.end());
    args.insert(args.end(), {"--out", (dir / "fig").string()});
    REQUIRE(run(args).status == 0);
    const auto svg = slurp(dir / "fig.svg");
    REQUIRE(run(args).status == 0);

    CHECK(slurp(dir / "sim.csv") == slurp(dir / "fig.csv"));
    CHECK(svg == slurp(dir / "fig.svg"));
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("kendall") != std::string::npos);

    args = {"simulate"};
    args.insert(args.end(), grid.begin(), grid.end());
    const auto stdout_run = run(args);
    CHECK(stdout_run.out == slurp(dir / "sim.csv"));
}

TEST_CASE("selftest subset") {
    const auto r = run({"selftest", "--only", "9,10"});
    CHECK(r.status == 0);
    CHECK(r.out.rfind("PASS 9 ", 0) == 0);
    CHECK(r.out.find("\nPASS 10 ") != std::string::npos);
}
