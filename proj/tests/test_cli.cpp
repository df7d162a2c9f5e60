#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "hvalence_cli.hpp"

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "hvalence");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = hvalence::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream in(line);
    for (std::string cell; std::getline(in, cell, ',');) out.push_back(cell);
    return out;
}

TEST(Cli, Predict) {
    const auto r = run_cli({"predict", "--n", "12"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "n=12 count=126 kmax=1 baseline=122\n");
    EXPECT_EQ(run_cli({"predict", "--n", "3"}).code, 2);
    EXPECT_EQ(run_cli({"predict"}).code, 2);
    EXPECT_EQ(run_cli({"bogus"}).code, 2);
}

TEST(Cli, PredictJson) {
    const auto r = run_cli({"predict", "--n", "8", "--format", "json"});
    ASSERT_EQ(r.code, 0);
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["schema_version"], "1");
    EXPECT_EQ(j["command"], "predict");
    EXPECT_EQ(j["payload"][0]["count"], 54);
    EXPECT_EQ(j["payload"][0]["kmax"], 1);
}

TEST(Cli, Table) {
    const auto r = run_cli({"table", "--n-from", "4", "--n-to", "35"});
    ASSERT_EQ(r.code, 0);
    const auto ls = lines(r.out);
    ASSERT_EQ(ls.size(), 33u);
    EXPECT_EQ(ls[0], "n,kmax,count");
    EXPECT_EQ(ls[1], "4,0,10");
    EXPECT_EQ(ls[4], "7,1,41");
    EXPECT_EQ(ls[16], "19,2,333");
    EXPECT_EQ(ls[32], "35,4,1173");
    EXPECT_EQ(run_cli({"table", "--n-from", "9", "--n-to", "5"}).code, 2);
}

TEST(Cli, TableIsByteStable) {
    EXPECT_EQ(run_cli({"table", "--n-from", "4", "--n-to", "60"}).out,
              run_cli({"table", "--n-from", "4", "--n-to", "60"}).out);
    const auto a = run_cli({"zeros", "--n", "9"}).out;
    EXPECT_EQ(a, run_cli({"zeros", "--n", "9"}).out);
}

TEST(Cli, Verify) {
    const auto r = run_cli({"verify", "--n-from", "4", "--n-to", "20"});
    EXPECT_EQ(r.code, 0);
    const auto ls = lines(r.out);
    ASSERT_EQ(ls.size(), 18u);
    EXPECT_EQ(ls[9], "12,126,126,true");
    EXPECT_EQ(run_cli({"verify", "--n-from", "6", "--n-to", "5"}).code, 2);
}

TEST(Cli, VerifyPlanar) {
    const auto r = run_cli({"verify", "--n-from", "6", "--n-to", "6", "--planar"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(lines(r.out).back(), "6,26,26,true,26");
    EXPECT_EQ(run_cli({"verify", "--n-from", "30", "--n-to", "30", "--planar"}).code, 2);
}

TEST(Cli, ZerosStandard) {
    const auto r = run_cli({"zeros", "--n", "4"});
    ASSERT_EQ(r.code, 0);
    const auto ls = lines(r.out);
    ASSERT_EQ(ls.size(), 9u);
    EXPECT_EQ(ls[0], "re,im,index,multiplicity,residual");
    int degenerate = 0;
    for (std::size_t i = 1; i < ls.size(); ++i) {
        const auto c = split(ls[i]);
        ASSERT_EQ(c.size(), 5u);
        if (c[3] == "3") {
            ++degenerate;
            EXPECT_EQ(std::stod(c[0]), -1.0);
            EXPECT_EQ(std::stod(c[1]), 0.0);
            EXPECT_EQ(c[2], "0");
        }
    }
    EXPECT_EQ(degenerate, 1);

    const auto r12 = run_cli({"zeros", "--n", "12"});
    const auto l12 = lines(r12.out);
    ASSERT_EQ(l12.size(), 117u);
    long long total = 0;
    for (std::size_t i = 1; i < l12.size(); ++i) total += std::stoll(split(l12[i])[3]);
    EXPECT_EQ(total, 126);
}

TEST(Cli, ZerosPerturbedToFile) {
    const auto dir = std::filesystem::temp_directory_path() / "hvalence_cli_test";
    std::filesystem::create_directories(dir);
    const auto path = (dir / "zeros.csv").string();
    const auto r = run_cli({"zeros", "--n", "12", "--perturb-arg", "0.1", "--out", path});
    ASSERT_EQ(r.code, 0);
    EXPECT_TRUE(r.out.empty());
    std::ifstream in(path);
    std::stringstream buf;
    buf << in.rdbuf();
    const auto ls = lines(buf.str());
    ASSERT_EQ(ls.size(), 129u);
    for (std::size_t i = 1; i < ls.size(); ++i) {
        EXPECT_NE(split(ls[i])[2], "0");
        EXPECT_EQ(split(ls[i])[3], "1");
    }
}

TEST(Cli, PlotData) {
    const auto dir = std::filesystem::temp_directory_path() / "hvalence_plot_test";
    std::filesystem::remove_all(dir);
    const auto r = run_cli({"plot-data", "--n", "12", "--resolution", "400", "--out-dir", dir.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("rays.csv 24 segments"), std::string::npos);

    auto read = [&](const char* name) {
        std::ifstream in(dir / name);
        std::stringstream buf;
        buf << in.rdbuf();
        return lines(buf.str());
    };
    const auto rays = read("rays.csv");
    ASSERT_EQ(rays.size(), 25u);
    EXPECT_EQ(rays[0], "x1,y1,x2,y2");
    const auto contour = read("imT_contour.csv");
    ASSERT_GT(contour.size(), 1u);

    // Every zero away from the origin lies on the Im T = 0 curve, so some
    // contour segment passes within one cell of it.
    const double window = 13.0, cell = 2.0 * window / 400;
    for (const auto& z : hvalence::ray_zero_locations(12)) {
        if (std::abs(z.location.real()) > window || std::abs(z.location.imag()) > window) continue;
        double best = 1e300;
        for (std::size_t i = 1; i < contour.size(); ++i) {
            const auto c = split(contour[i]);
            const double mx = 0.5 * (std::stod(c[0]) + std::stod(c[2])), my = 0.5 * (std::stod(c[1]) + std::stod(c[3]));
            best = std::min(best, std::hypot(mx - z.location.real(), my - z.location.imag()));
        }
        EXPECT_LE(best, 1.5 * cell) << z.location;
    }

    EXPECT_EQ(run_cli({"plot-data", "--n", "6", "--resolution", "8", "--out-dir", dir.string()}).code, 2);
    const auto r6 = run_cli({"plot-data", "--n", "6", "--resolution", "32", "--out-dir", dir.string()});
    EXPECT_NE(r6.out.find("rays.csv 12 segments"), std::string::npos);
}

TEST(Cli, Asymptote) {
    const auto r = run_cli({"asymptote"});
    ASSERT_EQ(r.code, 0);
    const auto ls = lines(r.out);
    ASSERT_EQ(ls.size(), 7u);
    EXPECT_EQ(ls[0], "# X=0.73908513321516");
    EXPECT_EQ(ls[1], "# slope=0.13237094768308");
    EXPECT_EQ(ls[2], "n,kmax,kmax_over_n,slope,deviation");
    EXPECT_EQ(split(ls[3])[1], "13");
    EXPECT_EQ(split(ls[6])[1], "661");
    for (std::size_t i = 3; i < ls.size(); ++i) EXPECT_LE(std::abs(std::stod(split(ls[i])[4])), 3.0);

    const auto j = nlohmann::json::parse(run_cli({"asymptote", "--n-list", "40", "80", "--format", "json"}).out);
    EXPECT_EQ(j["schema_version"], "1");
    EXPECT_EQ(j["payload"].size(), 2u);
}

}  // namespace
