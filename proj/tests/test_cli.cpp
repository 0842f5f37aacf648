#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "khlab/cli.hpp"

using namespace khlab;
using namespace khlab::cli;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome invoke(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

}  // namespace

TEST(Cli, HomologyJson) {
    auto r = invoke({"homology", "--braid", "1 1 1", "--format", "json"});
    ASSERT_EQ(r.code, kOk) << r.err;
    auto doc = json::parse(r.out);
    EXPECT_EQ(doc["homology"].size(), 5u);
    EXPECT_EQ(doc["n_plus"], 3);
    EXPECT_EQ(doc["n_minus"], 0);
    EXPECT_EQ(doc["components"], 1);
    EXPECT_EQ(doc["input"]["strands"], 2);
    EXPECT_EQ(doc["ring"], "z");
    EXPECT_TRUE(doc["timing"].contains("wall_ms"));
    EXPECT_EQ(polynomial_from_json(doc["euler_characteristic"]).to_string(), "q + q^3 + q^5 - q^9");
    auto t = table_from_json(doc["homology"]);
    EXPECT_EQ(t, homology_table(braid_closure(parse_braid("1 1 1"))).normalized);
}

TEST(Cli, NegativeLettersAsOptionValue) {
    auto r = invoke({"homology", "--braid", "-1 -1 -1", "--format", "csv"});
    ASSERT_EQ(r.code, kOk) << r.err;
    EXPECT_NE(r.out.find("-3,-9,1,\n"), std::string::npos);
}

TEST(Cli, RationalRingDropsTorsion) {
    auto r = invoke({"homology", "--braid", "1 1 1", "--ring", "q", "--format", "json"});
    ASSERT_EQ(r.code, kOk);
    auto doc = json::parse(r.out);
    EXPECT_EQ(doc["homology"].size(), 4u);
    for (const auto& row : doc["homology"]) EXPECT_TRUE(row["torsion"].empty());
}

TEST(Cli, InvertedConvention) {
    auto r = invoke({"homology", "--braid", "1 1 1", "--convention", "inverted", "--format", "json"});
    ASSERT_EQ(r.code, kOk);
    auto doc = json::parse(r.out);
    EXPECT_EQ(doc["convention"], "inverted");
    auto t = table_from_json(doc["homology"]);
    EXPECT_EQ(t.at(3, -7).torsion, std::vector<BigInt>{2});
    EXPECT_EQ(t.at(0, -1).free_rank, 1u);
}

TEST(Cli, Verify) {
    auto r = invoke({"verify", "--braid", "1 2 1 2"});
    EXPECT_EQ(r.code, kOk) << r.err;
    EXPECT_NE(r.out.find("all checks passed"), std::string::npos);
    r = invoke({"verify", "--braid", "1 1", "--format", "json"});
    EXPECT_EQ(r.code, kOk);
    auto doc = json::parse(r.out);
    EXPECT_EQ(doc["checks"][1]["status"], "skipped");
    EXPECT_EQ(invoke({"verify", "--braid", "1 -1"}).code, kInputError);
}

TEST(Cli, InputErrors) {
    EXPECT_EQ(invoke({"homology", "--braid", "0"}).code, kInputError);
    EXPECT_EQ(invoke({"homology", "--braid", "1 x"}).code, kInputError);
    EXPECT_EQ(invoke({"homology", "--bogus", "1"}).code, kInputError);
    EXPECT_EQ(invoke({"homology"}).code, kInputError);
    EXPECT_EQ(invoke({"frobnicate", "--braid", "1"}).code, kInputError);
    EXPECT_EQ(invoke({"homology", "--braid", "1", "--format", "xml"}).code, kInputError);
    EXPECT_EQ(invoke({"homology", "--braid", "1", "--pd", "x"}).code, kInputError);
    auto r = invoke({"homology", "--pd", "/nonexistent/file.pd"});
    EXPECT_EQ(r.code, kInputError);
    EXPECT_NE(r.err.find("cannot read"), std::string::npos);
}

TEST(Cli, CrossingCap) {
    auto r = invoke({"homology", "--braid", "1 1 1", "--cap", "2"});
    EXPECT_EQ(r.code, kResourceError);
    EXPECT_EQ(invoke({"homology", "--braid", "1 1 1", "--cap", "0"}).code, kInputError);

    ::setenv("KHLAB_CAP", "2", 1);
    EXPECT_EQ(invoke({"jones", "--braid", "1 1 1"}).code, kResourceError);
    EXPECT_EQ(invoke({"jones", "--braid", "1 1 1", "--cap", "3"}).code, kOk);
    ::unsetenv("KHLAB_CAP");
    EXPECT_EQ(invoke({"jones", "--braid", "1 1 1"}).code, kOk);
}

TEST(Cli, PdFileInput) {
    const auto path = std::filesystem::temp_directory_path() / "khlab_test_hopf.pd";
    std::ofstream(path) << "X[1,4,3,2] +\nX[4,1,2,3] +\n";
    auto r = invoke({"homology", "--pd", path.string(), "--format", "json"});
    ASSERT_EQ(r.code, kOk) << r.err;
    auto doc = json::parse(r.out);
    EXPECT_TRUE(doc["input"]["strands"].is_null());
    EXPECT_EQ(doc["components"], 2);
    EXPECT_EQ(table_from_json(doc["homology"]), homology_table(braid_closure(parse_braid("1 1"))).normalized);
    EXPECT_EQ(invoke({"verify", "--pd", path.string()}).code, kInputError);
    std::filesystem::remove(path);
}

TEST(Cli, JonesAndCubeStats) {
    auto r = invoke({"jones", "--braid", "1 1 1"});
    ASSERT_EQ(r.code, kOk);
    EXPECT_NE(r.out.find("jones: q + q^3 + q^5 - q^9"), std::string::npos);

    r = invoke({"cube-stats", "--braid", "1 1 1", "--format", "json"});
    ASSERT_EQ(r.code, kOk) << r.err;
    auto doc = json::parse(r.out);
    ASSERT_EQ(doc["columns"].size(), 4u);
    EXPECT_EQ(doc["columns"][0]["dimension"], 4);
    EXPECT_EQ(doc["columns"][1]["resolutions"], 3);
    EXPECT_EQ(doc["columns"][3]["differential_nonzeros"], 0);
}

TEST(Rendering, Text) {
    BigradedGroup t;
    EXPECT_EQ(render_table_text(t), "j\\i\n");
    t.set(0, 1, {1, {}});
    t.set(2, 3, {0, {2}});
    const auto text = render_table_text(t);
    EXPECT_NE(text.find("0+T2"), std::string::npos);
    std::istringstream lines(text);
    std::string header, first, second;
    std::getline(lines, header);
    std::getline(lines, first);
    std::getline(lines, second);
    EXPECT_EQ(header, "j\\i  0    1    2");
    EXPECT_EQ(first, "3    .    .    0+T2");
    EXPECT_EQ(second, "1    1    .    .");
    EXPECT_EQ(table_cell({2, {2, 4}}), "2+T2+T4");
}

TEST(Rendering, CsvAndJson) {
    BigradedGroup t;
    t.set(-1, 3, {2, {2, 6}});
    EXPECT_EQ(render_table_csv(t), "i,j,rank,torsion\n-1,3,2,2;6\n");
    EXPECT_EQ(table_from_json(json::parse(render_table(t, OutputFormat::Json))), t);
    BigInt huge = BigInt(1) << 100;
    t.set(0, 0, {0, {huge}});
    EXPECT_EQ(table_from_json(table_to_json(t)), t);
}
