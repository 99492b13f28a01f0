#include "cli.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <json.hpp>

using namespace tvaraug;
using namespace tvaraug::testing;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "tvaraug");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override { write_file(data(), dataset_csv(degradation_dataset(5, 30, 3, 21))); }
    std::string data() const { return (dir_ / "data.csv").string(); }
    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    TempDir dir_;
};

}  // namespace

TEST_F(Cli, FitThenAppendFiveUnits) {
    ASSERT_EQ(run_cli({"fit", data(), "-o", path("model.json")}).code, 0);
    const auto before = load_dataset(std::filesystem::path(data()), {}, Alignment::ByTime);
    const auto r = run_cli({"generate", path("model.json"), "-L", "5", "--seed", "7", "-o", data(), "--append"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto after = load_dataset(std::filesystem::path(data()), {}, Alignment::ByTime);
    EXPECT_EQ(after.unit_count(), 10u);
    EXPECT_EQ(after.unit_ids[5], "aug_0001");
    EXPECT_EQ(after.unit_ids[9], "aug_0005");
    for (std::size_t j = 0; j < 5; ++j) EXPECT_EQ(after.units[j], before.units[j]);

    ASSERT_EQ(run_cli({"generate", path("model.json"), "-L", "2", "--seed", "8", "-o", data(), "--append"}).code, 0);
    const auto again = load_dataset(std::filesystem::path(data()), {}, Alignment::ByTime);
    EXPECT_EQ(again.unit_count(), 12u);
    EXPECT_EQ(again.unit_ids[11], "aug_0007");
}

TEST_F(Cli, GenerateIsByteIdentical) {
    ASSERT_EQ(run_cli({"fit", data(), "-o", path("model.json")}).code, 0);
    ASSERT_EQ(run_cli({"generate", path("model.json"), "-L", "4", "--seed", "3", "-o", path("a.csv")}).code, 0);
    ASSERT_EQ(run_cli({"generate", path("model.json"), "-L", "4", "--seed", "3", "-o", path("b.csv"), "--threads", "1"})
                  .code,
              0);
    EXPECT_EQ(read_file(path("a.csv")), read_file(path("b.csv")));
    ASSERT_EQ(run_cli({"generate", path("model.json"), "-L", "4", "--seed", "4", "-o", path("c.csv")}).code, 0);
    EXPECT_NE(read_file(path("a.csv")), read_file(path("c.csv")));
}

TEST_F(Cli, ValidateCorruptedModelFails) {
    ASSERT_EQ(run_cli({"fit", data(), "-o", path("model.json")}).code, 0);
    auto doc = nlohmann::json::parse(read_file(path("model.json")));
    for (auto& ch : doc["channels"]) {
        for (auto& v : ch["p2"]["values"]) v = v.get<double>() * 2.0;
    }
    write_file(path("bad.json"), doc.dump(2));

    const auto good = run_cli({"validate", path("model.json"), "-K", "2000", "--against", data(), "--report",
                               path("good.json")});
    EXPECT_EQ(good.code, 0) << good.out << good.err;

    const auto r = run_cli({"validate", path("bad.json"), "-K", "2000", "--against", data(), "--report",
                            path("bad_report.json")});
    EXPECT_EQ(r.code, 1) << r.err;
    EXPECT_NE(r.out.find("MISMATCH"), std::string::npos);
    EXPECT_NE(r.out.find("result: FAIL"), std::string::npos);
    const auto report = nlohmann::json::parse(read_file(path("bad_report.json")));
    EXPECT_FALSE(report["passed"].get<bool>());
    EXPECT_FALSE(report["model"]["fingerprint_ok"].get<bool>());
    EXPECT_FALSE(report["source"]["checks"]["variance"].get<bool>());
}

TEST_F(Cli, StatsCsv) {
    const auto r = run_cli({"stats", data()});
    ASSERT_EQ(r.code, 0) << r.err;
    std::istringstream in(r.out);
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "time,channel,mean,var");
    std::size_t rows = 0;
    while (std::getline(in, line)) ++rows;
    EXPECT_EQ(rows, 30u * 3u);
    ASSERT_EQ(run_cli({"stats", data(), "-o", path("stats.csv")}).code, 0);
    EXPECT_EQ(read_file(path("stats.csv")), r.out);
}

TEST_F(Cli, ConfigAndFlagPrecedence) {
    write_file(path("cfg.json"), R"({
        "defaults": {"r1_mean": 0.5, "noise_std": 0.2},
        "channels": {"s2": {"r2_cov": 0.9}},
        "generate": {"count": 3, "seed": 11},
        "outputs": {"model": ")" + path("cfg_model.json") + R"("}
    })");
    ASSERT_EQ(run_cli({"fit", data(), "--config", path("cfg.json"), "--r1-mean", "0.25"}).code, 0);
    const auto model = load_model(path("cfg_model.json"));
    EXPECT_EQ(model.channel(0).params.r1_mean, 0.25);
    EXPECT_EQ(model.channel(0).params.noise_std, 0.2);
    EXPECT_EQ(model.channel(1).params.r2_cov, 0.9);
    EXPECT_EQ(model.channel(1).params.r1_mean, 0.25);
    EXPECT_EQ(model.channel(2).params.r2_cov, 0.01);

    ASSERT_EQ(run_cli({"generate", path("cfg_model.json"), "--config", path("cfg.json"), "-o", path("g.csv")}).code, 0);
    const auto g = load_dataset(std::filesystem::path(path("g.csv")), {}, Alignment::ByTime);
    EXPECT_EQ(g.unit_count(), 3u);
}

TEST_F(Cli, BareFitUsesDefaults) {
    ASSERT_EQ(run_cli({"fit", data(), "-o", path("model.json")}).code, 0);
    EXPECT_EQ(load_model(path("model.json")).channel(2).params, ChannelTvarParams{});
}

TEST_F(Cli, ShippedDefaultsConfigMatchesLibrary) {
    const auto cfg = cli::load_config(TVARAUG_DEFAULTS_CONFIG);
    EXPECT_EQ(cfg.defaults, ChannelTvarParams{});
    EXPECT_EQ(cfg.fit_mode, FitMode::MomentMatching);
    EXPECT_EQ(cfg.interp_mode, InterpMode::Direct);
}

TEST_F(Cli, ConfigErrorsExitTwo) {
    const std::vector<std::string> bad = {
        R"({"bogus": 1})",
        R"({"defaults": {"r1_mean": 1.5}})",
        R"({"defaults": {"r1": 0.5}})",
        R"({"channels": {"s1": {"lambda2": 0}}})",
        R"({"interp": {"mode": "spline"}})",
        R"({"generate": {"seed": -1}})",
        R"({"validate": {"tolerances": {"mean_z": "4"}}})",
        "not json",
    };
    for (const auto& text : bad) {
        write_file(path("bad.json"), text);
        const auto r = run_cli({"fit", data(), "-o", path("m.json"), "--config", path("bad.json")});
        EXPECT_EQ(r.code, 2) << text;
        EXPECT_NE(r.err.find("Config file"), std::string::npos) << text;
        EXPECT_FALSE(std::filesystem::exists(path("m.json")));
    }
}

TEST_F(Cli, UsageAndInputErrorsExitTwo) {
    EXPECT_EQ(run_cli({}).code, 2);
    EXPECT_EQ(run_cli({"frobnicate"}).code, 2);
    EXPECT_EQ(run_cli({"fit"}).code, 2);
    EXPECT_EQ(run_cli({"fit", data()}).code, 2);
    EXPECT_EQ(run_cli({"fit", path("missing.csv"), "-o", path("m.json")}).code, 2);
    EXPECT_EQ(run_cli({"fit", data(), "-o", path("m.json"), "--r2-cov", "1.0"}).code, 2);
    EXPECT_EQ(run_cli({"fit", data(), "-o", path("m.json"), "--alignment", "sideways"}).code, 2);
    write_file(path("nan.csv"), "unit,time,x\na,1,1\na,2,nan\n");
    const auto nan = run_cli({"fit", path("nan.csv"), "-o", path("m.json")});
    EXPECT_EQ(nan.code, 2);
    EXPECT_NE(nan.err.find("row 3"), std::string::npos);

    ASSERT_EQ(run_cli({"fit", data(), "-o", path("m.json")}).code, 0);
    EXPECT_EQ(run_cli({"generate", path("m.json"), "--seed", "1", "-o", path("x.csv")}).code, 2);
    EXPECT_EQ(run_cli({"generate", path("m.json"), "-L", "1", "-o", path("x.csv")}).code, 2);
    EXPECT_EQ(run_cli({"generate", path("m.json"), "-L", "0", "--seed", "1", "-o", path("x.csv")}).code, 2);
    EXPECT_EQ(run_cli({"validate", path("m.json")}).code, 2);
    EXPECT_EQ(run_cli({"validate", path("m.json"), "-K", "10"}).code, 2);
    write_file(path("garbage.json"), "{\"format\": 3");
    EXPECT_EQ(run_cli({"validate", path("garbage.json"), "-K", "200"}).code, 2);
    EXPECT_EQ(run_cli({"generate", path("garbage.json"), "-L", "1", "--seed", "1", "-o", path("x.csv")}).code, 2);
    write_file(path("other.csv"), "unit,time,y\na,1,1\na,2,2\n");
    EXPECT_EQ(run_cli({"generate", path("m.json"), "-L", "1", "--seed", "1", "-o", path("other.csv"), "--append"}).code,
              2);
    EXPECT_EQ(run_cli({"validate", path("m.json"), "-K", "200", "--against", path("other.csv")}).code, 2);
}

TEST_F(Cli, HelpExitsZero) {
    const auto r = run_cli({"--help"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("generate"), std::string::npos);
}
