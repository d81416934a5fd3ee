#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "commands.hpp"
#include "fixtures.hpp"

namespace fs = std::filesystem;
using holo::cli::run;

namespace {

struct Outcome {
  int status;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "holo");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int status = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {status, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("holo_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()) + "_" +
            std::to_string(::getpid()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path example(const char* name) const { return holo::testing::data_dir() / "running_example" / name; }

  fs::path dir_;
};

}  // namespace

TEST_F(CliTest, ClusterWritesOutputsAndManifest) {
  const auto r = invoke({"cluster", "--vertices", example("vertices.jsonl"), "--edges", example("edges.jsonl"),
                         "--config", example("config.txt"), "--out-dir", dir_ / "out", "--phase-dump"});
  ASSERT_EQ(r.status, 0) << r.err;
  std::istringstream lines(slurp(dir_ / "out" / "clusters.jsonl"));
  std::string line;
  std::vector<nlohmann::json> clusters;
  while (std::getline(lines, line)) clusters.push_back(nlohmann::json::parse(line));
  ASSERT_EQ(clusters.size(), 3u);
  EXPECT_EQ(clusters[0]["vertices"], nlohmann::json::array({1, 2, 5, 6}));

  const auto manifest = nlohmann::json::parse(slurp(dir_ / "out" / "manifest.json"));
  EXPECT_EQ(manifest["cluster_count"], 3);
  EXPECT_EQ(manifest["version"], holo::cli::kVersion);
  EXPECT_TRUE(manifest.contains("timings"));
  EXPECT_TRUE(fs::exists(dir_ / "out" / "phases" / "3_refinement.jsonl"));
  EXPECT_TRUE(fs::exists(dir_ / "out" / "representatives.jsonl"));
}

TEST_F(CliTest, ParallelismDoesNotChangeBytes) {
  for (const char* p : {"1", "8"}) {
    const auto r = invoke({"cluster", "--vertices", example("vertices.jsonl"), "--edges", example("edges.jsonl"),
                           "--config", example("config.txt"), "--out-dir", dir_ / p, "--parallelism", p});
    ASSERT_EQ(r.status, 0) << r.err;
  }
  EXPECT_EQ(slurp(dir_ / "1" / "clusters.jsonl"), slurp(dir_ / "8" / "clusters.jsonl"));
}

TEST_F(CliTest, GenerateThenEval) {
  auto r = invoke({"generate", "--clusters", "200", "--seed", "5", "--out-dir", dir_});
  ASSERT_EQ(r.status, 0) << r.err;
  r = invoke({"cluster", "--vertices", dir_ / "vertices.jsonl", "--edges", dir_ / "edges.jsonl", "--out-dir",
              dir_ / "run"});
  ASSERT_EQ(r.status, 0) << r.err;
  r = invoke({"eval", "--computed", dir_ / "run" / "clusters.jsonl", "--gold", dir_ / "gold.jsonl", "--json"});
  ASSERT_EQ(r.status, 0) << r.err;
  const auto q = nlohmann::json::parse(r.out);
  EXPECT_GT(q["clusters"]["f1"].get<double>(), 0.0);
  EXPECT_LE(q["clusters"]["precision"].get<double>(), 1.0);

  r = invoke({"eval", "--computed", dir_ / "gold.jsonl", "--gold", dir_ / "gold.jsonl", "--json"});
  EXPECT_EQ(nlohmann::json::parse(r.out)["clusters"]["f1"], 1.0);
}

TEST_F(CliTest, ManifestReproducesRun) {
  auto r = invoke({"cluster", "--vertices", example("vertices.jsonl"), "--edges", example("edges.jsonl"),
                   "--config", example("config.txt"), "--out-dir", dir_ / "first", "--parallelism", "3"});
  ASSERT_EQ(r.status, 0) << r.err;
  r = invoke({"cluster", "--manifest", dir_ / "first" / "manifest.json", "--out-dir", dir_ / "second"});
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(slurp(dir_ / "first" / "clusters.jsonl"), slurp(dir_ / "second" / "clusters.jsonl"));
}

TEST_F(CliTest, ExitCodes) {
  EXPECT_EQ(invoke({"cluster", "--vertices", dir_ / "missing.jsonl", "--edges", example("edges.jsonl"), "--out-dir",
                    dir_})
                .status,
            2);
  EXPECT_EQ(invoke({"frobnicate"}).status, 2);
  EXPECT_EQ(invoke({"eval", "--computed", example("vertices.jsonl")}).status, 2);  // --gold missing

  std::ofstream(dir_ / "bad.txt") << "k = nine\n";
  const auto r = invoke({"cluster", "--vertices", example("vertices.jsonl"), "--edges", example("edges.jsonl"),
                         "--config", dir_ / "bad.txt", "--out-dir", dir_ / "o"});
  EXPECT_EQ(r.status, 1);
  EXPECT_NE(r.err.find("bad.txt:1"), std::string::npos) << r.err;
  EXPECT_EQ(invoke({"--version"}).status, 0);
}
