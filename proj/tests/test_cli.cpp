#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "leaklint/leaklint.hpp"

using namespace leaklint;
namespace fs = std::filesystem;

namespace {

struct CliResult {
  int code = 0;
  std::string out;
  std::string err;
};

CliResult run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  CliResult r;
  r.code = cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

class CliTest : public ::testing::Test {
 protected:
  fs::path dir_;

  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("leaklint_cli_" +
            std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
            "_" + ::testing::UnitTest::GetInstance()
                      ->current_test_info()
                      ->name());
    fs::create_directories(dir_);
  }

  void TearDown() override { fs::remove_all(dir_); }

  std::string file(const std::string& name, const std::string& content) {
    fs::path p = dir_ / name;
    std::ofstream(p, std::ios::binary) << content;
    return p.string();
  }

  static std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }
};

const char* kLeaky =
    "X_new = resample(X)\n"
    "a, b = train_test_split(X_new)\n";

}  // namespace

TEST_F(CliTest, CleanFileExitsZero) {
  std::string p = file("clean.py", "x = 1\n");
  CliResult r = run_cli({p});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, p + ": no data leakage detected\n");
  EXPECT_TRUE(r.err.empty());
}

TEST_F(CliTest, FindingExitsOne) {
  std::string p = file("leaky.py", kLeaky);
  CliResult r = run_cli({p});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find(p + ":1: OVERLAP leakage (SplitBeforeSample)"),
            std::string::npos);
}

TEST_F(CliTest, FailOnNoneSuppressesExitOne) {
  std::string p = file("leaky.py", kLeaky);
  CliResult r = run_cli({"--fail-on", "none", p});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("OVERLAP"), std::string::npos);
}

TEST_F(CliTest, JsonOutputIsAnArray) {
  std::string p = file("leaky.py", kLeaky);
  CliResult r = run_cli({"--format", "json", p});
  EXPECT_EQ(r.code, 1);

  auto doc = nlohmann::json::parse(r.out);
  ASSERT_TRUE(doc.is_array());
  ASSERT_EQ(doc.size(), 1u);
  EXPECT_EQ(doc[0]["unit"], p);
  EXPECT_EQ(doc[0]["summary"]["overlap"], 1);
}

TEST_F(CliTest, JsonRunsAreByteIdentical) {
  std::string p = file("leaky.py", kLeaky);
  CliResult a = run_cli({"--format", "json", p});
  CliResult b = run_cli({"--format", "json", p});
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.code, b.code);
}

TEST_F(CliTest, MissingFileExitsTwo) {
  CliResult r = run_cli({(dir_ / "ghost.py").string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("ghost.py"), std::string::npos);
}

TEST_F(CliTest, DirectoryIsRecursedSorted) {
  file("b.py", "x = 1\n");
  file("a.py", "x = 1\n");
  fs::create_directories(dir_ / "sub");
  std::ofstream(dir_ / "sub" / "c.py") << "x = 1\n";
  file("notes.txt", "not python\n");
  CliResult r = run_cli({dir_.string()});

  EXPECT_EQ(r.code, 0);
  size_t pa = r.out.find("a.py");
  size_t pb = r.out.find("b.py");
  size_t pc = r.out.find("c.py");
  ASSERT_NE(pa, std::string::npos);
  ASSERT_NE(pb, std::string::npos);
  ASSERT_NE(pc, std::string::npos);
  EXPECT_LT(pa, pb);
  EXPECT_LT(pb, pc);
  EXPECT_EQ(r.out.find("notes.txt"), std::string::npos);
}

TEST_F(CliTest, BrokenFileIsIsolated) {
  std::string bad = file("a_broken.py", "x = 'unterminated\n");
  std::string good = file("b_good.py", kLeaky);
  CliResult r = run_cli({dir_.string()});

  EXPECT_EQ(r.code, 2);  // error outranks findings
  EXPECT_NE(r.out.find("a_broken.py: error:"), std::string::npos);
  EXPECT_NE(r.out.find("OVERLAP"), std::string::npos);
}

TEST_F(CliTest, BrokenFileGetsJsonErrorEntry) {
  std::string bad = file("a_broken.py", "x = 'unterminated\n");
  std::string good = file("b_good.py", "x = 1\n");
  CliResult r = run_cli({"--format", "json", dir_.string()});

  auto doc = nlohmann::json::parse(r.out);
  ASSERT_EQ(doc.size(), 2u);
  EXPECT_TRUE(doc[0].contains("error"));
  EXPECT_NE(doc[0]["error"].get<std::string>().find("line 1"),
            std::string::npos);
  EXPECT_FALSE(doc[1].contains("error"));
}

TEST_F(CliTest, FixRewritesTheFile) {
  std::string p = file("leaky.py", kLeaky);
  CliResult r = run_cli({"--fix", p});

  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("applied 1 fix(es)"), std::string::npos);
  std::string after = slurp(p);
  EXPECT_EQ(after,
            "#TODO: Check the arguments provided to the call to split.\n"
            "a, b = train_test_split(X_new)\n"
            "X_new = resample(X)\n");
}

TEST_F(CliTest, DryRunShowsDiffWithoutWriting) {
  std::string p = file("leaky.py", kLeaky);
  CliResult r = run_cli({"--dry-run", p});

  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("@@"), std::string::npos);
  EXPECT_NE(r.out.find("+#TODO:"), std::string::npos);
  EXPECT_EQ(slurp(p), kLeaky);
}

TEST_F(CliTest, FixPreservesMissingTrailingNewline) {
  std::string p = file("leaky.py",
                       "X_new = resample(X)\n"
                       "a, b = train_test_split(X_new)");
  CliResult r = run_cli({"--fix", p});

  EXPECT_EQ(r.code, 1);
  std::string after = slurp(p);
  ASSERT_FALSE(after.empty());
  EXPECT_NE(after.back(), '\n');
}

TEST_F(CliTest, ConfigChangesTheRules) {
  std::string p = file("custom.py",
                       "X_new = augment(X)\n"
                       "a, b = make_folds(X_new)\n");
  std::string conf = file("rules.conf",
                          "split: make_folds\n"
                          "sample: augment\n");
  CliResult with_conf = run_cli({"--config", conf, p});
  EXPECT_EQ(with_conf.code, 1);
  EXPECT_NE(with_conf.out.find("OVERLAP"), std::string::npos);

  CliResult without = run_cli({p});
  EXPECT_EQ(without.code, 0);
}

TEST_F(CliTest, BadConfigExitsTwo) {
  std::string p = file("x.py", "x = 1\n");
  std::string conf = file("rules.conf", "nonsense here\n");
  CliResult r = run_cli({"--config", conf, p});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("config line 1"), std::string::npos);
}

TEST_F(CliTest, FixAndCorpusConflict) {
  std::string p = file("x.py", "x = 1\n");
  CliResult r = run_cli({"--fix", "--corpus", p});
  EXPECT_EQ(r.code, 2);
  EXPECT_FALSE(r.err.empty());
}

TEST_F(CliTest, CorpusModeScoresSidecars) {
  std::string p = file("leaky.py", kLeaky);
  file("leaky.py.expected", "overlap SplitBeforeSample 1\n");
  CliResult r = run_cli({"--corpus", p});

  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find(p + ": match"), std::string::npos);
  EXPECT_NE(r.out.find("corpus: files=1 matched=1 tp=1 fp=0 fn=0"),
            std::string::npos);
}

TEST_F(CliTest, CorpusMismatchExitsOne) {
  std::string p = file("leaky.py", kLeaky);
  file("leaky.py.expected", "multitest RepeatedEvaluation 1\n");
  CliResult r = run_cli({"--corpus", p});

  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("MISMATCH"), std::string::npos);
}

TEST_F(CliTest, CorpusJsonFormat) {
  std::string p = file("leaky.py", kLeaky);
  file("leaky.py.expected", "overlap SplitBeforeSample 1\n");
  CliResult r = run_cli({"--corpus", "--format", "json", p});

  auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["files"].size(), 1u);
  EXPECT_EQ(doc["files"][0]["matched"], true);
  EXPECT_EQ(doc["summary"]["tp"], 1);
  EXPECT_EQ(doc["summary"]["overlap"]["tp"], 1);
  EXPECT_EQ(doc["summary"]["files"], 1);
}

TEST_F(CliTest, NotebookScanUsesCellCoordinates) {
  std::string p = file("nb.ipynb", R"nb({
 "cells": [
  {"cell_type": "code", "source": ["X_new = resample(X)\n", "a, b = train_test_split(X_new)\n"]}
 ]
})nb");
  CliResult r = run_cli({p});

  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find(p + ":cell 0, line 1:"), std::string::npos);
}

TEST_F(CliTest, NotebookFixKeepsJsonLoadable) {
  std::string p = file("nb.ipynb", R"nb({
 "cells": [
  {"cell_type": "code", "source": ["X_new = resample(X)\n", "a, b = train_test_split(X_new)\n"]}
 ],
 "nbformat": 4
})nb");
  CliResult r = run_cli({"--fix", p});

  EXPECT_EQ(r.code, 1);
  auto doc = nlohmann::json::parse(slurp(p));
  EXPECT_EQ(doc["nbformat"], 4);
  ASSERT_EQ(doc["cells"][0]["source"].size(), 3u);
}

TEST_F(CliTest, HelpExitsZero) {
  CliResult r = run_cli({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("leaklint"), std::string::npos);
}

TEST_F(CliTest, UnknownFlagExitsTwo) {
  CliResult r = run_cli({"--bogus"});
  EXPECT_EQ(r.code, 2);
}

TEST_F(CliTest, NoPathsExitsTwo) {
  CliResult r = run_cli({});
  EXPECT_EQ(r.code, 2);
}

TEST_F(CliTest, MultipleFilesAggregateWorstExit) {
  std::string clean = file("a_clean.py", "x = 1\n");
  std::string leaky = file("b_leaky.py", kLeaky);
  CliResult r = run_cli({clean, leaky});

  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("no data leakage detected"), std::string::npos);
  EXPECT_NE(r.out.find("OVERLAP"), std::string::npos);
}
