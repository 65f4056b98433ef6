#include <gtest/gtest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace {

struct Run {
    int code = -1;
    std::string out;
};

// stdout only; stderr is dropped unless the arguments redirect it
Run rsfix(const std::string& args) {
    std::string cmd = std::string(RSFIX_CLI_PATH) + " " + args;
    if (args.find("2>") == std::string::npos) cmd += " 2>/dev/null";
    Run r;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return r;
    std::array<char, 4096> buf{};
    std::size_t got = 0;
    while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("rsfix_cli_" + std::to_string(::getpid()) + "_" +
                ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }
    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    fs::path dir_;
};

}  // namespace

TEST_F(Cli, ShapeOfWorkedExample) {
    const auto r = rsfix("shape --perm \"5 3 2 1 4 6\"");
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "3,1,1,1\n");
}

TEST_F(Cli, ShapeFromStdin) {
    std::ofstream(path("perms.txt")) << "2 1 3\n\n1 2 3\n";
    const auto r = rsfix("shape < " + path("perms.txt"));
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "2,1\n3\n");
}

TEST_F(Cli, ProfileRows) {
    const auto r = rsfix("profile --diagram 7,5,2,1,1");
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out.rfind("t,L\n", 0), 0u);
    EXPECT_NE(r.out.find("\n0,4\n"), std::string::npos);
    EXPECT_NE(r.out.find("\n-5,5\n"), std::string::npos);
    EXPECT_NE(r.out.find("\n7,7\n"), std::string::npos);

    const auto scaled = rsfix("profile --diagram 1 --m 0");
    EXPECT_EQ(scaled.code, 0);
    EXPECT_EQ(scaled.out.rfind("s,F_n,Phi_p\n", 0), 0u);
}

TEST_F(Cli, Distance) {
    const auto r = rsfix("distance --a 2 --b 1,1");
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("sup_distance,1.41421356237"), std::string::npos);
    EXPECT_NE(r.out.find("lemma34_bound,2\n"), std::string::npos);

    const auto empty = rsfix("distance --a 1 --b \"\"");
    EXPECT_EQ(empty.code, 0);
    EXPECT_NE(empty.out.find("slack,0\n"), std::string::npos);

    const auto scaled = rsfix("distance --a 1 --m 0");
    EXPECT_EQ(scaled.code, 0);
    EXPECT_EQ(scaled.out, "scaled_sup_distance,0.363380227632\n");

    EXPECT_EQ(rsfix("distance --a 1").code, 1);
}

TEST_F(Cli, SampleIsDeterministic) {
    const auto a = rsfix("sample --regime fpf_involution --n 20 --trials 3 --seed 9");
    const auto b = rsfix("sample --regime fpf_involution --n 20 --trials 3 --seed 9");
    EXPECT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(std::count(a.out.begin(), a.out.end(), '\n'), 3);
    // --first-trial picks up the same stream
    const auto third = rsfix("sample --regime fpf_involution --n 20 --first-trial 2 --seed 9");
    EXPECT_EQ(a.out.substr(a.out.find('\n', a.out.find('\n') + 1) + 1), third.out);
}

TEST_F(Cli, SampleCompositeImpliedByCore) {
    const auto r = rsfix("sample --core n_cycle --fix-rule theta_log --n 1000 --seed 3 > " + path("p.txt") +
                         " && " RSFIX_CLI_PATH " shape < " + path("p.txt"));
    EXPECT_EQ(r.code, 0);
    EXPECT_FALSE(r.out.empty());
}

TEST_F(Cli, ErrorsExitOne) {
    EXPECT_EQ(rsfix("").code, 1);
    EXPECT_EQ(rsfix("bogus").code, 1);
    EXPECT_EQ(rsfix("shape --perm \"1 1\"").code, 1);
    EXPECT_EQ(rsfix("sample --regime fpf_involution --n 5 --seed 1").code, 1);
    EXPECT_EQ(rsfix("sample --regime nope --n 5 --seed 1").code, 1);
    EXPECT_EQ(rsfix("sample --core n_cycle --fix-rule power --beta 2 --n 5 --seed 1").code, 1);
    EXPECT_EQ(rsfix("profile --diagram 1,2").code, 1);
    const auto parity = rsfix("sample --regime fpf_involution --n 5 --seed 1 2>&1");
    EXPECT_NE(parity.out.find("parity"), std::string::npos);
}

TEST_F(Cli, VerifyReportsAreReproducible) {
    const auto a = rsfix("verify --suite lemma34 --pairs 1000 --seed 7");
    const auto b = rsfix("verify --suite lemma34 --pairs 1000 --seed 7");
    EXPECT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
    EXPECT_NE(a.out.find("\"pass\":true"), std::string::npos);
    EXPECT_EQ(rsfix("verify --suite nope --seed 1").code, 1);
}

TEST_F(Cli, ExperimentFilesIdenticalAcrossWorkers) {
    const std::string common = "experiment --regime uniform --n 100,400 --trials 6 --seed 12 --measure all";
    ASSERT_EQ(rsfix(common + " --workers 1 --out " + path("a.csv")).code, 0);
    ASSERT_EQ(rsfix(common + " --workers 3 --out " + path("b.csv")).code, 0);
    EXPECT_EQ(slurp(path("a.csv")), slurp(path("b.csv")));
    EXPECT_EQ(slurp(path("a.csv.summary.json")), slurp(path("b.csv.summary.json")));
    EXPECT_EQ(std::count(std::istreambuf_iterator<char>(std::ifstream(path("a.csv")).rdbuf()), {}, '\n'), 13);
}

TEST_F(Cli, ExperimentFromConfigFile) {
    std::ofstream(path("cfg.txt")) << "# regime\nensemble = composite\ncore = derangement\nfix_rule = constant\nc = 4\n"
                                   << "n_ladder = 60\ntrials = 3\nseed = 5\nmeasurements = ell,cycle_stats\nout = "
                                   << path("c.csv") << "\n";
    ASSERT_EQ(rsfix("experiment --config " + path("cfg.txt")).code, 0);
    const auto csv = slurp(path("c.csv"));
    EXPECT_NE(csv.find("\n1,60,0,4,"), std::string::npos);
    EXPECT_TRUE(fs::exists(path("c.csv.summary.json")));
    EXPECT_EQ(rsfix("experiment --config " + path("missing.txt")).code, 1);
}

TEST_F(Cli, KsOnFilesAndTrialCsv) {
    std::ofstream(path("x.txt")) << "1\n2\n";
    std::ofstream(path("y.txt")) << "# y\n1.5\n2.5\n";
    const auto r = rsfix("ks --x " + path("x.txt") + " --y " + path("y.txt"));
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out.rfind("ks,0.5\n", 0), 0u);

    ASSERT_EQ(rsfix("experiment --regime n_cycle --n 200 --trials 20 --seed 1 --measure ell --out " + path("a.csv")).code, 0);
    ASSERT_EQ(rsfix("experiment --regime uniform --n 200 --trials 20 --seed 2 --measure ell --out " + path("b.csv")).code, 0);
    const auto t = rsfix("ks --rescale tw2 --x " + path("a.csv") + " --y " + path("b.csv"));
    EXPECT_EQ(t.code, 0);
    EXPECT_EQ(t.out.rfind("ks,", 0), 0u);

    std::ofstream(path("table.csv")) << "x,F\n-10,0\n10,1\n";
    const auto tab = rsfix("ks --x " + path("x.txt") + " --table " + path("table.csv"));
    EXPECT_EQ(tab.code, 0);
    EXPECT_EQ(tab.out.rfind("ks_table,", 0), 0u);
    EXPECT_EQ(rsfix("ks --x " + path("x.txt")).code, 1);
}
