#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

namespace {

struct Run {
  int code = -1;
  std::string out;  // stdout and stderr interleaved
};

Run run(const std::string& args) {
  const std::string cmd = std::string("\"") + KDVB_CLI_PATH + "\" " + args + " 2>&1";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

std::filesystem::path fresh_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST(Cli, HelpExitsZero) {
  const auto r = run("--help");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("factorize"), std::string::npos);
}

TEST(Cli, FactorizeKdvb) {
  const auto r = run("factorize --eq kdvb --sign minus --delta 0");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("-0.8164965809277"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("residual"), std::string::npos);
}

TEST(Cli, FactorizeJson) {
  const auto r = run("factorize --eq compound --sign plus --p 0 --q 2 --format json");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("\"constraints\""), std::string::npos);
}

TEST(Cli, DomainErrorsExitTwo) {
  const auto r = run("factorize --eq compound --q 0");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("compound factorization requires q ≠ 0"), std::string::npos) << r.out;
  EXPECT_EQ(r.out.find('\n'), r.out.size() - 1) << "one-line message expected";

  EXPECT_EQ(run("evaluate --family kdvb-regular --points 0").code, 2);
  EXPECT_EQ(run("verify --scope everything").code, 2);
  EXPECT_EQ(run("evaluate --family no-such-family").code, 2);
  EXPECT_EQ(run("figure 9").code, 2);
  EXPECT_EQ(run("--no-such-flag").code, 2);
}

TEST(Cli, EvaluateCsvHeaders) {
  const auto reduced = run("evaluate --family kdvb-regular --theta-min -1 --theta-max 1 --points 3");
  EXPECT_EQ(reduced.code, 0);
  EXPECT_EQ(first_line(reduced.out), "theta,re_u,im_u,pole_flag");

  const auto physical = run(
      "evaluate --family compound-tanh-plus --s 2 --mu 1 --alpha 3 --beta 2 --v -0.04 "
      "--x-min -5 --x-max 5 --points 11 --t 0");
  EXPECT_EQ(physical.code, 0) << physical.out;
  EXPECT_EQ(first_line(physical.out), "x,t,re_u,im_u,pole_flag");

  const auto sweep = run("sweep --a-min -5 --a-max 0 --a-steps 3 --theta-min -1 --theta-max 1 --points 3");
  EXPECT_EQ(sweep.code, 0) << sweep.out;
  EXPECT_EQ(first_line(sweep.out), "a,theta,re_u,im_u,pole_flag");
  EXPECT_NE(sweep.out.find(",,1\n"), std::string::npos);
}

TEST(Cli, Deterministic) {
  const std::string args =
      "evaluate --family kdvb-regular --theta-min -50 --theta-max 50 --points 101 "
      "--theta0-im -7.853981633974483 --format json";
  const auto a = run(args);
  const auto b = run(args);
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
}

TEST(Cli, VerifyExitCodes) {
  const auto ok = run("verify --scope factorization");
  EXPECT_EQ(ok.code, 0) << ok.out;
  EXPECT_NE(ok.out.find("PASS "), std::string::npos);
  EXPECT_EQ(ok.out.find("FAIL "), std::string::npos);

  EXPECT_EQ(run("verify --scope kdvb-regular --tol 1e-20").code, 1);
  const auto perturbed = run("verify --scope kdvb-regular --perturb 0.01");
  EXPECT_EQ(perturbed.code, 1);
  EXPECT_NE(perturbed.out.find("FAIL "), std::string::npos);
}

TEST(Cli, VerifyRationalAudit) {
  const auto r = run("verify --scope compound-rational");
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("verdict: definitive"), std::string::npos);
  EXPECT_NE(r.out.find("FINDING "), std::string::npos);
}

TEST(Cli, FigureSevenWritesSixFiles) {
  const auto dir = fresh_dir("kdvb_cli_fig7");
  const auto r = run("figure 7 --out-dir \"" + dir.string() + "\"");
  EXPECT_EQ(r.code, 0) << r.out;
  std::size_t n = 0;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    (void)e;
    ++n;
  }
  EXPECT_EQ(n, 6u);
  std::ifstream in(dir / "fig7_compound_v-1.04.csv");
  ASSERT_TRUE(in.good());
  std::string line;
  std::getline(in, line);
  std::string value;
  bool constant = true;
  while (std::getline(in, line)) {
    const auto third = line.substr(line.find(',', line.find(',') + 1) + 1);
    const auto v = third.substr(0, third.find(','));
    if (value.empty()) value = v;
    constant = constant && v == value;
  }
  EXPECT_TRUE(constant);
}

TEST(Cli, FigureMatchesRerun) {
  const auto a = fresh_dir("kdvb_cli_fig1a");
  const auto b = fresh_dir("kdvb_cli_fig1b");
  ASSERT_EQ(run("figure 1 --out-dir \"" + a.string() + "\"").code, 0);
  ASSERT_EQ(run("figure 1 --out-dir \"" + b.string() + "\"").code, 0);
  EXPECT_EQ(slurp(a / "fig1_kdvb_regular.csv"), slurp(b / "fig1_kdvb_regular.csv"));
}
