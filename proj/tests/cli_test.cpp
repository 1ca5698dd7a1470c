// Runs the built vdc binary and checks exit codes and output shape.

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

namespace {

struct CliRun {
  int code = -1;
  std::string out;
};

CliRun run(const std::string& args) {
  const std::string cmd = std::string(VDC_CLI_PATH) + " " + args + " 2>/dev/null";
  CliRun r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return r;
  std::array<char, 4096> buf;
  for (std::size_t n; (n = fread(buf.data(), 1, buf.size(), pipe)) > 0;) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::filesystem::path temp(const char* name) { return std::filesystem::temp_directory_path() / name; }

TEST(Cli, Help) { EXPECT_EQ(run("--help").code, 0); }

TEST(Cli, ComputeDefaults) {
  const CliRun r = run("compute --defaults");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("name,V,D,C,gamma_re,gamma_im,residual\n", 0), 0u);
}

TEST(Cli, ExperimentCsvToFile) {
  const auto path = temp("vdc_cli_test_out.csv");
  const CliRun r = run("experiment --defaults --shots 2000 --seed 5 --out " + path.string());
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header,
            "name,V_analytic,D_analytic,C_analytic,V_est,D_est,C_est,residual_analytic,residual_est,fidelity,seed");
  std::filesystem::remove(path);
}

TEST(Cli, FringesAndSphereJson) {
  EXPECT_EQ(run("fringes --defaults --shots 1000 --format json").code, 0);
  const CliRun r = run("sphere --defaults --shots 1000 --format json --jobs 2");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("\"points\""), std::string::npos);
}

TEST(Cli, ValidationErrorsExitOne) {
  EXPECT_EQ(run("experiment").code, 1);                          // no source
  EXPECT_EQ(run("experiment --defaults --config x.json").code, 1);  // both sources
  EXPECT_EQ(run("experiment --defaults --shots 10").code, 1);
  EXPECT_EQ(run("experiment --defaults --format xml").code, 1);
  EXPECT_EQ(run("bogus").code, 1);

  const auto path = temp("vdc_cli_test_bad.json");
  {
    std::ofstream f(path);
    f << R"([{"name": "x", "c_a": 1, "c_b": 1, "phi_a": [1, 0], "phi_b": [1, 0]}])";
  }
  EXPECT_EQ(run("compute --config " + path.string()).code, 1);
  std::filesystem::remove(path);
}

TEST(Cli, IoErrorsExitTwo) {
  EXPECT_EQ(run("compute --config /nonexistent/dir/s.json").code, 2);
  EXPECT_EQ(run("compute --defaults --out /nonexistent/dir/out.csv").code, 2);
}

}  // namespace
