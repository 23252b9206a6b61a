#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "pmcs/sweep.hpp"

namespace sw = pmcs::sweep;
using pmcs::Complex;

namespace {

std::string to_csv(const std::vector<sw::SweepRow>& rows, bool quasi) {
  std::ostringstream os;
  sw::emit(rows, sw::Format::csv, os, quasi);
  return os.str();
}

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("pmcs_test_" + name);
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// runs the CLI with stdout captured to a file; returns the exit status
int run_cli(const std::string& args, const std::filesystem::path& out) {
  const std::string cmd =
      std::string(PMCS_CLI_PATH) + " " + args + " > " + out.string() + " 2> " + out.string() + ".err";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(Presets, Fig1Header) {
  auto cfg = sw::preset("fig1");
  cfg.zeta.r_steps = 2;
  EXPECT_EQ(first_line(to_csv(sw::run_sweep(cfg), false)),
            "mu_re,mu_im,nu_re,nu_im,N,r,theta,quantity,paper_value,oracle_value,rel_gap,"
            "truncation_dim,tail_mass");
}

TEST(Presets, EmptySweepIsHeaderOnly) {
  auto cfg = sw::preset("fig1");
  cfg.N.clear();
  const auto rows = sw::run_sweep(cfg);
  EXPECT_TRUE(rows.empty());
  const auto csv = to_csv(rows, false);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1);
}

TEST(Presets, Fig3aRowCount) {
  auto cfg = sw::preset("fig3a");
  cfg.engine = sw::Engine::oracle;
  const auto rows = sw::run_sweep(cfg);
  EXPECT_EQ(rows.size(), static_cast<std::size_t>(cfg.quasi->gamma.r_steps * cfg.quasi->gamma.theta.size()));
  EXPECT_EQ(rows.size(), 16u * 24u);
  const auto header = first_line(to_csv(rows, true));
  EXPECT_NE(header.find("s,gamma_re,gamma_im"), std::string::npos);
}

TEST(Presets, ContentMatchesFigures) {
  const auto fig1 = sw::preset("fig1");
  EXPECT_EQ(fig1.N, (std::vector<int>{2, 20}));
  EXPECT_EQ(fig1.mu.front(), Complex(1.0 / 3.0));
  EXPECT_EQ(fig1.nu.front(), Complex(2.0 / 3.0));
  EXPECT_EQ(sw::preset("fig2").N, (std::vector<int>{1, 2, 3, 6}));
  const auto fig4 = sw::preset("fig4").N;
  for (int n : {0, 1, 3, 10}) EXPECT_NE(std::find(fig4.begin(), fig4.end(), n), fig4.end());
  const auto fig3 = sw::preset("fig3a");
  EXPECT_EQ(fig3.quasi->s, 1.2);
  EXPECT_EQ(fig3.mu.front(), Complex(0.001));
  EXPECT_EQ(fig3.nu.front(), Complex(1.2));
  EXPECT_THROW(sw::preset("fig9"), pmcs::Error);
}

TEST(Presets, CoverageSmoke) {
  std::set<std::string> quantities;
  for (const auto& name : sw::preset_names()) {
    auto cfg = sw::preset(name);
    cfg.engine = sw::Engine::both;
    cfg.zeta.r_steps = std::min(cfg.zeta.r_steps, 4);
    if (cfg.quasi) {
      cfg.quasi->gamma.r_steps = std::min(cfg.quasi->gamma.r_steps, 3);
      cfg.quasi->gamma.theta.resize(std::min<std::size_t>(cfg.quasi->gamma.theta.size(), 3));
    }
    const auto rows = sw::run_sweep(cfg);
    ASSERT_FALSE(rows.empty()) << name;
    int with_oracle = 0;
    for (const auto& r : rows) {
      quantities.insert(r.quantity);
      if (r.oracle_value) ++with_oracle;
      EXPECT_TRUE(r.paper_value || r.oracle_value || !r.error.empty());
      if (r.error.empty()) {
        EXPECT_LT(r.tail_mass, 1e-10);
      }
    }
    EXPECT_GT(with_oracle, 0) << name;
  }
  for (const char* q : {"A3", "I1", "I2", "uncertainty_product", "F", "norm_sq", "fidelity"}) {
    EXPECT_TRUE(quantities.count(q)) << q;
  }
}

TEST(Sweep, DegeneratePointIsARow) {
  sw::SweepConfig cfg;
  cfg.quantity = sw::Quantity::fidelity;
  cfg.engine = sw::Engine::both;
  cfg.mu = {Complex(1.0)};
  cfg.nu = {Complex(0.0)};
  cfg.N = {2};
  cfg.zeta = {0.0, 1.0, 2, {0.0}};
  const auto rows = sw::run_sweep(cfg);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_FALSE(rows[0].error.empty());
  EXPECT_NE(rows[0].error.find("degenerate"), std::string::npos);
  EXPECT_TRUE(rows[2].error.empty());
  const auto csv = to_csv(rows, false);
  EXPECT_NE(first_line(csv).find(",error"), std::string::npos);
}

TEST(Sweep, DeterministicAcrossThreadCounts) {
  auto cfg = sw::preset("fig2");
  cfg.threads = 1;
  const auto a = to_csv(sw::run_sweep(cfg), false);
  cfg.threads = 3;
  const auto b = to_csv(sw::run_sweep(cfg), false);
  EXPECT_EQ(a, b);
}

TEST(Sweep, RelGapOnlyWithBothEngines) {
  auto cfg = sw::preset("fig4");
  cfg.zeta.r_steps = 2;
  cfg.engine = sw::Engine::paper;
  for (const auto& r : sw::run_sweep(cfg)) {
    EXPECT_TRUE(r.paper_value.has_value());
    EXPECT_FALSE(r.oracle_value.has_value());
    EXPECT_FALSE(r.rel_gap.has_value());
  }
  cfg.engine = sw::Engine::both;
  for (const auto& r : sw::run_sweep(cfg)) EXPECT_TRUE(r.rel_gap.has_value());
}

TEST(Config, OverlayAndValidation) {
  const auto j = nlohmann::json::parse(R"({
    "engine": "both", "format": "json", "mu": [[0.1, 0.2], 0.5], "nu": {"re": 1.0, "im": -1.0},
    "N": [1, 2], "zeta": {"r_min": 0.5, "r_max": 1.5, "r_steps": 3, "theta": [0, 1.5]}
  })");
  const auto c = sw::apply_config_json(sw::preset("fig1"), j);
  EXPECT_EQ(c.engine, sw::Engine::both);
  EXPECT_EQ(c.format, sw::Format::json);
  ASSERT_EQ(c.mu.size(), 2u);
  EXPECT_EQ(c.mu[0], Complex(0.1, 0.2));
  EXPECT_EQ(c.nu[0], Complex(1.0, -1.0));
  EXPECT_EQ(c.zeta.radii(), (std::vector<double>{0.5, 1.0, 1.5}));
  EXPECT_EQ(c.zeta.theta.size(), 2u);

  auto bad = [](const char* text) {
    try {
      sw::apply_config_json(sw::SweepConfig{}, nlohmann::json::parse(text));
    } catch (const pmcs::Error& e) {
      return e.kind() == pmcs::ErrorKind::config;
    }
    return false;
  };
  EXPECT_TRUE(bad(R"({"colour": 1})"));
  EXPECT_TRUE(bad(R"({"N": [40]})"));
  EXPECT_TRUE(bad(R"({"zeta": {"r_min": -1}})"));
  EXPECT_TRUE(bad(R"({"engine": "fast"})"));
  EXPECT_TRUE(bad(R"({"quantity": "quasiprob"})"));
  EXPECT_TRUE(bad(R"({"mu": "one"})"));
  EXPECT_TRUE(bad(R"([1, 2])"));
}

TEST(Output, CsvQuotingAndDigits) {
  EXPECT_EQ(sw::csv_field("plain"), "plain");
  EXPECT_EQ(sw::csv_field("a,b"), "\"a,b\"");
  EXPECT_EQ(sw::csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
  EXPECT_EQ(sw::format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(sw::format_double(1.0 / 3.0), "0.33333333333333331");
}

TEST(Output, JsonIsParseable) {
  auto cfg = sw::preset("fig4");
  cfg.zeta.r_steps = 2;
  cfg.engine = sw::Engine::both;
  std::ostringstream os;
  sw::emit(sw::run_sweep(cfg), sw::Format::json, os, false);
  const auto j = nlohmann::json::parse(os.str());
  ASSERT_TRUE(j.is_array());
  EXPECT_EQ(j.size(), 2u * 5u * 2u);
  EXPECT_EQ(j[0]["quantity"], "norm_sq");
  EXPECT_TRUE(j[0]["oracle_value"].is_number());
}

TEST(Cli, PresetByteIdentical) {
  const auto a = temp_path("a.csv"), b = temp_path("b.csv");
  ASSERT_EQ(run_cli("a3 sweep --preset fig1 --engine both --out " + a.string(), temp_path("log")), 0);
  ASSERT_EQ(run_cli("a3 sweep --preset fig1 --engine both --out " + b.string(), temp_path("log")), 0);
  const auto sa = slurp(a);
  EXPECT_FALSE(sa.empty());
  EXPECT_EQ(sa, slurp(b));
}

TEST(Cli, ExitCodes) {
  const auto out = temp_path("out");
  EXPECT_EQ(run_cli("weyl dump --N 2 --mu 1 --nu 1", out), 0);
  const auto j = nlohmann::json::parse(slurp(out));
  EXPECT_EQ(j["terms"].size(), 4u);

  EXPECT_EQ(run_cli("a3 sweep --preset fig2", out), 2);             // preset of another kind
  EXPECT_EQ(run_cli("a3 sweep --preset nope", out), 2);             // parse error
  EXPECT_EQ(run_cli("wavefn dump --n 2", out), 2);                  // excluded level
  EXPECT_EQ(run_cli("state build --mu 1 --nu 0 --N 2", out), 2);    // degenerate
  EXPECT_EQ(run_cli("state build --mu 0 --nu 1 --N 2 --zeta-re 6 --dim 16", out), 3);
  EXPECT_EQ(run_cli("fidelity sweep --config /nonexistent.json", out), 2);
}

TEST(Cli, StateAndWavefunction) {
  const auto out = temp_path("state");
  ASSERT_EQ(run_cli("state build --mu 0.7071067811865476 --nu 0.7071067811865476 --N 1 --zeta-re 1",
                    out),
            0);
  const auto j = nlohmann::json::parse(slurp(out));
  EXPECT_NEAR(j["norm_sq_oracle"].get<double>(), 2.5, 1e-9);
  EXPECT_NEAR(j["norm_sq_paper"].get<double>(), 1.5, 1e-12);
  EXPECT_NEAR(j["discrepancy"].get<double>(), 0.4, 1e-6);

  ASSERT_EQ(run_cli("wavefn dump --n 0 --xmin 0 --xmax 1 --points 3", out), 0);
  const auto csv = slurp(out);
  EXPECT_EQ(first_line(csv), "x,psi,V");
  EXPECT_NE(csv.find("\n0,"), std::string::npos);
  EXPECT_NE(csv.find(",-8\n"), std::string::npos);
}

TEST(Cli, ConfigFileAndEnvCap) {
  const auto cfg = temp_path("cfg.json");
  {
    std::ofstream f(cfg);
    f << R"({"N": [1], "zeta": {"r_min": 1, "r_max": 1, "r_steps": 1}, "engine": "both"})";
  }
  const auto out = temp_path("cfg_out");
  ASSERT_EQ(run_cli("fidelity sweep --config " + cfg.string(), out), 0);
  const auto text = slurp(out);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 3);

  // a tiny PMCS_MAX_DIM forces truncation failures, reported per row
  setenv("PMCS_MAX_DIM", "8", 1);
  ASSERT_EQ(run_cli("fidelity sweep --config " + cfg.string(), out), 0);
  unsetenv("PMCS_MAX_DIM");
  EXPECT_NE(first_line(slurp(out)).find("error"), std::string::npos);

  ASSERT_EQ(run_cli("squeeze sweep --preset fig2 --gnuplot-hint", out), 0);
  EXPECT_NE(slurp(out).find("plot"), std::string::npos);
}
