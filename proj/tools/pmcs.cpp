// pmcs: command-line front end for photon-modulated coherent state numerics.
//
//   pmcs weyl dump --N 3 --mu 0.5 --nu 0.2+0.1i
//   pmcs state build --mu 0 --nu 1 --N 2 --zeta-re 1 --zeta-im 0
//   pmcs a3 sweep --preset fig1 --engine both --out fig1.csv
//   pmcs squeeze sweep --preset fig2
//   pmcs quasiprob grid --preset fig3a --format json
//   pmcs fidelity sweep --preset fig4
//   pmcs wavefn dump --n 3 --xmin -6 --xmax 6 --points 241
//
// Exit codes: 0 success, 2 configuration error, 3 numerical convergence error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <regex>
#include <string>

#include "pmcs/pmcs.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

pmcs::Complex parse_complex(const std::string& text) {
  // accepts "x", "x+yi", "x-yi", "yi", "(x,y)"
  static const std::regex pair(R"(^\(\s*([^,]+)\s*,\s*([^)]+)\s*\)$)");
  static const std::regex full(R"(^([+-]?[0-9.eE+-]*?[0-9.])([+-][0-9.eE+-]*)i$)");
  static const std::regex imag_only(R"(^([+-]?[0-9.eE+-]*)i$)");
  std::smatch m;
  try {
    if (std::regex_match(text, m, pair)) return {std::stod(m[1]), std::stod(m[2])};
    if (std::regex_match(text, m, full)) {
      const std::string im = m[2].str();
      return {std::stod(m[1]), (im == "+" || im == "-") ? (im == "+" ? 1.0 : -1.0) : std::stod(im)};
    }
    if (std::regex_match(text, m, imag_only)) {
      const std::string im = m[1].str();
      if (im.empty() || im == "+") return {0.0, 1.0};
      if (im == "-") return {0.0, -1.0};
      return {0.0, std::stod(im)};
    }
    std::size_t used = 0;
    const double re = std::stod(text, &used);
    if (used == text.size()) return {re, 0.0};
  } catch (const std::exception&) {
  }
  throw pmcs::Error(pmcs::ErrorKind::config, "cannot parse complex number '" + text + "'");
}

int max_dim_from_env() {
  const char* env = std::getenv("PMCS_MAX_DIM");
  if (!env) return pmcs::fock::kMaxDimension;
  try {
    const int v = std::stoi(env);
    if (v < 4) throw pmcs::Error(pmcs::ErrorKind::config, "PMCS_MAX_DIM must be >= 4");
    return std::min(v, pmcs::fock::kMaxDimension);
  } catch (const std::invalid_argument&) {
    throw pmcs::Error(pmcs::ErrorKind::config, "PMCS_MAX_DIM is not an integer");
  }
}

std::string num(double x) { return pmcs::sweep::format_double(x); }

struct SweepOptions {
  std::string preset;
  std::string config;
  std::string engine;
  std::string out;
  std::string format;
  bool gnuplot_hint = false;
};

void add_sweep_options(CLI::App* cmd, SweepOptions& o) {
  cmd->add_option("--preset", o.preset, "built-in preset")
      ->check(CLI::IsMember({"fig1", "fig2", "fig3a", "fig3b", "fig4"}));
  cmd->add_option("--config", o.config, "JSON config overlaid on the preset");
  cmd->add_option("--engine", o.engine, "paper | oracle | both")
      ->check(CLI::IsMember({"paper", "oracle", "both"}));
  cmd->add_option("--out", o.out, "output path (stdout when omitted)");
  cmd->add_option("--format", o.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_flag("--gnuplot-hint", o.gnuplot_hint, "print a gnuplot script instead of data");
}

int run_sweep_command(pmcs::sweep::Quantity quantity, const SweepOptions& o) {
  using namespace pmcs::sweep;
  SweepConfig cfg;
  if (!o.preset.empty()) {
    cfg = preset(o.preset);
    if (cfg.quantity != quantity) {
      throw pmcs::Error(pmcs::ErrorKind::config, "preset '" + o.preset + "' is a " +
                                                     to_string(cfg.quantity) + " sweep, not " +
                                                     to_string(quantity));
    }
  } else {
    cfg.quantity = quantity;
    if (quantity == Quantity::quasiprob) cfg.quasi = QuasiConfig{-1.0, {0.0, 3.0, 7, {0.0}}};
    cfg.zeta = figure_r_grid();
  }
  if (!o.config.empty()) cfg = load_config_file(cfg, o.config);
  if (cfg.quantity != quantity) {
    throw pmcs::Error(pmcs::ErrorKind::config, "config quantity does not match the subcommand");
  }
  if (!o.engine.empty()) cfg.engine = parse_engine(o.engine);
  if (!o.format.empty()) cfg.format = parse_format(o.format);
  if (!o.out.empty()) cfg.output_path = o.out;
  cfg.max_dim = max_dim_from_env();
  if (cfg.dim_override) cfg.dim_override = std::min(*cfg.dim_override, cfg.max_dim);
  cfg.validate();

  if (o.gnuplot_hint) {
    std::cout << gnuplot_hint(cfg.quantity, cfg.output_path);
    return 0;
  }
  const auto rows = run_sweep(cfg);
  const bool quasi = cfg.quantity == Quantity::quasiprob;
  if (cfg.output_path.empty()) {
    emit(rows, cfg.format, std::cout, quasi);
  } else {
    emit_to_file(rows, cfg.format, cfg.output_path, quasi);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Photon-modulated coherent states: ordering expansions, oracle checks, sweeps"};
  app.require_subcommand(1);

  // weyl dump
  auto* weyl = app.add_subcommand("weyl", "normal-ordered expansions");
  weyl->require_subcommand(1);
  auto* weyl_dump = weyl->add_subcommand("dump", "print the series of (mu a + nu a^dag)^N as JSON");
  int weyl_n = 0;
  std::string weyl_mu = "1", weyl_nu = "1";
  weyl_dump->add_option("--N", weyl_n, "power")->required();
  weyl_dump->add_option("--mu", weyl_mu, "complex mu");
  weyl_dump->add_option("--nu", weyl_nu, "complex nu");

  // state build
  auto* state = app.add_subcommand("state", "photon-modulated states");
  state->require_subcommand(1);
  auto* state_build = state->add_subcommand("build", "build |N, zeta> and compare norms");
  std::string st_mu = "0", st_nu = "1";
  int st_n = 0, st_dim = 0;
  double zeta_re = 0.0, zeta_im = 0.0;
  state_build->add_option("--mu", st_mu, "complex mu");
  state_build->add_option("--nu", st_nu, "complex nu");
  state_build->add_option("--N", st_n, "power")->required();
  state_build->add_option("--zeta-re", zeta_re, "Re zeta");
  state_build->add_option("--zeta-im", zeta_im, "Im zeta");
  state_build->add_option("--dim", st_dim, "truncation dimension (default: automatic)");

  // sweeps
  SweepOptions a3_opts, sq_opts, qp_opts, fid_opts;
  auto* a3 = app.add_subcommand("a3", "A3 parameter");
  a3->require_subcommand(1);
  add_sweep_options(a3->add_subcommand("sweep", "A3 over the zeta grid"), a3_opts);
  auto* squeeze = app.add_subcommand("squeeze", "quadrature squeezing identities");
  squeeze->require_subcommand(1);
  add_sweep_options(squeeze->add_subcommand("sweep", "I1, I2 over the zeta grid"), sq_opts);
  auto* quasi = app.add_subcommand("quasiprob", "s-parameterized quasi-probability");
  quasi->require_subcommand(1);
  add_sweep_options(quasi->add_subcommand("grid", "F(gamma, s) over a gamma grid"), qp_opts);
  auto* fidelity = app.add_subcommand("fidelity", "fidelity with the input coherent state");
  fidelity->require_subcommand(1);
  add_sweep_options(fidelity->add_subcommand("sweep", "fidelity over the zeta grid"), fid_opts);

  // wavefn dump
  auto* wavefn = app.add_subcommand("wavefn", "isotonic oscillator eigenfunctions");
  wavefn->require_subcommand(1);
  auto* wavefn_dump = wavefn->add_subcommand("dump", "CSV of x, psi_n(x), V(x)");
  int wf_n = 0, wf_points = 201;
  double wf_xmin = -6.0, wf_xmax = 6.0;
  wavefn_dump->add_option("--n", wf_n, "level in {0, 3, 4, ...}")->required();
  wavefn_dump->add_option("--xmin", wf_xmin, "left end");
  wavefn_dump->add_option("--xmax", wf_xmax, "right end");
  wavefn_dump->add_option("--points", wf_points, "number of samples")->check(CLI::Range(2, 1000000));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    using pmcs::sweep::Quantity;
    if (weyl_dump->parsed()) {
      const pmcs::ModulationParams p{parse_complex(weyl_mu), parse_complex(weyl_nu), weyl_n};
      const auto series = pmcs::weyl::expand_superposed_power(p);
      nlohmann::json terms = nlohmann::json::array();
      for (const auto& [key, c] : series.terms()) {
        terms.push_back({{"m", key.first}, {"n", key.second}, {"re", c.real()}, {"im", c.imag()}});
      }
      std::cout << nlohmann::json{{"terms", terms}}.dump(2) << "\n";
    } else if (state_build->parsed()) {
      const pmcs::ModulationParams p{parse_complex(st_mu), parse_complex(st_nu), st_n};
      const pmcs::Complex zeta(zeta_re, zeta_im);
      int dim = st_dim > 0 ? st_dim
                           : pmcs::fock::default_dimension(std::norm(zeta), st_n, max_dim_from_env());
      dim = std::min(dim, max_dim_from_env());
      const auto s = pmcs::states::build_state(p, zeta, dim);
      // amplitudes written by hand to keep 17 significant digits
      std::cout << "{\n  \"dimension\": " << s.dimension() << ",\n  \"basis_offset\": "
                << pmcs::fock::FockVector::basis_offset << ",\n  \"norm_sq_paper\": "
                << num(s.norm_sq_paper) << ",\n  \"norm_sq_oracle\": " << num(s.norm_sq_oracle)
                << ",\n  \"discrepancy\": " << num(s.discrepancy)
                << ",\n  \"exact_regime\": " << (p.exact_regime() ? "true" : "false")
                << ",\n  \"tail_mass\": " << num(s.truncation.tail_mass)
                << ",\n  \"amplitudes\": [";
      for (int n = 0; n < s.dimension(); ++n) {
        std::cout << (n ? ",\n    " : "\n    ") << "{\"n\": " << n << ", \"re\": "
                  << num(s.vector[n].real()) << ", \"im\": " << num(s.vector[n].imag()) << "}";
      }
      std::cout << "\n  ]\n}\n";
    } else if (a3->parsed()) {
      return run_sweep_command(Quantity::a3, a3_opts);
    } else if (squeeze->parsed()) {
      return run_sweep_command(Quantity::squeeze, sq_opts);
    } else if (quasi->parsed()) {
      return run_sweep_command(Quantity::quasiprob, qp_opts);
    } else if (fidelity->parsed()) {
      return run_sweep_command(Quantity::fidelity, fid_opts);
    } else if (wavefn_dump->parsed()) {
      pmcs::wavefn::check_level(wf_n);
      std::cout << "x,psi,V\n";
      for (int i = 0; i < wf_points; ++i) {
        const double x = wf_xmin + (wf_xmax - wf_xmin) * i / (wf_points - 1);
        std::cout << num(x) << "," << num(pmcs::wavefn::eigenfunction(wf_n, x)) << ","
                  << num(pmcs::wavefn::potential(x)) << "\n";
      }
    }
  } catch (const pmcs::Error& e) {
    std::cerr << "pmcs: " << e.what() << "\n";
    return e.is_numerical() ? kExitNumerical : kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "pmcs: " << e.what() << "\n";
    return kExitConfig;
  }
  return 0;
}
