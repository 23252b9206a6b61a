#pragma once

// Parameter sweeps that regenerate figure data, with CSV/JSON emission.
// Rows are produced per grid point in lexicographic grid order; points are
// evaluated on worker threads but written back by index, so output is
// byte-identical across runs.

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "pmcs/error.hpp"
#include "pmcs/fock.hpp"
#include "pmcs/nonclassicality.hpp"
#include "pmcs/states.hpp"
#include "pmcs/types.hpp"

namespace pmcs::sweep {

enum class Engine { paper, oracle, both };
enum class Quantity { a3, squeeze, fidelity, quasiprob, norm };
enum class Format { csv, json };

/// r_steps points from r_min to r_max inclusive (just r_min when r_steps == 1),
/// crossed with every angle in theta.
struct PolarGrid {
  double r_min = 0.0;
  double r_max = 0.0;
  int r_steps = 1;
  std::vector<double> theta{0.0};

  std::vector<double> radii() const {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(r_steps));
    for (int i = 0; i < r_steps; ++i) {
      out.push_back(r_steps == 1 ? r_min : r_min + (r_max - r_min) * i / (r_steps - 1));
    }
    return out;
  }
};

struct QuasiConfig {
  double s = 0.0;
  PolarGrid gamma;
};

struct SweepConfig {
  Quantity quantity = Quantity::a3;
  Engine engine = Engine::oracle;
  std::vector<Complex> mu{Complex(1.0 / 3.0)};
  std::vector<Complex> nu{Complex(2.0 / 3.0)};
  std::vector<int> N{2};
  PolarGrid zeta;
  std::optional<QuasiConfig> quasi;
  std::optional<int> dim_override;
  int max_dim = fock::kMaxDimension;
  std::string output_path;
  Format format = Format::csv;
  unsigned threads = 0;  // 0 = hardware concurrency

  void validate() const {
    auto fail = [](const std::string& m) { throw Error(ErrorKind::config, m); };
    if (zeta.r_min < 0.0) fail("zeta.r_min must be >= 0");
    if (zeta.r_steps < 1) fail("zeta.r_steps must be >= 1");
    if (zeta.theta.empty()) fail("zeta.theta must not be empty");
    for (int n : N) {
      if (n < 0 || n > kMaxSuperposedPower) fail("N values must lie in [0, 32]");
    }
    if (quantity == Quantity::quasiprob) {
      if (!quasi) fail("quasiprob sweep needs a quasi section");
      if (quasi->gamma.r_steps < 1 || quasi->gamma.theta.empty()) fail("bad gamma grid");
      if (quasi->gamma.r_min < 0.0) fail("gamma.r_min must be >= 0");
    }
    if (max_dim < 4 || max_dim > fock::kMaxDimension) fail("max_dim must lie in [4, 256]");
    if (dim_override && (*dim_override < 4 || *dim_override > max_dim)) {
      fail("dim override outside [4, max_dim]");
    }
  }
};

struct SweepRow {
  Complex mu;
  Complex nu;
  int N = 0;
  double r = 0.0;
  double theta = 0.0;
  std::optional<double> s;
  std::optional<Complex> gamma;
  std::string quantity;
  std::optional<double> paper_value;
  std::optional<double> oracle_value;
  std::optional<double> rel_gap;
  int truncation_dim = 0;
  double tail_mass = 0.0;
  std::string error;
};

inline const char* to_string(Quantity q) {
  switch (q) {
    case Quantity::a3: return "a3";
    case Quantity::squeeze: return "squeeze";
    case Quantity::fidelity: return "fidelity";
    case Quantity::quasiprob: return "quasiprob";
    case Quantity::norm: return "norm";
  }
  return "?";
}

inline Engine parse_engine(const std::string& s) {
  if (s == "paper") return Engine::paper;
  if (s == "oracle") return Engine::oracle;
  if (s == "both") return Engine::both;
  throw Error(ErrorKind::config, "unknown engine '" + s + "'");
}

inline Format parse_format(const std::string& s) {
  if (s == "csv") return Format::csv;
  if (s == "json") return Format::json;
  throw Error(ErrorKind::config, "unknown format '" + s + "'");
}

inline Quantity parse_quantity(const std::string& s) {
  for (Quantity q : {Quantity::a3, Quantity::squeeze, Quantity::fidelity, Quantity::quasiprob,
                     Quantity::norm}) {
    if (s == to_string(q)) return q;
  }
  throw Error(ErrorKind::config, "unknown quantity '" + s + "'");
}

// ------------------------------------------------------------------ presets

inline PolarGrid figure_r_grid() { return {0.1, 3.0, 30, {0.0}}; }

inline std::vector<std::string> preset_names() {
  return {"fig1", "fig2", "fig3a", "fig3b", "fig4"};
}

inline SweepConfig preset(const std::string& name) {
  SweepConfig c;
  if (name == "fig1") {
    c.quantity = Quantity::a3;
    c.N = {2, 20};
    c.zeta = figure_r_grid();
  } else if (name == "fig2") {
    c.quantity = Quantity::squeeze;
    c.N = {1, 2, 3, 6};
    c.zeta = figure_r_grid();
  } else if (name == "fig3a") {
    c.quantity = Quantity::quasiprob;
    c.mu = {Complex(0.001)};
    c.nu = {Complex(1.2)};
    c.N = {2};
    c.zeta = {1.0, 1.0, 1, {std::numbers::pi / 2.0}};  // zeta = i
    std::vector<double> angles;
    for (int i = 0; i < 24; ++i) angles.push_back(2.0 * std::numbers::pi * i / 24.0);
    c.quasi = QuasiConfig{1.2, {0.0, 3.0, 16, angles}};
  } else if (name == "fig3b") {
    c.quantity = Quantity::quasiprob;
    c.mu = {Complex(0.001)};
    c.nu = {Complex(1.2)};
    c.N.clear();
    for (int n = 0; n <= 20; ++n) c.N.push_back(n);
    c.zeta = {1.0, 1.0, 1, {std::numbers::pi + 0.1}};  // zeta = -e^{0.1 i}
    c.quasi = QuasiConfig{1.2, {1.0, 1.0, 1, {std::numbers::pi / 2.0}}};  // gamma = i
  } else if (name == "fig4") {
    c.quantity = Quantity::fidelity;
    c.N = {0, 1, 2, 3, 10};
    c.zeta = figure_r_grid();
  } else {
    throw Error(ErrorKind::config, "unknown preset '" + name + "'");
  }
  return c;
}

// ------------------------------------------------------------ config files

namespace detail {

inline Complex parse_complex_json(const nlohmann::json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  if (j.is_object() && j.contains("re")) {
    return {j.at("re").get<double>(), j.value("im", 0.0)};
  }
  throw Error(ErrorKind::config, "complex value must be a number, [re, im] or {re, im}");
}

inline std::vector<Complex> parse_complex_list(const nlohmann::json& j) {
  std::vector<Complex> out;
  // a list of values; each value is a number, [re, im] or {re, im}
  if (j.is_array()) {
    for (const auto& e : j) out.push_back(parse_complex_json(e));
  } else {
    out.push_back(parse_complex_json(j));
  }
  if (out.empty()) throw Error(ErrorKind::config, "empty parameter list");
  return out;
}

inline void apply_grid(PolarGrid& g, const nlohmann::json& j) {
  for (const auto& [key, value] : j.items()) {
    if (key == "r_min") g.r_min = value.get<double>();
    else if (key == "r_max") g.r_max = value.get<double>();
    else if (key == "r_steps") g.r_steps = value.get<int>();
    else if (key == "theta") {
      g.theta = value.is_array() ? value.get<std::vector<double>>()
                                 : std::vector<double>{value.get<double>()};
    } else {
      throw Error(ErrorKind::config, "unknown grid key '" + key + "'");
    }
  }
}

}  // namespace detail

/// Overlay a JSON document onto a base config (a preset or the defaults).
inline SweepConfig apply_config_json(SweepConfig c, const nlohmann::json& j) {
  if (!j.is_object()) throw Error(ErrorKind::config, "config must be a JSON object");
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "quantity") c.quantity = parse_quantity(value.get<std::string>());
      else if (key == "engine") c.engine = parse_engine(value.get<std::string>());
      else if (key == "format") c.format = parse_format(value.get<std::string>());
      else if (key == "out") c.output_path = value.get<std::string>();
      else if (key == "mu") c.mu = detail::parse_complex_list(value);
      else if (key == "nu") c.nu = detail::parse_complex_list(value);
      else if (key == "N") {
        c.N = value.is_array() ? value.get<std::vector<int>>() : std::vector<int>{value.get<int>()};
      } else if (key == "zeta") detail::apply_grid(c.zeta, value);
      else if (key == "quasi") {
        QuasiConfig q = c.quasi.value_or(QuasiConfig{});
        for (const auto& [qk, qv] : value.items()) {
          if (qk == "s") q.s = qv.get<double>();
          else if (qk == "gamma") detail::apply_grid(q.gamma, qv);
          else throw Error(ErrorKind::config, "unknown quasi key '" + qk + "'");
        }
        c.quasi = q;
      } else if (key == "dim") c.dim_override = value.get<int>();
      else if (key == "threads") c.threads = value.get<unsigned>();
      else throw Error(ErrorKind::config, "unknown config key '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::config, e.what());
  }
  c.validate();
  return c;
}

inline SweepConfig load_config_file(SweepConfig base, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::config, "cannot open config file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::config, std::string("config parse error: ") + e.what());
  }
  return apply_config_json(std::move(base), j);
}

// ------------------------------------------------------------- evaluation

namespace detail {

struct GridPoint {
  Complex mu;
  Complex nu;
  int N = 0;
  double r = 0.0;
  double theta = 0.0;
  std::optional<Complex> gamma;
};

inline std::vector<GridPoint> enumerate_points(const SweepConfig& c) {
  std::vector<GridPoint> points;
  for (Complex mu : c.mu) {
    for (Complex nu : c.nu) {
      for (int n : c.N) {
        for (double r : c.zeta.radii()) {
          for (double th : c.zeta.theta) {
            if (c.quantity == Quantity::quasiprob) {
              for (double gr : c.quasi->gamma.radii()) {
                for (double gt : c.quasi->gamma.theta) {
                  points.push_back({mu, nu, n, r, th, std::polar(gr, gt)});
                }
              }
            } else {
              points.push_back({mu, nu, n, r, th, std::nullopt});
            }
          }
        }
      }
    }
  }
  return points;
}

inline void append_error(std::string& dst, const std::string& msg) {
  if (!dst.empty()) dst += "; ";
  dst += msg;
}

template <typename F>
void guarded(std::string& err, F&& f) {
  try {
    f();
  } catch (const std::exception& e) {
    append_error(err, e.what());
  }
}

inline void finish(SweepRow& row) {
  if (row.paper_value && row.oracle_value) {
    const double o = *row.oracle_value;
    row.rel_gap = std::abs(*row.paper_value - o) / std::max(std::abs(o), 1e-300);
  }
}

inline std::vector<SweepRow> evaluate_point(const SweepConfig& c, const GridPoint& pt) {
  const ModulationParams p{pt.mu, pt.nu, pt.N};
  const Complex zeta = std::polar(pt.r, pt.theta);
  const bool want_paper = c.engine != Engine::oracle;
  const bool want_oracle = c.engine != Engine::paper;

  SweepRow base;
  base.mu = pt.mu;
  base.nu = pt.nu;
  base.N = pt.N;
  base.r = pt.r;
  base.theta = pt.theta;
  if (c.quasi && c.quantity == Quantity::quasiprob) {
    base.s = c.quasi->s;
    base.gamma = pt.gamma;
  }

  std::optional<states::PMCState> state;
  std::string state_error;
  try {
    const int dim = c.dim_override.value_or(
        fock::default_dimension(std::norm(zeta), pt.N, c.max_dim));
    state = states::build_state(p, zeta, dim);
    base.truncation_dim = state->dimension();
    base.tail_mass = state->truncation.tail_mass;
  } catch (const std::exception& e) {
    state_error = e.what();
  }

  auto make = [&](const std::string& quantity) {
    SweepRow row = base;
    row.quantity = quantity;
    if (!state_error.empty()) row.error = state_error;
    return row;
  };

  std::vector<SweepRow> rows;
  switch (c.quantity) {
    case Quantity::a3: {
      SweepRow row = make("A3");
      if (want_paper && state_error.empty()) {
        guarded(row.error, [&] { row.paper_value = nonclassical::a3(nonclassical::moments_paper(p, zeta)).a3; });
      }
      if (want_oracle && state) {
        guarded(row.error, [&] { row.oracle_value = nonclassical::a3(nonclassical::moments_oracle(*state)).a3; });
      }
      rows.push_back(row);
      break;
    }
    case Quantity::squeeze: {
      // no closed form exists for these; the oracle is always used
      SweepRow i1 = make("I1"), i2 = make("I2"), up = make("uncertainty_product");
      if (state) {
        const auto sq = nonclassical::squeezing_identities(*state);
        i1.oracle_value = sq.I1;
        i2.oracle_value = sq.I2;
        up.oracle_value = sq.var_x * sq.var_y;
      }
      rows.push_back(i1);
      rows.push_back(i2);
      rows.push_back(up);
      break;
    }
    case Quantity::norm:
    case Quantity::fidelity: {
      SweepRow norm = make("norm_sq");
      if (state) {
        if (want_paper) norm.paper_value = state->norm_sq_paper;
        if (want_oracle) norm.oracle_value = state->norm_sq_oracle;
      }
      rows.push_back(norm);
      if (c.quantity == Quantity::fidelity) {
        SweepRow fid = make("fidelity");
        if (want_paper && state_error.empty()) {
          guarded(fid.error, [&] { fid.paper_value = nonclassical::fidelity_paper(p, zeta); });
        }
        if (want_oracle && state) {
          guarded(fid.error, [&] { fid.oracle_value = nonclassical::fidelity_oracle(*state); });
        }
        rows.push_back(fid);
      }
      break;
    }
    case Quantity::quasiprob: {
      SweepRow f = make("F");
      const nonclassical::QuasiProbParams q{*pt.gamma, c.quasi->s};
      if (want_paper && state_error.empty()) {
        guarded(f.error, [&] { f.paper_value = nonclassical::quasiprob_paper(p, zeta, q); });
      }
      if (want_oracle && state) {
        guarded(f.error, [&] {
          f.oracle_value = nonclassical::quasiprob_oracle(
              *state, q, nonclassical::quasi_dimension(*state, q, c.max_dim));
        });
      }
      rows.push_back(f);
      break;
    }
  }
  for (auto& row : rows) finish(row);
  return rows;
}

}  // namespace detail

inline std::vector<SweepRow> run_sweep(const SweepConfig& c) {
  c.validate();
  const auto points = detail::enumerate_points(c);
  std::vector<std::vector<SweepRow>> results(points.size());
  unsigned workers = c.threads ? c.threads : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(1, points.size())));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < points.size(); i = next++) {
      results[i] = detail::evaluate_point(c, points[i]);
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < workers; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();

  std::vector<SweepRow> rows;
  for (auto& r : results) rows.insert(rows.end(), r.begin(), r.end());
  return rows;
}

// ----------------------------------------------------------------- output

inline std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

inline std::vector<std::string> columns(const std::vector<SweepRow>& rows, bool quasi) {
  std::vector<std::string> cols{"mu_re", "mu_im", "nu_re", "nu_im", "N", "r", "theta"};
  if (quasi) cols.insert(cols.end(), {"s", "gamma_re", "gamma_im"});
  cols.insert(cols.end(), {"quantity", "paper_value", "oracle_value", "rel_gap", "truncation_dim",
                           "tail_mass"});
  const bool any_error =
      std::any_of(rows.begin(), rows.end(), [](const SweepRow& r) { return !r.error.empty(); });
  if (any_error) cols.push_back("error");
  return cols;
}

namespace detail {

// cell text per column; nullopt means "absent" (empty CSV cell / JSON null)
inline std::optional<std::string> cell(const SweepRow& r, const std::string& col, bool json) {
  auto num = [](double x) { return std::optional<std::string>(format_double(x)); };
  auto opt = [&](const std::optional<double>& x) {
    return x ? num(*x) : std::optional<std::string>();
  };
  if (col == "mu_re") return num(r.mu.real());
  if (col == "mu_im") return num(r.mu.imag());
  if (col == "nu_re") return num(r.nu.real());
  if (col == "nu_im") return num(r.nu.imag());
  if (col == "N") return std::to_string(r.N);
  if (col == "r") return num(r.r);
  if (col == "theta") return num(r.theta);
  if (col == "s") return opt(r.s);
  if (col == "gamma_re") return r.gamma ? num(r.gamma->real()) : std::nullopt;
  if (col == "gamma_im") return r.gamma ? num(r.gamma->imag()) : std::nullopt;
  if (col == "quantity") return json ? nlohmann::json(r.quantity).dump() : r.quantity;
  if (col == "paper_value") return opt(r.paper_value);
  if (col == "oracle_value") return opt(r.oracle_value);
  if (col == "rel_gap") return opt(r.rel_gap);
  if (col == "truncation_dim") return std::to_string(r.truncation_dim);
  if (col == "tail_mass") return num(r.tail_mass);
  if (col == "error") {
    if (r.error.empty()) return std::nullopt;
    return json ? nlohmann::json(r.error).dump() : r.error;
  }
  return std::nullopt;
}

inline std::string json_number(const std::string& s) {
  // JSON has no inf/nan literals
  if (s == "nan" || s == "inf" || s == "-inf") return "null";
  return s;
}

}  // namespace detail

/// CSV (header + RFC-4180 quoting) or JSON array of row objects, 17
/// significant digits for every float.
inline void emit(const std::vector<SweepRow>& rows, Format format, std::ostream& out,
                 bool quasi_columns) {
  const auto cols = columns(rows, quasi_columns);
  if (format == Format::csv) {
    for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
    out << "\n";
    for (const auto& r : rows) {
      for (std::size_t i = 0; i < cols.size(); ++i) {
        const auto v = detail::cell(r, cols[i], false);
        out << (i ? "," : "") << (v ? csv_field(*v) : std::string());
      }
      out << "\n";
    }
  } else {
    out << "[";
    for (std::size_t k = 0; k < rows.size(); ++k) {
      out << (k ? ",\n " : "\n ") << "{";
      for (std::size_t i = 0; i < cols.size(); ++i) {
        const auto v = detail::cell(rows[k], cols[i], true);
        const bool is_text = cols[i] == "quantity" || cols[i] == "error";
        out << (i ? ", " : "") << "\"" << cols[i] << "\": "
            << (v ? (is_text ? *v : detail::json_number(*v)) : std::string("null"));
      }
      out << "}";
    }
    out << (rows.empty() ? "]\n" : "\n]\n");
  }
  if (!out) throw Error(ErrorKind::config, "write failed");
}

inline void emit_to_file(const std::vector<SweepRow>& rows, Format format, const std::string& path,
                         bool quasi_columns) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::config, "cannot open output file '" + path + "'");
  emit(rows, format, f, quasi_columns);
}

/// Plotting script for the emitted CSV; figures themselves are not rendered.
inline std::string gnuplot_hint(Quantity q, const std::string& csv_path) {
  std::ostringstream os;
  os << "set datafile separator ','\n"
     << "set key autotitle columnhead\n"
     << "set xlabel '" << (q == Quantity::quasiprob ? "gamma_re" : "r") << "'\n";
  const char* file = csv_path.empty() ? "out.csv" : csv_path.c_str();
  switch (q) {
    case Quantity::a3:
      os << "set ylabel 'A3'\nplot '" << file << "' using 6:(column('oracle_value')) with linespoints\n";
      break;
    case Quantity::squeeze:
      os << "set ylabel 'I1, I2'\n"
         << "plot '" << file << "' using 6:(stringcolumn('quantity') eq 'I1' ? column('oracle_value') : 1/0) title 'I1', \\\n"
         << "     '" << file << "' using 6:(stringcolumn('quantity') eq 'I2' ? column('oracle_value') : 1/0) title 'I2'\n";
      break;
    case Quantity::fidelity:
    case Quantity::norm:
      os << "set ylabel 'fidelity'\n"
         << "plot '" << file << "' using 6:(stringcolumn('quantity') eq 'fidelity' ? column('oracle_value') : 1/0) with linespoints\n";
      break;
    case Quantity::quasiprob:
      os << "set ylabel 'gamma_im'\nset view map\n"
         << "splot '" << file << "' using 9:10:(column('oracle_value')) with points palette\n";
      break;
  }
  return os.str();
}

}  // namespace pmcs::sweep
