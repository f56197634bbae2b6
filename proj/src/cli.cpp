#include "lhv/cli.hpp"

#include <CLI11.hpp>
#include <charconv>
#include <cmath>
#include <fstream>
#include <regex>
#include <sstream>

#include "json.hpp"
#include "lhv/analytic.hpp"
#include "lhv/core_model.hpp"
#include "lhv/errors.hpp"
#include "lhv/harness.hpp"
#include "lhv/hidden_values.hpp"
#include "lhv/quantum_oracle.hpp"
#include "lhv/report.hpp"

namespace lhv::cli {
namespace {

using nlohmann::json;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

bool parse_plain(const std::string& s, double& v) {
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (first != last && *first == '+') ++first;
  const auto res = std::from_chars(first, last, v);
  return res.ec == std::errc() && res.ptr == last;
}

/// Flags that determine the content of the output, in a canonical order.
class EffectiveConfig {
 public:
  explicit EffectiveConfig(std::string command) : command_(std::move(command)) {}

  void add(const std::string& flag, const std::string& value) { items_.emplace_back(flag, value); }
  void add(const std::string& flag, double v) { add(flag, format_double(v)); }
  void add_int(const std::string& flag, std::uint64_t v) { add(flag, std::to_string(v)); }
  void add_flag(const std::string& flag) { items_.emplace_back(flag, ""); }

  [[nodiscard]] std::string command_line() const {
    std::string s = "lhv " + command_;
    for (const auto& [f, v] : items_) {
      s += " --" + f;
      if (!v.empty()) s += " " + v;
    }
    return s;
  }

  [[nodiscard]] json to_json() const {
    json args = json::object();
    for (const auto& [f, v] : items_) args[f] = v.empty() ? json(true) : json(v);
    return {{"command", command_}, {"command_line", command_line()}, {"args", args}};
  }

 private:
  std::string command_;
  std::vector<std::pair<std::string, std::string>> items_;
};

struct Common {
  std::string format = "csv";
  std::string out_path;
  bool degrees = false;
};

struct Sampling {
  std::uint64_t trials = 1'000'000;
  std::uint64_t seed = 20160101;
  int streams = 4;
  int n = 1;
};

void add_common(CLI::App& sub, Common& c) {
  sub.add_option("--format", c.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  sub.add_option("--out", c.out_path, "Output file (default: standard output)");
  sub.add_flag("--degrees", c.degrees, "Read angle inputs in degrees");
}

void add_sampling(CLI::App& sub, Sampling& s) {
  sub.add_option("--trials", s.trials, "Monte Carlo trials")->check(CLI::PositiveNumber);
  sub.add_option("--seed", s.seed, "64-bit seed");
  sub.add_option("--streams", s.streams, "Independent random streams")->check(CLI::PositiveNumber);
  sub.add_option("--n", s.n, "Density index n >= 1")->check(CLI::PositiveNumber);
}

void record_sampling(EffectiveConfig& cfg, const Sampling& s) {
  cfg.add_int("trials", s.trials);
  cfg.add_int("seed", s.seed);
  cfg.add_int("streams", static_cast<std::uint64_t>(s.streams));
  cfg.add_int("n", static_cast<std::uint64_t>(s.n));
}

RunConfig make_run_config(const Sampling& s, MeasurementSetting setting) {
  RunConfig rc;
  rc.trials = s.trials;
  rc.seed = s.seed;
  rc.streams = s.streams;
  rc.setting = setting;
  return rc;
}

json estimate_json(const EstimateWithError& e) {
  return {{"value", e.value}, {"std_error", e.std_error}, {"n", e.n}};
}

/// Collects the rendered document and the header, then emits both.
struct Output {
  std::string header;
  std::string body;
};

void emit(const Output& o, const Common& c, std::ostream& out, std::ostream& err) {
  err << "# " << o.header << '\n';
  if (c.out_path.empty()) {
    out << o.body;
    return;
  }
  std::ofstream f(c.out_path, std::ios::binary);
  if (!f) throw IoError("cannot open " + c.out_path + " for writing");
  f << o.body;
  if (!f) throw IoError("write failed: " + c.out_path);
}

std::string csv_doc(const EffectiveConfig& cfg, const std::function<void(std::ostream&)>& rows) {
  std::ostringstream s;
  s << "# " << cfg.command_line() << '\n';
  rows(s);
  return s.str();
}

std::string json_doc(const EffectiveConfig& cfg, json body) {
  body["config"] = cfg.to_json();
  return body.dump(2) + "\n";
}

// --- transform-curve -------------------------------------------------------

struct CurveOpts {
  std::string delta = "pi/3";
  int n = 1;
  int points = 2001;
};

Output cmd_transform_curve(const Common& c, const CurveOpts& o) {
  if (o.points < 2) throw std::invalid_argument("--points must be >= 2");
  const Angle delta(parse_angle(o.delta, c.degrees));
  EffectiveConfig cfg("transform-curve");
  cfg.add("delta", delta.rad());
  cfg.add_int("n", static_cast<std::uint64_t>(o.n));
  cfg.add_int("points", static_cast<std::uint64_t>(o.points));
  cfg.add("format", c.format);

  const auto linear = linear_law_curve(delta, o.points);
  std::vector<std::array<double, 3>> rows;
  for (const auto& [w, lin] : linear) rows.push_back({w, eval_L_n(Angle(w), delta, o.n).rad(), lin});

  Output out{cfg.command_line(), {}};
  if (c.format == "csv") {
    out.body = csv_doc(cfg, [&](std::ostream& s) {
      write_csv_row(s, {"omega", "L_n_omega", "linear_ref"});
      for (const auto& r : rows) write_csv_row(s, {format_double(r[0]), format_double(r[1]), format_double(r[2])});
    });
  } else {
    json arr = json::array();
    for (const auto& r : rows) arr.push_back({r[0], r[1], r[2]});
    out.body = json_doc(cfg, {{"columns", {"omega", "L_n_omega", "linear_ref"}}, {"rows", arr}});
  }
  return out;
}

// --- correlate -------------------------------------------------------------

struct CorrelateOpts {
  std::string from = "0";
  std::string to = "pi";
  int points = 13;
  Sampling sampling;
};

Output cmd_correlate(const Common& c, const CorrelateOpts& o) {
  if (o.points < 1) throw std::invalid_argument("--grid-points must be >= 1");
  const double from = parse_angle(o.from, c.degrees);
  const double to = parse_angle(o.to, c.degrees);
  EffectiveConfig cfg("correlate");
  cfg.add("grid-from", from);
  cfg.add("grid-to", to);
  cfg.add_int("grid-points", static_cast<std::uint64_t>(o.points));
  record_sampling(cfg, o.sampling);
  cfg.add("format", c.format);

  std::vector<double> raw;
  std::vector<Angle> grid;
  for (int i = 0; i < o.points; ++i) {
    raw.push_back(o.points == 1 ? from : from + (to - from) * i / (o.points - 1));
    grid.emplace_back(raw.back());
  }
  auto rows = scan_correlation(grid, make_run_config(o.sampling, MeasurementSetting(Angle(0.0), Angle(0.0), o.sampling.n)));
  // report the requested grid value (pi stays pi rather than wrapping to -pi)
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i].delta = raw[i];

  Output out{cfg.command_line(), {}};
  if (c.format == "csv") {
    out.body = csv_doc(cfg, [&](std::ostream& s) {
      write_csv_row(s, {"delta_rad", "estimate", "std_error", "analytic", "n"});
      for (const auto& r : rows) {
        write_csv_row(s, {format_double(r.delta), format_double(r.estimate.value), format_double(r.estimate.std_error),
                          format_double(r.analytic), std::to_string(r.estimate.n)});
      }
    });
  } else {
    json arr = json::array();
    for (const auto& r : rows) {
      arr.push_back({{"delta_rad", r.delta}, {"estimate", r.estimate.value}, {"std_error", r.estimate.std_error},
                     {"analytic", r.analytic}, {"n", r.estimate.n}});
    }
    out.body = json_doc(cfg, {{"rows", arr}});
  }
  return out;
}

// --- chsh ------------------------------------------------------------------

struct ChshOpts {
  std::string d_omega = "pi/2";
  std::string d_omega_p = "pi/4";
  std::string d_omega_pp = "-pi/4";
  std::string phi = "0";
  std::string estimator = "gauge-fixed";
  bool histogram = false;
  Sampling sampling;
};

Output cmd_chsh(const Common& c, const ChshOpts& o) {
  const ChshSetting setting{Angle(parse_angle(o.d_omega, c.degrees)), Angle(parse_angle(o.d_omega_p, c.degrees)),
                            Angle(parse_angle(o.d_omega_pp, c.degrees))};
  const Angle phi(parse_angle(o.phi, c.degrees));
  EffectiveConfig cfg("chsh");
  cfg.add("d-omega", setting.d_omega.rad());
  cfg.add("d-omega-p", setting.d_omega_p.rad());
  cfg.add("d-omega-pp", setting.d_omega_pp.rad());
  cfg.add("phi", phi.rad());
  cfg.add("estimator", o.estimator);
  if (o.histogram) cfg.add_flag("histogram");
  record_sampling(cfg, o.sampling);
  cfg.add("format", c.format);

  RunConfig rc = make_run_config(o.sampling, MeasurementSetting(Angle(0.0), phi, o.sampling.n));
  rc.chsh_estimator = o.estimator == "independent" ? ChshEstimator::Independent : ChshEstimator::GaugeFixed;
  const ChshResult r = estimate_chsh(setting, rc);
  // analytic value for the effective parameters actually measured
  const ChshSetting effective{setting.d_omega, setting.d_omega_p - phi, setting.d_omega_pp - phi};
  const double analytic = chsh_value(effective);

  Output out{cfg.command_line(), {}};
  constexpr std::array<int, 5> values{-4, -2, 0, 2, 4};
  if (c.format == "csv") {
    out.body = csv_doc(cfg, [&](std::ostream& s) {
      write_csv_row(s, {"quantity", "value"});
      write_csv_row(s, {"mean", format_double(r.estimate.value)});
      write_csv_row(s, {"abs_mean", format_double(std::abs(r.estimate.value))});
      write_csv_row(s, {"std_error", format_double(r.estimate.std_error)});
      write_csv_row(s, {"analytic", format_double(analytic)});
      write_csv_row(s, {"n", std::to_string(r.estimate.n)});
      write_csv_row(s, {"outside_fraction", format_double(r.outside_fraction)});
      if (o.histogram) {
        for (std::size_t i = 0; i < values.size(); ++i) {
          write_csv_row(s, {"count_" + std::to_string(values[i]), std::to_string(r.tally.histogram[i])});
        }
      }
    });
  } else {
    json body = {{"estimate", estimate_json(r.estimate)},
                 {"abs_mean", std::abs(r.estimate.value)},
                 {"analytic", analytic},
                 {"outside_fraction", r.outside_fraction}};
    if (o.histogram) {
      json h = json::array();
      for (std::size_t i = 0; i < values.size(); ++i) h.push_back({{"value", values[i]}, {"count", r.tally.histogram[i]}});
      body["histogram"] = h;
    }
    out.body = json_doc(cfg, body);
  }
  return out;
}

// --- bell-check ------------------------------------------------------------

struct BellOpts {
  std::string d1 = "pi/3";
  std::string d2 = "2pi/3";
  int sweep = 0;
};

Output cmd_bell_check(const Common& c, const BellOpts& o) {
  EffectiveConfig cfg("bell-check");
  struct Row {
    double d1, d2;
    BellSides sides;
  };
  std::vector<Row> rows;
  if (o.sweep > 0) {
    if (o.sweep < 2) throw std::invalid_argument("--sweep needs at least 2 points");
    cfg.add_int("sweep", static_cast<std::uint64_t>(o.sweep));
    for (int i = 0; i < o.sweep; ++i) {
      for (int j = i; j < o.sweep; ++j) {
        const double d1 = kPi * i / (o.sweep - 1);
        const double d2 = kPi * j / (o.sweep - 1);
        rows.push_back({d1, d2, bell_inequality_sides(d1, d2)});
      }
    }
  } else {
    const double d1 = parse_angle(o.d1, c.degrees);
    const double d2 = parse_angle(o.d2, c.degrees);
    cfg.add("d1", d1);
    cfg.add("d2", d2);
    rows.push_back({d1, d2, bell_inequality_sides(d1, d2)});
  }
  cfg.add("format", c.format);

  Output out{cfg.command_line(), {}};
  if (c.format == "csv") {
    out.body = csv_doc(cfg, [&](std::ostream& s) {
      write_csv_row(s, {"d1", "d2", "lhs", "rhs", "violated"});
      for (const auto& r : rows) {
        write_csv_row(s, {format_double(r.d1), format_double(r.d2), format_double(r.sides.lhs),
                          format_double(r.sides.rhs), r.sides.violated ? "VIOLATED" : "holds"});
      }
    });
  } else {
    json arr = json::array();
    for (const auto& r : rows) {
      arr.push_back({{"d1", r.d1}, {"d2", r.d2}, {"lhs", r.sides.lhs}, {"rhs", r.sides.rhs}, {"violated", r.sides.violated}});
    }
    out.body = json_doc(cfg, {{"rows", arr}});
  }
  return out;
}

// --- weak-values -----------------------------------------------------------

struct WeakOpts {
  std::string phi = "0";
  std::string delta_omega = "pi/2";
  std::string omega_a = "0";
};

Output cmd_weak_values(const Common& c, const WeakOpts& o) {
  const Angle phi(parse_angle(o.phi, c.degrees));
  const Angle d_omega(parse_angle(o.delta_omega, c.degrees));
  const Angle omega_a(parse_angle(o.omega_a, c.degrees));
  EffectiveConfig cfg("weak-values");
  cfg.add("phi", phi.rad());
  cfg.add("delta-omega", d_omega.rad());
  cfg.add("omega-a", omega_a.rad());
  cfg.add("format", c.format);

  const WeakValueReport rep = verify_weak_value_match(phi, d_omega, omega_a);
  Output out{cfg.command_line(), {}};
  if (c.format == "csv") {
    out.body = csv_doc(cfg, [&](std::ostream& s) {
      write_csv_row(s, {"set", "s_a", "s_b", "hidden", "operator", "hidden_re", "hidden_im", "weak_re", "weak_im",
                        "abs_diff", "pass"});
      auto rows = [&](const char* set, const std::vector<WeakValueComparison>& v) {
        for (const auto& e : v) {
          write_csv_row(s, {set, std::to_string(e.s_a), std::to_string(e.s_b), e.hidden, e.operator_,
                            format_double(e.hidden_average.real()), format_double(e.hidden_average.imag()),
                            format_double(e.weak_value.real()), format_double(e.weak_value.imag()),
                            format_double(e.abs_diff), e.pass ? "true" : "false"});
        }
      };
      rows("a_side", rep.entries);
      rows("flight_vs_orthogonal", rep.flight_vs_orthogonal);
      rows("b_side_extrapolated", rep.b_side);
    });
  } else {
    out.body = json_doc(cfg, to_json(rep));
  }
  return out;
}

// --- paths -----------------------------------------------------------------

struct PathOpts {
  std::string phi = "0";
  std::string omega_a = "0";
  std::string omega_b = "pi/2";
  std::string hamiltonian;
  std::string operators;
  std::string times = "0";
};

Output cmd_paths(const Common& c, const PathOpts& o) {
  const Angle phi(parse_angle(o.phi, c.degrees));
  const Angle omega_a(parse_angle(o.omega_a, c.degrees));
  const Angle omega_b(parse_angle(o.omega_b, c.degrees));
  std::vector<double> times;
  std::stringstream ts(o.times);
  for (std::string item; std::getline(ts, item, ',');) {
    double t = 0.0;
    if (!parse_plain(trim(item), t)) throw std::invalid_argument("bad time value: " + item);
    times.push_back(t);
  }
  if (times.empty()) throw std::invalid_argument("--times needs at least one value");

  const Operator h = o.hamiltonian.empty() ? Operator(CMatrix::Zero(2, 2)) : load_operator(o.hamiltonian);
  NamedOperators ops;
  if (o.operators.empty()) {
    ops = {{"sigma_ref", polarization_operator(omega_a, Axis::InPlane)},
           {"sigma_perp", polarization_operator(omega_a, Axis::OrthogonalInPlane)},
           {"sigma_z", polarization_operator(omega_a, Axis::Flight)}};
  } else {
    ops = load_named_operators(o.operators);
  }
  if (ops.empty()) throw std::invalid_argument("no operators given");

  EffectiveConfig cfg("paths");
  cfg.add("phi", phi.rad());
  cfg.add("omega-a", omega_a.rad());
  cfg.add("omega-b", omega_b.rad());
  if (!o.hamiltonian.empty()) cfg.add("hamiltonian", o.hamiltonian);
  if (!o.operators.empty()) cfg.add("operators", o.operators);
  {
    std::string joined;
    for (std::size_t i = 0; i < times.size(); ++i) joined += (i ? "," : "") + format_double(times[i]);
    cfg.add("times", joined);
  }
  cfg.add("format", c.format);

  const QuantumState psi = bell_state(phi);
  const auto ensembles = path_ensemble(psi, omega_a, omega_b, ops, h, times);

  // sum-rule checks against the direct quantum expressions
  struct SumRow {
    double t1, t2;
    std::string op1, op2;
    Complex paths, oracle;
  };
  std::vector<SumRow> averages, correlations;
  const Operator h2 = as_two_particle(h);
  for (std::size_t k = 0; k < times.size(); ++k) {
    for (const auto& [name, op] : ops) {
      const Complex direct = expectation(psi, heisenberg_evolve(as_two_particle(op), h2, times[k]));
      averages.push_back({times[k], times[k], name, "", ensembles[k].weighted_average(name), direct});
    }
  }
  for (std::size_t k1 = 0; k1 < times.size(); ++k1) {
    for (std::size_t k2 = 0; k2 < times.size(); ++k2) {
      for (const auto& [n1, op1] : ops) {
        for (const auto& [n2, op2] : ops) {
          const CMatrix m = heisenberg_evolve(as_two_particle(op1), h2, times[k1]).matrix() *
                            heisenberg_evolve(as_two_particle(op2), h2, times[k2]).matrix();
          const Complex direct = psi.amplitudes().dot(m * psi.amplitudes());
          correlations.push_back({times[k1], times[k2], n1, n2,
                                  path_correlation(ensembles[k1], n1, ensembles[k2], n2), direct});
        }
      }
    }
  }

  Output out{cfg.command_line(), {}};
  if (c.format == "csv") {
    out.body = csv_doc(cfg, [&](std::ostream& s) {
      write_csv_row(s, {"kind", "t", "t2", "s_a", "s_b", "operator", "operator2", "probability", "re", "im",
                        "oracle_re", "oracle_im"});
      for (const auto& e : ensembles) {
        for (const auto& b : e.branches) {
          if (!b.weak_values) {
            write_csv_row(s, {"path", format_double(e.t), "", std::to_string(b.s_a), std::to_string(b.s_b), "", "",
                              format_double(b.probability), "", "", "", ""});
            continue;
          }
          for (const auto& [name, v] : *b.weak_values) {
            write_csv_row(s, {"path", format_double(e.t), "", std::to_string(b.s_a), std::to_string(b.s_b), name, "",
                              format_double(b.probability), format_double(v.real()), format_double(v.imag()), "", ""});
          }
        }
      }
      for (const auto& r : averages) {
        write_csv_row(s, {"average", format_double(r.t1), "", "", "", r.op1, "", "", format_double(r.paths.real()),
                          format_double(r.paths.imag()), format_double(r.oracle.real()), format_double(r.oracle.imag())});
      }
      for (const auto& r : correlations) {
        write_csv_row(s, {"correlation", format_double(r.t1), format_double(r.t2), "", "", r.op1, r.op2, "",
                          format_double(r.paths.real()), format_double(r.paths.imag()), format_double(r.oracle.real()),
                          format_double(r.oracle.imag())});
      }
    });
  } else {
    auto cj = [](Complex z) { return json{{"re", z.real()}, {"im", z.imag()}}; };
    json ens = json::array();
    for (const auto& e : ensembles) {
      json branches = json::array();
      for (const auto& b : e.branches) {
        json jb = {{"s_a", b.s_a}, {"s_b", b.s_b}, {"probability", b.probability}};
        if (b.weak_values) {
          json wv = json::object();
          for (const auto& [name, v] : *b.weak_values) wv[name] = cj(v);
          jb["weak_values"] = wv;
        } else {
          jb["weak_values"] = nullptr;
        }
        branches.push_back(jb);
      }
      ens.push_back({{"t", e.t}, {"total_probability", e.total_probability()}, {"branches", branches}});
    }
    json avg = json::array(), cor = json::array();
    for (const auto& r : averages) avg.push_back({{"t", r.t1}, {"operator", r.op1}, {"paths", cj(r.paths)}, {"oracle", cj(r.oracle)}});
    for (const auto& r : correlations) {
      cor.push_back({{"t1", r.t1}, {"t2", r.t2}, {"operator1", r.op1}, {"operator2", r.op2}, {"paths", cj(r.paths)},
                     {"oracle", cj(r.oracle)}});
    }
    out.body = json_doc(cfg, {{"ensembles", ens}, {"averages", avg}, {"correlations", cor}});
  }
  return out;
}

// --- wz --------------------------------------------------------------------

struct WzOpts {
  std::string alpha = "0,pi/2";
  std::string beta = "pi/4,-pi/4";
  std::string phi = "0";
  std::string delta_omega = "0";
  std::string records;
  Sampling sampling;
};

Output cmd_wz(const Common& c, const WzOpts& o) {
  WZOptions wo;
  for (double a : parse_angle_list(o.alpha, c.degrees)) wo.alpha_choices.emplace_back(a);
  for (double b : parse_angle_list(o.beta, c.degrees)) wo.beta_choices.emplace_back(b);
  wo.base_phi = Angle(parse_angle(o.phi, c.degrees));
  wo.keep_records = !o.records.empty();
  const Angle d_omega(parse_angle(o.delta_omega, c.degrees));

  auto join = [](const std::vector<Angle>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_double(v[i].rad());
    return s;
  };
  EffectiveConfig cfg("wz");
  cfg.add("alpha", join(wo.alpha_choices));
  cfg.add("beta", join(wo.beta_choices));
  cfg.add("phi", wo.base_phi.rad());
  cfg.add("delta-omega", d_omega.rad());
  record_sampling(cfg, o.sampling);
  cfg.add("format", c.format);
  if (!o.records.empty()) cfg.add("records", o.records);

  const WZResult r = run_weihs_zeilinger(wo, make_run_config(o.sampling, MeasurementSetting(d_omega, wo.base_phi, o.sampling.n)));

  if (!o.records.empty()) {
    std::ofstream f(o.records, std::ios::binary);
    if (!f) throw IoError("cannot open " + o.records + " for writing");
    f << "# " << cfg.command_line() << '\n';
    write_csv_row(f, {"alpha_rad", "beta_rad", "s_a", "s_b"});
    for (const auto& rec : r.records) {
      write_csv_row(f, {format_double(rec.alpha.rad()), format_double(rec.beta.rad()), std::to_string(rec.s_a),
                        std::to_string(rec.s_b)});
    }
    if (!f) throw IoError("write failed: " + o.records);
  }

  auto analytic = [&](const WZCell& cell) {
    const Angle lambda = wo.alpha_choices[cell.alpha_index] + wo.beta_choices[cell.beta_index];
    return correlation(d_omega - (wo.base_phi - lambda));
  };
  Output out{cfg.command_line(), {}};
  if (c.format == "csv") {
    out.body = csv_doc(cfg, [&](std::ostream& s) {
      write_csv_row(s, {"alpha_rad", "beta_rad", "n", "frequency", "estimate", "std_error", "analytic"});
      for (const auto& cell : r.cells) {
        const auto e = cell.tally.correlation();
        write_csv_row(s, {format_double(wo.alpha_choices[cell.alpha_index].rad()),
                          format_double(wo.beta_choices[cell.beta_index].rad()), std::to_string(e.n),
                          format_double(static_cast<double>(e.n) / static_cast<double>(r.trials)),
                          format_double(e.value), format_double(e.std_error), format_double(analytic(cell))});
      }
      if (r.chsh_available) {
        s << "# chsh=" << format_double(r.chsh.value) << " std_error=" << format_double(r.chsh.std_error)
          << " minus_cell=" << r.chsh_minus_cell << '\n';
      }
    });
  } else {
    json cells = json::array();
    for (const auto& cell : r.cells) {
      const auto e = cell.tally.correlation();
      cells.push_back({{"alpha_rad", wo.alpha_choices[cell.alpha_index].rad()},
                       {"beta_rad", wo.beta_choices[cell.beta_index].rad()},
                       {"frequency", static_cast<double>(e.n) / static_cast<double>(r.trials)},
                       {"estimate", estimate_json(e)},
                       {"analytic", analytic(cell)}});
    }
    json body = {{"trials", r.trials}, {"cells", cells}};
    body["chsh"] = r.chsh_available ? json{{"estimate", estimate_json(r.chsh)}, {"minus_cell", r.chsh_minus_cell}}
                                    : json(nullptr);
    out.body = json_doc(cfg, body);
  }
  return out;
}

}  // namespace

double parse_angle(const std::string& text, bool degrees) {
  const std::string s = trim(text);
  double v = 0.0;
  if (parse_plain(s, v)) {
    if (!std::isfinite(v)) throw std::invalid_argument("angle must be finite: " + text);
    return degrees ? v * kPi / 180.0 : v;
  }
  static const std::regex pi_expr(R"(^([+-]?)(\d*\.?\d*(?:[eE][+-]?\d+)?)\*?pi(?:/(\d*\.?\d+))?$)");
  std::smatch m;
  if (degrees || !std::regex_match(s, m, pi_expr)) {
    throw std::invalid_argument("cannot parse angle: '" + text + "'");
  }
  double coef = 1.0;
  if (m[2].length() > 0 && !parse_plain(m[2].str(), coef)) throw std::invalid_argument("bad coefficient in " + text);
  double den = 1.0;
  if (m[3].matched && (!parse_plain(m[3].str(), den) || den == 0.0)) throw std::invalid_argument("bad denominator in " + text);
  const double sign = m[1].str() == "-" ? -1.0 : 1.0;
  return sign * coef * kPi / den;
}

std::vector<double> parse_angle_list(const std::string& text, bool degrees) {
  std::vector<double> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) out.push_back(parse_angle(item, degrees));
  if (out.empty()) throw std::invalid_argument("empty angle list");
  return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Local hidden-variable model for the singlet state: simulation and oracles"};
  app.require_subcommand(1);
  Common common;

  CurveOpts curve;
  auto* s_curve = app.add_subcommand("transform-curve", "Tabulate L_n(omega; delta) against the linear law");
  add_common(*s_curve, common);
  s_curve->add_option("--delta", curve.delta, "Effective parameter");
  s_curve->add_option("--n", curve.n, "Density index")->check(CLI::PositiveNumber);
  s_curve->add_option("--points", curve.points, "Grid points over [-pi, pi], ends included");

  CorrelateOpts corr;
  auto* s_corr = app.add_subcommand("correlate", "Monte Carlo correlation scan against -cos(delta)");
  add_common(*s_corr, common);
  add_sampling(*s_corr, corr.sampling);
  s_corr->add_option("--grid-from", corr.from, "First delta");
  s_corr->add_option("--grid-to", corr.to, "Last delta (inclusive)");
  s_corr->add_option("--grid-points", corr.points, "Number of grid points");

  ChshOpts chsh;
  auto* s_chsh = app.add_subcommand("chsh", "CHSH estimate from the gauge-fixed per-trial variable");
  add_common(*s_chsh, common);
  add_sampling(*s_chsh, chsh.sampling);
  s_chsh->add_option("--d-omega", chsh.d_omega, "Relative angle d");
  s_chsh->add_option("--d-omega-p", chsh.d_omega_p, "Relative angle d'");
  s_chsh->add_option("--d-omega-pp", chsh.d_omega_pp, "Relative angle d''");
  s_chsh->add_option("--phi", chsh.phi, "State phase");
  s_chsh->add_option("--estimator", chsh.estimator, "gauge-fixed or independent")
      ->check(CLI::IsMember({"gauge-fixed", "independent"}));
  s_chsh->add_flag("--histogram,--per-trial-distribution", chsh.histogram, "Include the per-trial value histogram");

  BellOpts bell;
  auto* s_bell = app.add_subcommand("bell-check", "Evaluate the Bell inequality sides for the model");
  add_common(*s_bell, common);
  s_bell->add_option("--d1", bell.d1, "First relative angle, 0 <= d1 <= d2 <= pi");
  s_bell->add_option("--d2", bell.d2, "Second relative angle");
  s_bell->add_option("--sweep", bell.sweep, "Emit the violation map on an N x N grid instead");

  WeakOpts weak;
  auto* s_weak = app.add_subcommand("weak-values", "Compare hidden-value subset averages with quantum weak values");
  add_common(*s_weak, common);
  s_weak->add_option("--phi", weak.phi, "State phase");
  s_weak->add_option("--delta-omega", weak.delta_omega, "Relative apparatus angle");
  s_weak->add_option("--omega-a", weak.omega_a, "Reference direction of A");

  PathOpts paths;
  auto* s_paths = app.add_subcommand("paths", "Pseudo-classical path probabilities, weak values and sum rules");
  add_common(*s_paths, common);
  s_paths->add_option("--phi", paths.phi, "State phase");
  s_paths->add_option("--omega-a", paths.omega_a, "Post-selection direction of A");
  s_paths->add_option("--omega-b", paths.omega_b, "Post-selection direction of B");
  s_paths->add_option("--hamiltonian", paths.hamiltonian, "Hamiltonian JSON file (default: zero)");
  s_paths->add_option("--operators", paths.operators, "Named operators JSON file");
  s_paths->add_option("--times", paths.times, "Comma-separated times");

  WzOpts wz;
  auto* s_wz = app.add_subcommand("wz", "Weihs-Zeilinger modulator experiment");
  add_common(*s_wz, common);
  add_sampling(*s_wz, wz.sampling);
  s_wz->add_option("--alpha", wz.alpha, "Comma-separated modulator angles for A");
  s_wz->add_option("--beta", wz.beta, "Comma-separated modulator angles for B");
  s_wz->add_option("--phi", wz.phi, "Base state phase");
  s_wz->add_option("--delta-omega", wz.delta_omega, "Relative apparatus angle");
  s_wz->add_option("--records", wz.records, "Dump trial records to this CSV file");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, er;
    const int code = app.exit(e, o, er);
    out << o.str();
    err << er.str();
    return code == 0 ? kOk : kUsage;
  }

  try {
    Output o;
    if (*s_curve) o = cmd_transform_curve(common, curve);
    else if (*s_corr) o = cmd_correlate(common, corr);
    else if (*s_chsh) o = cmd_chsh(common, chsh);
    else if (*s_bell) o = cmd_bell_check(common, bell);
    else if (*s_weak) o = cmd_weak_values(common, weak);
    else if (*s_paths) o = cmd_paths(common, paths);
    else o = cmd_wz(common, wz);
    emit(o, common, out, err);
    return kOk;
  } catch (const ContractError& e) {
    err << "numerical contract failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const std::domain_error& e) {
    err << "numerical contract failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << '\n';
    return kIo;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  }
}

}  // namespace lhv::cli
