#include "mzc/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numbers>
#include <optional>
#include <sstream>

#include "mzc/correspondence.hpp"
#include "mzc/hypergeometric.hpp"
#include "mzc/laurent.hpp"
#include "mzc/mahler.hpp"
#include "mzc/walk.hpp"
#include "mzc/zeta.hpp"

namespace mzc::cli {

namespace {

using Json = nlohmann::ordered_json;

void emit(const Json& j, std::string& s) {
  using V = Json::value_t;
  switch (j.type()) {
    case V::boolean:
      s += j.get<bool>() ? "true" : "false";
      return;
    case V::number_integer:
      s += std::to_string(j.get<std::int64_t>());
      return;
    case V::number_unsigned:
      s += std::to_string(j.get<std::uint64_t>());
      return;
    case V::number_float: {
      const double v = j.get<double>();
      if (!std::isfinite(v)) {
        s += "null";
        return;
      }
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", v);
      s += buf;
      return;
    }
    case V::string:
      s += j.dump();
      return;
    case V::array: {
      s += '[';
      bool first = true;
      for (const auto& e : j) {
        if (!first) s += ',';
        first = false;
        emit(e, s);
      }
      s += ']';
      return;
    }
    case V::object: {
      s += '{';
      bool first = true;
      for (const auto& [k, v] : j.items()) {
        if (!first) s += ',';
        first = false;
        s += Json(k).dump();
        s += ':';
        emit(v, s);
      }
      s += '}';
      return;
    }
    default:
      s += "null";
  }
}

Json cplx_json(cplx z) { return Json::array({z.real(), z.imag()}); }

Json parse_json_arg(const std::string& text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    std::ostringstream os;
    os << what << ": syntax error at byte " << (e.byte > 0 ? e.byte - 1 : 0);
    throw DomainError(os.str());
  }
}

cplx cplx_entry(const Json& e, const std::string& what) {
  if (e.is_number()) return e.get<double>();
  if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number())
    return {e[0].get<double>(), e[1].get<double>()};
  throw DomainError(what + " entries must be numbers or [re, im] pairs");
}

// ---- shared option groups -------------------------------------------------

struct CoinOpts {
  std::string kind = "rw";
  int d = 1;
  std::optional<double> xi;
  std::string shift = "m";
  std::string matrix;

  void attach(CLI::App* app) {
    app->add_option("--coin", kind, "hadamard, grover, rw or custom")
        ->check(CLI::IsMember({"hadamard", "grover", "rw", "custom"}))
        ->capture_default_str();
    app->add_option("--d", d, "lattice dimension")->capture_default_str();
    app->add_option("--xi", xi, "hadamard-type angle in (0, pi/2)");
    app->add_option("--shift", shift, "m or f")->check(CLI::IsMember({"m", "f"}))->capture_default_str();
    app->add_option("--matrix", matrix, "custom coin as JSON rows; entries are numbers or [re, im]");
  }

  ShiftType shift_type() const { return shift == "f" ? ShiftType::f_type : ShiftType::m_type; }

  CoinMatrix build() const {
    if (kind == "custom") {
      if (matrix.empty()) throw DomainError("--coin custom needs --matrix");
      return CoinMatrix::custom(parse_matrix(matrix), shift_type());
    }
    if (!matrix.empty()) throw DomainError("--matrix is only used with --coin custom");
    CoinSpec spec;
    spec.kind = kind == "hadamard" ? CoinKind::hadamard_type
                : kind == "grover" ? CoinKind::grover
                                   : CoinKind::simple_rw;
    spec.d = d;
    spec.xi = xi;
    spec.shift = shift_type();
    return spec.build();
  }

  Json inputs() const {
    Json j{{"coin", kind}};
    if (kind == "custom") {
      j["matrix"] = matrix;
    } else {
      j["d"] = d;
      if (xi) j["xi"] = *xi;
    }
    j["shift"] = shift;
    return j;
  }

  static Eigen::MatrixXcd parse_matrix(const std::string& text) {
    const Json j = parse_json_arg(text, "--matrix");
    if (!j.is_array() || j.empty()) throw DomainError("--matrix must be a non-empty array of rows");
    const auto n = static_cast<Eigen::Index>(j.size());
    Eigen::MatrixXcd m(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
      const auto& row = j[static_cast<std::size_t>(r)];
      if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n)
        throw DomainError("--matrix must be square");
      for (Eigen::Index c = 0; c < n; ++c) m(r, c) = cplx_entry(row[static_cast<std::size_t>(c)], "--matrix");
    }
    return m;
  }
};

struct QuadOpts {
  std::optional<int> grid;
  std::optional<double> tol;
  std::optional<int> refinements;

  void attach(CLI::App* app) {
    app->add_option("--grid", grid, "points per axis");
    app->add_option("--tol", tol, "convergence tolerance");
    app->add_option("--refinements", refinements, "grid doublings allowed (0 with --grid)");
  }

  bool given() const { return grid || tol || refinements; }

  QuadratureSpec spec(QuadratureSpec base = {}) const {
    if (grid) {
      base.points_per_dim = *grid;
      base.max_refinements = 0;
    }
    if (tol) base.tol = *tol;
    if (refinements) base.max_refinements = *refinements;
    base.validate();
    return base;
  }

  std::optional<QuadratureSpec> optional_spec() const {
    if (!given()) return std::nullopt;
    return spec();
  }

  void echo(Json& j) const {
    if (grid) j["grid"] = *grid;
    if (tol) j["tol"] = *tol;
    if (refinements) j["refinements"] = *refinements;
  }
};

Json quad_json(const QuadratureSpec& q) {
  return Json{{"points_per_dim", q.points_per_dim},
              {"node_shift", q.node_shift},
              {"tol", q.tol},
              {"max_refinements", q.max_refinements}};
}

struct Output {
  Json inputs = Json::object();
  Json result;
  Json diagnostics = Json::object();
  // CSV body; replaces the JSON document when set.
  std::optional<std::string> csv;
  int exit_code = 0;
};

// ---- subcommands ----------------------------------------------------------

struct CoinCmd {
  CoinOpts coin;
  double tol = 1e-12;

  void attach(CLI::App* app) {
    coin.attach(app);
    app->add_option("--class-tol", tol, "classification tolerance")->capture_default_str();
  }

  Output run() const {
    Output o;
    o.inputs = coin.inputs();
    o.inputs["class_tol"] = tol;
    const CoinMatrix c = coin.build();
    Json rows = Json::array();
    for (Eigen::Index r = 0; r < c.entries().rows(); ++r) {
      Json row = Json::array();
      for (Eigen::Index k = 0; k < c.entries().cols(); ++k) row.push_back(cplx_json(c.entries()(r, k)));
      rows.push_back(row);
    }
    o.result = Json{{"kind", to_string(c.kind())},
                    {"dim", c.dim()},
                    {"shift", to_string(c.shift_type())},
                    {"entries", rows},
                    {"classes", classify_coin(c, tol).names()}};
    o.diagnostics["degenerate"] = c.degenerate();
    o.diagnostics["log_zeta_validity"] = log_zeta_validity(c).describe();
    return o;
  }
};

struct EvolveCmd {
  CoinOpts coin;
  int side = 8;
  std::int64_t steps = 10;
  std::string init = "delta";
  std::string psi0;
  double p = 2.0;
  bool serial = false;

  void attach(CLI::App* app) {
    coin.attach(app);
    app->add_option("--side", side, "torus side N")->capture_default_str();
    app->add_option("--steps", steps, "number of steps")->capture_default_str();
    app->add_option("--init", init, "delta or uniform")
        ->check(CLI::IsMember({"delta", "uniform"}))
        ->capture_default_str();
    app->add_option("--psi0", psi0, "origin amplitudes for --init delta (JSON list)");
    app->add_option("--p", p, "exponent of the measure sum |psi|^p")->capture_default_str();
    app->add_flag("--serial", serial, "use the serial reference kernel");
  }

  Output run() const {
    Output o;
    o.inputs = coin.inputs();
    o.inputs["side"] = side;
    o.inputs["steps"] = steps;
    o.inputs["init"] = init;
    if (!psi0.empty()) o.inputs["psi0"] = psi0;
    o.inputs["p"] = p;
    if (serial) o.inputs["serial"] = true;

    if (steps < 1) throw DomainError("--steps must be >= 1");
    const CoinMatrix c = coin.build();
    WalkState s0 = init == "uniform" ? WalkState::uniform_probability(c.dim(), side) : delta_state(c);
    const WalkState s = serial ? evolve_serial(s0, c, steps) : evolve(s0, c, steps);
    o.result = total_measure(s, p);
    o.diagnostics["initial_measure"] = total_measure(s0, p);
    o.diagnostics["time"] = s.time();
    o.diagnostics["sites"] = s.sites();
    Json origin = Json::array();
    std::vector<int> zero(static_cast<std::size_t>(c.dim()), 0);
    for (cplx z : s.at(zero)) origin.push_back(cplx_json(z));
    o.diagnostics["origin_amplitudes"] = origin;
    return o;
  }

  WalkState delta_state(const CoinMatrix& c) const {
    std::vector<cplx> v(static_cast<std::size_t>(c.size()), cplx(0.0));
    if (psi0.empty()) {
      v[0] = 1.0;
    } else {
      const Json j = parse_json_arg(psi0, "--psi0");
      if (!j.is_array() || static_cast<int>(j.size()) != c.size())
        throw DomainError("--psi0 must be a list of 2d entries");
      for (std::size_t i = 0; i < j.size(); ++i) v[i] = cplx_entry(j[i], "--psi0");
    }
    return WalkState::delta(c.dim(), side, v);
  }
};

struct ZetaFiniteCmd {
  CoinOpts coin;
  int n = 4;
  double u = 0.0;
  bool dense = false;

  void attach(CLI::App* app) {
    coin.attach(app);
    app->add_option("--n", n, "torus side N")->capture_default_str();
    app->add_option("--u", u, "argument u")->required();
    app->add_flag("--dense", dense, "determinant of the assembled walk operator");
  }

  Output run() const {
    Output o;
    o.inputs = coin.inputs();
    o.inputs["n"] = n;
    o.inputs["u"] = u;
    if (dense) o.inputs["dense"] = true;
    const CoinMatrix c = coin.build();
    const FiniteZeta z = dense ? zeta_finite_dense(c, n, u) : zeta_finite(c, n, u);
    o.result = z.value;
    o.diagnostics["method"] = dense ? "dense" : "momentum";
    o.diagnostics["imag_residual"] = z.imag_residual;
    o.diagnostics["factors"] = z.factors;
    return o;
  }
};

struct CrCmd {
  CoinOpts coin;
  QuadOpts quad;
  int r_max = 8;
  std::string method = "path-sum";
  int n = 0;
  std::string format = "json";

  void attach(CLI::App* app) {
    coin.attach(app);
    quad.attach(app);
    app->add_option("--r-max", r_max, "largest r")->capture_default_str();
    app->add_option("--method", method, "path-sum, trace-finite, quad-limit or closed-form")
        ->check(CLI::IsMember({"path-sum", "trace-finite", "quad-limit", "closed-form"}))
        ->capture_default_str();
    app->add_option("--n", n, "torus side for trace-finite");
    app->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  }

  Output run() const {
    Output o;
    o.inputs = coin.inputs();
    o.inputs["r_max"] = r_max;
    o.inputs["method"] = method;
    if (n) o.inputs["n"] = n;
    quad.echo(o.inputs);
    o.inputs["format"] = format;

    const CrMethod m = method == "trace-finite" ? CrMethod::trace_finite
                       : method == "quad-limit" ? CrMethod::quad_limit
                       : method == "closed-form" ? CrMethod::closed_form
                                                 : CrMethod::path_sum;
    if (m == CrMethod::trace_finite && n < 1) throw DomainError("--method trace-finite needs --n");
    const CoinMatrix c = coin.build();
    const QuadratureSpec q = quad.spec();
    const SeriesCoefficients s = cr_series(c, r_max, m, n, q);

    if (format == "csv") {
      std::string body = "r,C_r\n";
      char buf[64];
      for (const auto& [r, v] : s.values) {
        std::snprintf(buf, sizeof buf, "%d,%.17g\n", r, v);
        body += buf;
      }
      o.csv = body;
      return o;
    }
    Json values = Json::array();
    for (const auto& [r, v] : s.values) values.push_back(Json{{"r", r}, {"value", v}});
    o.result = values;
    o.diagnostics["coin"] = s.coin;
    o.diagnostics["method"] = to_string(s.method);
    if (m == CrMethod::quad_limit) o.diagnostics["quadrature"] = quad_json(q);
    return o;
  }
};

struct LogZetaCmd {
  CoinOpts coin;
  QuadOpts quad;
  double u = 0.0;
  std::optional<int> series;

  void attach(CLI::App* app) {
    coin.attach(app);
    quad.attach(app);
    app->add_option("--u", u, "argument u")->required();
    app->add_option("--series", series, "use -sum_{r<=R} C_r u^r / r instead of quadrature");
  }

  Output run() const {
    Output o;
    o.inputs = coin.inputs();
    o.inputs["u"] = u;
    quad.echo(o.inputs);
    if (series) o.inputs["series"] = *series;
    const CoinMatrix c = coin.build();
    o.diagnostics["validity"] = log_zeta_validity(c).describe();
    if (series) {
      const SeriesValue v = log_zeta_series(c, u, *series);
      o.result = v.value;
      o.diagnostics["method"] = "path_sum_series";
      o.diagnostics["tail_bound"] = v.tail_bound;
      return o;
    }
    const QuadratureSpec q = quad.spec();
    const LogZeta z = log_zeta(c, u, q);
    o.result = z.value;
    o.diagnostics["method"] = "quadrature";
    o.diagnostics["quadrature"] = quad_json(q);
    o.diagnostics["points"] = z.points;
    o.diagnostics["refinements"] = z.refinements;
    o.diagnostics["error_estimate"] = z.error_estimate;
    o.diagnostics["imag_residual"] = z.imag_residual;
    return o;
  }
};

struct MahlerCmd {
  std::string poly;
  std::string method = "quadrature";
  std::optional<double> s;
  QuadOpts quad;

  void attach(CLI::App* app) {
    app->add_option("--poly", poly, "Laurent polynomial, e.g. \"X1 + X2 + 1\"")->required();
    app->add_option("--method", method, "quadrature or jensen")
        ->check(CLI::IsMember({"quadrature", "jensen"}))
        ->capture_default_str();
    app->add_option("--s", s, "integrate |f|^s instead of log|f|");
    quad.attach(app);
  }

  Output run() const {
    Output o;
    o.inputs = Json{{"poly", poly}, {"method", method}};
    if (s) o.inputs["s"] = *s;
    quad.echo(o.inputs);
    const LaurentPolynomial f = parse_laurent(poly);
    o.diagnostics["parsed"] = format_laurent(f);
    o.diagnostics["vars"] = f.n_vars();

    if (s) {
      o.result = zeta_mahler(f, *s, quad.optional_spec());
      o.diagnostics["method"] = "quadrature";
      return o;
    }
    const MahlerResult r = method == "jensen" ? mahler_univariate(f) : mahler_quadrature(f, quad.optional_spec());
    if (!r.converged) {
      std::ostringstream os;
      os << "Mahler quadrature did not converge (estimate " << r.error_estimate << " at " << r.points
         << " points per axis)";
      throw ComputationError(os.str());
    }
    o.result = r.value;
    o.diagnostics["method"] = to_string(r.method);
    o.diagnostics["error_estimate"] = r.error_estimate;
    o.diagnostics["singular_on_torus"] = r.singular_on_torus;
    o.diagnostics["points"] = r.points;
    o.diagnostics["refinements"] = r.refinements;
    o.diagnostics["min_abs"] = r.min_abs;
    o.diagnostics["notes"] = r.notes;
    return o;
  }
};

struct HyperCmd {
  std::vector<double> a;
  std::vector<double> b;
  double x = 0.0;

  void attach(CLI::App* app) {
    app->add_option("--a", a, "upper parameters, comma separated")->delimiter(',');
    app->add_option("--b", b, "lower parameters, comma separated")->delimiter(',');
    app->add_option("--x", x, "argument")->required();
  }

  Output run() const {
    Output o;
    o.inputs = Json{{"a", a}, {"b", b}, {"x", x}};
    const HyperResult h = hyper_pfq_detailed(a, b, x);
    o.result = h.value;
    o.diagnostics["terms"] = h.terms;
    o.diagnostics["terminated"] = h.terminated;
    return o;
  }
};

struct StgfCmd {
  int d = 2;
  double u = 0.5;
  QuadOpts quad;

  void attach(CLI::App* app) {
    app->add_option("--d", d, "lattice dimension")->capture_default_str();
    app->add_option("--u", u, "argument in (0, 1]")->required();
    quad.attach(app);
  }

  Output run() const {
    Output o;
    o.inputs = Json{{"d", d}, {"u", u}};
    quad.echo(o.inputs);
    o.result = stgf(d, u, quad.optional_spec());
    return o;
  }
};

struct LambdaCmd {
  int d = 2;
  QuadOpts quad;

  void attach(CLI::App* app) {
    app->add_option("--d", d, "lattice dimension")->capture_default_str();
    quad.attach(app);
  }

  Output run() const {
    Output o;
    o.inputs = Json{{"d", d}};
    quad.echo(o.inputs);
    o.result = spanning_tree_constant(d, quad.optional_spec());
    if (d == 2)
      o.diagnostics["catalan_reference"] = 4.0 * special_constants().catalan_g / std::numbers::pi;
    return o;
  }
};

struct TransienceCmd {
  int d = 3;
  std::vector<double> u{0.9, 0.99, 0.999};

  void attach(CLI::App* app) {
    app->add_option("--d", d, "lattice dimension")->capture_default_str();
    app->add_option("--u", u, "ascending u values, comma separated")->delimiter(',')->capture_default_str();
  }

  Output run() const {
    Output o;
    o.inputs = Json{{"d", d}, {"u", u}};
    const TransienceProbe p = transience_probe(d, u);
    Json r{{"verdict", p.bounded ? "bounded" : "divergent"},
           {"u", p.u_values},
           {"u_dl", p.u_dl},
           {"green", p.green},
           {"increments", p.increments}};
    if (p.extrapolated) r["extrapolated"] = *p.extrapolated;
    r["path_count_green"] = p.path_count_green;
    o.result = r;
    o.diagnostics["grid_points"] = p.grid_points;
    o.diagnostics["h"] = p.h;
    o.diagnostics["bridge"] = Json{{"u", p.bridge_u}, {"probe", p.bridge_probe}, {"path_sum", p.bridge_pathsum}};
    return o;
  }
};

struct VerifyCmd {
  std::string suite = "all";
  std::string tol_file = "default";

  void attach(CLI::App* app) {
    std::vector<std::string> names = SuiteConfig::group_names();
    app->add_option("--suite", suite, "check group")->check(CLI::IsMember(names))->capture_default_str();
    app->add_option("--tol-file", tol_file, "\"default\" or a JSON file of tolerance overrides")
        ->capture_default_str();
  }

  Output run() const {
    Output o;
    o.inputs = Json{{"suite", suite}, {"tol_file", tol_file}};
    SuiteConfig cfg = SuiteConfig::group(suite);
    if (tol_file != "default") {
      std::ifstream in(tol_file);
      if (!in) throw DomainError("cannot open tolerance file " + tol_file);
      std::stringstream buf;
      buf << in.rdbuf();
      const Json j = parse_json_arg(buf.str(), tol_file);
      cfg.tol = SuiteTolerances::from_json(j);
    }
    const auto reports = run_suite(cfg);
    Json list = Json::array();
    std::size_t failed = 0;
    for (const auto& r : reports) {
      list.push_back(to_json(r));
      if (!r.passed) ++failed;
    }
    o.result = list;
    o.diagnostics["reports"] = reports.size();
    o.diagnostics["failed"] = failed;
    o.diagnostics["passed"] = failed == 0;
    o.diagnostics["tolerances"] = cfg.tol.to_json();
    o.exit_code = failed == 0 ? 0 : 1;
    return o;
  }
};

void report_parse_error(const ParseError& e, const std::string& text, std::ostream& err) {
  err << "mzc: " << e.what() << "\n  " << text << "\n  "
      << std::string(std::min(e.offset(), text.size()), ' ') << "^\n";
}

}  // namespace

std::string dump_json(const nlohmann::ordered_json& j) {
  std::string s;
  emit(j, s);
  return s;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Walk zeta functions and Mahler measures", "mzc"};
  app.require_subcommand(1);
  app.fallthrough();

  std::optional<int> threads;
  bool timing = false;
  app.add_option("--threads", threads, "worker threads (default: all)")->envname("MZC_THREADS");
  app.add_flag("--timing", timing, "add wall time to the diagnostics");

  CoinCmd coin;
  EvolveCmd evolve_cmd;
  ZetaFiniteCmd zf;
  CrCmd cr;
  LogZetaCmd lz;
  MahlerCmd mahler;
  HyperCmd hyper;
  StgfCmd st;
  LambdaCmd lam;
  TransienceCmd tr;
  VerifyCmd verify;

  std::vector<std::pair<CLI::App*, std::function<Output()>>> subs;
  auto add = [&](const char* name, const char* help, auto& cmd) {
    CLI::App* sub = app.add_subcommand(name, help);
    cmd.attach(sub);
    subs.emplace_back(sub, [&cmd] { return cmd.run(); });
  };
  add("coin", "build and classify a coin", coin);
  add("evolve", "evolve a state on the torus and report sum |psi|^p", evolve_cmd);
  add("zeta-finite", "walk-type zeta function on T^d_N", zf);
  add("cr", "series coefficients C_r", cr);
  add("logzeta", "logarithmic zeta function L(u)", lz);
  add("mahler", "logarithmic Mahler measure of a Laurent polynomial", mahler);
  add("hyper", "generalized hypergeometric pFq", hyper);
  add("stgf", "spanning tree generating function of Z^d", st);
  add("lambda", "spanning tree constant of Z^d", lam);
  add("transience", "boundedness of u dL/du as u -> 1", tr);
  add("verify", "run the identity checks", verify);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "mzc: " << e.what() << "\n";
    return 2;
  }

  CLI::App* chosen = nullptr;
  std::function<Output()> runner;
  for (auto& [sub, fn] : subs)
    if (sub->parsed()) {
      chosen = sub;
      runner = fn;
    }

  try {
    if (threads) {
      if (*threads < 1) throw DomainError("--threads must be >= 1");
      kernels::set_threads(*threads);
    }
    const auto t0 = std::chrono::steady_clock::now();
    Output o = runner();
    if (o.csv) {
      out << *o.csv;
      return o.exit_code;
    }
    Json doc{{"command", chosen->get_name()},
             {"inputs", o.inputs},
             {"result", o.result},
             {"diagnostics", o.diagnostics},
             {"schema_version", kSchemaVersion}};
    if (timing)
      doc["diagnostics"]["wall_time_s"] =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out << dump_json(doc) << "\n";
    return o.exit_code;
  } catch (const ParseError& e) {
    report_parse_error(e, mahler.poly, err);
    return 2;
  } catch (const DomainError& e) {
    err << "mzc: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "mzc: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace mzc::cli
