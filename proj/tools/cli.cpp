#include "cli.hpp"

#include "finsler/catalog.hpp"
#include "finsler/connection.hpp"
#include "finsler/curvature.hpp"
#include "finsler/descriptor.hpp"
#include "finsler/error.hpp"
#include "finsler/penrose.hpp"
#include "finsler/ppwave.hpp"
#include "finsler/quotient.hpp"
#include "finsler/random.hpp"
#include "finsler/tensors.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

namespace finsler::cli {

namespace {

constexpr std::uint64_t kDefaultSeed = 1;

struct Context {
  Lagrangian L;
  Json params;
  std::string format;
  RunOptions opt;
  std::uint64_t seed = kDefaultSeed;

  double tol(double fallback) const { return opt.tol.value_or(fallback); }
};

// --- parameter access -------------------------------------------------------

void allow_keys(const Json& obj, std::initializer_list<const char*> keys, const std::string& where) {
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& item : obj.items()) {
    if (!allowed.count(item.key())) throw SchemaError(where + ": unknown key '" + item.key() + "'");
  }
}

double number(const Json& p, const char* key, double fallback) {
  if (!p.contains(key)) return fallback;
  if (!p.at(key).is_number()) throw SchemaError(std::string("run.") + key + " must be a number");
  return p.at(key).get<double>();
}

double required_number(const Json& p, const char* key) {
  if (!p.contains(key)) throw SchemaError(std::string("run.") + key + " is required");
  return number(p, key, 0.0);
}

int integer(const Json& p, const char* key, int fallback, int min_value) {
  if (!p.contains(key)) return fallback;
  const Json& v = p.at(key);
  if (!v.is_number_integer() || v.get<long long>() < min_value || v.get<long long>() > 1000000) {
    throw SchemaError(std::string("run.") + key + " must be an integer >= " + std::to_string(min_value));
  }
  return v.get<int>();
}

Vec vector_value(const Json& v, int n, const std::string& what) {
  if (!v.is_array() || static_cast<int>(v.size()) != n) {
    throw SchemaError(what + " must be an array of " + std::to_string(n) + " numbers");
  }
  Vec out(n);
  for (int i = 0; i < n; ++i) {
    const Json& e = v.at(static_cast<std::size_t>(i));
    if (!e.is_number()) throw SchemaError(what + " entries must be numbers");
    out(i) = e.get<double>();
  }
  return out;
}

std::optional<Vec> vector_param(const Json& p, const char* key, int n) {
  if (!p.contains(key)) return std::nullopt;
  return vector_value(p.at(key), n, std::string("run.") + key);
}

Vec required_vector(const Json& p, const char* key, int n) {
  if (!p.contains(key)) throw SchemaError(std::string("run.") + key + " is required");
  return *vector_param(p, key, n);
}

std::vector<double> number_list(const Json& p, const char* key, std::vector<double> fallback) {
  if (!p.contains(key)) return fallback;
  const Json& v = p.at(key);
  if (!v.is_array() || v.empty()) throw SchemaError(std::string("run.") + key + " must be a non-empty number array");
  std::vector<double> out;
  for (const Json& e : v) {
    if (!e.is_number()) throw SchemaError(std::string("run.") + key + " entries must be numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

int field_index(const Context& c) {
  const int i = integer(c.params, "field", 0, 0);
  if (i >= c.L.dim()) throw SchemaError("run.field must be a coordinate index");
  return i;
}

Json to_json(const Vec& v) { return Json(to_std(v)); }

Json to_json(const Mat& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) rows.push_back(to_std(m.row(i).transpose()));
  return rows;
}

/// Sample points from the descriptor region.
std::vector<Vec> sample_points(const Lagrangian& L, Rng& rng, int count) {
  std::vector<Vec> out;
  for (int s = 0; s < count; ++s) out.push_back(sample_point(L.region(), rng));
  return out;
}

/// Max of same-named checks over several reports, in first-seen order.
class CheckAccumulator {
 public:
  void add(const Report& r, const std::string& prefix = {}) {
    for (const Check& c : r.checks()) {
      const std::string name = prefix + c.check;
      auto it = index_.find(name);
      if (it == index_.end()) {
        index_.emplace(name, checks_.size());
        checks_.push_back(c);
        checks_.back().check = name;
        continue;
      }
      Check& acc = checks_[it->second];
      if (!(acc.residual >= c.residual)) acc.residual = c.residual;
      acc.pass = acc.pass && c.pass;
    }
    if (r.status() == ReportStatus::precondition_failed) precondition_ = r.precondition_reason();
  }
  void into(Report& r) const {
    for (const Check& c : checks_) r.add_verdict(c.check, c.residual, c.tol, c.pass);
    if (!precondition_.empty()) r.set_precondition_failure(precondition_);
  }

 private:
  std::vector<Check> checks_;
  std::map<std::string, std::size_t> index_;
  std::string precondition_;
};

// --- outputs ---------------------------------------------------------------

int exit_for(const Report& r) { return r.passed() ? ok : verification_failed; }

std::string out_path(const Context& c) { return c.opt.out.value_or(""); }

std::string sidecar(const Context& c, const std::string& suffix) {
  return c.opt.out ? *c.opt.out + suffix : std::string();
}

/// Report commands: JSON report, or its sample table as CSV.
RunResult report_result(const Context& c, const Report& r) {
  RunResult res;
  res.exit_code = exit_for(r);
  res.artifacts.push_back({out_path(c), c.format == "csv" ? to_csv(r.samples()) : dump_json(r.to_json())});
  return res;
}

// --- commands ----------------------------------------------------------------

RunResult cmd_check(Context& c) {
  allow_keys(c.params, {"samples"}, "run");
  const int samples = integer(c.params, "samples", 100, 1);
  Rng rng(c.seed);
  Report r("check");
  r.set_seed(c.seed);
  r.note("lagrangian", c.L.name());
  CheckAccumulator acc;
  int non_lorentzian = 0;
  Table& tab = r.samples();
  tab.columns = {"sample", "homogeneity", "lorentzian"};
  for (int s = 0; s < samples; ++s) {
    const Vec x = sample_point(c.L.region(), rng);
    const Vec v = sample_admissible(c.L, x, rng);
    const Report h = homogeneity_report(c.L, x, v, c.tol(1e-9));
    acc.add(h);
    const bool lor = signature(fundamental_matrix(c.L, x, v)).lorentzian();
    if (!lor) ++non_lorentzian;
    tab.add_row({static_cast<double>(s), h.max_residual(), lor ? 1.0 : 0.0});
  }
  acc.into(r);
  r.add("Lorentzian signature", static_cast<double>(non_lorentzian) / samples, 0.0);
  return report_result(c, r);
}

RunResult cmd_connection(Context& c) {
  allow_keys(c.params, {"samples"}, "run");
  const int samples = integer(c.params, "samples", 10, 1);
  Rng rng(c.seed);
  Report r("connection");
  r.set_seed(c.seed);
  r.note("lagrangian", c.L.name());
  CheckAccumulator acc;
  Table& tab = r.samples();
  tab.columns = {"sample", "parallel_extension", "constant_field"};
  for (int s = 0; s < samples; ++s) {
    const Vec x = sample_point(c.L.region(), rng);
    const Vec v = sample_admissible(c.L, x, rng);
    const Report a = connection_report(c.L, parallel_extension(c.L, v, x), x, c.tol(1e-8));
    const Report b = connection_report(c.L, VectorField::constant(v), x, c.tol(1e-8));
    acc.add(a);
    acc.add(b);
    tab.add_row({static_cast<double>(s), a.max_residual(), b.max_residual()});
  }
  acc.into(r);
  return report_result(c, r);
}

RunResult cmd_curvature(Context& c) {
  allow_keys(c.params, {"point", "vector"}, "run");
  const int n = c.L.dim();
  Rng rng(c.seed);
  const Vec x = vector_param(c.params, "point", n).value_or(sample_point(c.L.region(), rng));
  const Vec v = vector_param(c.params, "vector", n).value_or(sample_admissible(c.L, x, rng));
  const CurvatureAt R = chern_curvature(c.L, x, v);
  const double scale = std::max(1.0, R.R.max_abs());
  double antisym = 0.0;
  double bianchi = 0.0;
  for (int l = 0; l < n; ++l) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
          antisym = std::max(antisym, std::abs(R.R(l, i, j, k) + R.R(l, j, i, k)));
          bianchi = std::max(bianchi, std::abs(R.R(l, i, j, k) + R.R(l, j, k, i) + R.R(l, k, i, j)));
        }
      }
    }
  }
  Report r("curvature");
  r.set_seed(c.seed);
  r.note("lagrangian", c.L.name());
  r.note("point", to_json(x));
  r.note("vector", to_json(v));
  r.add("R(X, Y) = -R(Y, X)", antisym / scale, c.tol(1e-8));
  r.add("first Bianchi identity", bianchi / scale, c.tol(1e-6));
  Table& tab = r.samples();
  tab.columns = {"l", "i", "j", "k", "value"};
  for (int l = 0; l < n; ++l) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
          const double val = R.R(l, i, j, k);
          if (std::abs(val) > 1e-12 * scale) {
            tab.add_row({static_cast<double>(l), static_cast<double>(i), static_cast<double>(j),
                         static_cast<double>(k), val});
          }
        }
      }
    }
  }
  return report_result(c, r);
}

RunResult cmd_geodesic(Context& c) {
  allow_keys(c.params, {"x0", "v0", "t0", "t1", "ode_tol"}, "run");
  const int n = c.L.dim();
  const Vec x0 = required_vector(c.params, "x0", n);
  const Vec v0 = required_vector(c.params, "v0", n);
  const double t0 = number(c.params, "t0", 0.0);
  const double t1 = required_number(c.params, "t1");
  const double ode_tol = number(c.params, "ode_tol", 1e-10);
  if (!(ode_tol > 0.0)) throw SchemaError("run.ode_tol must be positive");
  const GeodesicPath path = geodesic(c.L, x0, v0, t0, t1, ode_tol);
  double drift = 0.0;
  for (double d : path.drift) drift = std::max(drift, std::abs(d));
  Report r("geodesic");
  r.note("lagrangian", c.L.name());
  r.note("truncated", path.truncated);
  if (!path.note.empty()) r.note("note", path.note);
  r.add("L conserved along the geodesic", drift / std::max(1.0, std::abs(path.lagrangian0)), c.tol(1e-6));
  RunResult res;
  res.exit_code = exit_for(r);
  if (c.format == "json") {
    r.samples() = path.to_table();
    res.artifacts.push_back({out_path(c), dump_json(r.to_json())});
  } else {
    res.artifacts.push_back({out_path(c), to_csv(path.to_table())});
    if (!r.passed()) res.message = "L drift " + format_double(r.max_residual()) + " exceeds the tolerance";
  }
  return res;
}

RunResult cmd_ppwave(Context& c) {
  allow_keys(c.params, {"samples", "field"}, "run");
  const int samples = integer(c.params, "samples", 8, 1);
  const VectorField N = VectorField::coordinate(c.L.dim(), field_index(c));
  Rng rng(c.seed);
  const std::vector<Vec> pts = sample_points(c.L, rng, samples);
  PpWaveOptions po;
  po.rel_tol = c.tol(po.rel_tol);
  Report r = ppwave_condition(c.L, N, pts, po);
  r.set_seed(c.seed);
  r.note("lagrangian", c.L.name());
  r.merge(parallel_criterion(c.L, N, pts), "parallel criterion: ");
  return report_result(c, r);
}

RunResult cmd_focal(Context& c) {
  allow_keys(c.params, {"origin", "direction", "t0", "t1", "samples", "field"}, "run");
  const int n = c.L.dim();
  const Vec origin = vector_param(c.params, "origin", n).value_or(Vec::Zero(n));
  const Vec direction = vector_param(c.params, "direction", n).value_or(unit_vector(n, 0));
  const double t0 = number(c.params, "t0", 0.0);
  const double t1 = required_number(c.params, "t1");
  if (!(t1 > t0)) throw SchemaError("run.t1 must exceed run.t0");
  DeltaScanOptions so;
  so.samples = integer(c.params, "samples", so.samples, 3);
  const VectorField N = VectorField::coordinate(n, field_index(c));
  const DeltaCurve curve = delta_scan(c.L, N, Ray::line(origin, direction, t0, t1), so);

  Report r("focal");
  r.note("lagrangian", c.L.name());
  r.add("Delta equals sqrt |det g_N|", curve.max_delta_mismatch(), c.tol(1e-10));
  Json roots = curve.roots_json();
  RunResult res;
  res.exit_code = exit_for(r);
  if (c.format == "json") {
    r.note("roots", roots);
    r.samples() = curve.to_table();
    res.artifacts.push_back({out_path(c), dump_json(r.to_json())});
  } else {
    res.artifacts.push_back({out_path(c), to_csv(curve.to_table())});
    const std::string roots_path = sidecar(c, ".roots.json");
    if (roots_path.empty()) {
      res.message = dump_json(roots);
    } else {
      res.artifacts.push_back({roots_path, dump_json(roots)});
    }
  }
  return res;
}

RunResult cmd_quotient(Context& c) {
  allow_keys(c.params, {"point", "reps", "loop", "field"}, "run");
  const int n = c.L.dim();
  const Vec x = vector_param(c.params, "point", n).value_or(Vec::Zero(n));
  Mat reps = Mat::Zero(n, n - 2);
  if (c.params.contains("reps")) {
    const Json& rj = c.params.at("reps");
    if (!rj.is_array() || static_cast<int>(rj.size()) != n - 2) {
      throw SchemaError("run.reps must list " + std::to_string(n - 2) + " vectors");
    }
    for (int k = 0; k < n - 2; ++k) reps.col(k) = vector_value(rj.at(static_cast<std::size_t>(k)), n, "run.reps");
  } else {
    for (int k = 0; k < n - 2; ++k) reps(k + 2, k) = 1.0;
  }
  const Json loop = c.params.contains("loop") ? c.params.at("loop") : Json::object();
  if (!loop.is_object()) throw SchemaError("run.loop must be an object");
  allow_keys(loop, {"axes", "side"}, "run.loop");
  int a = 1;
  int b = 2;
  if (loop.contains("axes")) {
    const Json& ax = loop.at("axes");
    if (!ax.is_array() || ax.size() != 2 || !ax[0].is_number_integer() || !ax[1].is_number_integer()) {
      throw SchemaError("run.loop.axes must be two coordinate indices");
    }
    a = ax[0].get<int>();
    b = ax[1].get<int>();
    if (a < 0 || b < 0 || a >= n || b >= n || a == b) throw SchemaError("run.loop.axes out of range");
  }
  const double side = number(loop, "side", 0.1);
  if (!(side > 0.0)) throw SchemaError("run.loop.side must be positive");
  const VectorField N = VectorField::coordinate(n, field_index(c));

  Report r("quotient");
  r.note("lagrangian", c.L.name());
  const QuotientFrame q = quotient_metric(c.L, N, x, reps);
  Mat shifted = reps;
  const Vec nx = N(x);
  for (int k = 0; k < n - 2; ++k) shifted.col(k) += (0.5 + 0.25 * k) * nx;
  const QuotientFrame q2 = quotient_metric(c.L, N, x, shifted);
  r.note("gbar", to_json(q.gbar));
  r.add("gbar independent of representatives", (q.gbar - q2.gbar).cwiseAbs().maxCoeff(), 1e-8);

  const Loop lp = Loop::rectangle(x, a, b, side, side);
  const double area = lp.coordinate_area(a, b);
  try {
    const HolonomyResult h = holonomy(c.L, N, lp, reps);
    const HolonomyResult h2 = holonomy(c.L, N, Loop{lp.vertices}, shifted);
    const Mat Rq = quotient_curvature(c.L, N, x, a, b, reps);
    const Eigen::JacobiSVD<Mat> svd(Rq);
    r.note("holonomy", to_json(h.holonomy));
    r.note("area", area);
    r.note("predicted_defect", area * svd.singularValues()(0));
    r.add("holonomy independent of representatives", (h.holonomy - h2.holonomy).cwiseAbs().maxCoeff(), 1e-8);
    r.add("holonomy defect / area", h.defect / area, c.tol(1e-7));
  } catch (const PreconditionError& e) {
    r.set_precondition_failure(e.what());
  }
  return report_result(c, r);
}

RunResult cmd_penrose(Context& c) {
  allow_keys(c.params, {"u_min", "u_max", "u0", "samples", "omegas", "homothety_samples"}, "run");
  PenroseOptions po;
  po.seed = c.seed;
  po.brinkmann.u_min = number(c.params, "u_min", -1.0);
  po.brinkmann.u_max = number(c.params, "u_max", 1.0);
  po.brinkmann.u0 = number(c.params, "u0", 0.0);
  po.brinkmann.samples = integer(c.params, "samples", 41, 2);
  po.omegas = number_list(c.params, "omegas", po.omegas);
  po.homothety_samples = integer(c.params, "homothety_samples", 50, 1);
  if (c.opt.tol) po.homothety_tol = *c.opt.tol;
  if (!(po.brinkmann.u_max > po.brinkmann.u_min)) throw SchemaError("run.u_max must exceed run.u_min");
  for (double w : po.omegas) {
    if (!(w > 0.0 && w <= 1.0)) throw SchemaError("run.omegas must lie in (0, 1]");
  }
  const PenroseLimitResult res_limit = penrose_limit(c.L, VectorField::coordinate(c.L.dim(), 0), po);
  Report r = res_limit.report;
  r.note("lagrangian", c.L.name());
  r.note("homothety", Json{{"columns", res_limit.homothety.columns}, {"rows", res_limit.homothety.rows}});
  RunResult res;
  res.exit_code = exit_for(r);
  if (c.format == "json") {
    r.samples() = res_limit.brinkmann.to_table();
    res.artifacts.push_back({out_path(c), dump_json(r.to_json())});
  } else {
    res.artifacts.push_back({out_path(c), to_csv(res_limit.brinkmann.to_table())});
    const std::string report_path = sidecar(c, ".report.json");
    if (report_path.empty()) {
      res.message = dump_json(r.to_json());
    } else {
      res.artifacts.push_back({report_path, dump_json(r.to_json())});
    }
  }
  return res;
}

using Command = std::function<RunResult(Context&)>;

const std::map<std::string, std::pair<Command, const char*>>& table() {
  static const std::map<std::string, std::pair<Command, const char*>> t = {
      {"check", {cmd_check, "json"}},       {"connection", {cmd_connection, "json"}},
      {"curvature", {cmd_curvature, "json"}}, {"geodesic", {cmd_geodesic, "csv"}},
      {"ppwave", {cmd_ppwave, "json"}},     {"focal", {cmd_focal, "csv"}},
      {"quotient", {cmd_quotient, "json"}}, {"penrose", {cmd_penrose, "csv"}},
  };
  return t;
}

RunResult failure(int code, const std::string& what) {
  RunResult r;
  r.exit_code = code;
  r.message = what;
  return r;
}

}  // namespace

const std::vector<std::string>& commands() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [k, v] : table()) out.push_back(k);
    return out;
  }();
  return names;
}

RunResult run(const std::string& command, const Json& config, const RunOptions& opt) {
  try {
    const auto it = table().find(command);
    if (it == table().end()) throw SchemaError("unknown command '" + command + "'");
    if (!config.is_object()) throw SchemaError("config must be a JSON object");
    allow_keys(config, {"spacetime", "run", "output"}, "config");
    if (!config.contains("spacetime")) throw SchemaError("config needs 'spacetime'");
    Context c{lagrangian_from_descriptor(config.at("spacetime")), Json::object(), it->second.second, opt,
              opt.seed.value_or(kDefaultSeed)};
    if (config.contains("run")) {
      c.params = config.at("run");
      if (!c.params.is_object()) throw SchemaError("'run' must be an object");
    }
    if (config.contains("output")) {
      const Json& o = config.at("output");
      if (!o.is_object()) throw SchemaError("'output' must be an object");
      allow_keys(o, {"format"}, "output");
      c.format = o.contains("format") && o.at("format").is_string() ? o.at("format").get<std::string>() : "";
      if (c.format != "json" && c.format != "csv") throw SchemaError("output.format must be \"json\" or \"csv\"");
    }
    if (opt.tol && !(*opt.tol > 0.0)) throw SchemaError("--tol must be positive");
    return it->second.first(c);
  } catch (const SchemaError& e) {
    return failure(schema_violation, std::string("schema violation: ") + e.what());
  } catch (const Json::exception& e) {
    return failure(schema_violation, std::string("schema violation: ") + e.what());
  } catch (const PreconditionError& e) {
    return failure(verification_failed, std::string("precondition failed: ") + e.what());
  } catch (const std::exception& e) {
    return failure(numerical_failure, std::string("numerical failure: ") + e.what());
  }
}

int main(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Finsler spacetime verification toolkit"};
  std::string command;
  std::string config_path;
  RunOptions opt;
  std::string out_path;
  std::uint64_t seed = 0;
  double tol = 0.0;
  app.add_option("command", command, "Command to run")->required()->check(CLI::IsMember(commands()));
  app.add_option("--config", config_path, "Run configuration (JSON)")->required();
  auto* o_out = app.add_option("--out", out_path, "Output path (default: standard output)");
  auto* o_seed = app.add_option("--seed", seed, "Seed for random sample points");
  auto* o_tol = app.add_option("--tol", tol, "Verification tolerance override");
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return ok;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return schema_violation;
  }
  if (*o_out) opt.out = out_path;
  if (*o_seed) opt.seed = seed;
  if (*o_tol) opt.tol = tol;

  std::ifstream in(config_path, std::ios::binary);
  if (!in) {
    err << "cannot read config '" << config_path << "'\n";
    return schema_violation;
  }
  Json config;
  try {
    config = Json::parse(in);
  } catch (const Json::exception& e) {
    err << "schema violation: " << e.what() << "\n";
    return schema_violation;
  }

  const RunResult res = run(command, config, opt);
  for (const Artifact& a : res.artifacts) {
    if (a.path.empty()) {
      out << a.text;
      continue;
    }
    std::ofstream f(a.path, std::ios::binary);
    f << a.text;
    if (!f) {
      err << "cannot write '" << a.path << "'\n";
      return numerical_failure;
    }
  }
  if (!res.message.empty()) err << res.message << (res.message.back() == '\n' ? "" : "\n");
  return res.exit_code;
}

}  // namespace finsler::cli
