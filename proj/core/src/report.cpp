#include "ellab/report.hpp"

#include "ellab/functionals.hpp"
#include "ellab/rng.hpp"
#include "ellab/solver.hpp"

#include <nlohmann/json.hpp>
#include <toml.hpp>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <memory>
#include <sstream>
#include <thread>

namespace ellab {

namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

json jnum(double v) {
  if (std::isfinite(v)) return v;
  return num(v);
}

double from_jnum(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf") return kInf;
    if (s == "-inf") return -kInf;
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  fail(ErrorKind::Configuration, "expected a number, got " + j.dump());
}

[[noreturn]] void config_error(const std::string& what) { fail(ErrorKind::Configuration, what); }

// ---------------------------------------------------------------------------
// Config parsing

ParamValue param_from_json(const std::string& key, const json& j) {
  if (j.is_boolean()) return j.get<bool>();
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) return j.get<std::string>();
  if (j.is_array()) {
    std::vector<double> v;
    for (const json& e : j) {
      if (!e.is_number()) config_error("parameter " + key + " must be an array of numbers");
      v.push_back(e.get<double>());
    }
    return v;
  }
  config_error("unsupported value for parameter " + key);
}

json param_to_json(const ParamValue& v) {
  return std::visit(
      [](const auto& x) -> json {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, double>) return jnum(x);
        else return x;
      },
      v);
}

Params params_from(const json& obj, const std::set<std::string>& skip) {
  Params p;
  for (const auto& [k, v] : obj.items())
    if (!skip.count(k)) p.set(k, param_from_json(k, v));
  return p;
}

json params_json(const Params& p) {
  json o = json::object();
  for (const auto& [k, v] : p.values()) o[k] = param_to_json(v);
  return o;
}

std::string required_string(const json& obj, const char* key, const char* section) {
  if (!obj.contains(key) || !obj[key].is_string())
    config_error(std::string(section) + " entries need a string '" + key + "'");
  return obj[key].get<std::string>();
}

RunConfig config_from_json(const json& root) {
  if (!root.is_object()) config_error("config root must be a table");
  static const std::set<std::string> top{"seed", "workers", "output", "quadrature", "problems", "functionals", "checks"};
  for (const auto& [k, v] : root.items())
    if (!top.count(k)) config_error("unknown config key '" + k + "'");
  RunConfig c;
  if (root.contains("seed")) {
    if (!root["seed"].is_number_integer() || root["seed"].get<std::int64_t>() < 0) config_error("seed must be a non-negative integer");
    c.seed = root["seed"].get<std::uint64_t>();
  }
  if (root.contains("workers")) {
    if (!root["workers"].is_number_integer() || root["workers"].get<std::int64_t>() < 1) config_error("workers must be a positive integer");
    c.workers = root["workers"].get<std::size_t>();
  }
  if (root.contains("output")) {
    if (!root["output"].is_string()) config_error("output must be a string");
    c.output_dir = root["output"].get<std::string>();
  }
  if (root.contains("quadrature")) {
    const json& q = root["quadrature"];
    static const std::map<std::string, int QuadratureOrders::*> fields{
        {"circle_nodes", &QuadratureOrders::circle_nodes}, {"sphere_polar", &QuadratureOrders::sphere_polar},
        {"sphere_azimuth", &QuadratureOrders::sphere_azimuth}, {"radial_nodes", &QuadratureOrders::radial_nodes}};
    for (const auto& [k, v] : q.items()) {
      auto it = fields.find(k);
      if (it == fields.end()) config_error("unknown quadrature key '" + k + "'");
      if (!v.is_number_integer() || v.get<int>() < 1) config_error("quadrature." + k + " must be a positive integer");
      c.orders.*(it->second) = v.get<int>();
    }
  }
  auto array_of = [&](const char* key) {
    if (!root.contains(key)) return json::array();
    if (!root[key].is_array()) config_error(std::string(key) + " must be an array of tables");
    return root[key];
  };
  std::size_t i = 0;
  for (const json& p : array_of("problems")) {
    const std::string name = p.contains("name") ? required_string(p, "name", "problems") : "problem-" + std::to_string(i);
    c.problems.push_back({name, params_from(p, {"name"})});
    ++i;
  }
  i = 0;
  for (const json& f : array_of("functionals")) {
    const std::string kind = required_string(f, "kind", "functionals");
    const std::string name = f.contains("name") ? required_string(f, "name", "functionals") : kind + "-" + std::to_string(i);
    c.functionals.push_back({name, kind, params_from(f, {"name", "kind"})});
    ++i;
  }
  i = 0;
  for (const json& ch : array_of("checks")) {
    const std::string th = required_string(ch, "theorem", "checks");
    const std::string name = ch.contains("name") ? required_string(ch, "name", "checks") : th + "-" + std::to_string(i);
    c.checks.push_back({name, th, params_from(ch, {"name", "theorem"})});
    ++i;
  }
  return c;
}

// ---------------------------------------------------------------------------
// Field catalog

struct Context {
  const RunConfig* config = nullptr;
  std::map<std::string, std::shared_ptr<const SolutionField>> solutions;
  std::map<std::string, std::string> solve_errors;
  std::map<std::string, const ProblemSpec*> problems;
};

Majorant parse_majorant(const std::string& s) {
  if (s == "t" || s == "identity") return Majorant::identity();
  if (s == "sqrt" || s == "sqrt(t)" || s == "t^0.5") return Majorant::sqrt();
  if (s.rfind("t^", 0) == 0) {
    double g = 0.0;
    const auto* b = s.data() + 2;
    const auto res = std::from_chars(b, s.data() + s.size(), g);
    if (res.ec == std::errc() && res.ptr == s.data() + s.size() && g > 0.0 && g <= 1.0) return Majorant::power(g);
  }
  config_error("unknown majorant '" + s + "' (use t, sqrt or t^g with 0 < g <= 1)");
}

struct ResolvedField {
  ScalarField u;
  double lambda = 0.0;  // Lap u = lambda u when known
  double tau = 1.0;
};

ResolvedField resolve_field(const Params& p, const Context& ctx, const std::string& fallback = "radial-yukawa") {
  const std::string name = p.text("field", fallback);
  if (name.rfind("solution:", 0) == 0) {
    const std::string prob = name.substr(9);
    auto err = ctx.solve_errors.find(prob);
    if (err != ctx.solve_errors.end()) config_error("problem '" + prob + "' failed: " + err->second);
    auto it = ctx.solutions.find(prob);
    if (it == ctx.solutions.end()) config_error("unknown problem '" + prob + "'");
    const Params& pp = ctx.problems.at(prob)->params;
    return {it->second->field, pp.number("lambda", 1.0), pp.number("tau", 1.0)};
  }
  const int n = static_cast<int>(p.number("dimension", 3));
  if (n != 2 && n != 3) config_error("dimension must be 2 or 3");
  const double lambda = p.number("lambda", name == "radial-yukawa" || name == "plane-wave" ? 1.0 : 0.0);
  auto poly = [n](std::vector<int> p2, std::vector<int> p3) { return Polynomial::monomial(n, n == 2 ? p2 : p3).field(); };
  if (name == "radial-yukawa") return {radial_oracle(n, lambda), lambda, 1.0};
  if (name == "plane-wave") return {plane_wave_field(n, lambda), lambda, 1.0};
  if (name == "sinh-x1") return {sinh_coordinate_field(n, std::sqrt(lambda), 0), lambda, 1.0};
  if (name == "constant") return {constant_field(n, p.number("value", 1.0)), 0.0, 1.0};
  if (name == "x1") return {poly({1, 0}, {1, 0, 0}), 0.0, 1.0};
  if (name == "x2") return {poly({0, 1}, {0, 1, 0}), 0.0, 1.0};
  if (name == "x1x2") return {poly({1, 1}, {1, 1, 0}), 0.0, 1.0};
  if (name == "harmonic-cubic") return {harmonic_family(n)[2].u, 0.0, 1.0};
  if (name == "norm-sq") return {norm_sq_field(n), 2.0 * n, 1.0};
  if (name == "log-kernel") {
    if (n != 2) config_error("log-kernel lives on the disk");
    return {log_kernel_field(), 0.0, 1.0};
  }
  if (name == "sqrt-distance") return {sqrt_distance_field(n), 0.0, 1.0};
  config_error("unknown field '" + name + "'");
}

VectorField resolve_map(const Params& p, std::vector<double>& lambdas) {
  const std::string name = p.text("map", "identity");
  if (name == "identity") {
    lambdas = {0.0, 0.0};
    return VectorField({coordinate_field(2, 0), coordinate_field(2, 1)});
  }
  if (name == "constant") {
    lambdas = {0.0, 0.0};
    return VectorField({constant_field(2, 1.0), constant_field(2, 0.5)});
  }
  if (name == "yukawa-pair") {
    lambdas = p.numbers("lambdas", {1.0, 0.5});
    if (lambdas.size() != 2 || lambdas[0] < 0.0 || lambdas[1] < 0.0) config_error("yukawa-pair needs two lambdas >= 0");
    return VectorField({sinh_coordinate_field(2, std::sqrt(lambdas[0]), 0), sinh_coordinate_field(2, std::sqrt(lambdas[1]), 1)});
  }
  config_error("unknown map '" + name + "'");
}

std::uint64_t item_seed(std::uint64_t base, std::size_t index) {
  return Rng(base).split(static_cast<std::uint64_t>(index) + 1).next_u64();
}

void reject_unused(const Params& p) {
  const auto u = p.unused();
  if (u.empty()) return;
  std::string s;
  for (const auto& k : u) s += (s.empty() ? "" : ", ") + k;
  config_error("unknown parameter(s): " + s);
}

std::vector<double> radii_param(const Params& p, const std::vector<double>& fallback) {
  if (p.has("radii")) return p.numbers("radii", fallback);
  if (p.has("r_count")) return growth_radius_grid(static_cast<int>(p.number("r_count", 20)));
  return fallback;
}

// ---------------------------------------------------------------------------
// Item execution

Verdict build_check(const CheckRequest& req, const Context& ctx, std::uint64_t seed) {
  const Params& p = req.params;
  const std::string& th = req.theorem;
  seed = static_cast<std::uint64_t>(p.number("seed", static_cast<double>(seed)));
  auto omega = [&] { return parse_majorant(p.text("omega", "t")); };
  auto weight = [&] { return BlochWeight{p.number("alpha", 1.0), p.number("beta", 0.0)}; };
  auto constant_options = [&] {
    ConstantOptions o;
    o.samples = static_cast<std::size_t>(p.number("samples", 128));
    o.seed = seed;
    return o;
  };
  auto growth_options = [&] {
    GrowthOptions o;
    o.seed = seed;
    o.orders = ctx.config->orders;
    return o;
  };
  std::function<Verdict()> run;
  if (th == "thm-B") {
    std::vector<MeanValueCase> cat;
    for (double d : p.numbers("dimensions", {2.0, 3.0})) {
      const auto c = polynomial_catalog(static_cast<int>(d), static_cast<int>(p.number("max_degree", 6)));
      cat.insert(cat.end(), c.begin(), c.end());
    }
    const auto radii = p.numbers("radii", {0.25, 0.5, 0.9});
    reject_unused(p);
    return verify_mean_value(cat, radii);
  }
  if (th == "lem-lemx" || th == "lem-5") {
    const auto draws = static_cast<std::size_t>(p.number("draws", 10000));
    reject_unused(p);
    return th == "lem-lemx" ? verify_power_inequality(draws, seed) : verify_majorant_monotonicity(draws, seed);
  }
  if (th == "thm-1.3") {
    std::vector<double> lambdas;
    const VectorField map = resolve_map(p, lambdas);
    MetricOptions o;
    o.seed = seed;
    o.sources = static_cast<std::size_t>(p.number("sources", 24));
    o.targets = static_cast<std::size_t>(p.number("targets", 6));
    reject_unused(p);
    return verify_metric_equivalence(map, lambdas, o);
  }
  const ResolvedField f = resolve_field(p, ctx);
  if (th == "prop-1.1") {
    const double tau = p.number("tau", f.tau), nu = p.number("nu", 2.0);
    const auto o = constant_options();
    reject_unused(p);
    return verify_gradient_bound(f.u, tau, nu, o);
  }
  if (th == "thm-1.2") {
    const Majorant om = omega();
    const double alpha = p.number("alpha", 1.0);
    const auto o = constant_options();
    reject_unused(p);
    return verify_bloch_oscillation(f.u, om, alpha, o);
  }
  if (th == "lem-2.3" || th == "lem-2.5") {
    const double nu = p.number("nu", 2.0);
    const auto o = constant_options();
    reject_unused(p);
    return verify_mean_bound(f.u, nu, o);
  }
  if (th == "thm-1.4") {
    const double nu = p.number("nu", 2.0);
    const Majorant om = omega();
    const BlochWeight w = weight();
    const auto radii = radii_param(p, growth_radius_grid());
    const auto o = growth_options();
    reject_unused(p);
    return verify_growth(f.u, nu, om, w, radii, o);
  }
  if (th == "thm-1.5" || th == "cor-1.5") {
    const bool cor = th == "cor-1.5";
    const int n = f.u.dimension();
    const double nu = p.number("nu", 2.0);
    const Majorant om = omega();
    const BlochWeight w = weight();
    const auto radii = radii_param(p, growth_radius_grid());
    HeinzData h;
    const double a1 = p.number("a1", 0.0), a2 = p.number("a2", cor ? f.lambda : 0.0), a3 = p.number("a3", 0.0);
    if (a1 != 0.0) h.a1 = constant_field(n, a1);
    if (a2 != 0.0) h.a2 = constant_field(n, a2);
    if (a3 != 0.0) h.a3 = constant_field(n, a3);
    h.b1 = p.number("b1", 0.0);
    h.b2 = p.number("b2", cor ? 1.0 : 0.0);
    const auto o = growth_options();
    reject_unused(p);
    return verify_heinz_growth(f.u, h, nu, om, w, radii, cor, o);
  }
  if (th == "thm-1.6") {
    ShellOptions o;
    const double alpha = p.number("alpha", 1.0), mu = p.number("mu", 1.0), nu = p.number("nu", 2.0);
    o.epsilons = p.numbers("epsilons", o.epsilons);
    reject_unused(p);
    return verify_dirichlet_finiteness(f.u, alpha, mu, nu, o);
  }
  if (th == "thm-1.7") {
    const int n = f.u.dimension();
    const double nu = p.number("nu", 2.0), mu = p.number("mu", n == 2 ? 1.0 : 1.5);
    const double alpha = p.number("alpha", majorant_alpha(n, nu, mu));
    const auto radii = p.numbers("radii", {0.5, 0.7, 0.9});
    MajorantOptions o;
    o.seed = seed;
    reject_unused(p);
    return verify_harmonic_majorant(f.u, nu, alpha, mu, radii, o);
  }
  if (th == "lem-2.1" || th == "lem-cw4" || th == "lem-cw5") {
    SubharmonicOptions o;
    o.seed = seed;
    o.samples = static_cast<std::size_t>(p.number("samples", 1000));
    o.lambda = p.number("lambda", f.lambda);
    const double nu = p.number("nu", 2.0);
    reject_unused(p);
    const SubharmonicTarget t = th == "lem-2.1"   ? SubharmonicTarget::AbsolutePower
                                : th == "lem-cw4" ? SubharmonicTarget::HessianPower
                                                  : SubharmonicTarget::GradientPower;
    return verify_subharmonicity(t, f.u, nu, o);
  }
  config_error("unknown theorem id '" + th + "'");
}

ReportItem run_check_item(const CheckRequest& req, const Context& ctx, std::uint64_t seed) {
  ReportItem item;
  item.kind = "verify";
  item.name = req.name;
  for (const auto& [k, v] : req.params.values()) item.params.emplace_back(k, param_to_json(v).dump());
  Verdict v = run_guarded(req.theorem, [&] { return build_check(req, ctx, seed); });
  item.status = to_string(v.status);
  item.message = v.message;
  item.runtime_seconds = v.runtime_seconds;
  item.tables = v.tables;
  item.verdict = std::move(v);
  return item;
}

template <class F>
ReportItem guarded_item(const std::string& kind, const std::string& name, F&& body) {
  ReportItem item;
  item.kind = kind;
  item.name = name;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(item);
    item.status = "ok";
  } catch (const std::exception& e) {
    item.status = "error";
    item.values.clear();
    item.tables.clear();
    const auto* err = dynamic_cast<const Error*>(&e);
    item.message = err ? std::string(to_string(err->kind())) + ": " + e.what() : e.what();
  }
  item.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return item;
}

YukawaProblem build_problem(const ProblemSpec& spec) {
  const Params& p = spec.params;
  const int n = static_cast<int>(p.number("dimension", 3));
  YukawaProblem prob = YukawaProblem::constant(n, p.number("lambda", 1.0), p.number("tau", 1.0), p.number("boundary", 1.0));
  prob.backend = backend_from_string(p.text("backend", "picard-integral"));
  prob.name = spec.name;
  reject_unused(p);
  return prob;
}

ReportItem run_problem_item(const ProblemSpec& spec, std::uint64_t seed, std::shared_ptr<const SolutionField>& out) {
  return guarded_item("solve", spec.name, [&](ReportItem& item) {
    for (const auto& [k, v] : spec.params.values()) item.params.emplace_back(k, param_to_json(v).dump());
    const YukawaProblem prob = build_problem(spec);
    SolverOptions o;
    o.seed = seed;
    auto sol = std::make_shared<SolutionField>(solve(prob, o));
    const int n = prob.dimension;
    item.values = {{"converged", sol->converged ? 1.0 : 0.0},
                   {"iterations", static_cast<double>(sol->iterations)},
                   {"final_update", sol->final_update},
                   {"contraction_estimate", sol->contraction_estimate},
                   {"operator_bound", sol->operator_bound},
                   {"residual", sol->residual},
                   {"u_center", sol->field(Point::Zero(n))}};
    // the radial series is an independent reference for constant data
    const ScalarField oracle =
        radial_oracle(n, *prob.lambda_constant, prob.tau, prob.boundary.constant_value().value_or(1.0));
    Rng rng(seed ^ 0x0dac1e);
    double err = 0.0;
    for (int i = 0; i < 64; ++i) {
      const Point x = rng.in_ball(n, 0.99);
      err = std::max(err, std::abs(sol->field(x) - oracle(x)));
    }
    item.values.emplace_back("oracle_sup_error", err);
    if (!sol->converged) item.message = sol->status;
    out = std::move(sol);
  });
}

ReportItem run_functional_item(const FunctionalRequest& req, const Context& ctx, std::uint64_t seed) {
  return guarded_item("norm", req.name, [&](ReportItem& item) {
    const Params& p = req.params;
    item.params.emplace_back("kind", json(req.kind).dump());
    for (const auto& [k, v] : p.values()) item.params.emplace_back(k, param_to_json(v).dump());
    const ResolvedField f = resolve_field(p, ctx);
    const int n = f.u.dimension();
    auto report_values = [&](const NormReport& r) {
      item.values = {{"value", r.value},
                     {"infinite", r.infinite ? 1.0 : 0.0},
                     {"argmax_radius", r.argmax.size() ? r.argmax.norm() : 0.0},
                     {"resolution", r.resolution},
                     {"samples", static_cast<double>(r.samples)}};
    };
    if (req.kind == "hardy") {
      const double nu = p.number("nu", 2.0);
      const int count = static_cast<int>(p.number("radii", 40));
      reject_unused(p);
      std::vector<double> grid{0.0};
      for (double r : open_unit_grid(count)) grid.push_back(r);
      report_values(hardy_norm(f.u, nu, grid, ctx.config->orders));
    } else if (req.kind == "bloch") {
      const double nu = p.number("nu", kInf);
      const Majorant om = parse_majorant(p.text("omega", "t"));
      const BlochWeight w{p.number("alpha", 1.0), p.number("beta", 0.0)};
      reject_unused(p);
      report_values(bloch_norm(f.u, nu, om, w));
    } else if (req.kind == "lipschitz") {
      const Majorant om = parse_majorant(p.text("omega", "t"));
      const auto count = static_cast<std::size_t>(p.number("pairs", 1000));
      reject_unused(p);
      Rng rng(seed);
      report_values(lipschitz_constant(f.u, om, sample_pairs(n, count, rng)));
    } else if (req.kind == "dirichlet") {
      const double alpha = p.number("alpha", 1.0), gamma = p.number("gamma", 0.0), mu = p.number("mu", 1.0);
      reject_unused(p);
      const DirichletResult d = dirichlet_energy(f.u, alpha, gamma, mu);
      item.values = {{"value", d.divergent ? kInf : d.value},
                     {"truncated", d.truncated},
                     {"tail_ratio", d.tail_ratio},
                     {"divergent", d.divergent ? 1.0 : 0.0}};
      Table t{req.name, {"radius", "integral"}, {}};
      for (std::size_t k = 0; k < d.partial.size(); ++k) t.rows.push_back({1.0 - std::ldexp(1.0, -static_cast<int>(k) - 1), d.partial[k]});
      item.tables.push_back(std::move(t));
    } else if (req.kind == "growth-profile") {
      const std::string which = p.text("normalizer", "makarov");
      GrowthNormalizer kind;
      if (which == "makarov") kind = GrowthNormalizer::Makarov;
      else if (which == "korenblum") kind = GrowthNormalizer::Korenblum;
      else config_error("unknown normalizer '" + which + "'");
      const int axis = static_cast<int>(p.number("axis", 0));
      if (axis < 0 || axis >= n) config_error("axis out of range");
      std::vector<double> radii = p.numbers("radii", {});
      if (radii.empty())
        for (int k = 1; k <= 20; ++k) radii.push_back(1.0 - std::pow(10.0, -0.25 * k));
      reject_unused(p);
      Table t{req.name, {"r", "value", "normalizer", "ratio"}, {}};
      double sup_ratio = 0.0;
      for (const GrowthEntry& e : radial_growth_profile(f.u, unit_vector(n, axis), radii, kind)) {
        t.rows.push_back({e.r, e.value, e.defined ? e.normalizer : std::numeric_limits<double>::quiet_NaN(),
                          e.defined ? e.ratio : std::numeric_limits<double>::quiet_NaN()});
        if (e.defined) sup_ratio = std::max(sup_ratio, e.ratio);
      }
      item.values = {{"sup_ratio", sup_ratio}};
      item.tables.push_back(std::move(t));
    } else {
      config_error("unknown functional kind '" + req.kind + "'");
    }
  });
}

template <class F>
void parallel_for(std::size_t count, std::size_t workers, F&& body) {
  workers = std::max<std::size_t>(1, std::min(workers, count));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) body(i);
    });
  for (auto& t : pool) t.join();
}

std::string utc_timestamp() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// ---------------------------------------------------------------------------
// Serialization

json pairs_json(const std::vector<std::pair<std::string, std::string>>& v) {
  json o = json::object();
  for (const auto& [k, s] : v) o[k] = s;
  return o;
}

json values_json(const std::vector<std::pair<std::string, double>>& v) {
  json o = json::object();
  for (const auto& [k, d] : v) o[k] = jnum(d);
  return o;
}

json table_json(const Table& t) {
  json rows = json::array();
  for (const auto& r : t.rows) {
    json row = json::array();
    for (double d : r) row.push_back(jnum(d));
    rows.push_back(std::move(row));
  }
  return json{{"name", t.name}, {"columns", t.columns}, {"rows", std::move(rows)}};
}

Table table_from(const json& j) {
  Table t;
  t.name = j.at("name").get<std::string>();
  t.columns = j.at("columns").get<std::vector<std::string>>();
  for (const json& r : j.at("rows")) {
    std::vector<double> row;
    for (const json& d : r) row.push_back(from_jnum(d));
    t.rows.push_back(std::move(row));
  }
  return t;
}

json verdict_json(const Verdict& v) {
  return json{{"theorem", v.theorem},
              {"status", to_string(v.status)},
              {"pass", v.pass},
              {"samples", v.samples},
              {"max_violation", jnum(v.max_violation)},
              {"tolerance", jnum(v.tolerance)},
              {"params", pairs_json(v.params)},
              {"constants", values_json(v.constants)},
              {"message", v.message}};
}

VerdictStatus status_from(const std::string& s) {
  for (auto st : {VerdictStatus::Pass, VerdictStatus::Fail, VerdictStatus::Unstable, VerdictStatus::HypothesisError,
                  VerdictStatus::Error})
    if (to_string(st) == s) return st;
  config_error("unknown verdict status '" + s + "'");
}

std::vector<std::pair<std::string, std::string>> pairs_from(const json& o) {
  std::vector<std::pair<std::string, std::string>> v;
  for (const auto& [k, s] : o.items()) v.emplace_back(k, s.get<std::string>());
  return v;
}

std::vector<std::pair<std::string, double>> values_from(const json& o) {
  std::vector<std::pair<std::string, double>> v;
  for (const auto& [k, d] : o.items()) v.emplace_back(k, from_jnum(d));
  return v;
}

std::string file_stem(const ReportItem& item, const Table& t) {
  char idx[16];
  std::snprintf(idx, sizeof idx, "%03zu", item.index);
  std::string s = std::string(idx) + "-" + item.name;
  if (t.name != item.name) s += "-" + t.name;
  for (char& c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '.' || c == '_')) c = '_';
  return s;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::Io, "cannot write " + path.string());
  out << content;
  if (!out) fail(ErrorKind::Io, "cannot write " + path.string());
}

}  // namespace

// ---------------------------------------------------------------------------

const ParamValue* Params::find(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) return nullptr;
  used_.insert(key);
  return &it->second;
}

double Params::number(const std::string& key, double fallback) const {
  const ParamValue* v = find(key);
  if (!v) return fallback;
  if (const double* d = std::get_if<double>(v)) return *d;
  if (const std::string* s = std::get_if<std::string>(v)) {
    if (*s == "inf") return kInf;
  }
  config_error("parameter " + key + " must be a number");
}

std::string Params::text(const std::string& key, const std::string& fallback) const {
  const ParamValue* v = find(key);
  if (!v) return fallback;
  if (const std::string* s = std::get_if<std::string>(v)) return *s;
  config_error("parameter " + key + " must be a string");
}

std::vector<double> Params::numbers(const std::string& key, const std::vector<double>& fallback) const {
  const ParamValue* v = find(key);
  if (!v) return fallback;
  if (const auto* a = std::get_if<std::vector<double>>(v)) return *a;
  if (const double* d = std::get_if<double>(v)) return {*d};
  config_error("parameter " + key + " must be an array of numbers");
}

bool Params::flag(const std::string& key, bool fallback) const {
  const ParamValue* v = find(key);
  if (!v) return fallback;
  if (const bool* b = std::get_if<bool>(v)) return *b;
  config_error("parameter " + key + " must be a boolean");
}

std::vector<std::string> Params::unused() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : values_)
    if (!used_.count(k)) out.push_back(k);
  return out;
}

RunConfig parse_config(const std::string& text, ConfigFormat format) {
  if (format == ConfigFormat::Auto) {
    const auto pos = text.find_first_not_of(" \t\r\n");
    format = pos != std::string::npos && text[pos] == '{' ? ConfigFormat::Json : ConfigFormat::Toml;
  }
  json root;
  if (format == ConfigFormat::Json) {
    try {
      root = json::parse(text);
    } catch (const json::exception& e) {
      config_error(std::string("invalid JSON config: ") + e.what());
    }
  } else {
    try {
      const toml::table tbl = toml::parse(text);
      std::ostringstream os;
      os << toml::json_formatter{tbl};
      root = json::parse(os.str());
    } catch (const toml::parse_error& e) {
      std::ostringstream os;
      os << "invalid TOML config: " << e.description() << " at line " << e.source().begin.line << ", column "
         << e.source().begin.column;
      config_error(os.str());
    }
  }
  return config_from_json(root);
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Io, "cannot read config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  const bool is_json = fs::path(path).extension() == ".json";
  return parse_config(ss.str(), is_json ? ConfigFormat::Json : ConfigFormat::Toml);
}

std::string config_to_json(const RunConfig& c) {
  json root;
  root["seed"] = c.seed;
  root["workers"] = c.workers;
  root["output"] = c.output_dir;
  root["quadrature"] = {{"circle_nodes", c.orders.circle_nodes},
                        {"sphere_polar", c.orders.sphere_polar},
                        {"sphere_azimuth", c.orders.sphere_azimuth},
                        {"radial_nodes", c.orders.radial_nodes}};
  json probs = json::array(), funcs = json::array(), checks = json::array();
  for (const auto& p : c.problems) {
    json o{{"name", p.name}};
    o.update(params_json(p.params));
    probs.push_back(std::move(o));
  }
  for (const auto& f : c.functionals) {
    json o{{"name", f.name}, {"kind", f.kind}};
    o.update(params_json(f.params));
    funcs.push_back(std::move(o));
  }
  for (const auto& ch : c.checks) {
    json o{{"name", ch.name}, {"theorem", ch.theorem}};
    o.update(params_json(ch.params));
    checks.push_back(std::move(o));
  }
  root["problems"] = std::move(probs);
  root["functionals"] = std::move(funcs);
  root["checks"] = std::move(checks);
  return root.dump(2);
}

const std::vector<std::string>& theorem_ids() {
  static const std::vector<std::string> ids{"prop-1.1", "thm-1.2", "thm-1.3", "thm-1.4", "thm-1.5", "cor-1.5",
                                            "thm-1.6",  "thm-1.7", "lem-2.1", "lem-2.3", "lem-2.5", "lem-lemx",
                                            "lem-cw4",  "lem-cw5", "thm-B",   "lem-5"};
  return ids;
}

RunConfig default_config() {
  RunConfig c;
  auto check = [&](const std::string& th, std::vector<std::pair<std::string, ParamValue>> kv) {
    Params p;
    for (auto& [k, v] : kv) p.set(k, v);
    c.checks.push_back({th, th, std::move(p)});
  };
  const ParamValue yukawa = std::string("radial-yukawa");
  check("prop-1.1", {{"field", yukawa}, {"dimension", 3.0}, {"lambda", 1.0}});
  check("thm-1.2", {{"field", yukawa}, {"dimension", 3.0}, {"lambda", 0.5}});
  check("thm-1.3", {{"map", std::string("yukawa-pair")}});
  check("thm-1.4", {{"field", yukawa}, {"dimension", 3.0}, {"lambda", 1.0}});
  check("thm-1.5", {{"field", yukawa}, {"dimension", 3.0}, {"lambda", 0.3}, {"a2", 0.3}, {"b2", 1.0}});
  check("cor-1.5", {{"field", yukawa}, {"dimension", 3.0}, {"lambda", 0.3}});
  check("thm-1.6", {{"field", yukawa}, {"dimension", 3.0}, {"lambda", 1.0}});
  check("thm-1.7", {{"field", yukawa}, {"dimension", 3.0}, {"lambda", 0.5}});
  check("lem-2.1", {{"field", yukawa}, {"dimension", 3.0}, {"lambda", 1.0}, {"nu", 3.0}});
  check("lem-2.3", {{"field", yukawa}, {"dimension", 2.0}, {"lambda", 1.0}});
  check("lem-2.5", {{"field", yukawa}, {"dimension", 2.0}, {"lambda", 1.0}});
  check("lem-lemx", {});
  check("lem-cw4", {{"field", std::string("x1x2")}, {"dimension", 2.0}});
  check("lem-cw5", {{"field", yukawa}, {"dimension", 3.0}, {"lambda", 1.0}});
  check("thm-B", {});
  check("lem-5", {});
  return c;
}

int Report::exit_code() const {
  bool errored = false, failed = false;
  for (const ReportItem& it : items) {
    if (it.verdict) {
      if (it.verdict->status == VerdictStatus::Error) errored = true;
      else if (!it.verdict->pass) failed = true;
    } else if (it.status == "error") {
      errored = true;
    }
  }
  return errored ? 1 : failed ? 2 : 0;
}

Report run(const RunConfig& config, const RunOptions& options) {
  Report rep;
  rep.config_json = config_to_json(config);
  rep.seed = options.seed.value_or(config.seed);
  rep.timestamp = utc_timestamp();
  const std::size_t workers = options.workers.value_or(config.workers);

  Context ctx;
  ctx.config = &config;
  for (const auto& p : config.problems) ctx.problems[p.name] = &p;

  std::vector<const CheckRequest*> checks;
  if (options.checks)
    for (const auto& c : config.checks)
      if (options.theorem.empty() || c.theorem == options.theorem) checks.push_back(&c);

  // problems referenced by later items are solved even when not requested
  std::set<std::string> needed;
  auto note = [&](const Params& p) {
    if (!p.has("field")) return;
    const auto& v = p.values().at("field");
    if (const auto* s = std::get_if<std::string>(&v); s && s->rfind("solution:", 0) == 0) needed.insert(s->substr(9));
  };
  if (options.functionals)
    for (const auto& f : config.functionals) note(f.params);
  for (const auto* c : checks) note(c->params);

  std::vector<const ProblemSpec*> probs;
  for (const auto& p : config.problems)
    if (options.problems || needed.count(p.name)) probs.push_back(&p);

  std::vector<ReportItem> solved(probs.size());
  std::vector<std::shared_ptr<const SolutionField>> fields(probs.size());
  parallel_for(probs.size(), workers, [&](std::size_t i) {
    solved[i] = run_problem_item(*probs[i], item_seed(rep.seed, i), fields[i]);
  });
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (fields[i]) ctx.solutions[probs[i]->name] = fields[i];
    else ctx.solve_errors[probs[i]->name] = solved[i].message;
    if (options.problems) rep.items.push_back(std::move(solved[i]));
  }

  std::vector<const FunctionalRequest*> funcs;
  if (options.functionals)
    for (const auto& f : config.functionals) funcs.push_back(&f);
  const std::size_t base = rep.items.size();
  std::vector<ReportItem> rest(funcs.size() + checks.size());
  parallel_for(rest.size(), workers, [&](std::size_t i) {
    const std::uint64_t seed = item_seed(rep.seed, base + i);
    rest[i] = i < funcs.size() ? run_functional_item(*funcs[i], ctx, seed)
                               : run_check_item(*checks[i - funcs.size()], ctx, seed);
  });
  for (auto& it : rest) rep.items.push_back(std::move(it));
  for (std::size_t i = 0; i < rep.items.size(); ++i) rep.items[i].index = i;
  return rep;
}

std::string report_to_json(const Report& r, bool include_volatile) {
  json root;
  root["version"] = r.version;
  root["seed"] = r.seed;
  root["config"] = json::parse(r.config_json);
  json items = json::array();
  std::map<std::string, std::size_t> counts;
  for (const ReportItem& it : r.items) {
    json o{{"index", it.index}, {"kind", it.kind}, {"name", it.name}, {"status", it.status}, {"message", it.message}};
    o["params"] = pairs_json(it.params);
    o["values"] = values_json(it.values);
    if (it.verdict) o["verdict"] = verdict_json(*it.verdict);
    json tables = json::array();
    for (const Table& t : it.tables) tables.push_back(table_json(t));
    o["tables"] = std::move(tables);
    items.push_back(std::move(o));
    ++counts[it.status];
  }
  root["items"] = std::move(items);
  json summary{{"items", r.items.size()}, {"exit_code", r.exit_code()}};
  for (const auto& [k, n] : counts) summary[k] = n;
  root["summary"] = std::move(summary);
  if (include_volatile) {
    json runtimes = json::array();
    for (const ReportItem& it : r.items) runtimes.push_back(it.runtime_seconds);
    root["volatile"] = {{"timestamp", r.timestamp}, {"runtimes", std::move(runtimes)}};
  }
  return root.dump(2) + "\n";
}

Report report_from_json(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    config_error(std::string("invalid report JSON: ") + e.what());
  }
  Report r;
  r.version = root.at("version").get<std::string>();
  r.seed = root.at("seed").get<std::uint64_t>();
  r.config_json = root.at("config").dump(2);
  for (const json& o : root.at("items")) {
    ReportItem it;
    it.index = o.at("index").get<std::size_t>();
    it.kind = o.at("kind").get<std::string>();
    it.name = o.at("name").get<std::string>();
    it.status = o.at("status").get<std::string>();
    it.message = o.at("message").get<std::string>();
    it.params = pairs_from(o.at("params"));
    it.values = values_from(o.at("values"));
    for (const json& t : o.at("tables")) it.tables.push_back(table_from(t));
    if (o.contains("verdict")) {
      const json& v = o["verdict"];
      Verdict vd;
      vd.theorem = v.at("theorem").get<std::string>();
      vd.status = status_from(v.at("status").get<std::string>());
      vd.pass = v.at("pass").get<bool>();
      vd.samples = v.at("samples").get<std::size_t>();
      vd.max_violation = from_jnum(v.at("max_violation"));
      vd.tolerance = from_jnum(v.at("tolerance"));
      vd.params = pairs_from(v.at("params"));
      vd.constants = values_from(v.at("constants"));
      vd.message = v.at("message").get<std::string>();
      vd.tables = it.tables;
      it.verdict = std::move(vd);
    }
    r.items.push_back(std::move(it));
  }
  if (root.contains("volatile")) {
    const json& vol = root["volatile"];
    r.timestamp = vol.value("timestamp", "");
    const json& rt = vol.at("runtimes");
    for (std::size_t i = 0; i < r.items.size() && i < rt.size(); ++i) {
      r.items[i].runtime_seconds = rt[i].get<double>();
      if (r.items[i].verdict) r.items[i].verdict->runtime_seconds = r.items[i].runtime_seconds;
    }
  }
  return r;
}

std::string table_to_csv(const Table& t) {
  std::string s;
  for (std::size_t i = 0; i < t.columns.size(); ++i) s += (i ? "," : "") + t.columns[i];
  s += "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) s += (i ? "," : "") + num(row[i]);
    s += "\n";
  }
  return s;
}

std::string table_to_svg(const Table& t, const std::vector<std::string>& curves) {
  constexpr double width = 640, height = 400, margin = 50;
  std::vector<std::size_t> cols;
  for (const auto& c : curves) {
    auto it = std::find(t.columns.begin(), t.columns.end(), c);
    if (it == t.columns.end()) config_error("table " + t.name + " has no column " + c);
    cols.push_back(static_cast<std::size_t>(it - t.columns.begin()));
  }
  double x0 = kInf, x1 = -kInf, y0 = kInf, y1 = -kInf;
  for (const auto& row : t.rows) {
    if (!std::isfinite(row[0])) continue;
    x0 = std::min(x0, row[0]);
    x1 = std::max(x1, row[0]);
    for (std::size_t c : cols)
      if (std::isfinite(row[c])) {
        y0 = std::min(y0, row[c]);
        y1 = std::max(y1, row[c]);
      }
  }
  if (!(x1 > x0)) x1 = x0 + 1.0;
  if (!(y1 > y0)) y1 = y0 + 1.0;
  auto px = [&](double x) { return margin + (x - x0) / (x1 - x0) * (width - 2 * margin); };
  auto py = [&](double y) { return height - margin - (y - y0) / (y1 - y0) * (height - 2 * margin); };
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\">\n";
  os << "<title>" << t.name << "</title>\n";
  os << "<rect x=\"" << margin << "\" y=\"" << margin << "\" width=\"" << width - 2 * margin << "\" height=\""
     << height - 2 * margin << "\" fill=\"none\" stroke=\"#888\"/>\n";
  os << "<text x=\"" << margin << "\" y=\"" << height - 15 << "\" font-size=\"12\">" << t.columns[0] << " in ["
     << num(x0) << ", " << num(x1) << "]</text>\n";
  os << "<text x=\"" << margin << "\" y=\"30\" font-size=\"12\">y in [" << num(y0) << ", " << num(y1) << "]</text>\n";
  for (std::size_t k = 0; k < cols.size(); ++k) {
    os << "<polyline fill=\"none\" stroke=\"" << colors[k % 4] << "\" stroke-width=\"1.5\" points=\"";
    bool first = true;
    for (const auto& row : t.rows) {
      if (!std::isfinite(row[0]) || !std::isfinite(row[cols[k]])) continue;
      os << (first ? "" : " ") << num(px(row[0])) << "," << num(py(row[cols[k]]));
      first = false;
    }
    os << "\"><title>" << curves[k] << "</title></polyline>\n";
    os << "<text x=\"" << width - margin - 100 << "\" y=\"" << margin + 16 * (k + 1) << "\" font-size=\"12\" fill=\""
       << colors[k % 4] << "\">" << curves[k] << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::vector<std::string> emit(const Report& report, const std::string& directory, const EmitOptions& options) {
  std::vector<std::string> written;
  const fs::path dir(directory);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) fail(ErrorKind::Io, "cannot create " + dir.string() + ": " + ec.message());
  write_file(dir / "report.json", report_to_json(report));
  written.push_back((dir / "report.json").string());
  for (const ReportItem& it : report.items) {
    for (const Table& t : it.tables) {
      const std::string stem = file_stem(it, t);
      if (options.tables) {
        fs::create_directories(dir / "tables", ec);
        if (ec) fail(ErrorKind::Io, "cannot create " + (dir / "tables").string());
        write_file(dir / "tables" / (stem + ".csv"), table_to_csv(t));
        written.push_back((dir / "tables" / (stem + ".csv")).string());
      }
      const bool growth = std::find(t.columns.begin(), t.columns.end(), "rhs_bound") != t.columns.end();
      if (options.plots && growth) {
        fs::create_directories(dir / "plots", ec);
        if (ec) fail(ErrorKind::Io, "cannot create " + (dir / "plots").string());
        write_file(dir / "plots" / (stem + ".svg"), table_to_svg(t, {"M_nu", "rhs_bound"}));
        written.push_back((dir / "plots" / (stem + ".svg")).string());
      }
    }
  }
  return written;
}

}  // namespace ellab
