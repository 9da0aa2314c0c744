// rsdlab: command-line front end.
//
// Exit status: 0 success, 1 invalid input or failed check, 2 usage error.

#include <rsdlab/rsdlab.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

using namespace rsdlab;
using nlohmann::json;

namespace {

// Thrown for bad flag combinations or values found after parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown when input fails validation or a verification does not hold.
struct CheckFailed : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string in, out, objective, method, family, setting, reference, inequality;
  std::vector<std::string> params;
  std::optional<int> n;
  std::string eps = "1/2", delta = "1/10";
  std::optional<long> k;
  std::optional<int> lambda;
  std::uint64_t seed = 0;
  std::uint64_t instance_seed = 0;
  long trials = 100;
  int workers = 1;
  std::optional<int> oracle_cap;
};

std::string show(const Rational& r) { return to_fraction_string(r) + " (" + to_decimal_string(r) + ")"; }

json rational_json(const Rational& r) { return {{"fraction", to_fraction_string(r)}, {"decimal", to_decimal_string(r)}}; }

Rational parse_param(const std::string& text, const char* flag) {
  try {
    return parse_rational(text);
  } catch (const ParseError& e) {
    throw UsageError(std::string(flag) + ": " + e.what());
  }
}

Rational eps_of(const Options& o) {
  Rational e = parse_param(o.eps, "--eps");
  if (e <= 0 || e > 1) throw UsageError("--eps must lie in (0, 1]");
  return e;
}

Rational delta_of(const Options& o) {
  Rational d = parse_param(o.delta, "--delta");
  if (d <= 0 || d > 1) throw UsageError("--delta must lie in (0, 1]");
  return d;
}

int resolve_cap(const Options& o) {
  int cap = oracle_cap_from_env();
  if (o.oracle_cap) cap = *o.oracle_cap;
  if (cap > kDefaultOracleCap)
    std::cerr << "warning: oracle cap " << cap << " allows up to " << factorial(std::min(cap, kHardOracleCap)).str()
              << " orderings; enumeration time grows factorially\n";
  return cap;
}

AssignmentInstance load(const Options& o) {
  if (o.in.empty()) throw UsageError("--in is required");
  AssignmentInstance I = [&] {
    try {
      return read_instance_file(o.in);
    } catch (const InstanceFormatError& e) {
      throw CheckFailed(e.what());
    }
  }();
  auto v = validate(I);
  if (!v.ok()) {
    std::ostringstream msg;
    msg << o.in << ": invalid instance";
    for (const auto& x : v.violations) msg << "\n  " << x.kind << ": " << x.detail;
    throw CheckFailed(msg.str());
  }
  return I;
}

Objective objective_for(const AssignmentInstance& I, const std::string& name) {
  if (name.empty()) {
    if (!I.has_cardinal_payoff()) throw UsageError("abstract instances carry no objective");
    return default_objective(I);
  }
  Objective obj = name == "welfare" ? Objective::Welfare : Objective::Cost;
  try {
    require_objective(I, obj);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return obj;
}

void write_out(const std::string& path, const std::string& text) {
  if (path.empty()) return;
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << text;
}

void print_matrix(std::ostream& os, const char* title, const CountMatrix& M) {
  os << title << "\n";
  for (const auto& row : M) {
    os << " ";
    for (auto v : row) os << ' ' << std::setw(8) << v;
    os << "\n";
  }
}

void print_matrix(std::ostream& os, const char* title, const RationalMatrix& M) {
  os << title << "\n";
  for (const auto& row : M) {
    os << " ";
    for (const auto& v : row) os << ' ' << std::setw(10) << to_fraction_string(v);
    os << "\n";
  }
}

json rational_matrix_json(const RationalMatrix& M) {
  json rows = json::array();
  for (const auto& row : M) {
    json r = json::array();
    for (const auto& x : row) r.push_back(to_fraction_string(x));
    rows.push_back(std::move(r));
  }
  return rows;
}

json big_json(const BigInt& v) { return v.str(); }

// --- subcommands ---------------------------------------------------------

void cmd_gen(const Options& o) {
  auto family = family_from_string(o.family);
  if (!family) throw UsageError("--family must be one of bernoulli, worst-case-line, random-value, "
                                "random-metric-line, random-abstract");
  if (!o.n) throw UsageError("--n is required");
  const std::string text = write_instance(generate({*family, *o.n, o.seed}));
  if (o.out.empty())
    std::cout << text;
  else
    write_out(o.out, text);
}

void cmd_exact(const Options& o) {
  auto I = load(o);
  std::optional<Objective> obj;
  if (I.has_cardinal_payoff()) obj = objective_for(I, o.objective);
  else if (!o.objective.empty()) throw UsageError("abstract instances carry no objective");
  auto s = enumerate(I, obj, {resolve_cap(o), o.workers});
  const bool ds = is_doubly_stochastic(s);

  std::cout << "n            " << s.n << "\n"
            << "orderings    " << s.orderings.str() << "\n";
  if (obj)
    std::cout << "objective    " << to_string(*obj) << "\n"
              << "mean         " << show(s.mean) << "\n"
              << "second moment " << show(s.second_moment) << "\n"
              << "variance     " << show(s.variance) << "\n";
  print_matrix(std::cout, "L (agent x item)", s.L);
  print_matrix(std::cout, "P (agent x item)", s.P);
  std::cout << "doubly stochastic: " << (ds ? "yes" : "no") << "\n";

  json doc = {{"n", s.n}, {"orderings", big_json(s.orderings)}, {"L", s.L}, {"P", rational_matrix_json(s.P)},
              {"doubly_stochastic", ds}};
  if (obj) {
    doc["objective"] = to_string(*obj);
    doc["mean"] = rational_json(s.mean);
    doc["second_moment"] = rational_json(s.second_moment);
    doc["variance"] = rational_json(s.variance);
  }
  write_out(o.out, doc.dump(2) + "\n");
  if (!ds) throw CheckFailed("lottery is not doubly stochastic");
}

void cmd_opt(const Options& o) {
  auto I = load(o);
  const Objective obj = objective_for(I, o.objective);
  auto r = solve_opt(I, obj);
  std::cout << "objective  " << to_string(obj) << "\n"
            << "OPT        " << show(r.objective_value) << "\n"
            << "matching  ";
  for (int a = 1; a <= r.matching.size(); ++a) std::cout << ' ' << a << "->" << r.matching.item_of(a);
  std::cout << "\n";
  write_out(o.out, json{{"objective", to_string(obj)},
                        {"opt", rational_json(r.objective_value)},
                        {"matching", r.matching.assign()}}
                       .dump(2) + "\n");
}

struct Plan {
  long k = 1;
  int lambda = 1;
  bool median = false;
  std::optional<SampleSizePlan> from_method;
};

Plan plan_of(const Options& o, int n) {
  Plan p;
  if (!o.method.empty()) {
    auto m = method_from_string(o.method);
    if (!m) throw UsageError("unknown --method " + o.method);
    if (o.k || o.lambda) throw UsageError("give either --method or --k/--lambda, not both");
    auto plan = sample_size(*m, n, eps_of(o), delta_of(o));
    p.k = static_cast<long>(plan.k);
    p.median = plan.lambda.has_value();
    p.lambda = plan.lambda ? static_cast<int>(*plan.lambda) : 1;
    p.from_method = plan;
    return p;
  }
  if (!o.k) throw UsageError("give --k (and optionally --lambda) or --method");
  p.k = *o.k;
  if (o.lambda) {
    p.lambda = *o.lambda;
    p.median = true;
  }
  return p;
}

void cmd_estimate(const Options& o) {
  auto I = load(o);
  const Objective obj = objective_for(I, o.objective);
  PreparedInstance P(I);
  const Plan plan = plan_of(o, P.n());
  auto r = plan.median ? estimate_median_of_means(P, obj, plan.k, plan.lambda, o.seed, o.workers)
                       : estimate_mean(P, obj, plan.k, o.seed, o.workers);
  std::cout << "objective  " << to_string(obj) << "\n"
            << "estimator  " << (plan.median ? "median-of-means" : "mean") << "\n"
            << "k          " << r.k << "\n"
            << "lambda     " << r.lambda << "\n"
            << "seed       " << r.seed << "\n"
            << "estimate   " << to_decimal_string(r.estimate) << "\n";
  if (r.lambda > 1) {
    std::cout << "runs      ";
    for (double x : r.run_values) std::cout << ' ' << to_decimal_string(x);
    std::cout << "\n";
  }
  std::cout << "wall time  " << std::fixed << std::setprecision(3) << r.wall_time << " s\n";
  json doc = {{"objective", to_string(obj)}, {"k", r.k},          {"lambda", r.lambda},
              {"seed", r.seed},              {"estimate", r.estimate}, {"run_values", r.run_values},
              {"wall_time", r.wall_time}};
  if (plan.from_method) doc["method"] = to_string(plan.from_method->method);
  write_out(o.out, doc.dump(2) + "\n");
}

json plan_json(const SampleSizePlan& p) {
  json j = {{"method", to_string(p.method)},
            {"n", p.n},
            {"eps", rational_json(p.eps)},
            {"delta", rational_json(p.delta)},
            {"k", p.k},
            {"k_raw", p.k_raw.str(20)}};
  if (p.lambda) {
    j["lambda"] = *p.lambda;
    j["lambda_raw"] = p.lambda_raw->str(20);
  }
  return j;
}

void cmd_bounds(const Options& o) {
  if (!o.inequality.empty()) {
    auto which = inequality_from_string(o.inequality);
    if (!which) throw UsageError("unknown --inequality " + o.inequality);
    BoundParams q;
    for (const auto& kv : o.params) {
      auto eq = kv.find('=');
      if (eq == std::string::npos) throw UsageError("--param expects name=value, got " + kv);
      const std::string name = kv.substr(0, eq);
      const double value = to_double(parse_param(kv.substr(eq + 1), "--param"));
      std::optional<double>* slot = name == "t"                   ? &q.t
                                    : name == "alpha"             ? &q.alpha
                                    : name == "beta"              ? &q.beta
                                    : name == "mu"                ? &q.mu
                                    : name == "sum_variance"      ? &q.sum_variance
                                    : name == "sum_range_squares" ? &q.sum_range_squares
                                    : name == "variance"          ? &q.variance
                                    : name == "eta"               ? &q.eta
                                    : name == "p"                 ? &q.p
                                    : name == "k"                 ? &q.k
                                                                  : nullptr;
      if (!slot) throw UsageError("unknown bound parameter " + name);
      *slot = value;
    }
    BoundValue b;
    try {
      b = bound_value(*which, q);
    } catch (const DomainError& e) {
      throw UsageError(e.what());
    }
    const char* kind = b.kind == BoundKind::UpperTail ? "upper-tail" : b.kind == BoundKind::LowerTail ? "lower-tail"
                                                                                                       : "variance";
    std::cout << o.inequality << " (" << kind << "): " << to_decimal_string(b.value) << (b.vacuous ? " [vacuous]" : "")
              << "\n";
    write_out(o.out, json{{"inequality", o.inequality}, {"kind", kind}, {"value", b.value}, {"vacuous", b.vacuous}}
                             .dump(2) + "\n");
    return;
  }

  if (!o.n) throw UsageError("--n is required");
  const Rational eps = eps_of(o), delta = delta_of(o);
  std::vector<Method> methods;
  if (o.method.empty()) {
    methods.assign(std::begin(kAllMethods), std::end(kAllMethods));
  } else {
    auto m = method_from_string(o.method);
    if (!m) throw UsageError("unknown --method " + o.method);
    methods.push_back(*m);
  }
  std::cout << "n=" << *o.n << "  eps=" << to_fraction_string(eps) << "  delta=" << to_fraction_string(delta) << "\n"
            << std::left << std::setw(24) << "method" << std::setw(14) << "k" << std::setw(8) << "lambda"
            << "k before ceiling\n";
  json plans = json::array();
  for (Method m : methods) {
    auto p = sample_size(m, *o.n, eps, delta);
    std::cout << std::setw(24) << to_string(m) << std::setw(14) << p.k << std::setw(8)
              << (p.lambda ? std::to_string(*p.lambda) : "-") << p.k_raw.str(17) << "\n";
    plans.push_back(plan_json(p));
  }
  json doc = {{"plans", plans}};
  if (*o.n >= 2) {
    auto w = welfare_lower_bound_window(*o.n, eps, to_double(delta));
    std::cout << "welfare lower-bound window: ";
    if (w.applicable)
      std::cout << w.lower.str(17) << " <= k < " << w.upper.str(17) << "\n";
    else
      std::cout << "not applicable (" << w.reason << ")\n";
    doc["lower_bound_window"] = {{"lower", w.lower.str(20)}, {"upper", w.upper.str(20)},
                                 {"applicable", w.applicable}, {"reason", w.reason}};
  }
  write_out(o.out, doc.dump(2) + "\n");
}

void cmd_reduce(const Options& o) {
  auto source = load(o);
  if (source.setting() != Setting::Abstract) throw CheckFailed(o.in + ": reduce needs an abstract instance");
  Setting setting;
  if (o.setting == "value") setting = Setting::Value;
  else if (o.setting == "metric") setting = Setting::Metric;
  else throw UsageError("--setting must be value or metric");

  auto art = run_reduction(source, setting, {resolve_cap(o), o.workers});
  std::cout << "setting       " << to_string(setting) << "\n"
            << "q (bits)      " << art.q << "\n"
            << "scaled total  " << art.scaled_total.str() << "\n";
  print_matrix(std::cout, "decoded L (agent x rank)", art.decoded_L);
  print_matrix(std::cout, "oracle L (agent x rank)", art.oracle_L);
  if (art.top_block) std::cout << "top block     " << art.top_block->str() << "\n";
  std::cout << "round trip    " << (art.round_trip ? "pass" : "fail") << "\n";

  if (!o.out.empty()) write_out(o.out, write_instance(art.built));
  json summary = {{"setting", to_string(setting)}, {"q", art.q},
                  {"scaled_total", big_json(art.scaled_total)}, {"decoded_L", art.decoded_L},
                  {"oracle_L", art.oracle_L},      {"round_trip", art.round_trip}};
  if (art.top_block) summary["top_block"] = big_json(*art.top_block);
  if (!o.out.empty()) write_out(o.out + ".summary.json", summary.dump(2) + "\n");
  if (!art.round_trip) throw CheckFailed("decoded L differs from enumeration");
}

void cmd_coverage(const Options& o) {
  std::optional<AssignmentInstance> I;
  std::string id;
  std::optional<Reference> reference;
  if (!o.in.empty()) {
    if (!o.family.empty()) throw UsageError("give either --in or --family, not both");
    I = load(o);
    id = o.in;
  } else {
    auto family = family_from_string(o.family);
    if (!family) throw UsageError("give --in or a valid --family");
    if (!o.n) throw UsageError("--n is required with --family");
    I = generate({*family, *o.n, o.instance_seed});
    id = o.family + "-n" + std::to_string(*o.n);
    reference = analytic_reference(*family, *o.n);
  }
  if (!o.reference.empty()) {
    Rational r = parse_param(o.reference, "--reference");
    if (r < 0) throw UsageError("--reference must be non-negative");
    reference = Reference{r, ReferenceSource::UserSupplied};
  }
  const Objective obj = objective_for(*I, o.objective);
  PreparedInstance P(*I);
  const Plan plan = plan_of(o, P.n());
  EstimatorConfig cfg;
  if (plan.from_method) {
    cfg = config_from_plan(*plan.from_method);
  } else {
    cfg.kind = plan.median ? EstimatorKind::MedianOfMeans : EstimatorKind::Mean;
    cfg.k = plan.k;
    cfg.lambda = plan.lambda;
    cfg.eps = eps_of(o);
  }
  if (o.trials < 1) throw UsageError("--trials must be at least 1");
  auto r = run_coverage(P, obj, cfg, o.trials, o.seed, reference, o.workers, {resolve_cap(o), o.workers}, id);

  std::cout << "instance        " << r.instance_id << "\n"
            << "objective       " << to_string(obj) << "\n"
            << "estimator       " << (cfg.kind == EstimatorKind::Mean ? "mean" : "median-of-means") << "  k=" << cfg.k
            << "  lambda=" << cfg.lambda;
  if (cfg.method) std::cout << "  (" << to_string(*cfg.method) << ")";
  std::cout << "\n"
            << "epsilon         " << show(cfg.eps) << "\n";
  if (cfg.delta) std::cout << "target delta    " << show(*cfg.delta) << "\n";
  std::cout << "reference       " << show(r.reference.value) << "  [" << to_string(r.reference.source) << "]\n"
            << "master seed     " << r.master_seed << "\n"
            << "trials          " << r.trials << "\n"
            << "failures        " << r.failures << "\n"
            << "empirical rate  " << to_decimal_string(r.empirical_rate) << "\n";
  if (!o.out.empty()) {
    std::ostringstream csv;
    write_coverage_csv(csv, r);
    write_out(o.out, csv.str());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random serial dictatorship: exact lotteries, sampling estimators, bounds and reductions"};
  app.require_subcommand(1);
  Options o;

  auto add_in = [&](CLI::App* s) { s->add_option("--in", o.in, "instance file (JSON)"); };
  auto add_out = [&](CLI::App* s, const char* what) { s->add_option("--out", o.out, what); };
  auto add_objective = [&](CLI::App* s) {
    s->add_option("--objective", o.objective, "welfare or cost (default: from the instance)")
        ->check(CLI::IsMember({"welfare", "cost"}));
  };
  auto add_workers = [&](CLI::App* s) { s->add_option("--workers", o.workers, "worker threads")->check(CLI::Range(1, 1024)); };
  auto add_cap = [&](CLI::App* s) {
    s->add_option("--oracle-cap", o.oracle_cap, "largest n for exact enumeration (also RSDLAB_ORACLE_CAP)")
        ->check(CLI::Range(1, kHardOracleCap));
  };
  auto add_sampling = [&](CLI::App* s) {
    s->add_option("--method", o.method, "sample-size rule supplying k (and lambda)");
    s->add_option("--k", o.k, "samples per run")->check(CLI::PositiveNumber);
    s->add_option("--lambda", o.lambda, "runs for median-of-means")->check(CLI::PositiveNumber);
    s->add_option("--eps", o.eps, "accuracy in (0, 1]");
    s->add_option("--delta", o.delta, "failure probability in (0, 1]");
    s->add_option("--seed", o.seed, "master seed");
  };

  auto* gen = app.add_subcommand("gen", "write an instance from a family");
  gen->add_option("--family", o.family, "bernoulli | worst-case-line | random-value | random-metric-line | random-abstract")
      ->required();
  gen->add_option("--n", o.n, "number of agents")->required()->check(CLI::PositiveNumber);
  gen->add_option("--seed", o.seed, "seed for random families");
  add_out(gen, "instance file (default: standard output)");

  auto* exact = app.add_subcommand("exact", "enumerate all orderings");
  add_in(exact);
  add_objective(exact);
  add_workers(exact);
  add_cap(exact);
  add_out(exact, "summary JSON");

  auto* opt = app.add_subcommand("opt", "optimal matching");
  add_in(opt);
  add_objective(opt);
  add_out(opt, "result JSON");

  auto* estimate = app.add_subcommand("estimate", "sampling estimate of the expected objective");
  add_in(estimate);
  add_objective(estimate);
  add_sampling(estimate);
  add_workers(estimate);
  add_out(estimate, "report JSON");

  auto* bounds = app.add_subcommand("bounds", "sample sizes, lower-bound window, inequality values");
  bounds->add_option("--method", o.method, "one sample-size rule (default: all)");
  bounds->add_option("--n", o.n, "number of agents")->check(CLI::PositiveNumber);
  bounds->add_option("--eps", o.eps, "accuracy in (0, 1]");
  bounds->add_option("--delta", o.delta, "failure probability in (0, 1]");
  bounds->add_option("--inequality", o.inequality, "evaluate one concentration inequality instead");
  bounds->add_option("--param", o.params, "inequality parameter as name=value (repeatable)");
  add_out(bounds, "plans JSON");

  auto* reduce = app.add_subcommand("reduce", "build, total and decode the counting reduction");
  add_in(reduce);
  reduce->add_option("--setting", o.setting, "value or metric")->required()->check(CLI::IsMember({"value", "metric"}));
  add_workers(reduce);
  add_cap(reduce);
  add_out(reduce, "built instance file; a .summary.json is written beside it");

  auto* coverage = app.add_subcommand("coverage", "repeated estimator runs against a reference value");
  add_in(coverage);
  coverage->add_option("--family", o.family, "generate the instance from a family instead of --in");
  coverage->add_option("--n", o.n, "family size")->check(CLI::PositiveNumber);
  coverage->add_option("--instance-seed", o.instance_seed, "seed for random families");
  coverage->add_option("--reference", o.reference, "expected objective, exact (e.g. 1/10)");
  coverage->add_option("--trials", o.trials, "number of trials");
  add_objective(coverage);
  add_sampling(coverage);
  add_workers(coverage);
  add_cap(coverage);
  add_out(coverage, "per-trial CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << "\n" << app.help();
    return 2;
  }

  try {
    if (*gen) cmd_gen(o);
    else if (*exact) cmd_exact(o);
    else if (*opt) cmd_opt(o);
    else if (*estimate) cmd_estimate(o);
    else if (*bounds) cmd_bounds(o);
    else if (*reduce) cmd_reduce(o);
    else if (*coverage) cmd_coverage(o);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const CheckFailed& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
