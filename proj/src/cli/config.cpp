#include "cdap/cli/config.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace cdap::cli {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw Error(ErrorCode::Configuration, msg); }

void check_keys(const YAML::Node& node, const std::string& where, const std::set<std::string>& allowed) {
  if (!node.IsMap()) fail("'" + where + "' must be a mapping");
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (!allowed.count(key)) {
      const std::string path = where.empty() ? key : where + "." + key;
      fail("unknown key '" + path + "'");
    }
  }
}

std::string join(const std::string& where, const std::string& key) {
  return where.empty() ? key : where + "." + key;
}

template <class T>
T read(const YAML::Node& node, const std::string& path) {
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    fail("invalid value for '" + path + "'");
  }
}

const std::map<std::string, std::map<std::string, std::optional<double>>>& family_params() {
  // Parameter name -> default (nullopt = required).
  static const std::map<std::string, std::map<std::string, std::optional<double>>> table = {
      {"correlation", {{"n", std::nullopt}, {"density", 0.1}}},
      {"lowrank_affine", {{"n", std::nullopt}, {"m", std::nullopt}, {"p", std::nullopt}, {"r", std::nullopt}}},
      {"qp_orthant", {{"n", std::nullopt}, {"p", std::nullopt}}},
      {"lq_affine", {{"n", std::nullopt}, {"p", std::nullopt}, {"q", 0.5}}},
      {"toy", {}},
  };
  return table;
}

std::vector<std::uint64_t> read_seeds(const YAML::Node& node, const std::string& path) {
  std::vector<std::uint64_t> out;
  if (node.IsScalar()) {
    out.push_back(read<std::uint64_t>(node, path));
  } else if (node.IsSequence()) {
    for (std::size_t i = 0; i < node.size(); ++i)
      out.push_back(read<std::uint64_t>(node[i], path + "[" + std::to_string(i) + "]"));
  } else {
    fail("'" + path + "' must be an integer or a list of integers");
  }
  if (out.empty()) fail("'" + path + "' must not be empty");
  return out;
}

ProblemConfig parse_problem(const YAML::Node& node, const std::string& where, bool allow_seeds) {
  if (!node || !node.IsMap()) fail("'" + where + "' must be a mapping");
  if (!node["family"]) fail("missing key '" + join(where, "family") + "'");
  ProblemConfig out;
  out.family = read<std::string>(node["family"], join(where, "family"));
  const auto& table = family_params();
  const auto it = table.find(out.family);
  if (it == table.end())
    fail("unknown problem family '" + out.family +
         "' (expected correlation, lowrank_affine, qp_orthant, lq_affine or toy)");

  std::set<std::string> allowed{"family"};
  if (allow_seeds) allowed.insert({"seed", "seeds"});
  for (const auto& [name, def] : it->second) allowed.insert(name);
  check_keys(node, where, allowed);

  for (const auto& [name, def] : it->second) {
    if (node[name]) {
      out.params[name] = read<double>(node[name], join(where, name));
    } else if (def) {
      out.params[name] = *def;
    } else {
      fail("missing key '" + join(where, name) + "' for family " + out.family);
    }
  }
  for (const char* integral : {"n", "m", "p", "r"}) {
    const auto p = out.params.find(integral);
    if (p != out.params.end() && (p->second != std::floor(p->second) || p->second < 0))
      fail("'" + join(where, integral) + "' must be a nonnegative integer");
  }
  if (allow_seeds) {
    if (node["seed"] && node["seeds"]) fail("give either '" + join(where, "seed") + "' or '" + join(where, "seeds") + "'");
    if (node["seed"]) out.seeds = read_seeds(node["seed"], join(where, "seed"));
    if (node["seeds"]) out.seeds = read_seeds(node["seeds"], join(where, "seeds"));
  }
  return out;
}

SolverConfig parse_solver(const YAML::Node& node) {
  SolverConfig cfg;
  if (!node) return cfg;
  check_keys(node, "solver",
             {"kappa", "eta_max", "alpha", "max_linesearch", "tau_rule", "tol", "max_iters",
              "proj_tol_scale", "proj_base_tol", "membership_tol"});
  auto num = [&](const char* key, double& dst) {
    if (node[key]) dst = read<double>(node[key], join("solver", key));
  };
  auto integer = [&](const char* key, int& dst) {
    if (node[key]) dst = read<int>(node[key], join("solver", key));
  };
  num("kappa", cfg.kappa);
  num("eta_max", cfg.eta_max);
  num("alpha", cfg.alpha);
  integer("max_linesearch", cfg.max_linesearch);
  num("tol", cfg.tol);
  integer("max_iters", cfg.max_iters);
  num("proj_tol_scale", cfg.proj_tol_scale);
  num("proj_base_tol", cfg.proj_base_tol);
  num("membership_tol", cfg.membership_tol);
  if (node["tau_rule"]) cfg.tau_rule = tau_rule_from_string(read<std::string>(node["tau_rule"], "solver.tau_rule"));
  cfg.validate();
  return cfg;
}

OutputConfig parse_output(const YAML::Node& node) {
  OutputConfig out;
  if (!node) return out;
  check_keys(node, "output", {"dir", "plot", "wall_clock_in_trace", "parallel"});
  if (node["dir"]) out.dir = read<std::string>(node["dir"], "output.dir");
  if (node["plot"]) out.plot = read<bool>(node["plot"], "output.plot");
  if (node["wall_clock_in_trace"])
    out.wall_clock_in_trace = read<bool>(node["wall_clock_in_trace"], "output.wall_clock_in_trace");
  if (node["parallel"]) out.parallel = read<int>(node["parallel"], "output.parallel");
  if (out.parallel < 0) fail("'output.parallel' must be nonnegative");
  return out;
}

KernelKind parse_kernel(const YAML::Node& node) {
  if (!node) return KernelKind::Entropy;
  return kernel_kind_from_string(read<std::string>(node, "kernel"));
}

std::string parse_method(const YAML::Node& node, const std::string& path) {
  const auto m = read<std::string>(node, path);
  if (!is_method(m)) fail("unknown method '" + m + "' in '" + path + "' (expected aphl, apm, bregman or plain_ap)");
  return m;
}

YAML::Node load_yaml(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    fail(std::string("malformed YAML: ") + e.what());
  }
  if (!root || root.IsNull()) fail("config is empty");
  if (!root.IsMap()) fail("config must be a mapping at the top level");
  return root;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

bool is_method(const std::string& name) {
  return name == "aphl" || name == "apm" || name == "bregman" || name == "plain_ap";
}

RunConfig parse_run_config(const std::string& yaml_text) {
  const YAML::Node root = load_yaml(yaml_text);
  check_keys(root, "", {"problem", "method", "kernel", "solver", "output"});
  RunConfig cfg;
  cfg.problem = parse_problem(root["problem"], "problem", true);
  if (cfg.problem.seeds.size() != 1) fail("'problem.seeds' must hold exactly one seed for run");
  if (root["method"]) cfg.method = parse_method(root["method"], "method");
  cfg.kernel = parse_kernel(root["kernel"]);
  cfg.solver = parse_solver(root["solver"]);
  cfg.output = parse_output(root["output"]);
  return cfg;
}

BenchConfig parse_bench_config(const std::string& yaml_text) {
  const YAML::Node root = load_yaml(yaml_text);
  check_keys(root, "", {"suite", "kernel", "solver", "output"});
  BenchConfig cfg;
  cfg.kernel = parse_kernel(root["kernel"]);
  cfg.solver = parse_solver(root["solver"]);
  cfg.output = parse_output(root["output"]);
  const YAML::Node suite = root["suite"];
  if (!suite || suite.IsNull()) return cfg;
  if (!suite.IsSequence()) fail("'suite' must be a list of cells");
  std::set<std::string> names;
  for (std::size_t i = 0; i < suite.size(); ++i) {
    const std::string where = "suite[" + std::to_string(i) + "]";
    const YAML::Node node = suite[i];
    check_keys(node, where, {"name", "problem", "seeds", "methods"});
    BenchCell cell;
    cell.problem = parse_problem(node["problem"], where + ".problem", false);
    cell.name = node["name"] ? read<std::string>(node["name"], where + ".name")
                             : cell.problem.family + "_" + std::to_string(i);
    if (!names.insert(cell.name).second) fail("duplicate cell name '" + cell.name + "'");
    if (node["seeds"]) cell.problem.seeds = read_seeds(node["seeds"], where + ".seeds");
    if (!node["methods"] || !node["methods"].IsSequence() || node["methods"].size() == 0)
      fail("'" + where + ".methods' must be a nonempty list");
    for (std::size_t j = 0; j < node["methods"].size(); ++j)
      cell.methods.push_back(parse_method(node["methods"][j], where + ".methods[" + std::to_string(j) + "]"));
    cfg.cells.push_back(std::move(cell));
  }
  return cfg;
}

RunConfig load_run_config(const std::string& path) { return parse_run_config(read_file(path)); }
BenchConfig load_bench_config(const std::string& path) { return parse_bench_config(read_file(path)); }

void apply(const Overrides& o, RunConfig& cfg) {
  if (o.out) cfg.output.dir = *o.out;
  if (o.seed) cfg.problem.seeds = {*o.seed};
  if (o.plot) cfg.output.plot = true;
}

void apply(const Overrides& o, BenchConfig& cfg) {
  if (o.out) cfg.output.dir = *o.out;
  if (o.seed)
    for (auto& cell : cfg.cells) cell.problem.seeds = {*o.seed};
  if (o.plot) cfg.output.plot = true;
}

ProblemInstance make_instance(const ProblemConfig& problem, std::uint64_t seed) {
  const auto& p = problem.params;
  auto idx = [&](const char* key) { return static_cast<Index>(std::llround(p.at(key))); };
  if (problem.family == "correlation") return gen_correlation(idx("n"), p.at("density"), seed);
  if (problem.family == "lowrank_affine")
    return gen_lowrank_affine(idx("n"), idx("m"), idx("p"), idx("r"), seed);
  if (problem.family == "qp_orthant") return gen_qp_orthant(idx("n"), idx("p"), seed);
  if (problem.family == "lq_affine") return gen_lq_affine(idx("n"), idx("p"), p.at("q"), seed);
  if (problem.family == "toy") return gen_toy_orthant_affine();
  fail("unknown problem family '" + problem.family + "'");
}

SolveResult run_method(const std::string& method, const ProblemInstance& inst, KernelKind kernel,
                       const SolverConfig& cfg) {
  if (method == "aphl") return solve_aphl(inst.cs, *inst.set, inst.x0, cfg);
  if (method == "plain_ap") return solve_plain_ap(inst.cs, *inst.set, inst.x0, cfg);
  if (method == "apm") {
    if (!inst.affine_projector)
      throw Error(ErrorCode::Unsupported, "apm needs a closed-form projection onto M; " +
                                              inst.meta.family + " has none");
    return solve_apm(inst.cs, *inst.set, inst.affine_projector, inst.x0, cfg);
  }
  if (method == "bregman") {
    const BregmanKernel k(kernel, inst.cs.n);
    if (k.domain_set()->name() != inst.set->name())
      throw Error(ErrorCode::Unsupported, std::string("kernel ") + to_string(kernel) + " serves " +
                                              k.domain_set()->name() + ", not " + inst.set->name());
    const Vector x0 = k.interior(inst.x0) ? inst.x0 : push_to_interior(k, inst.x0);
    return solve_bregman(inst.cs, k, x0, cfg);
  }
  fail("unknown method '" + method + "'");
}

}  // namespace cdap::cli
