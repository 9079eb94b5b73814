#pragma once

#include "cdap/bregman.hpp"
#include "cdap/problems.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace cdap::cli {

/// Problem family plus its numeric parameters (n, density, m, p, r, q).
struct ProblemConfig {
  std::string family;
  std::map<std::string, double> params;
  std::vector<std::uint64_t> seeds{0};
};

struct OutputConfig {
  std::string dir = "out";
  bool plot = false;
  bool wall_clock_in_trace = false;
  int parallel = 0;  // bench workers; 0 = hardware concurrency
};

struct RunConfig {
  ProblemConfig problem;
  std::string method = "aphl";
  KernelKind kernel = KernelKind::Entropy;
  SolverConfig solver;
  OutputConfig output;
};

struct BenchCell {
  std::string name;
  ProblemConfig problem;
  std::vector<std::string> methods;
};

struct BenchConfig {
  std::vector<BenchCell> cells;
  KernelKind kernel = KernelKind::Entropy;
  SolverConfig solver;
  OutputConfig output;
};

/// Command-line overrides shared by both subcommands.
struct Overrides {
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  bool plot = false;
};

/// Strict YAML loaders: unknown keys and ill-typed values throw
/// ErrorCode::Configuration naming the offending key.
RunConfig load_run_config(const std::string& path);
BenchConfig load_bench_config(const std::string& path);

RunConfig parse_run_config(const std::string& yaml_text);
BenchConfig parse_bench_config(const std::string& yaml_text);

void apply(const Overrides& o, RunConfig& cfg);
void apply(const Overrides& o, BenchConfig& cfg);

bool is_method(const std::string& name);

ProblemInstance make_instance(const ProblemConfig& problem, std::uint64_t seed);

/// Runs `method` on the instance. Throws ErrorCode::Unsupported when the
/// method does not apply (APM without a closed-form projection onto M,
/// Bregman on a set the kernel does not serve).
SolveResult run_method(const std::string& method, const ProblemInstance& inst,
                       KernelKind kernel, const SolverConfig& cfg);

}  // namespace cdap::cli
