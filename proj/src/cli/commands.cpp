#include "cdap/cli/commands.hpp"

#include "cdap/cli/output.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <ostream>
#include <sstream>
#include <thread>

namespace cdap::cli {

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

int exit_code(Status s) {
  switch (s) {
    case Status::Converged: return 0;
    case Status::MaxIters: return 2;
    default: return 3;
  }
}

double median(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

std::string dims_label(const ProblemConfig& p) {
  std::string s;
  for (const auto& [k, v] : p.params) {
    if (!s.empty()) s += ' ';
    s += k + "=" + format_g(v, 6);
  }
  return s;
}

struct Job {
  std::size_t cell;
  std::string method;
  std::uint64_t seed;
};

struct JobResult {
  bool ok = false;
  std::string status;
  int iterations = 0;
  double final_feas = 0.0;
  double seconds = 0.0;
  std::vector<double> residuals;
  std::string error;
};

}  // namespace

int cmd_run(const std::string& config_path, const Overrides& overrides, std::ostream& out,
            std::ostream& err) {
  RunConfig cfg;
  ProblemInstance inst;
  try {
    cfg = load_run_config(config_path);
    apply(overrides, cfg);
    inst = make_instance(cfg.problem, cfg.problem.seeds.front());
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.code() == ErrorCode::Configuration ? 1 : 3;
  }

  SolveResult result;
  const auto start = std::chrono::steady_clock::now();
  try {
    result = run_method(cfg.method, inst, cfg.kernel, cfg.solver);
  } catch (const Error& e) {
    err << "error: " << to_string(e.code()) << ": " << e.what() << '\n';
    return e.code() == ErrorCode::Unsupported || e.code() == ErrorCode::Configuration ? 1 : 3;
  }
  const double wall = seconds_since(start);

  const std::filesystem::path dir(cfg.output.dir);
  try {
    write_file((dir / "trace.csv").string(), trace_csv(result.trace, cfg.output.wall_clock_in_trace));
    write_file((dir / "summary.json").string(),
               summary_json(inst.meta, cfg.method, cfg.kernel, cfg.solver, result, wall).dump(2) + "\n");
    if (cfg.output.plot)
      write_file((dir / "residual.svg").string(),
                 residual_svg({{cfg.method, result.trace.residuals()}},
                              inst.meta.family + " / " + cfg.method));
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }

  out << inst.meta.family << ' ' << cfg.method << ": " << to_string(result.trace.status)
      << " after " << result.trace.iterations() << " iterations, final feas "
      << format_g(result.trace.final_residual(), 3) << ", " << format_g(wall, 3) << " s\n";
  return exit_code(result.trace.status);
}

int cmd_bench(const std::string& config_path, const Overrides& overrides, std::ostream& out,
              std::ostream& err) {
  BenchConfig cfg;
  try {
    cfg = load_bench_config(config_path);
    apply(overrides, cfg);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  if (cfg.cells.empty()) {
    err << "error: benchmark suite is empty\n";
    return 1;
  }

  std::vector<Job> jobs;
  for (std::size_t c = 0; c < cfg.cells.size(); ++c)
    for (const auto& m : cfg.cells[c].methods)
      for (auto seed : cfg.cells[c].problem.seeds) jobs.push_back({c, m, seed});

  const std::filesystem::path dir(cfg.output.dir);
  std::vector<JobResult> results(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      const Job& job = jobs[i];
      const BenchCell& cell = cfg.cells[job.cell];
      JobResult& r = results[i];
      try {
        const ProblemInstance inst = make_instance(cell.problem, job.seed);
        const auto start = std::chrono::steady_clock::now();
        const SolveResult sr = run_method(job.method, inst, cfg.kernel, cfg.solver);
        r.seconds = seconds_since(start);
        r.ok = true;
        r.status = to_string(sr.trace.status);
        r.iterations = sr.trace.iterations();
        r.final_feas = sr.trace.final_residual();
        r.residuals = sr.trace.residuals();
        write_file((dir / "traces" / (cell.name + "__" + job.method + "__seed" + std::to_string(job.seed) + ".csv"))
                       .string(),
                   trace_csv(sr.trace, cfg.output.wall_clock_in_trace));
      } catch (const std::exception& e) {
        const auto* ce = dynamic_cast<const Error*>(&e);
        r.status = ce ? to_string(ce->code()) : "Error";
        r.error = e.what();
      }
    }
  };
  unsigned workers = cfg.output.parallel > 0 ? unsigned(cfg.output.parallel)
                                             : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, unsigned(jobs.size()));
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
  }

  std::ostringstream runs;
  runs << "cell,family,method,seed,status,iterations,final_feas,time_s\n";
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const auto& j = jobs[i];
    const auto& r = results[i];
    runs << cfg.cells[j.cell].name << ',' << cfg.cells[j.cell].problem.family << ',' << j.method << ','
         << j.seed << ',' << r.status << ',' << (r.ok ? std::to_string(r.iterations) : "") << ','
         << (r.ok ? format_g(r.final_feas, 17) : "") << ',' << (r.ok ? format_g(r.seconds, 6) : "") << '\n';
    if (!r.ok)
      err << "warning: " << cfg.cells[j.cell].name << '/' << j.method << "/seed " << j.seed << ": " << r.error
          << '\n';
  }

  std::ostringstream cells_csv;
  cells_csv << "cell,family,dims,method,seeds,converged,iter_median,feas_median,time_median_s\n";
  std::vector<std::vector<std::string>> table{
      {"cell", "dims", "method", "iter", "feas", "time (s)", "converged"}};
  bool every_row = true;
  for (std::size_t c = 0; c < cfg.cells.size(); ++c) {
    const BenchCell& cell = cfg.cells[c];
    std::vector<Series> curves;
    for (const auto& method : cell.methods) {
      std::vector<double> iters, feas, secs;
      int converged = 0, total = 0;
      bool plotted = false;
      for (std::size_t i = 0; i < jobs.size(); ++i) {
        if (jobs[i].cell != c || jobs[i].method != method) continue;
        ++total;
        const auto& r = results[i];
        if (!r.ok) continue;
        iters.push_back(r.iterations);
        feas.push_back(r.final_feas);
        secs.push_back(r.seconds);
        converged += r.status == "Converged";
        if (!plotted) curves.push_back({method + " (seed " + std::to_string(jobs[i].seed) + ")", r.residuals});
        plotted = true;
      }
      if (iters.empty()) every_row = false;
      const std::string conv = std::to_string(converged) + "/" + std::to_string(total);
      cells_csv << cell.name << ',' << cell.problem.family << ',' << dims_label(cell.problem) << ',' << method
                << ',' << total << ',' << converged << ',' << format_g(median(iters), 6) << ','
                << format_g(median(feas), 6) << ',' << format_g(median(secs), 6) << '\n';
      table.push_back({cell.name, dims_label(cell.problem), method, format_g(median(iters), 6),
                       format_g(median(feas), 3), format_g(median(secs), 3), conv});
    }
    if (cfg.output.plot && !curves.empty())
      write_file((dir / (cell.name + ".svg")).string(), residual_svg(curves, cell.name));
  }

  const std::string text = aligned_table(table);
  try {
    write_file((dir / "bench_runs.csv").string(), runs.str());
    write_file((dir / "bench.csv").string(), cells_csv.str());
    write_file((dir / "bench_table.txt").string(), text);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  out << text;
  return every_row ? 0 : 3;
}

}  // namespace cdap::cli
