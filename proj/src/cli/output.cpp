#include "cdap/cli/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace cdap::cli {

std::string format_g(double v, int digits) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

std::string step_label(const IterateRecord& rec) {
  std::string s = to_string(rec.step);
  if (rec.step == StepType::ProjectedGradient && rec.stalled) s += "_stalled";
  if (rec.step == StepType::Bregman && rec.clamped) s += "_clamped";
  return s;
}

std::string trace_csv(const IterateTrace& trace, bool wall_clock) {
  std::ostringstream out;
  out << kTraceHeader << '\n';
  for (const auto& r : trace.records) {
    out << r.k << ',' << format_g(r.residual, 17) << ',' << step_label(r) << ',' << r.ls_depth << ','
        << format_g(r.eta, 17) << ',' << format_g(r.sigma_min_g, 17) << ','
        << (wall_clock ? format_g(r.wall_ms, 6) : std::string("0")) << '\n';
  }
  return out.str();
}

nlohmann::json summary_json(const ProblemMeta& meta, const std::string& method, KernelKind kernel,
                            const SolverConfig& cfg, const SolveResult& result, double wall_seconds) {
  nlohmann::json dims = nlohmann::json::object();
  for (const auto& [k, v] : meta.dims) dims[k] = v;
  int pg = 0, stalled = 0, clamped = 0;
  for (const auto& r : result.trace.records) {
    pg += r.step == StepType::ProjectedGradient;
    stalled += r.stalled;
    clamped += r.clamped;
  }
  nlohmann::json j;
  j["family"] = meta.family;
  j["dims"] = dims;
  j["seed"] = meta.seed;
  j["rng"] = meta.rng;
  j["method"] = method;
  if (method == "bregman") j["kernel"] = to_string(kernel);
  j["status"] = to_string(result.trace.status);
  j["iterations"] = result.trace.iterations();
  j["final_feas"] = result.trace.final_residual();
  j["wall_time_s"] = wall_seconds;
  j["pg_steps"] = pg;
  j["stalled_linesearch_steps"] = stalled;
  j["clamped_steps"] = clamped;
  j["solver"] = {{"kappa", cfg.kappa},
                 {"eta_max", cfg.eta_max},
                 {"alpha", cfg.alpha},
                 {"max_linesearch", cfg.max_linesearch},
                 {"tau_rule", to_string(cfg.tau_rule)},
                 {"tol", cfg.tol},
                 {"max_iters", cfg.max_iters},
                 {"proj_tol_scale", cfg.proj_tol_scale},
                 {"proj_base_tol", cfg.proj_base_tol}};
  if (cfg.tau_rule == TauRule::MinTOne)
    j["notes"] = {"tau(t) = min(t, 1) is a default choice; the method only requires tau strictly increasing with tau(0) = 0"};
  return j;
}

std::string residual_svg(const std::vector<Series>& series, const std::string& title) {
  constexpr double W = 640, H = 400, L = 70, R = 20, T = 40, B = 50;
  constexpr double kFloor = 1e-20;  // exact zeros are drawn at this level
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

  double kmax = 1, ymin = 0, ymax = 0;
  bool first = true;
  for (const auto& s : series) {
    kmax = std::max(kmax, double(s.residuals.size()) - 1);
    for (double r : s.residuals) {
      const double y = std::log10(std::max(r, kFloor));
      if (!std::isfinite(y)) continue;
      ymin = first ? y : std::min(ymin, y);
      ymax = first ? y : std::max(ymax, y);
      first = false;
    }
  }
  ymin = std::floor(ymin);
  ymax = std::ceil(ymax);
  if (ymax <= ymin) ymax = ymin + 1;
  auto px = [&](double k) { return L + (W - L - R) * k / kmax; };
  auto py = [&](double y) { return T + (H - T - B) * (ymax - y) / (ymax - ymin); };

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
    << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << title << "</text>\n";
  o << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
  o << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
  const int ystep = std::max(1, int(std::ceil((ymax - ymin) / 8)));
  for (double y = ymin; y <= ymax; y += ystep) {
    o << "<line x1=\"" << L << "\" y1=\"" << py(y) << "\" x2=\"" << W - R << "\" y2=\"" << py(y)
      << "\" stroke=\"#ddd\"/>\n";
    o << "<text x=\"" << L - 6 << "\" y=\"" << py(y) + 4 << "\" text-anchor=\"end\">1e" << int(y) << "</text>\n";
  }
  const int kstep = std::max(1, int(std::ceil(kmax / 10)));
  for (int k = 0; k <= int(kmax); k += kstep)
    o << "<text x=\"" << px(k) << "\" y=\"" << H - B + 16 << "\" text-anchor=\"middle\">" << k << "</text>\n";
  o << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\">iteration k</text>\n";
  o << "<text x=\"16\" y=\"" << (T + H - B) / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
    << (T + H - B) / 2 << ")\">||c(x_k)||</text>\n";

  for (std::size_t i = 0; i < series.size(); ++i) {
    const char* color = colors[i % std::size(colors)];
    o << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t k = 0; k < series[i].residuals.size(); ++k)
      o << px(double(k)) << ',' << py(std::log10(std::max(series[i].residuals[k], kFloor))) << ' ';
    o << "\"/>\n";
    o << "<text x=\"" << W - R - 4 << "\" y=\"" << T + 16 * (i + 1) << "\" text-anchor=\"end\" fill=\"" << color
      << "\">" << series[i].label << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

std::string aligned_table(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width;
  for (const auto& row : rows)
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (width.size() <= c) width.push_back(0);
      width[c] = std::max(width[c], row[c].size());
    }
  std::ostringstream out;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < rows[r].size(); ++c) {
      if (c) out << "  ";
      out << rows[r][c];
      if (c + 1 < rows[r].size()) out << std::string(width[c] - rows[r][c].size(), ' ');
    }
    out << '\n';
    if (r == 0) {
      std::size_t total = 0;
      for (std::size_t c = 0; c < width.size(); ++c) total += width[c] + (c ? 2 : 0);
      out << std::string(total, '-') << '\n';
    }
  }
  return out.str();
}

void write_file(const std::string& path, const std::string& content) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error(ErrorCode::Configuration, "cannot write '" + path + "'");
  out << content;
}

}  // namespace cdap::cli
