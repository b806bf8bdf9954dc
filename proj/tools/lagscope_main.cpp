// Copyright 2026 The lagscope Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// lagscope command-line front end.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "grid_spec.hpp"
#include "json.hpp"
#include "lagscope/lagscope.hpp"
#include "synth_spec.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace lagscope::cli {
namespace {

constexpr int kExitValidation = 2;
constexpr int kExitConsistency = 3;

void write_file(const fs::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ValidationError("cannot open '" + path.string() + "' for writing");
  out << body;
  if (!out) throw ValidationError("write to '" + path.string() + "' failed");
}

fs::path output_dir(const std::string& dir) {
  const fs::path p(dir);
  std::error_code ec;
  fs::create_directories(p, ec);
  if (ec) throw ValidationError("cannot create '" + dir + "': " + ec.message());
  return p;
}

ordered_json finite_or_null(double v) {
  return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr);
}

EventFormat event_format(const std::string& flag, const std::string& path) {
  if (flag == "csv") return EventFormat::kCsv;
  if (flag == "lines") return EventFormat::kLines;
  return fs::path(path).extension() == ".csv" ? EventFormat::kCsv : EventFormat::kLines;
}

struct EventInputs {
  std::string x;
  std::string y;
  std::string format = "auto";
  std::optional<Tick> m;

  void add_to(CLI::App& app) {
    app.add_option("--x", x, "Events of the leading series")->required();
    app.add_option("--y", y, "Events of the lagging series")->required();
    app.add_option("--format", format, "Event file format")
        ->check(CLI::IsMember({"auto", "lines", "csv"}));
    app.add_option("--m", m, "Span in ticks (overrides any '# M=' header)");
  }

  std::pair<EventSeries, EventSeries> load() const {
    return {load_events_file(x, event_format(format, x), m),
            load_events_file(y, event_format(format, y), m)};
  }
};

struct GridOptions {
  std::optional<std::string> a_grid;
  bool a_linear = false;
  std::optional<std::string> tau_window;
  double level = 0.95;
  std::optional<std::string> out;

  void add_to(CLI::App& app) {
    app.add_option("--a-grid", a_grid, "Scale-factor grid lo:hi:n (default 0.1:10:25)");
    app.add_flag("--a-linear", a_linear, "Space the scale-factor grid linearly");
    app.add_option("--tau-window", tau_window,
                   "Lags lo:hi or lo:hi:n; lo may be negative (default: all)");
    app.add_option("--level", level, "Credible level of the HPD set");
    app.add_option("--out", out, "Directory for surface.csv and summary.json");
  }

  std::vector<double> scales() const {
    return a_grid ? parse_a_grid(*a_grid, a_linear)
                  : (a_linear ? linear_grid(0.1, 10.0, 25) : default_a_grid());
  }

  std::optional<LagSelection> lags() const {
    if (!tau_window) return std::nullopt;
    return parse_tau_window(*tau_window);
  }
};

std::vector<Tick> lag_grid(const std::optional<LagSelection>& sel, Tick period) {
  if (!sel) return full_tau_grid(period);
  if (sel->window.hi - sel->window.lo >= period) {
    throw ValidationError("lag window is wider than the period " + std::to_string(period));
  }
  std::vector<Tick> out;
  for (Tick t : sel->lags) out.push_back(((t % period) + period) % period);
  return out;
}

// Long-form normalized surface. Lags are written as the window's
// representative of their residue class.
std::string surface_csv(const PosteriorSurface& s, const std::optional<LagSelection>& sel) {
  const Tick lo = sel ? sel->window.lo : 0;
  const Tick period = s.period();
  std::string body = "tau,a,log_post\n";
  for (std::size_t i = 0; i < s.tau_grid().size(); ++i) {
    const Tick rep = lo + (((s.tau_grid()[i] - lo) % period) + period) % period;
    const std::string tau = std::to_string(rep) + ",";
    for (std::size_t j = 0; j < s.a_grid().size(); ++j) {
      body += tau + format_double(s.a_grid()[j]) + "," +
              format_double(s.normalized_log(i, j)) + "\n";
    }
  }
  return body;
}

int emit_lag_result(const PosteriorSurface& surface, const GridOptions& grid,
                    const std::optional<LagSelection>& sel, ordered_json extra) {
  std::optional<TauWindow> window;
  if (sel) window = sel->window;
  const auto est = lag_estimates(surface, window, grid.level);
  ordered_json summary;
  summary["map_tau"] = est.map_tau;
  summary["mean_tau"] = est.mean_tau;
  summary["hpd_lo"] = est.hpd_lo;
  summary["hpd_hi"] = est.hpd_hi;
  summary["level"] = est.level;
  summary["hpd_mass"] = est.hpd_mass;
  summary["mean_a"] = est.mean_a;
  summary["period"] = surface.period();
  summary["n_tau"] = surface.tau_grid().size();
  summary["n_a"] = surface.a_grid().size();
  for (auto& [key, value] : extra.items()) summary[key] = value;
  const std::string text = summary.dump(2) + "\n";
  if (grid.out) {
    const auto dir = output_dir(*grid.out);
    write_file(dir / "surface.csv", surface_csv(surface, sel));
    write_file(dir / "summary.json", text);
  }
  std::cout << text;
  return 0;
}

int run_ccf(const EventInputs& in, const std::string& method) {
  const auto [x, y] = in.load();
  const auto gamma = ccf_counts(to_indicator(x), to_indicator(y),
                                method == "direct" ? CcfMethod::kDirect : CcfMethod::kFft);
  std::string body = "tau,gamma\n";
  for (std::size_t t = 0; t < gamma.gamma.size(); ++t) {
    body += std::to_string(t) + "," +
            std::to_string(static_cast<std::int64_t>(gamma.gamma[t])) + "\n";
  }
  std::cout << body;
  return 0;
}

struct TteOptions {
  TtePriorConfig prior;
  std::optional<std::string> bx_grid;
  std::optional<std::string> by_grid;
};

int run_lag_tte(const EventInputs& in, const GridOptions& grid, const TteOptions& opt) {
  opt.prior.validate();
  for (const auto& w : opt.prior.warnings()) std::cerr << "warning: " << w << "\n";
  const auto [x, y] = in.load();
  const auto sel = grid.lags();
  const auto taus = lag_grid(sel, x.span());
  const auto scales = grid.scales();
  ordered_json extra;
  extra["n_x"] = x.count();
  extra["n_y"] = y.count();
  if (opt.bx_grid || opt.by_grid) {
    const auto bx = opt.bx_grid ? parse_linear_grid(*opt.bx_grid)
                                : std::vector<double>{opt.prior.b_x};
    const auto by = opt.by_grid ? parse_linear_grid(*opt.by_grid)
                                : std::vector<double>{opt.prior.b_y};
    extra["background_points"] = bx.size() * by.size();
    return emit_lag_result(marginalize_background(x, y, taus, scales, opt.prior, bx, by),
                           grid, sel, extra);
  }
  return emit_lag_result(tte_posterior_surface(x, y, taus, scales, opt.prior), grid, sel,
                         extra);
}

struct GaussOptions {
  std::string x;
  std::string y;
  std::optional<double> sigma_x;
  std::optional<double> sigma_y;
};

int run_lag_gauss(const GaussOptions& opt, const GridOptions& grid) {
  if (opt.sigma_x.has_value() != opt.sigma_y.has_value()) {
    throw ValidationError("--sigma-x and --sigma-y go together");
  }
  const auto x = load_sampled_file(opt.x);
  const auto y = load_sampled_file(opt.y);
  if (x.size() != y.size()) {
    throw ValidationError("series lengths differ: " + std::to_string(x.size()) + " vs " +
                          std::to_string(y.size()));
  }
  NoiseSpec noise = PerSampleNoise{};
  if (opt.sigma_x) noise = ConstantNoise{*opt.sigma_x, *opt.sigma_y};
  const auto sel = grid.lags();
  const auto taus = lag_grid(sel, static_cast<Tick>(x.size()));
  const auto surface = gauss_posterior_surface(x, y, taus, grid.scales(), noise);
  ordered_json extra;
  extra["dt"] = x.dt();
  return emit_lag_result(surface, grid, sel, extra);
}

std::vector<double> load_candidates(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open candidates file '" + path + "'");
  std::vector<double> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream fields(line);
    std::string tok;
    while (fields >> tok) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(tok, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != tok.size() || !std::isfinite(v)) {
        throw ParseError(path + ":" + std::to_string(line_no) + ": '" + tok +
                         "' is not a finite number");
      }
      out.push_back(v);
    }
  }
  if (out.empty()) throw ValidationError("candidates file '" + path + "' is empty");
  return out;
}

struct BlocksOptions {
  std::string data;
  std::optional<std::size_t> n_blocks;
  std::optional<std::size_t> n_max;
  double gamma = 0.5;
  std::optional<std::string> candidates;
  std::optional<std::string> out;
};

std::string join(std::span<const double> v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ";";
    s += format_double(v[i]);
  }
  return s;
}

void append_rows(std::string& csv, std::size_t n_blocks, const ChangepointSearch& search) {
  for (const auto& row : search.table) {
    csv += std::to_string(n_blocks) + "," + join(row.changepoints) + "," +
           format_double(row.log_marginal) + "," + format_double(row.residual_h) + "," +
           (row.constrained ? "true" : "false") + "\n";
  }
}

int run_blocks(const BlocksOptions& opt) {
  if (opt.n_blocks.has_value() == opt.n_max.has_value()) {
    throw ValidationError("give exactly one of --n-blocks and --n-max");
  }
  const auto data = load_weighted_file(opt.data);
  std::optional<std::vector<double>> candidates;
  if (opt.candidates) candidates = load_candidates(*opt.candidates);

  std::string csv = "n_blocks,changepoints,log_marginal,residual_h,constrained\n";
  ordered_json result;
  const BlockModel* best = nullptr;
  double best_log_marginal = 0.0;
  std::optional<BlockCountSelection> selection;
  std::optional<ChangepointSearch> search;
  if (opt.n_blocks) {
    search = search_changepoints(data, *opt.n_blocks, candidates);
    best = &search->best;
    best_log_marginal = search->best_log_marginal;
    append_rows(csv, *opt.n_blocks, *search);
  } else {
    selection = select_n_blocks(data, *opt.n_max, opt.gamma, candidates);
    best = &selection->best;
    best_log_marginal = selection->searches[selection->n_blocks - 1].best_log_marginal;
    for (std::size_t k = 0; k < selection->searches.size(); ++k) {
      append_rows(csv, k + 1, selection->searches[k]);
    }
  }
  result["n_blocks"] = best->n_blocks();
  result["changepoints"] = std::vector<double>(best->changepoints().begin(),
                                               best->changepoints().end());
  result["heights"] = std::vector<double>(best->heights().begin(), best->heights().end());
  result["log_marginal"] = best_log_marginal;
  if (selection) {
    result["gamma"] = opt.gamma;
    ordered_json scores = ordered_json::array();
    for (double s : selection->scores) scores.push_back(finite_or_null(s));
    result["scores"] = scores;
  }
  result["n_data"] = data.size();
  const std::string text = result.dump(2) + "\n";
  if (opt.out) {
    const auto dir = output_dir(*opt.out);
    write_file(dir / "result.json", text);
    write_file(dir / "configurations.csv", csv);
  }
  std::cout << text;
  return 0;
}

struct SynthOptions {
  std::string mode;
  std::optional<std::string> spec;
  std::uint64_t seed = 0;
  std::string out;
};

ordered_json read_spec(const std::optional<std::string>& path) {
  if (!path) return ordered_json::object();
  std::ifstream in(*path);
  if (!in) throw ValidationError("cannot open spec '" + *path + "'");
  try {
    return ordered_json::parse(in);
  } catch (const ordered_json::exception& e) {
    throw ParseError("spec '" + *path + "': " + e.what());
  }
}

ordered_json signal_json(const SignalSpec& s) {
  ordered_json j;
  if (const auto* c = std::get_if<ConstantSignal>(&s)) {
    j["kind"] = "constant";
    j["level"] = c->level;
  } else if (const auto* p = std::get_if<GaussianPulse>(&s)) {
    j["kind"] = "gaussian_pulse";
    j["center"] = p->center;
    j["width"] = p->width;
    j["amplitude"] = p->amplitude;
  } else {
    j["kind"] = "table";
    j["values"] = std::get<TableSignal>(s).values;
  }
  return j;
}

ordered_json gen_json(const GenConfig& cfg) {
  ordered_json j;
  j["m"] = cfg.m;
  j["tau"] = cfg.tau_true;
  j["a"] = cfg.a_true;
  j["bx"] = cfg.b_x;
  j["by"] = cfg.b_y;
  return j;
}

int run_synth(const SynthOptions& opt) {
  const auto doc = nlohmann::json::parse(read_spec(opt.spec).dump());
  ordered_json truth;
  truth["mode"] = opt.mode;
  truth["seed"] = opt.seed;
  std::vector<std::pair<std::string, std::string>> files;
  if (opt.mode == "tte") {
    auto spec = parse_tte_spec(doc);
    spec.cfg.seed = opt.seed;
    const auto [x, y] = gen_tte(spec.signal, spec.cfg);
    std::ostringstream xs, ys;
    write_events(xs, x);
    write_events(ys, y);
    files = {{"x.evt", xs.str()}, {"y.evt", ys.str()}};
    truth.update(gen_json(spec.cfg));
    truth["signal"] = signal_json(spec.signal);
  } else if (opt.mode == "gauss") {
    auto spec = parse_gauss_spec(doc);
    spec.cfg.seed = opt.seed;
    const auto [x, y] = gen_gauss(spec.signal, spec.cfg, spec.sigma_x, spec.sigma_y);
    std::ostringstream xs, ys;
    write_sampled(xs, x);
    write_sampled(ys, y);
    files = {{"x.csv", xs.str()}, {"y.csv", ys.str()}};
    truth.update(gen_json(spec.cfg));
    truth["sigma_x"] = spec.sigma_x;
    truth["sigma_y"] = spec.sigma_y;
    truth["signal"] = signal_json(spec.signal);
  } else {
    const auto spec = parse_blocks_spec(doc);
    const auto data = gen_blocks_data(spec.model, spec.weights, spec.sigmas, opt.seed);
    std::ostringstream ds;
    write_weighted(ds, data);
    files = {{"data.csv", ds.str()}};
    truth["changepoints"] = std::vector<double>(spec.model.changepoints().begin(),
                                                spec.model.changepoints().end());
    truth["heights"] = std::vector<double>(spec.model.heights().begin(),
                                           spec.model.heights().end());
    truth["n_data"] = data.size();
  }
  const auto dir = output_dir(opt.out);
  for (const auto& [name, body] : files) write_file(dir / name, body);
  write_file(dir / "truth.json", truth.dump(2) + "\n");
  return 0;
}

std::string version_string() {
  return std::string("lagscope ") + kVersion + " (" + kGitHash + ")";
}

int run(int argc, char** argv) {
  CLI::App app{"Bayesian lag estimation and piecewise-constant signal fitting", "lagscope"};
  app.set_version_flag("--version", version_string());
  app.require_subcommand(1);

  EventInputs ccf_in;
  std::string method = "fft";
  auto* ccf = app.add_subcommand("ccf", "Circular cross-correlation of two event series");
  ccf_in.add_to(*ccf);
  ccf->add_option("--method", method, "Evaluation route")
      ->check(CLI::IsMember({"fft", "direct"}));

  EventInputs tte_in;
  GridOptions tte_grid;
  TteOptions tte;
  auto* lag_tte = app.add_subcommand("lag-tte", "Lag posterior for time-tagged events");
  tte_in.add_to(*lag_tte);
  tte_grid.add_to(*lag_tte);
  lag_tte->add_option("--s0", tte.prior.s0, "Lower edge of the signal prior");
  lag_tte->add_option("--s1", tte.prior.s1, "Upper edge of the signal prior");
  lag_tte->add_option("--bx", tte.prior.b_x, "Background rate of x per tick");
  lag_tte->add_option("--by", tte.prior.b_y, "Background rate of y per tick");
  lag_tte->add_option("--bx-grid", tte.bx_grid, "Marginalize b_x over lo:hi:n");
  lag_tte->add_option("--by-grid", tte.by_grid, "Marginalize b_y over lo:hi:n");

  GaussOptions gauss;
  GridOptions gauss_grid;
  auto* lag_gauss = app.add_subcommand("lag-gauss", "Lag posterior for sampled series");
  lag_gauss->add_option("--x", gauss.x, "Leading series, CSV t,y,sigma")->required();
  lag_gauss->add_option("--y", gauss.y, "Lagging series, CSV t,y,sigma")->required();
  lag_gauss->add_option("--sigma-x", gauss.sigma_x, "Override the noise scale of x");
  lag_gauss->add_option("--sigma-y", gauss.sigma_y, "Override the noise scale of y");
  gauss_grid.add_to(*lag_gauss);

  BlocksOptions blocks;
  auto* blk = app.add_subcommand("blocks", "Piecewise-constant fit to weighted data");
  blk->add_option("--data", blocks.data, "CSV x,y,sigma,wkind,w1,w2")->required();
  auto* nb = blk->add_option("--n-blocks", blocks.n_blocks, "Fixed number of blocks");
  auto* nm = blk->add_option("--n-max", blocks.n_max, "Choose up to this many blocks");
  nb->excludes(nm);
  blk->add_option("--gamma", blocks.gamma, "Geometric prior on the block count")
      ->needs(nm);
  blk->add_option("--candidates", blocks.candidates, "File of candidate changepoints");
  blk->add_option("--out", blocks.out, "Directory for result.json and configurations.csv");

  SynthOptions synth;
  auto* syn = app.add_subcommand("synth", "Generate synthetic data");
  syn->add_option("mode", synth.mode, "tte, gauss or blocks")
      ->required()
      ->check(CLI::IsMember({"tte", "gauss", "blocks"}));
  syn->add_option("--spec", synth.spec, "JSON generator spec");
  syn->add_option("--seed", synth.seed, "Random seed");
  syn->add_option("--out", synth.out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    std::cout << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::CallForVersion&) {
    std::cout << version_string() << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return kExitValidation;
  }

  if (ccf->parsed()) return run_ccf(ccf_in, method);
  if (lag_tte->parsed()) return run_lag_tte(tte_in, tte_grid, tte);
  if (lag_gauss->parsed()) return run_lag_gauss(gauss, gauss_grid);
  if (blk->parsed()) return run_blocks(blocks);
  return run_synth(synth);
}

}  // namespace
}  // namespace lagscope::cli

int main(int argc, char** argv) {
  try {
    return lagscope::cli::run(argc, argv);
  } catch (const lagscope::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return lagscope::cli::kExitValidation;
  } catch (const lagscope::ConsistencyError& e) {
    std::cerr << "internal consistency error: " << e.what() << "\n";
    return lagscope::cli::kExitConsistency;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
