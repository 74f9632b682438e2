// alohanet — command-line front end for the slotted-Aloha network library.
//
// Subcommands: analyze, stability, optimize, max-rate, simulate, sweep, preset.
// Global flags: --config <path>, --out <dir>, --seed <u64>, --format csv|json.
//
// Exit codes: 0 success (and "stable"/"feasible" verdicts), 2 unstable,
// 3 infeasible, 1 usage or parse errors.
//
// All runs are deterministic given the same config and seed; rerunning a
// command overwrites its output files with identical bytes.

#include <CLI11.hpp>
#include <json.hpp>

#include <aloha/analytic.hpp>
#include <aloha/config_io.hpp>
#include <aloha/errors.hpp>
#include <aloha/math.hpp>
#include <aloha/model.hpp>
#include <aloha/optimize.hpp>
#include <aloha/simulate.hpp>
#include <aloha/stability.hpp>
#include <aloha/stats.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using nlohmann::json;

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

struct GlobalOptions {
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 1;
  std::string format = "csv";
};

aloha::NetworkConfig load_required_config(const GlobalOptions& g) {
  if (g.config_path.empty()) {
    throw aloha::ValidationError("--config <path> is required for this command");
  }
  return aloha::load_config(g.config_path);
}

// Writes `content` to <out>/<basename> when --out was given, otherwise to
// stdout. File mode reports the path so scripted callers can find outputs.
void emit(const GlobalOptions& g, const std::string& basename, const std::string& content) {
  if (g.out_dir.empty()) {
    std::cout << content;
    return;
  }
  std::filesystem::create_directories(g.out_dir);
  const auto path = std::filesystem::path(g.out_dir) / basename;
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw aloha::ValidationError("cannot open for writing: " + path.string());
  }
  out << content;
  out.close();
  std::cout << "wrote " << path.string() << "\n";
}

void emit_result(const GlobalOptions& g, const std::string& stem, const std::string& csv,
                 const json& j) {
  if (g.format == "json") {
    emit(g, stem + ".json", j.dump(2) + "\n");
  } else {
    emit(g, stem + ".csv", csv);
  }
}

json estimate_to_json(const aloha::Estimate& e) {
  json j;
  j["value"] = e.defined ? json(e.value) : json(nullptr);
  j["ci_half_width"] = e.has_ci ? json(e.ci_half) : json(nullptr);
  j["samples"] = e.samples;
  j["defined"] = e.defined;
  j["has_ci"] = e.has_ci;
  return j;
}

// ---------------------------------------------------------------------------
// analyze
// ---------------------------------------------------------------------------

int cmd_analyze(const GlobalOptions& g) {
  const aloha::NetworkConfig cfg = load_required_config(g);

  json out;
  out["alpha"] = cfg.alpha;
  std::ostringstream csv;
  csv << "class,arrival_rate,success_prob,mean_delay,load,channel_share\n";
  std::vector<std::string> footers;

  if (cfg.size() == 1) {
    // Single-class path: slotted access probability p < 1 is allowed here.
    const aloha::SingleClassResult r = aloha::single_class_analysis(cfg, 0);
    const aloha::TrafficClass& c = cfg.classes[0];
    const double load = c.arrival_rate > 0.0
                            ? c.arrival_rate / (c.access_prob * r.success_prob)
                            : 0.0;
    // The channel-share identity is stated for always-transmitting classes;
    // report it only when p = 1 (it then equals 1 whenever there is traffic).
    std::optional<double> share;
    if (c.access_prob == 1.0) {
      const aloha::DerivedConstants d = aloha::derive_constants(cfg, 0);
      share = r.success_prob < 1.0
                  ? d.phi[0] * c.lambda * c.arrival_rate / (1.0 - r.success_prob)
                  : 0.0;
    }

    out["mode"] = "single-class";
    out["stability_bound"] = r.stability_bound;
    out["closure_bound"] = r.closure_bound;
    json jc;
    jc["class"] = 0;
    jc["arrival_rate"] = c.arrival_rate;
    jc["success_prob"] = r.success_prob;
    jc["mean_delay"] = r.mean_delay;
    jc["load"] = load;
    jc["channel_share"] = share ? json(*share) : json(nullptr);
    out["classes"] = json::array({jc});

    csv << 0 << ',' << fmt(c.arrival_rate) << ',' << fmt(r.success_prob) << ','
        << fmt(r.mean_delay) << ',' << fmt(load) << ','
        << (share ? fmt(*share) : std::string()) << '\n';
    footers.push_back("# stability_bound," + fmt(r.stability_bound));
    footers.push_back("# closure_bound," + fmt(r.closure_bound));
  } else {
    const aloha::StationaryMetrics m = aloha::stationary_metrics(cfg);
    const aloha::ShareResiduals res = aloha::share_identity_residuals(m, cfg);
    const double lhs = aloha::physical_identity_lhs(cfg, m);
    const double rhs = aloha::physical_identity_rhs(cfg.alpha);

    out["mode"] = "multi-class";
    out["classes"] = json::array();
    for (std::size_t n = 0; n < cfg.size(); ++n) {
      json jc;
      jc["class"] = n;
      jc["arrival_rate"] = cfg.classes[n].arrival_rate;
      jc["success_prob"] = m.success_prob[n];
      jc["mean_delay"] = m.mean_delay[n];
      jc["load"] = m.load[n];
      jc["channel_share"] = m.channel_share[n];
      out["classes"].push_back(jc);
      csv << n << ',' << fmt(cfg.classes[n].arrival_rate) << ','
          << fmt(m.success_prob[n]) << ',' << fmt(m.mean_delay[n]) << ','
          << fmt(m.load[n]) << ',' << fmt(m.channel_share[n]) << '\n';
    }
    out["residuals"] = {{"share_sum", res.sum_residual},
                        {"max_pairwise", res.max_pairwise},
                        {"physical_lhs", lhs},
                        {"physical_rhs", rhs}};
    footers.push_back("# share_sum_residual," + fmt(res.sum_residual));
    footers.push_back("# max_pairwise_residual," + fmt(res.max_pairwise));
    footers.push_back("# physical_lhs," + fmt(lhs));
    footers.push_back("# physical_rhs," + fmt(rhs));
  }

  for (const std::string& line : footers) {
    csv << line << '\n';
  }
  emit_result(g, "analyze", csv.str(), out);
  return 0;
}

// ---------------------------------------------------------------------------
// stability
// ---------------------------------------------------------------------------

int cmd_stability(const GlobalOptions& g, const std::string& method) {
  const aloha::NetworkConfig cfg = load_required_config(g);

  json out;
  std::ostringstream csv;
  csv << "method,stable,violated_class,witness_permutation,margin\n";
  bool stable = false;

  if (method == "feasibility" || method == "corollary") {
    // Power-free criterion: transmit powers are ignored by construction.
    const double margin = aloha::feasibility_margin(cfg);
    stable = aloha::feasibility_over_powers(cfg);
    out["method"] = aloha::stability_method_name(aloha::StabilityMethod::Feasibility);
    out["stable"] = stable;
    out["margin"] = margin;
    out["violated_class"] = nullptr;
    out["witness_permutation"] = nullptr;
    csv << out["method"].get<std::string>() << ',' << (stable ? 1 : 0) << ",,,"
        << fmt(margin) << '\n';
  } else {
    const aloha::StabilityVerdict v = method == "permutation"
                                          ? aloha::check_permutation_region(cfg)
                                          : aloha::check_region(cfg);
    stable = v.stable;
    out["method"] = aloha::stability_method_name(v.method);
    out["stable"] = v.stable;
    out["violated_class"] =
        v.violated_class ? json(*v.violated_class) : json(nullptr);
    if (v.witness_permutation) {
      out["witness_permutation"] = *v.witness_permutation;
    } else {
      out["witness_permutation"] = nullptr;
    }
    out["margin"] = nullptr;
    std::string witness;
    if (v.witness_permutation) {
      for (std::size_t i = 0; i < v.witness_permutation->size(); ++i) {
        if (i > 0) witness += ';';
        witness += std::to_string((*v.witness_permutation)[i]);
      }
    }
    csv << out["method"].get<std::string>() << ',' << (v.stable ? 1 : 0) << ','
        << (v.violated_class ? std::to_string(*v.violated_class) : std::string())
        << ',' << witness << ",\n";
  }

  emit_result(g, "stability", csv.str(), out);
  if (!stable) {
    if (method == "feasibility" || method == "corollary") {
      std::cerr << "unstable: no transmit-power vector can stabilize these "
                   "arrival rates\n";
    } else {
      std::cerr << "unstable: no service order stabilizes every queue under "
                   "this configuration\n";
    }
  }
  return stable ? 0 : 2;
}

// ---------------------------------------------------------------------------
// optimize
// ---------------------------------------------------------------------------

int cmd_optimize(const GlobalOptions& g, std::vector<double> weights, bool verify) {
  const aloha::NetworkConfig cfg = load_required_config(g);
  if (weights.empty()) {
    weights.assign(cfg.size(), 1.0);
  }
  const aloha::DelayWeights w{weights};
  const aloha::PowerAllocation alloc = aloha::optimal_powers(cfg, w);

  aloha::NetworkConfig tuned = cfg;
  for (std::size_t n = 0; n < tuned.size(); ++n) {
    tuned.classes[n].power = alloc.powers[n];
  }
  const aloha::StationaryMetrics m = aloha::stationary_metrics(tuned);

  json out;
  out["normalization"] = alloc.normalization;
  out["objective"] = alloc.objective;
  out["classes"] = json::array();
  std::ostringstream csv;
  csv << "class,weight,power,success_prob,mean_delay\n";
  for (std::size_t n = 0; n < cfg.size(); ++n) {
    json jc;
    jc["class"] = n;
    jc["weight"] = weights[n];
    jc["power"] = alloc.powers[n];
    jc["success_prob"] = m.success_prob[n];
    jc["mean_delay"] = m.mean_delay[n];
    out["classes"].push_back(jc);
    csv << n << ',' << fmt(weights[n]) << ',' << fmt(alloc.powers[n]) << ','
        << fmt(m.success_prob[n]) << ',' << fmt(m.mean_delay[n]) << '\n';
  }
  csv << "# objective," << fmt(alloc.objective) << '\n';
  csv << "# normalization," << alloc.normalization << '\n';

  if (verify) {
    const aloha::PowerAllocation oracle =
        aloha::numeric_power_oracle(cfg, w, aloha::OracleOptions{});
    double max_rel = 0.0;
    for (std::size_t n = 0; n < cfg.size(); ++n) {
      const double rel = std::abs(oracle.powers[n] - alloc.powers[n]) /
                         std::max(alloc.powers[n], 1e-300);
      max_rel = std::max(max_rel, rel);
    }
    out["verify"] = {{"oracle_objective", oracle.objective},
                     {"objective_gap", alloc.objective - oracle.objective},
                     {"max_power_relative_deviation", max_rel}};
    csv << "# oracle_objective," << fmt(oracle.objective) << '\n';
    csv << "# objective_gap," << fmt(alloc.objective - oracle.objective) << '\n';
    csv << "# max_power_relative_deviation," << fmt(max_rel) << '\n';
  }

  emit_result(g, "optimize", csv.str(), out);
  return 0;
}

// ---------------------------------------------------------------------------
// max-rate
// ---------------------------------------------------------------------------

int cmd_max_rate(const GlobalOptions& g, std::size_t d2d, std::size_t cell,
                 double d1_max, double d2_max) {
  const aloha::NetworkConfig cfg = load_required_config(g);
  const aloha::RateEnvelope env = aloha::max_d2d_rate(cfg, d2d, cell, d1_max, d2_max);

  json out;
  out["d2d_class"] = d2d;
  out["cellular_class"] = cell;
  out["d2d_delay_cap"] = d1_max;
  out["cellular_delay_cap"] = d2_max;
  out["max_arrival_rate"] = env.max_a1;
  out["power_ratio"] = env.power_ratio;
  out["cellular_share"] = env.psi2_star;

  std::ostringstream csv;
  csv << "max_arrival_rate,power_ratio,cellular_share\n";
  csv << fmt(env.max_a1) << ',' << fmt(env.power_ratio) << ','
      << fmt(env.psi2_star) << '\n';

  emit_result(g, "max_rate", csv.str(), out);
  return 0;
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

struct SimulateFlags {
  long long slots = 10000;
  std::size_t links = 400;
  std::size_t replications = 10;
  std::string mode = "spatial";
  double warmup = 0.2;
  bool compare_analytic = false;
};

std::string trajectory_csv(const aloha::SimulationResult& r, std::size_t classes) {
  std::ostringstream csv;
  csv << "slot,class,mean_queue_len,attempts,successes\n";
  if (classes == 0 || r.queue_trajectory.empty()) {
    return csv.str();
  }
  const std::size_t points = r.queue_trajectory[0].size();
  for (std::size_t i = 0; i < points; ++i) {
    for (std::size_t n = 0; n < classes; ++n) {
      const aloha::TrajectoryPoint& p = r.queue_trajectory[n][i];
      csv << p.slot << ',' << n << ',' << fmt(p.mean_queue_len) << ','
          << p.attempts << ',' << p.successes << '\n';
    }
  }
  return csv.str();
}

json simulation_to_json(const aloha::SimulationResult& r, std::size_t classes) {
  json out;
  out["replications_done"] = r.replications_done;
  out["measurement_slots"] = r.measurement_slots;
  out["trajectory_stride"] = r.trajectory_stride;
  out["resampled_distances"] = r.resampled_distances;
  out["unvalidated_regime"] = r.unvalidated_regime;
  out["classes"] = json::array();
  for (std::size_t n = 0; n < classes; ++n) {
    json jc;
    jc["class"] = n;
    jc["success_prob"] = estimate_to_json(r.success_prob_hat[n]);
    jc["mean_delay"] = estimate_to_json(r.mean_delay_hat[n]);
    jc["drift"] = estimate_to_json(r.drift_estimate[n]);
    jc["mean_link_distance"] = estimate_to_json(r.mean_link_distance_hat[n]);
    jc["drift_per_replication"] = r.drift_per_replication[n];
    json hist = json::array();
    for (const aloha::SirBin& b : r.sir_histogram[n]) {
      hist.push_back({{"lo", b.lo},
                      {"hi", b.hi},
                      {"attempts", b.attempts},
                      {"successes", b.successes},
                      {"sum_r2", b.sum_r2},
                      {"saturated_law_successes", b.saturated_law_successes}});
    }
    jc["sir_histogram"] = hist;
    json traj = json::array();
    for (const aloha::TrajectoryPoint& p : r.queue_trajectory[n]) {
      traj.push_back({{"slot", p.slot},
                      {"mean_queue_len", p.mean_queue_len},
                      {"attempts", p.attempts},
                      {"successes", p.successes}});
    }
    jc["trajectory"] = traj;
    out["classes"].push_back(jc);
  }
  return out;
}

int cmd_simulate(const GlobalOptions& g, const SimulateFlags& f) {
  const aloha::NetworkConfig cfg = load_required_config(g);

  aloha::SimulationSpec spec;
  spec.config = cfg;
  spec.slots = f.slots;
  spec.target_links_per_class = f.links;
  spec.replications = f.replications;
  spec.warmup_fraction = f.warmup;
  spec.seed = g.seed;
  spec.mode = f.mode == "mean-field" ? aloha::SimMode::MeanField
                                     : aloha::SimMode::Spatial;

  const aloha::SimulationResult result = aloha::run(spec);

  json summary = simulation_to_json(result, cfg.size());
  summary["spec"] = {{"slots", f.slots},
                     {"target_links_per_class", f.links},
                     {"replications", f.replications},
                     {"warmup_fraction", f.warmup},
                     {"mode", f.mode},
                     {"seed", g.seed}};

  bool no_data = true;
  for (const aloha::TrafficClass& c : cfg.classes) {
    if (c.arrival_rate > 0.0) no_data = false;
  }
  summary["no_data"] = no_data;

  // Drift flag: every replication's late-window queue slope positive for some
  // class marks the run as operating past its stability region.
  bool drift_flag = false;
  for (std::size_t n = 0; n < cfg.size(); ++n) {
    const auto& drifts = result.drift_per_replication[n];
    if (drifts.empty()) continue;
    bool all_positive = true;
    for (double d : drifts) {
      if (!(d > 0.0)) all_positive = false;
    }
    if (all_positive && result.drift_estimate[n].defined &&
        result.drift_estimate[n].value > 0.0) {
      drift_flag = true;
    }
  }
  summary["positive_drift"] = drift_flag;

  if (f.compare_analytic) {
    json cmp;
    try {
      std::vector<double> ps(cfg.size()), delay(cfg.size());
      if (cfg.size() == 1) {
        const aloha::SingleClassResult a = aloha::single_class_analysis(cfg, 0);
        ps[0] = a.success_prob;
        delay[0] = a.mean_delay;
      } else {
        const aloha::StationaryMetrics m = aloha::stationary_metrics(cfg);
        ps = m.success_prob;
        delay = m.mean_delay;
      }
      cmp["classes"] = json::array();
      for (std::size_t n = 0; n < cfg.size(); ++n) {
        json jc;
        jc["class"] = n;
        jc["success_prob"] = ps[n];
        jc["mean_delay"] = delay[n];
        const aloha::Estimate& ps_hat = result.success_prob_hat[n];
        const aloha::Estimate& d_hat = result.mean_delay_hat[n];
        jc["success_prob_rel_error"] =
            ps_hat.defined && ps[n] > 0.0
                ? json(std::abs(ps_hat.value - ps[n]) / ps[n])
                : json(nullptr);
        jc["mean_delay_rel_error"] =
            d_hat.defined && delay[n] > 0.0
                ? json(std::abs(d_hat.value - delay[n]) / delay[n])
                : json(nullptr);
        cmp["classes"].push_back(jc);
      }
      cmp["analytic_unstable"] = false;
    } catch (const aloha::InstabilityError&) {
      cmp = json::object();
      cmp["analytic_unstable"] = true;
    }
    summary["analytic"] = cmp;
  }

  // The per-run CSV aggregates all replications: mean queue length is averaged
  // pointwise and attempt/success counts are summed at each sampled slot.
  const std::string run_csv = trajectory_csv(result, cfg.size());
  const std::string summary_text = summary.dump(2) + "\n";

  if (g.out_dir.empty()) {
    std::cout << summary_text;
  } else {
    emit(g, "simulate_run.csv", run_csv);
    emit(g, "simulate_summary.json", summary_text);
  }
  return 0;
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

// Applies a parameter path of the form "alpha" or "classes[<i>].<field>".
void set_parameter(aloha::NetworkConfig& cfg, const std::string& path, double value) {
  if (path == "alpha") {
    cfg.alpha = value;
    return;
  }
  const std::string prefix = "classes[";
  if (path.rfind(prefix, 0) != 0) {
    throw aloha::ValidationError("unknown sweep parameter \"" + path +
                                 "\" (expected alpha or classes[i].<field>)");
  }
  const std::size_t close = path.find(']', prefix.size());
  if (close == std::string::npos || close + 1 >= path.size() || path[close + 1] != '.') {
    throw aloha::ValidationError("malformed sweep parameter \"" + path + "\"");
  }
  std::size_t index = 0;
  try {
    index = static_cast<std::size_t>(
        std::stoul(path.substr(prefix.size(), close - prefix.size())));
  } catch (const std::exception&) {
    throw aloha::ValidationError("malformed class index in \"" + path + "\"");
  }
  if (index >= cfg.size()) {
    throw aloha::ValidationError("sweep parameter class index " +
                                 std::to_string(index) + " out of range (config has " +
                                 std::to_string(cfg.size()) + " classes)");
  }
  const std::string field = path.substr(close + 2);
  aloha::TrafficClass& c = cfg.classes[index];
  if (field == "lambda") {
    c.lambda = value;
  } else if (field == "power") {
    c.power = value;
  } else if (field == "mean_link_distance") {
    c.mean_link_distance = value;
  } else if (field == "sir_threshold") {
    c.sir_threshold = value;
  } else if (field == "arrival_rate") {
    c.arrival_rate = value;
  } else if (field == "access_prob") {
    c.access_prob = value;
  } else {
    throw aloha::ValidationError("unknown class field \"" + field + "\" in sweep parameter");
  }
}

int cmd_sweep(const GlobalOptions& g, const std::string& param,
              const std::vector<double>& grid) {
  if (grid.empty()) {
    throw aloha::ValidationError("--grid must list at least one value");
  }
  const aloha::NetworkConfig base = load_required_config(g);

  json out;
  out["parameter"] = param;
  out["points"] = json::array();
  std::ostringstream csv;
  csv << "parameter,value,class,stable,success_prob,mean_delay,load,channel_share\n";

  for (double value : grid) {
    aloha::NetworkConfig cfg = base;
    set_parameter(cfg, param, value);

    json point;
    point["value"] = value;
    point["classes"] = json::array();
    bool stable = true;
    std::vector<double> ps, delay, load, share;
    try {
      if (cfg.size() == 1) {
        const aloha::SingleClassResult a = aloha::single_class_analysis(cfg, 0);
        const aloha::TrafficClass& c = cfg.classes[0];
        ps = {a.success_prob};
        delay = {a.mean_delay};
        load = {c.arrival_rate > 0.0 ? c.arrival_rate / (c.access_prob * a.success_prob)
                                     : 0.0};
        if (c.access_prob == 1.0) {
          const aloha::DerivedConstants d = aloha::derive_constants(cfg, 0);
          share = {a.success_prob < 1.0
                       ? d.phi[0] * c.lambda * c.arrival_rate / (1.0 - a.success_prob)
                       : 0.0};
        } else {
          share = {std::numeric_limits<double>::quiet_NaN()};
        }
      } else {
        const aloha::StationaryMetrics m = aloha::stationary_metrics(cfg);
        ps = m.success_prob;
        delay = m.mean_delay;
        load = m.load;
        share = m.channel_share;
      }
    } catch (const aloha::InstabilityError&) {
      stable = false;
    }
    point["stable"] = stable;
    for (std::size_t n = 0; n < cfg.size(); ++n) {
      csv << param << ',' << fmt(value) << ',' << n << ',' << (stable ? 1 : 0);
      json jc;
      jc["class"] = n;
      if (stable) {
        jc["success_prob"] = ps[n];
        jc["mean_delay"] = delay[n];
        jc["load"] = load[n];
        jc["channel_share"] = std::isnan(share[n]) ? json(nullptr) : json(share[n]);
        csv << ',' << fmt(ps[n]) << ',' << fmt(delay[n]) << ',' << fmt(load[n]) << ','
            << (std::isnan(share[n]) ? std::string() : fmt(share[n]));
      } else {
        jc["success_prob"] = nullptr;
        jc["mean_delay"] = nullptr;
        jc["load"] = nullptr;
        jc["channel_share"] = nullptr;
        csv << ",,,,";
      }
      csv << '\n';
      point["classes"].push_back(jc);
    }
    out["points"].push_back(point);
  }

  emit_result(g, "sweep", csv.str(), out);
  return 0;
}

// ---------------------------------------------------------------------------
// preset
// ---------------------------------------------------------------------------

struct PresetFlags {
  std::string name;
  bool gnuplot = false;
  long long slots = 250000;
  std::size_t links = 400;
  std::size_t replications = 10;
};

aloha::NetworkConfig unit_contention_config(double phi_lambda) {
  // alpha = 4, theta = 1, lambda = 1 makes the contention constant equal to
  // 2*pi*Rbar^2, so Rbar = sqrt(phi_lambda / (2*pi)) hits the target exactly.
  aloha::NetworkConfig cfg;
  cfg.alpha = 4.0;
  aloha::TrafficClass c;
  c.lambda = 1.0;
  c.power = 1.0;
  c.mean_link_distance = std::sqrt(phi_lambda / (2.0 * std::numbers::pi));
  c.sir_threshold = 1.0;
  c.access_prob = 1.0;
  c.arrival_rate = 0.0;
  cfg.classes = {c};
  return cfg;
}

aloha::NetworkConfig symmetric_pair_config(double phi_lambda, double a1, double a2) {
  aloha::NetworkConfig cfg = unit_contention_config(phi_lambda);
  cfg.classes.push_back(cfg.classes[0]);
  cfg.classes[0].arrival_rate = a1;
  cfg.classes[1].arrival_rate = a2;
  return cfg;
}

int preset_fig1(const GlobalOptions& g, const PresetFlags& f) {
  std::ostringstream csv;
  csv << "phi_lambda,arrival_rate,analytic_delay,sim_delay,sim_ci_half\n";
  const std::vector<double> targets = {0.5, 1.0, 2.0};
  for (double phl : targets) {
    aloha::NetworkConfig cfg = unit_contention_config(phl);
    const double bound = aloha::single_class_bound(cfg, 0);
    for (int i = 0; i < 50; ++i) {
      const double a = bound * (0.01 + 0.97 * i / 49.0);
      cfg.classes[0].arrival_rate = a;
      const aloha::SingleClassResult r = aloha::single_class_analysis(cfg, 0);
      csv << fmt(phl) << ',' << fmt(a) << ',' << fmt(r.mean_delay) << ",,\n";
    }
    for (double frac : {0.2, 0.4, 0.6, 0.8}) {
      const double a = frac * bound;
      cfg.classes[0].arrival_rate = a;
      const aloha::SingleClassResult r = aloha::single_class_analysis(cfg, 0);
      aloha::SimulationSpec spec;
      spec.config = cfg;
      spec.slots = f.slots;
      spec.target_links_per_class = f.links;
      spec.replications = f.replications;
      spec.mode = aloha::SimMode::MeanField;
      spec.seed = g.seed;
      const aloha::SimulationResult result = aloha::run(spec);
      const aloha::Estimate& d = result.mean_delay_hat[0];
      csv << fmt(phl) << ',' << fmt(a) << ',' << fmt(r.mean_delay) << ','
          << (d.defined ? fmt(d.value) : std::string()) << ','
          << (d.has_ci ? fmt(d.ci_half) : std::string()) << '\n';
    }
  }
  emit(g, "fig1-delay.csv", csv.str());
  if (f.gnuplot) {
    std::ostringstream gp;
    gp << "set datafile separator ','\n"
       << "set xlabel 'arrival rate a'\n"
       << "set ylabel 'mean delay (slots)'\n"
       << "set key top left\n"
       << "plot for [phl in \"0.5 1 2\"] 'fig1-delay.csv' "
          "using (strcol(1) eq phl ? $2 : NaN):3 with lines "
          "title 'analytic phi*lambda='.phl, \\\n"
       << "     for [phl in \"0.5 1 2\"] 'fig1-delay.csv' "
          "using (strcol(1) eq phl && strcol(4) ne '' ? $2 : NaN):4:5 "
          "with yerrorbars title 'simulated phi*lambda='.phl\n";
    emit(g, "fig1-delay.gp", gp.str());
  }
  return 0;
}

int preset_fig2(const GlobalOptions& g, const PresetFlags& f) {
  std::ostringstream csv;
  csv << "weight_2,power_ratio,delay_1,delay_2,objective\n";
  const aloha::NetworkConfig base = symmetric_pair_config(0.15, 0.7, 0.7);
  for (int i = 0; i < 19; ++i) {
    const double c2 = 0.1 + 0.05 * i;
    const aloha::PowerAllocation alloc =
        aloha::optimal_powers(base, aloha::DelayWeights{{1.0, c2}});
    aloha::NetworkConfig tuned = base;
    tuned.classes[0].power = alloc.powers[0];
    tuned.classes[1].power = alloc.powers[1];
    const aloha::StationaryMetrics m = aloha::stationary_metrics(tuned);
    csv << fmt(c2) << ',' << fmt(alloc.powers[0] / alloc.powers[1]) << ','
        << fmt(m.mean_delay[0]) << ',' << fmt(m.mean_delay[1]) << ','
        << fmt(alloc.objective) << '\n';
  }
  emit(g, "fig2-weights.csv", csv.str());
  if (f.gnuplot) {
    std::ostringstream gp;
    gp << "set datafile separator ','\n"
       << "set xlabel 'delay weight of class 2'\n"
       << "set ylabel 'optimal power ratio P1/P2'\n"
       << "plot 'fig2-weights.csv' using 1:2 with linespoints title 'power ratio'\n";
    emit(g, "fig2-weights.gp", gp.str());
  }
  return 0;
}

int preset_fig3(const GlobalOptions& g, const PresetFlags& f) {
  std::ostringstream csv;
  csv << "weight_2,arrival_rate_2,power_ratio,delay_1,delay_2\n";
  for (double c2 : {0.1, 0.5, 1.0}) {
    for (int i = 1; i <= 16; ++i) {
      const double a2 = 0.05 * i;
      const aloha::NetworkConfig base = symmetric_pair_config(0.15, 0.7, a2);
      const aloha::PowerAllocation alloc =
          aloha::optimal_powers(base, aloha::DelayWeights{{1.0, c2}});
      aloha::NetworkConfig tuned = base;
      tuned.classes[0].power = alloc.powers[0];
      tuned.classes[1].power = alloc.powers[1];
      const aloha::StationaryMetrics m = aloha::stationary_metrics(tuned);
      csv << fmt(c2) << ',' << fmt(a2) << ','
          << fmt(alloc.powers[0] / alloc.powers[1]) << ',' << fmt(m.mean_delay[0])
          << ',' << fmt(m.mean_delay[1]) << '\n';
    }
  }
  emit(g, "fig3-arrival.csv", csv.str());
  if (f.gnuplot) {
    std::ostringstream gp;
    gp << "set datafile separator ','\n"
       << "set xlabel 'class-2 arrival rate'\n"
       << "set ylabel 'optimal power ratio P1/P2'\n"
       << "plot for [c2 in \"0.1 0.5 1\"] 'fig3-arrival.csv' "
          "using (strcol(1) eq c2 ? $2 : NaN):3 with linespoints "
          "title 'weight '.c2\n";
    emit(g, "fig3-arrival.gp", gp.str());
  }
  return 0;
}

int preset_fig4(const GlobalOptions& g, const PresetFlags& f) {
  std::ostringstream csv;
  csv << "cellular_share,d2d_delay_cap,max_arrival_rate,power_ratio\n";
  const double d2_max = 3.0;
  for (double psi2 : {0.25, 0.5, 0.75}) {
    // Choose the cellular arrival rate so its share at the delay cap equals
    // psi2: share = phi*lambda * (D/(D-1)) * a/(1-a) with phi*lambda = 1.
    const double odds = psi2 * (d2_max - 1.0) / d2_max;
    const double a2 = odds / (1.0 + odds);
    for (int i = 0; i < 18; ++i) {
      const double d1_max = 1.5 + 0.5 * i;
      const aloha::NetworkConfig cfg = symmetric_pair_config(1.0, 0.0, a2);
      const aloha::RateEnvelope env = aloha::max_d2d_rate(cfg, 0, 1, d1_max, d2_max);
      csv << fmt(psi2) << ',' << fmt(d1_max) << ',' << fmt(env.max_a1) << ','
          << fmt(env.power_ratio) << '\n';
    }
  }
  emit(g, "fig4-envelope.csv", csv.str());
  if (f.gnuplot) {
    std::ostringstream gp;
    gp << "set datafile separator ','\n"
       << "set xlabel 'd2d delay cap (slots)'\n"
       << "set ylabel 'max d2d arrival rate'\n"
       << "plot for [psi in \"0.25 0.5 0.75\"] 'fig4-envelope.csv' "
          "using (strcol(1) eq psi ? $2 : NaN):3 with linespoints "
          "title 'cellular share '.psi\n";
    emit(g, "fig4-envelope.gp", gp.str());
  }
  return 0;
}

int cmd_preset(const GlobalOptions& g, const PresetFlags& f) {
  if (f.name == "fig1-delay") return preset_fig1(g, f);
  if (f.name == "fig2-weights") return preset_fig2(g, f);
  if (f.name == "fig3-arrival") return preset_fig3(g, f);
  if (f.name == "fig4-envelope") return preset_fig4(g, f);
  throw aloha::ValidationError(
      "unknown preset \"" + f.name +
      "\"; available presets: fig1-delay, fig2-weights, fig3-arrival, fig4-envelope");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Analytic and simulation toolkit for multi-class slotted-Aloha "
               "networks with Rayleigh fading"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  app.add_option("--config", g.config_path, "Path to a network configuration JSON file");
  app.add_option("--out", g.out_dir, "Directory for output files (stdout when omitted)");
  app.add_option("--seed", g.seed, "Random seed for simulation commands");
  app.add_option("--format", g.format, "Output format for result tables")
      ->check(CLI::IsMember({"csv", "json"}));

  int exit_code = 0;

  CLI::App* analyze =
      app.add_subcommand("analyze", "Stationary success probability, delay, load, "
                                    "and channel share per class");
  analyze->callback([&] { exit_code = cmd_analyze(g); });

  std::string method = "region";
  CLI::App* stability =
      app.add_subcommand("stability", "Check queue stability of the configuration");
  stability->add_option("--method", method,
                        "region | permutation | feasibility (alias: corollary)")
      ->check(CLI::IsMember({"region", "permutation", "feasibility", "corollary"}));
  stability->callback([&] { exit_code = cmd_stability(g, method); });

  std::vector<double> weights;
  bool verify = false;
  CLI::App* optimize =
      app.add_subcommand("optimize", "Delay-optimal transmit powers for given weights");
  optimize->add_option("--weights", weights, "Comma-separated per-class delay weights")
      ->delimiter(',');
  optimize->add_flag("--verify", verify,
                     "Cross-check the closed form against a numeric optimizer");
  optimize->callback([&] { exit_code = cmd_optimize(g, weights, verify); });

  std::size_t d2d_index = 0;
  std::size_t cell_index = 1;
  double d1_max = 0.0;
  double d2_max = 0.0;
  CLI::App* max_rate = app.add_subcommand(
      "max-rate", "Largest d2d arrival rate under per-class delay caps");
  max_rate->add_option("--d2d", d2d_index, "Index of the d2d (rate-maximized) class");
  max_rate->add_option("--cell", cell_index, "Index of the cellular (protected) class");
  max_rate->add_option("--d1-max", d1_max, "Delay cap for the d2d class (> 1)")
      ->required();
  max_rate->add_option("--d2-max", d2_max, "Delay cap for the cellular class (> 1)")
      ->required();
  max_rate->callback(
      [&] { exit_code = cmd_max_rate(g, d2d_index, cell_index, d1_max, d2_max); });

  SimulateFlags sf;
  CLI::App* simulate =
      app.add_subcommand("simulate", "Run the discrete-event simulator");
  simulate->add_option("--slots", sf.slots, "Number of slots per replication");
  simulate->add_option("--links", sf.links, "Target links for the densest class");
  simulate->add_option("--replications", sf.replications, "Independent replications");
  simulate->add_option("--mode", sf.mode, "spatial | mean-field")
      ->check(CLI::IsMember({"spatial", "mean-field"}));
  simulate->add_option("--warmup", sf.warmup, "Warm-up fraction discarded [0, 1)");
  simulate->add_flag("--compare-analytic", sf.compare_analytic,
                     "Append analytic predictions and relative errors");
  simulate->callback([&] { exit_code = cmd_simulate(g, sf); });

  std::string sweep_param;
  std::vector<double> sweep_grid;
  CLI::App* sweep = app.add_subcommand(
      "sweep", "Evaluate stationary metrics over a one-parameter grid");
  sweep->add_option("--param", sweep_param,
                    "Parameter path: alpha or classes[i].<field>")
      ->required();
  sweep->add_option("--grid", sweep_grid, "Comma-separated parameter values")
      ->required()
      ->delimiter(',');
  sweep->callback([&] { exit_code = cmd_sweep(g, sweep_param, sweep_grid); });

  PresetFlags pf;
  CLI::App* preset = app.add_subcommand(
      "preset", "Emit the data grid behind a named reference figure");
  preset->add_option("name", pf.name, "fig1-delay | fig2-weights | fig3-arrival | "
                                      "fig4-envelope")
      ->required();
  preset->add_flag("--gnuplot", pf.gnuplot, "Also write a gnuplot script stub");
  preset->add_option("--slots", pf.slots, "Slots per replication (fig1 simulation)");
  preset->add_option("--links", pf.links, "Links per class (fig1 simulation)");
  preset->add_option("--replications", pf.replications,
                     "Replications (fig1 simulation)");
  preset->callback([&] { exit_code = cmd_preset(g, pf); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const aloha::InstabilityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const aloha::QueueOverflowError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const aloha::InfeasibleError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const aloha::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return exit_code;
}
