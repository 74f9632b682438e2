#include "aloha/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include "aloha/errors.hpp"
#include "aloha/math.hpp"
#include "aloha/rng.hpp"

namespace aloha {

namespace {

// FIFO of arrival stamps with an amortised-O(1) pop (vector + head index;
// the dead prefix is compacted once it dominates the buffer).
class StampQueue {
 public:
  void push(std::int64_t stamp) { buf_.push_back(stamp); }

  std::int64_t front() const { return buf_[head_]; }

  void pop() {
    ++head_;
    if (head_ >= 1024 && head_ * 2 >= buf_.size()) {
      buf_.erase(buf_.begin(), buf_.begin() + static_cast<std::ptrdiff_t>(head_));
      head_ = 0;
    }
  }

  std::int64_t size() const {
    return static_cast<std::int64_t>(buf_.size() - head_);
  }

  bool empty() const { return head_ == buf_.size(); }

 private:
  std::vector<std::int64_t> buf_;
  std::size_t head_ = 0;
};

void validate_spec(const SimulationSpec& spec) {
  validate_config(spec.config, AnalysisMode::Simulation);
  std::vector<std::string> problems;
  if (spec.slots < 1000)
    problems.push_back("slots must be at least 1000 for reported statistics");
  if (spec.target_links_per_class < 50)
    problems.push_back("target_links_per_class must be at least 50");
  if (!(spec.warmup_fraction >= 0.0 && spec.warmup_fraction < 1.0))
    problems.push_back("warmup_fraction must lie in [0, 1)");
  if (spec.replications < 1)
    problems.push_back("replications must be at least 1");
  if (spec.max_queue_len < 1)
    problems.push_back("max_queue_len must be at least 1");
  if (!spec.sir_bin_edges.empty()) {
    if (spec.sir_bin_edges.size() < 2)
      problems.push_back("sir_bin_edges needs at least two edges");
    if (!spec.sir_bin_edges.empty() && spec.sir_bin_edges.front() < 0.0)
      problems.push_back("sir_bin_edges must be non-negative");
    for (std::size_t i = 0; i + 1 < spec.sir_bin_edges.size(); ++i) {
      if (!(spec.sir_bin_edges[i] < spec.sir_bin_edges[i + 1])) {
        problems.push_back("sir_bin_edges must be strictly increasing");
        break;
      }
    }
  }
  if (!problems.empty()) {
    std::string msg = "invalid simulation spec:";
    for (const std::string& p : problems) msg += "\n  - " + p;
    throw ValidationError(msg);
  }
}

double torus_wrap(double x, double side) {
  double w = std::fmod(x, side);
  if (w < 0.0) w += side;
  return w;
}

double torus_dist2(double ax, double ay, double bx, double by, double side) {
  double dx = std::fabs(ax - bx);
  if (dx > side * 0.5) dx = side - dx;
  double dy = std::fabs(ay - by);
  if (dy > side * 0.5) dy = side - dy;
  return dx * dx + dy * dy;
}

struct ActiveLink {
  int cls = 0;
  int link = 0;
  double tx_x = 0.0, tx_y = 0.0;  // transmitter position
  double rx_x = 0.0, rx_y = 0.0;  // receiver position
  double r = 0.0;                 // link distance
};

}  // namespace

SimulationResult run_single_replication(const SimulationSpec& spec,
                                        int replication) {
  validate_spec(spec);
  const NetworkConfig& cfg = spec.config;
  const std::size_t n_classes = cfg.size();
  const double delta = 2.0 / cfg.alpha;
  const double half_alpha = cfg.alpha / 2.0;
  const bool spatial = spec.mode == SimMode::Spatial;

  // Torus sized so the densest class holds target_links_per_class links;
  // every class gets a fixed population matching its density on that area.
  double lambda_max = 0.0;
  for (const TrafficClass& c : cfg.classes) lambda_max = std::max(lambda_max, c.lambda);
  const double area = static_cast<double>(spec.target_links_per_class) / lambda_max;
  const double side = std::sqrt(area);
  const double distance_cap = side / 4.0;

  std::vector<int> population(n_classes);
  std::vector<double> p_delta(n_classes), gamma_r2(n_classes), phi(n_classes);
  for (std::size_t n = 0; n < n_classes; ++n) {
    const TrafficClass& c = cfg.classes[n];
    population[n] = std::max<int>(1, static_cast<int>(std::llround(c.lambda * area)));
    p_delta[n] = std::pow(c.power, delta);
    // Coefficient of r^2 in the conditional success law, per unit density.
    gamma_r2[n] = std::numbers::pi * gamma_symmetric_product(delta) *
                  std::pow(c.sir_threshold, delta);
    phi[n] = class_contention(cfg.alpha, c.mean_link_distance, c.sir_threshold);
  }

  // Saturated attempting density seen by class n, in class-n power units:
  // sum_k (P_k / P_n)^delta * lambda_k * p_k.  The histogram's reference law.
  std::vector<double> saturated_density(n_classes, 0.0);
  for (std::size_t n = 0; n < n_classes; ++n) {
    double sum = 0.0;
    for (std::size_t k = 0; k < n_classes; ++k)
      sum += p_delta[k] / p_delta[n] * cfg.classes[k].lambda *
             cfg.classes[k].access_prob;
    saturated_density[n] = sum;
  }

  const std::int64_t meas_start =
      static_cast<std::int64_t>(static_cast<double>(spec.slots) * spec.warmup_fraction);
  const std::int64_t stride = std::max<std::int64_t>(1, spec.slots / 1024);

  // All randomness comes from one stream keyed by (seed, replication).  Draw
  // order per slot is fixed: (1) attempt coins, class-major then link-major,
  // skipped when the queue is empty or access_prob == 1; (2) spatial mode
  // only, per active link in that same order: tx x, tx y, link distance
  // (redrawn while it exceeds the torus cap), link angle; (3) mean-field:
  // one success coin per active link in order / spatial: per receiver in
  // order, its own fading then one fading draw per other active link in
  // order; (4) arrival coins, class-major then link-major, skipped for
  // classes with zero arrival rate.
  RandomStream rng(spec.seed, static_cast<std::uint64_t>(replication));

  std::vector<std::vector<StampQueue>> queues(n_classes);
  for (std::size_t n = 0; n < n_classes; ++n)
    queues[n].resize(static_cast<std::size_t>(population[n]));

  std::vector<std::int64_t> attempts_total(n_classes, 0), successes_total(n_classes, 0);
  std::vector<double> delay_sum(n_classes, 0.0);
  std::vector<std::int64_t> delay_count(n_classes, 0);
  std::vector<double> dist_sum(n_classes, 0.0);
  std::vector<std::int64_t> dist_count(n_classes, 0);
  std::vector<std::int64_t> slot_attempts(n_classes, 0), slot_successes(n_classes, 0);

  std::vector<std::vector<SirBin>> histogram(n_classes);
  const std::size_t n_bins =
      spec.sir_bin_edges.empty() ? 0 : spec.sir_bin_edges.size() - 1;
  if (spatial && n_bins > 0) {
    for (std::size_t n = 0; n < n_classes; ++n) {
      histogram[n].resize(n_bins);
      for (std::size_t b = 0; b < n_bins; ++b) {
        histogram[n][b].lo = spec.sir_bin_edges[b];
        histogram[n][b].hi = spec.sir_bin_edges[b + 1];
      }
    }
  }

  std::vector<std::vector<TrajectoryPoint>> trajectory(n_classes);
  std::int64_t resampled = 0;

  std::vector<ActiveLink> active;
  std::vector<std::uint8_t> attempting_flat;  // mean-field scratch
  std::vector<std::size_t> class_offset(n_classes, 0);
  {
    std::size_t off = 0;
    for (std::size_t n = 0; n < n_classes; ++n) {
      class_offset[n] = off;
      off += static_cast<std::size_t>(population[n]);
    }
    attempting_flat.resize(off);
  }
  std::vector<double> success_law(n_classes, 0.0);

  for (std::int64_t t = 0; t < spec.slots; ++t) {
    const bool measuring = t >= meas_start;

    // Pass 1: who attempts.
    active.clear();
    std::fill(slot_attempts.begin(), slot_attempts.end(), 0);
    std::fill(slot_successes.begin(), slot_successes.end(), 0);
    if (!spatial)
      std::fill(attempting_flat.begin(), attempting_flat.end(), 0);
    for (std::size_t n = 0; n < n_classes; ++n) {
      const double p = cfg.classes[n].access_prob;
      for (int i = 0; i < population[n]; ++i) {
        if (queues[n][static_cast<std::size_t>(i)].empty()) continue;
        const bool attempt = p >= 1.0 || rng.bernoulli(p);
        if (!attempt) continue;
        ++slot_attempts[n];
        if (spatial) {
          ActiveLink a;
          a.cls = static_cast<int>(n);
          a.link = i;
          active.push_back(a);
        } else {
          attempting_flat[class_offset[n] + static_cast<std::size_t>(i)] = 1;
        }
      }
    }

    // Pass 2: outcomes.
    if (spatial) {
      // High mobility: geometry is redrawn every slot, for active links only.
      for (ActiveLink& a : active) {
        a.tx_x = side * rng.uniform01();
        a.tx_y = side * rng.uniform01();
        double r = rng.rayleigh(cfg.classes[static_cast<std::size_t>(a.cls)].mean_link_distance);
        while (r > distance_cap) {
          ++resampled;
          r = rng.rayleigh(cfg.classes[static_cast<std::size_t>(a.cls)].mean_link_distance);
        }
        a.r = r;
        const double angle = 2.0 * std::numbers::pi * rng.uniform01();
        a.rx_x = torus_wrap(a.tx_x + r * std::cos(angle), side);
        a.rx_y = torus_wrap(a.tx_y + r * std::sin(angle), side);
      }
      for (std::size_t i = 0; i < active.size(); ++i) {
        const ActiveLink& a = active[i];
        const std::size_t n = static_cast<std::size_t>(a.cls);
        const TrafficClass& c = cfg.classes[n];
        const double own_fading = rng.exponential();
        const double signal = c.power * own_fading * std::pow(a.r * a.r, -half_alpha);
        double interference = 0.0;
        for (std::size_t j = 0; j < active.size(); ++j) {
          if (j == i) continue;
          const ActiveLink& b = active[j];
          const double d2 = torus_dist2(b.tx_x, b.tx_y, a.rx_x, a.rx_y, side);
          interference += cfg.classes[static_cast<std::size_t>(b.cls)].power *
                          rng.exponential() * std::pow(d2, -half_alpha);
        }
        const bool success =
            interference == 0.0 || signal > c.sir_threshold * interference;
        if (success) {
          ++slot_successes[n];
          StampQueue& q = queues[n][static_cast<std::size_t>(a.link)];
          if (measuring) {
            delay_sum[n] += static_cast<double>(t - q.front());
            ++delay_count[n];
          }
          q.pop();
        }
        if (measuring) {
          dist_sum[n] += a.r;
          ++dist_count[n];
          if (n_bins > 0) {
            const std::vector<double>& e = spec.sir_bin_edges;
            if (a.r >= e.front() && a.r < e.back()) {
              const std::size_t b = static_cast<std::size_t>(
                  std::upper_bound(e.begin(), e.end(), a.r) - e.begin() - 1);
              SirBin& bin = histogram[n][b];
              ++bin.attempts;
              bin.successes += success ? 1 : 0;
              bin.sum_r2 += a.r * a.r;
              bin.saturated_law_successes +=
                  std::exp(-gamma_r2[n] * a.r * a.r * saturated_density[n]);
            }
          }
        }
      }
    } else {
      // Mean field: each active link succeeds with the closed-form law
      // evaluated at this slot's empirical attempting densities (the
      // attempter's own contribution included).
      double density = 0.0;  // sum_k P_k^delta * lambda_k * attempting_k / M_k
      for (std::size_t k = 0; k < n_classes; ++k)
        density += p_delta[k] * cfg.classes[k].lambda *
                   static_cast<double>(slot_attempts[k]) /
                   static_cast<double>(population[k]);
      for (std::size_t n = 0; n < n_classes; ++n)
        success_law[n] = 1.0 / (1.0 + phi[n] / p_delta[n] * density);
      for (std::size_t n = 0; n < n_classes; ++n) {
        for (int i = 0; i < population[n]; ++i) {
          if (!attempting_flat[class_offset[n] + static_cast<std::size_t>(i)])
            continue;
          if (!rng.bernoulli(success_law[n])) continue;
          ++slot_successes[n];
          StampQueue& q = queues[n][static_cast<std::size_t>(i)];
          if (measuring) {
            delay_sum[n] += static_cast<double>(t - q.front());
            ++delay_count[n];
          }
          q.pop();
        }
      }
    }

    if (measuring) {
      for (std::size_t n = 0; n < n_classes; ++n) {
        attempts_total[n] += slot_attempts[n];
        successes_total[n] += slot_successes[n];
      }
    }

    // Pass 3: arrivals.  A packet arriving in slot t first contends in slot
    // t + 1; its stamp is t so that a departure in slot t' counts as delay
    // t' - t, which is 1 for service in the very next slot.
    for (std::size_t n = 0; n < n_classes; ++n) {
      const double rate = cfg.classes[n].arrival_rate;
      if (rate <= 0.0) continue;
      for (int i = 0; i < population[n]; ++i) {
        if (!rng.bernoulli(rate)) continue;
        StampQueue& q = queues[n][static_cast<std::size_t>(i)];
        if (q.size() >= spec.max_queue_len)
          throw QueueOverflowError(
              "queue overflow: class " + std::to_string(n) + " exceeded " +
                  std::to_string(spec.max_queue_len) + " packets at slot " +
                  std::to_string(t),
              static_cast<int>(n), t);
        q.push(t);
      }
    }

    if (t % stride == 0) {
      for (std::size_t n = 0; n < n_classes; ++n) {
        double total_len = 0.0;
        for (const StampQueue& q : queues[n])
          total_len += static_cast<double>(q.size());
        TrajectoryPoint pt;
        pt.slot = t;
        pt.mean_queue_len = total_len / static_cast<double>(population[n]);
        pt.attempts = slot_attempts[n];
        pt.successes = slot_successes[n];
        trajectory[n].push_back(pt);
      }
    }
  }

  SimulationResult out;
  out.queue_trajectory = std::move(trajectory);
  out.trajectory_stride = stride;
  out.measurement_slots = spec.slots - meas_start;
  out.resampled_distances = resampled;
  out.replications_done = 1;
  bool sub_one_access = false;
  for (const TrafficClass& c : cfg.classes)
    if (c.access_prob < 1.0) sub_one_access = true;
  out.unvalidated_regime = n_classes >= 2 && sub_one_access;
  out.sir_histogram = std::move(histogram);
  out.drift_per_replication.assign(n_classes, {});

  for (std::size_t n = 0; n < n_classes; ++n) {
    Estimate ps;
    if (attempts_total[n] > 0) {
      ps.value = static_cast<double>(successes_total[n]) /
                 static_cast<double>(attempts_total[n]);
      ps.defined = true;
      ps.samples = 1;
    }
    out.success_prob_hat.push_back(ps);

    Estimate delay;
    if (delay_count[n] > 0) {
      delay.value = delay_sum[n] / static_cast<double>(delay_count[n]);
      delay.defined = true;
      delay.samples = 1;
    }
    out.mean_delay_hat.push_back(delay);

    Estimate dist;
    if (dist_count[n] > 0) {
      dist.value = dist_sum[n] / static_cast<double>(dist_count[n]);
      dist.defined = true;
      dist.samples = 1;
    }
    out.mean_link_distance_hat.push_back(dist);

    // Drift: least-squares slope of mean queue length over the second half
    // of the run, per slot.
    std::vector<double> tail;
    for (const TrajectoryPoint& pt : out.queue_trajectory[n])
      if (pt.slot >= spec.slots / 2) tail.push_back(pt.mean_queue_len);
    const double slope = ls_slope(tail, static_cast<double>(stride));
    out.drift_per_replication[n].push_back(slope);
    Estimate drift;
    drift.value = slope;
    drift.defined = true;
    drift.samples = 1;
    out.drift_estimate.push_back(drift);
  }
  return out;
}

SimulationResult estimate_confidence(
    const std::vector<SimulationResult>& replications) {
  if (replications.empty())
    throw ValidationError("estimate_confidence needs at least one replication");
  const std::size_t n_classes = replications[0].success_prob_hat.size();
  for (const SimulationResult& r : replications) {
    if (r.success_prob_hat.size() != n_classes ||
        r.queue_trajectory.size() != n_classes ||
        r.sir_histogram.size() != n_classes)
      throw ValidationError("replications disagree on the class count");
  }

  SimulationResult out;
  out.trajectory_stride = replications[0].trajectory_stride;
  out.measurement_slots = replications[0].measurement_slots;
  out.replications_done = 0;
  for (const SimulationResult& r : replications)
    out.replications_done += r.replications_done;
  out.resampled_distances = 0;
  for (const SimulationResult& r : replications)
    out.resampled_distances += r.resampled_distances;
  out.unvalidated_regime = replications[0].unvalidated_regime;

  auto pool = [&](auto getter) {
    std::vector<Estimate> pooled(n_classes);
    for (std::size_t n = 0; n < n_classes; ++n) {
      std::vector<double> xs;
      for (const SimulationResult& r : replications) {
        const Estimate& e = getter(r, n);
        if (e.defined) xs.push_back(e.value);
      }
      pooled[n] = t_confidence(xs);
    }
    return pooled;
  };
  out.success_prob_hat = pool(
      [](const SimulationResult& r, std::size_t n) -> const Estimate& {
        return r.success_prob_hat[n];
      });
  out.mean_delay_hat = pool(
      [](const SimulationResult& r, std::size_t n) -> const Estimate& {
        return r.mean_delay_hat[n];
      });
  out.mean_link_distance_hat = pool(
      [](const SimulationResult& r, std::size_t n) -> const Estimate& {
        return r.mean_link_distance_hat[n];
      });
  out.drift_estimate = pool(
      [](const SimulationResult& r, std::size_t n) -> const Estimate& {
        return r.drift_estimate[n];
      });

  out.drift_per_replication.assign(n_classes, {});
  for (std::size_t n = 0; n < n_classes; ++n)
    for (const SimulationResult& r : replications)
      for (double d : r.drift_per_replication[n])
        out.drift_per_replication[n].push_back(d);

  // Trajectories: pointwise mean queue length, pooled counts.
  out.queue_trajectory.assign(n_classes, {});
  for (std::size_t n = 0; n < n_classes; ++n) {
    const std::vector<TrajectoryPoint>& first = replications[0].queue_trajectory[n];
    std::vector<TrajectoryPoint> merged = first;
    for (std::size_t rep = 1; rep < replications.size(); ++rep) {
      const std::vector<TrajectoryPoint>& other = replications[rep].queue_trajectory[n];
      if (other.size() != first.size())
        throw ValidationError("replications disagree on trajectory length");
      for (std::size_t i = 0; i < merged.size(); ++i) {
        merged[i].mean_queue_len += other[i].mean_queue_len;
        merged[i].attempts += other[i].attempts;
        merged[i].successes += other[i].successes;
      }
    }
    for (TrajectoryPoint& pt : merged)
      pt.mean_queue_len /= static_cast<double>(replications.size());
    out.queue_trajectory[n] = std::move(merged);
  }

  // Histograms: pooled cells.
  out.sir_histogram.assign(n_classes, {});
  for (std::size_t n = 0; n < n_classes; ++n) {
    std::vector<SirBin> merged = replications[0].sir_histogram[n];
    for (std::size_t rep = 1; rep < replications.size(); ++rep) {
      const std::vector<SirBin>& other = replications[rep].sir_histogram[n];
      if (other.size() != merged.size())
        throw ValidationError("replications disagree on histogram shape");
      for (std::size_t b = 0; b < merged.size(); ++b) {
        merged[b].attempts += other[b].attempts;
        merged[b].successes += other[b].successes;
        merged[b].sum_r2 += other[b].sum_r2;
        merged[b].saturated_law_successes += other[b].saturated_law_successes;
      }
    }
    out.sir_histogram[n] = std::move(merged);
  }
  return out;
}

SimulationResult run(const SimulationSpec& spec) {
  validate_spec(spec);
  std::vector<SimulationResult> reps;
  reps.reserve(static_cast<std::size_t>(spec.replications));
  for (int r = 0; r < spec.replications; ++r)
    reps.push_back(run_single_replication(spec, r));
  return estimate_confidence(reps);
}

SimulationResult run_mean_field(SimulationSpec spec) {
  spec.mode = SimMode::MeanField;
  return run(spec);
}

}  // namespace aloha
