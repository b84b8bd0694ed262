#pragma once

// Reduced O(N) simulation. Every kick moves weight from the |0,1> amplitude
// into a vacuum branch |0,0>|1_M^(k)> tagged by a distinct probe; those
// branches are mutually orthogonal and |0,0> does not evolve under H_S, so
// their total weight is tracked as a single real accumulator.

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <thread>
#include <vector>

#include "zeno/core.hpp"
#include "zeno/schedule.hpp"

namespace zeno {

namespace detail {

// Free evolution with the last propagator memoised; equally spaced schedules
// hit the same dt over and over.
template <typename Scalar>
class CachedPropagator {
 public:
  explicit CachedPropagator(const SystemParams<Scalar>& params) : params_(params) {}

  void operator()(ReducedState<Scalar>& state, Scalar dt) {
    if (!valid_ || dt != dt_) {
      u_ = free_propagator(dt, params_);
      dt_ = dt;
      valid_ = true;
    }
    state.amplitudes = u_ * state.amplitudes;
  }

 private:
  const SystemParams<Scalar>& params_;
  Propagator2<Scalar> u_;
  Scalar dt_{0};
  bool valid_{false};
};

}  // namespace detail

template <typename Scalar>
Trajectory<Scalar> engine_run(const KickSchedule<Scalar>& schedule, const SystemParams<Scalar>& params) {
  params.validate();
  auto state = ReducedState<Scalar>::initial();
  detail::CachedPropagator<Scalar> propagate(params);
  return walk_schedule(
      schedule, state, propagate,
      [](ReducedState<Scalar>& s, std::size_t, Scalar g) { s = apply_kick(s, g); },
      [](const ReducedState<Scalar>& s, Scalar t) { return sample_of(s, t); });
}

/// State at time t >= 0 after every kick with time <= t. t may run past T.
template <typename Scalar>
ReducedState<Scalar> engine_state_at(const KickSchedule<Scalar>& schedule, const SystemParams<Scalar>& params,
                                     Scalar t) {
  schedule.validate();
  params.validate();
  if (!(t >= 0)) throw std::invalid_argument("engine_state_at needs t >= 0");
  auto state = ReducedState<Scalar>::initial();
  detail::CachedPropagator<Scalar> propagate(params);
  Scalar now = 0;
  for (const auto& k : schedule.kicks) {
    if (k.time > t) break;
    propagate(state, k.time - now);
    now = k.time;
    state = apply_kick(state, k.strength);
  }
  propagate(state, t - now);
  return state;
}

/// State at the end of the schedule; same result as the last sample of
/// engine_run without building the trajectory.
template <typename Scalar>
ReducedState<Scalar> engine_final(const KickSchedule<Scalar>& schedule, const SystemParams<Scalar>& params) {
  return engine_state_at(schedule, params, schedule.total_time);
}

enum class SpacingMode {
  fixed_total_time,  // T given, tau = T / N
  fixed_interval,    // tau given, T = N tau
};

struct FinalProbabilities {
  double p10;
  double p01;
  double pvac;
};

/// N kicks of strength g at k tau, k = 1..N. `time` is T or tau depending on
/// the mode.
template <typename Scalar>
KickSchedule<Scalar> equally_spaced_schedule(std::size_t n, Scalar g, SpacingMode mode, Scalar time) {
  if (!(time > 0)) throw std::invalid_argument("equally spaced schedule needs a positive time");
  KickSchedule<Scalar> schedule;
  schedule.total_time = mode == SpacingMode::fixed_total_time ? time : time * static_cast<Scalar>(n);
  schedule.kicks.reserve(n);
  for (std::size_t k = 1; k <= n; ++k) {
    Scalar t = time * static_cast<Scalar>(k);
    if (mode == SpacingMode::fixed_total_time) t = k == n ? time : t / static_cast<Scalar>(n);
    schedule.kicks.push_back({t, g});
  }
  schedule.resolution = 1;
  return schedule;
}

template <typename Scalar>
ReducedState<Scalar> run_equally_spaced_state(std::size_t n, Scalar g, SpacingMode mode, Scalar time,
                                              const SystemParams<Scalar>& params) {
  return engine_final(equally_spaced_schedule(n, g, mode, time), params);
}

template <typename Scalar>
FinalProbabilities run_equally_spaced(std::size_t n, Scalar g, SpacingMode mode, Scalar time,
                                      const SystemParams<Scalar>& params) {
  const auto s = run_equally_spaced_state(n, g, mode, time, params);
  return {static_cast<double>(s.p10()), static_cast<double>(s.p01()), static_cast<double>(s.pvac())};
}

template <typename Scalar = double>
struct SweepSpec {
  SpacingMode mode{SpacingMode::fixed_total_time};
  std::vector<Scalar> g_values{};
  std::vector<std::size_t> n_values{};
  Scalar time{0};  // T or tau, per mode
  SystemParams<Scalar> params{};

  void validate() const {
    if (g_values.empty()) throw std::invalid_argument("sweep needs at least one g value");
    if (n_values.empty()) throw std::invalid_argument("sweep needs at least one N value");
    if (!(time > 0) || !std::isfinite(time)) throw std::invalid_argument("sweep time must be positive");
    for (const auto g : g_values)
      if (!std::isfinite(g)) throw std::invalid_argument("g values must be finite");
    params.validate();
  }
};

template <typename Scalar = double>
struct SweepRow {
  Scalar g;
  std::size_t n;
  Scalar p10;
  Scalar p01;
  Scalar pvac;
};

/// One row per (g, N), g outer and N inner. Rows are computed independently
/// on up to `threads` workers (0 = hardware concurrency); each row lands in a
/// preassigned slot, so the table does not depend on scheduling.
template <typename Scalar>
std::vector<SweepRow<Scalar>> sweep(const SweepSpec<Scalar>& spec, unsigned threads = 0) {
  spec.validate();
  const std::size_t rows = spec.g_values.size() * spec.n_values.size();
  std::vector<SweepRow<Scalar>> table(rows);

  auto compute = [&](std::size_t r) {
    const Scalar g = spec.g_values[r / spec.n_values.size()];
    const std::size_t n = spec.n_values[r % spec.n_values.size()];
    const auto s = run_equally_spaced_state(n, g, spec.mode, spec.time, spec.params);
    table[r] = {g, n, s.p10(), s.p01(), s.pvac()};
  };

  if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, rows));
  if (threads <= 1) {
    for (std::size_t r = 0; r < rows; ++r) compute(r);
    return table;
  }

  std::vector<std::jthread> workers;
  workers.reserve(threads);
  for (unsigned w = 0; w < threads; ++w)
    workers.emplace_back([&, w] {
      for (std::size_t r = w; r < rows; r += threads) compute(r);
    });
  workers.clear();
  return table;
}

}  // namespace zeno
