#pragma once

#include <cstddef>
#include <vector>

#include "zeno/core.hpp"

namespace zeno {

/// Uniform sampling grid t_i = T i / resolution, i = 0..resolution.
template <typename Scalar>
std::vector<Scalar> sample_grid(const KickSchedule<Scalar>& schedule) {
  if (schedule.total_time == 0) return {Scalar(0)};
  std::vector<Scalar> grid(schedule.resolution + 1);
  for (std::size_t i = 0; i <= schedule.resolution; ++i)
    grid[i] = schedule.total_time * static_cast<Scalar>(i) / static_cast<Scalar>(schedule.resolution);
  grid.back() = schedule.total_time;
  return grid;
}

/// Drives a state through a kick schedule, interleaving free evolution and
/// kicks, and records a sample at every grid point. Each kick contributes two
/// samples at the same t (just before and just after); a grid point that
/// coincides with a kick time is covered by that pair and not repeated.
///
///   propagate(State&, Scalar dt)
///   kick(State&, std::size_t probe, Scalar g)
///   measure(const State&, Scalar t) -> Sample<Scalar>
template <typename Scalar, typename State, typename Propagate, typename KickFn, typename Measure>
Trajectory<Scalar> walk_schedule(const KickSchedule<Scalar>& schedule, State& state,
                                 Propagate&& propagate, KickFn&& kick, Measure&& measure) {
  schedule.validate();
  const auto grid = sample_grid(schedule);

  Trajectory<Scalar> out;
  out.samples.reserve(grid.size() + 2 * schedule.kicks.size());

  Scalar now = 0;
  auto advance = [&](Scalar t) {
    if (t > now) {
      propagate(state, t - now);
      now = t;
    }
  };

  std::size_t next = 0;
  for (const Scalar t : grid) {
    bool covered = false;
    while (next < schedule.kicks.size() && schedule.kicks[next].time <= t) {
      const auto& k = schedule.kicks[next];
      advance(k.time);
      out.samples.push_back(measure(state, now));
      kick(state, next, k.strength);
      out.samples.push_back(measure(state, now));
      covered = k.time == t;
      ++next;
    }
    if (!covered) {
      advance(t);
      out.samples.push_back(measure(state, t));
    }
  }
  return out;
}

}  // namespace zeno
