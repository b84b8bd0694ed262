#pragma once

// Closed-form transition rates dP10/dt at resonance, and the finite-difference
// instrument used to check them against simulation.

#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>

#include "zeno/core.hpp"
#include "zeno/engine.hpp"

namespace zeno {

namespace detail {

template <typename Scalar>
void require_resonance(const SystemParams<Scalar>& params) {
  params.validate();
  if (!params.resonant())
    throw UnsupportedRegime("closed-form rates hold only at resonance (eps_a == eps_b)");
}

template <typename Scalar>
void require_time(Scalar t, const char* what) {
  if (!std::isfinite(t) || t < 0) throw std::invalid_argument(std::string(what) + " must be finite and >= 0");
}

}  // namespace detail

/// Free evolution: -2 G cos(Gt) sin(Gt).
template <typename Scalar>
Scalar rate_free(Scalar t, const SystemParams<Scalar>& params) {
  detail::require_resonance(params);
  detail::require_time(t, "t");
  const Scalar G = params.coupling;
  return -2 * G * std::cos(G * t) * std::sin(G * t);
}

/// Right-hand rate just after one kick at t_m: the free rate scaled by cos g.
template <typename Scalar>
Scalar rate_after_one_kick(Scalar t_m, Scalar g, const SystemParams<Scalar>& params) {
  return rate_free(t_m, params) * kick_cos_sin(g).first + Scalar(0);
}

/// Rate a time t after a g = pi kick at t_m: G sin(2G (t_m - t)). Positive
/// while t < t_m, i.e. while P10 climbs back towards the echo at t = t_m.
template <typename Scalar>
Scalar rate_super_zeno(Scalar t_m, Scalar t, const SystemParams<Scalar>& params) {
  detail::require_resonance(params);
  detail::require_time(t_m, "t_m");
  detail::require_time(t, "t");
  const Scalar G = params.coupling;
  return G * std::sin(2 * G * (t_m - t));
}

/// Rate after free evolution t1 followed by N back-to-back kicks:
/// -2 G cos(G t1) sin(G t1) cos^N g. Built by repeated multiplication so that
/// consecutive N differ by exactly one factor of cos g.
template <typename Scalar>
Scalar rate_after_n_kicks(Scalar t1, Scalar g, std::size_t n, const SystemParams<Scalar>& params) {
  Scalar rate = rate_free(t1, params);
  const Scalar c = kick_cos_sin(g).first;
  for (std::size_t k = 0; k < n; ++k) rate *= c;
  return rate + Scalar(0);
}

/// Which closed form to evaluate is decided by the optional fields:
/// N set -> N back-to-back kicks at t; g set -> one kick at t_m (or t);
/// neither -> free evolution at t.
template <typename Scalar = double>
struct RateQuery {
  Scalar t{0};
  std::optional<Scalar> t_m{};
  std::optional<Scalar> g{};
  std::optional<std::size_t> n{};
  SystemParams<Scalar> params{};
};

template <typename Scalar>
Scalar analytic_rate(const RateQuery<Scalar>& q) {
  if (q.n) {
    if (!q.g) throw std::invalid_argument("N-kick rate needs g");
    return rate_after_n_kicks(q.t, *q.g, *q.n, q.params);
  }
  if (q.g) return rate_after_one_kick(q.t_m.value_or(q.t), *q.g, q.params);
  return rate_free(q.t, q.params);
}

enum class DifferenceSide { left, right, central };

/// Raised when the finite-difference step is too small for double precision.
class ConditioningError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

inline constexpr double kMinDifferenceStep = 1e-9;
inline constexpr double kOneSidedStep = 1e-6;
inline constexpr double kOneSidedTolerance = 1e-4;
inline constexpr double kCentralStep = 1e-5;
inline constexpr double kCentralTolerance = 1e-8;

/// Derivative of p10(t) by a one-sided (O(step)) or central (O(step^2))
/// difference quotient.
template <typename Scalar, typename Fn>
Scalar finite_difference_rate(Fn&& p10, Scalar t, DifferenceSide side, Scalar step) {
  if (!(step > 0)) throw std::invalid_argument("finite-difference step must be positive");
  if (step < Scalar(kMinDifferenceStep))
    throw ConditioningError("finite-difference step below 1e-9 is dominated by round-off");
  switch (side) {
    case DifferenceSide::right: return (p10(t + step) - p10(t)) / step;
    case DifferenceSide::left: return (p10(t) - p10(t - step)) / step;
    case DifferenceSide::central: return (p10(t + step) - p10(t - step)) / (2 * step);
  }
  throw std::invalid_argument("unknown difference side");
}

/// Same, with p10(t) taken from a fresh engine evaluation of the schedule.
template <typename Scalar>
Scalar finite_difference_rate(const KickSchedule<Scalar>& schedule, const SystemParams<Scalar>& params, Scalar t,
                              DifferenceSide side, Scalar step) {
  return finite_difference_rate(
      [&](Scalar time) { return engine_state_at(schedule, params, time).p10(); }, t, side, step);
}

}  // namespace zeno
