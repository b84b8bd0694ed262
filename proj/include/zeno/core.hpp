#pragma once

// Domain types and the two primitive operations shared by every computation
// path: exact free evolution of the single-excitation block and the
// instantaneous system-probe kick.
//
// Units: hbar = 1, energies are angular frequencies, times are in units of
// 1/G unless stated otherwise.

#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace zeno {

/// Raised when a simulation would exceed a hard size limit.
class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Raised when a closed-form formula is asked for outside its regime.
class UnsupportedRegime : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

template <typename Scalar>
using Complex = std::complex<Scalar>;

/// Amplitudes on (|1,0>, |0,1>).
template <typename Scalar>
using Amplitudes = Eigen::Matrix<Complex<Scalar>, 2, 1>;

template <typename Scalar>
using Propagator2 = Eigen::Matrix<Complex<Scalar>, 2, 2>;

template <typename Scalar>
struct ProbeLevels {
  Scalar excited{0};  // energy of |1_M>
  Scalar ground{0};   // energy of |0_M>
};

template <typename Scalar = double>
struct SystemParams {
  Scalar coupling{1};  // G
  Scalar energy_a{0};  // eps_a
  Scalar energy_b{0};  // eps_b
  // Per-probe free energies; probes beyond the end of the list use zero.
  std::vector<ProbeLevels<Scalar>> probe_levels{};

  bool resonant() const { return energy_a == energy_b; }

  ProbeLevels<Scalar> probe(std::size_t k) const {
    return k < probe_levels.size() ? probe_levels[k] : ProbeLevels<Scalar>{};
  }

  void validate() const {
    using std::isfinite;
    if (!isfinite(coupling) || !(coupling > 0))
      throw std::invalid_argument("coupling G must be finite and positive");
    if (!isfinite(energy_a) || !isfinite(energy_b))
      throw std::invalid_argument("qubit energies must be finite");
    for (const auto& p : probe_levels)
      if (!isfinite(p.excited) || !isfinite(p.ground))
        throw std::invalid_argument("probe energies must be finite");
  }
};

template <typename Scalar = double>
struct Kick {
  Scalar time;
  Scalar strength;  // g, radians
};

template <typename Scalar = double>
struct KickSchedule {
  std::vector<Kick<Scalar>> kicks{};
  Scalar total_time{0};
  // Number of uniform sampling intervals on [0, total_time].
  std::size_t resolution{1000};

  void validate() const {
    using std::isfinite;
    if (!isfinite(total_time) || total_time < 0)
      throw std::invalid_argument("total time must be finite and non-negative");
    if (resolution == 0) throw std::invalid_argument("resolution must be positive");
    for (std::size_t k = 0; k < kicks.size(); ++k) {
      const auto& kick = kicks[k];
      if (!isfinite(kick.time) || !isfinite(kick.strength))
        throw std::invalid_argument("kick time and strength must be finite");
      if (kick.time < 0 || kick.time > total_time)
        throw std::invalid_argument("kick time outside [0, T]: " + std::to_string(kick.time));
      if (k > 0 && !(kick.time > kicks[k - 1].time))
        throw std::invalid_argument("kick times must be strictly increasing");
    }
  }
};

/// State restricted to the single-excitation sector plus the total weight
/// that has leaked into the frozen |0,0>|1_M^(k)> branches.
template <typename Scalar = double>
struct ReducedState {
  Amplitudes<Scalar> amplitudes{Amplitudes<Scalar>(Complex<Scalar>(1), Complex<Scalar>(0))};
  Scalar leaked{0};

  static ReducedState initial() { return {}; }

  Complex<Scalar> survivor() const { return amplitudes(0); }
  Complex<Scalar> partner() const { return amplitudes(1); }

  Scalar p10() const { return std::norm(amplitudes(0)); }
  Scalar p01() const { return std::norm(amplitudes(1)); }
  Scalar pvac() const { return leaked; }
  Scalar norm() const { return p10() + p01() + leaked; }
};

template <typename Scalar = double>
struct Sample {
  Scalar t;
  Scalar p10;
  Scalar p01;
  Scalar pvac;
  Scalar norm;
};

template <typename Scalar = double>
struct Trajectory {
  std::vector<Sample<Scalar>> samples{};

  const Sample<Scalar>& final() const { return samples.back(); }
};

/// cos(g) and sin(g), exact at integer multiples of the floating-point pi/2.
template <typename Scalar>
std::pair<Scalar, Scalar> kick_cos_sin(Scalar g) {
  constexpr Scalar half_pi = std::numbers::pi_v<Scalar> / 2;
  const Scalar quarter = std::nearbyint(g / half_pi);
  if (quarter * half_pi == g && std::abs(quarter) < Scalar(1) / std::numeric_limits<Scalar>::epsilon()) {
    switch (static_cast<long long>(std::fmod(quarter, Scalar(4)) + 4) % 4) {
      case 0: return {Scalar(1), Scalar(0)};
      case 1: return {Scalar(0), Scalar(1)};
      case 2: return {Scalar(-1), Scalar(0)};
      default: return {Scalar(0), Scalar(-1)};
    }
  }
  return {std::cos(g), std::sin(g)};
}

/// exp(-i H dt) for H = [[eps_a, G], [G, eps_b]] on (|1,0>, |0,1>).
///
/// Writing H = m I + d sz + G sx with m the mean energy, d the half detuning
/// and W = sqrt(d^2 + G^2):
///   U = exp(-i m dt) [cos(W dt) I - i sin(W dt)/W (d sz + G sx)].
template <typename Scalar>
Propagator2<Scalar> free_propagator(Scalar dt, const SystemParams<Scalar>& params) {
  if (!(dt >= 0)) throw std::invalid_argument("free evolution needs dt >= 0");
  using C = Complex<Scalar>;
  const Scalar mean = (params.energy_a + params.energy_b) / 2;
  const Scalar half_detuning = (params.energy_a - params.energy_b) / 2;
  const Scalar freq = std::hypot(half_detuning, params.coupling);
  const Scalar c = std::cos(freq * dt);
  const Scalar s = std::sin(freq * dt) / freq;
  const C phase = std::polar(Scalar(1), -mean * dt);
  const C i(0, 1);

  Propagator2<Scalar> u;
  u << C(c) - i * s * half_detuning, -i * s * params.coupling,
      -i * s * params.coupling, C(c) + i * s * half_detuning;
  return phase * u;
}

template <typename Scalar>
ReducedState<Scalar> free_propagate(const ReducedState<Scalar>& state, Scalar dt,
                                    const SystemParams<Scalar>& params) {
  ReducedState<Scalar> out = state;
  out.amplitudes = free_propagator(dt, params) * state.amplitudes;
  return out;
}

/// Kick with a fresh probe: a stays, b -> b cos g, and |b|^2 sin^2 g moves to
/// the orthogonal vacuum branch flagged by that probe.
template <typename Scalar>
ReducedState<Scalar> apply_kick(const ReducedState<Scalar>& state, Scalar g) {
  const auto [c, s] = kick_cos_sin(g);
  ReducedState<Scalar> out = state;
  out.leaked = state.leaked + std::norm(state.amplitudes(1)) * s * s;
  out.amplitudes(1) = state.amplitudes(1) * c;
  return out;
}

/// Which-way information written into the probe by one kick: 1 - |cos g|.
/// Zero when the probe is untouched (g = 0) or only phase-flips the system
/// (g = pi); one for a complete measurement (g = pi/2).
template <typename Scalar>
Scalar information_measure(Scalar g) {
  return Scalar(1) - std::abs(kick_cos_sin(g).first);
}

template <typename Scalar>
Sample<Scalar> sample_of(const ReducedState<Scalar>& state, Scalar t) {
  return {t, state.p10(), state.p01(), state.pvac(), state.norm()};
}

}  // namespace zeno
