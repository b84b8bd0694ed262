#pragma once

// Brute-force state-vector simulation of the two system qubits together with
// every probe qubit. Exists to be trusted, not to be fast.
//
// Basis ordering: index = b + 2 a + 4 p, where a and b are the occupation bits
// of the two system qubits and p holds the probe bits little-endian (probe k
// is bit k of p). So |1,0> with all probes in |0_M> is index 2.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <ostream>
#include <string>

#include <Eigen/Core>

#include "zeno/core.hpp"
#include "zeno/schedule.hpp"

namespace zeno {

inline constexpr std::size_t kMaxProbes = 20;

template <typename Scalar = double>
struct FullState {
  using Vector = Eigen::Matrix<Complex<Scalar>, Eigen::Dynamic, 1>;

  Vector amplitudes;
  std::size_t n_probes{0};

  static constexpr std::size_t index(bool a, bool b, std::uint64_t probes = 0) {
    return static_cast<std::size_t>(b) | (static_cast<std::size_t>(a) << 1) |
           (static_cast<std::size_t>(probes) << 2);
  }

  std::size_t dimension() const { return static_cast<std::size_t>(amplitudes.size()); }

  Scalar norm() const { return amplitudes.squaredNorm(); }

  /// Population of a system basis state summed over every probe configuration.
  Scalar system_population(bool a, bool b) const {
    Scalar sum = 0;
    const std::size_t base = index(a, b);
    for (std::size_t i = base; i < dimension(); i += 4) sum += std::norm(amplitudes(i));
    return sum;
  }

  Scalar p10() const { return system_population(true, false); }
  Scalar p01() const { return system_population(false, true); }
  Scalar pvac() const { return system_population(false, false); }
};

template <typename Scalar = double>
FullState<Scalar> oracle_init(std::size_t n_probes) {
  if (n_probes > kMaxProbes)
    throw CapacityError("oracle supports at most " + std::to_string(kMaxProbes) + " probes, got " +
                        std::to_string(n_probes));
  FullState<Scalar> state;
  state.n_probes = n_probes;
  state.amplitudes = FullState<Scalar>::Vector::Zero(std::size_t{4} << n_probes);
  state.amplitudes(FullState<Scalar>::index(true, false)) = Complex<Scalar>(1);
  return state;
}

/// exp(-i (H_S + H_M) dt). H_S is block diagonal in the system factor:
/// |0,0> has energy 0, |1,1> has eps_a + eps_b, and the single-excitation pair
/// rotates under the closed-form 2x2 propagator. H_M is diagonal in the probes.
template <typename Scalar>
void oracle_free_step_inplace(FullState<Scalar>& state, Scalar dt, const SystemParams<Scalar>& params) {
  using C = Complex<Scalar>;
  const Propagator2<Scalar> u = free_propagator(dt, params);
  const C doubly_excited = std::polar(Scalar(1), -(params.energy_a + params.energy_b) * dt);
  const std::size_t n_configs = std::size_t{1} << state.n_probes;

  const bool probes_trivial = [&] {
    for (std::size_t k = 0; k < state.n_probes; ++k) {
      const auto lv = params.probe(k);
      if (lv.excited != 0 || lv.ground != 0) return false;
    }
    return true;
  }();

  for (std::size_t p = 0; p < n_configs; ++p) {
    C probe_phase(1);
    if (!probes_trivial) {
      Scalar energy = 0;
      for (std::size_t k = 0; k < state.n_probes; ++k) {
        const auto lv = params.probe(k);
        energy += ((p >> k) & 1U) ? lv.excited : lv.ground;
      }
      probe_phase = std::polar(Scalar(1), -energy * dt);
    }
    const std::size_t base = p << 2;
    auto& v = state.amplitudes;
    const C x10 = v(base + 2);
    const C x01 = v(base + 1);
    v(base + 2) = probe_phase * (u(0, 0) * x10 + u(0, 1) * x01);
    v(base + 1) = probe_phase * (u(1, 0) * x10 + u(1, 1) * x01);
    v(base + 0) *= probe_phase;
    v(base + 3) *= probe_phase * doubly_excited;
  }
}

template <typename Scalar>
FullState<Scalar> oracle_free_step(FullState<Scalar> state, Scalar dt, const SystemParams<Scalar>& params) {
  oracle_free_step_inplace(state, dt, params);
  return state;
}

/// I cos g - i sin g Gamma_k, where Gamma_k swaps (b=1, probe_k=0) with
/// (b=0, probe_k=1). Applied as an exact rotation on each index pair.
template <typename Scalar>
void oracle_kick_inplace(FullState<Scalar>& state, std::size_t probe, Scalar g) {
  if (probe >= state.n_probes)
    throw std::out_of_range("probe index " + std::to_string(probe) + " out of range for " +
                            std::to_string(state.n_probes) + " probes");
  using C = Complex<Scalar>;
  const auto [c, s] = kick_cos_sin(g);
  const C mis(0, -s);
  const std::size_t probe_bit = std::size_t{1} << (probe + 2);
  auto& v = state.amplitudes;
  for (std::size_t i = 0; i < state.dimension(); ++i) {
    if ((i & 1U) == 0 || (i & probe_bit) != 0) continue;
    const std::size_t j = (i ^ 1U) | probe_bit;
    const C xi = v(i);
    const C xj = v(j);
    v(i) = c * xi + mis * xj;
    v(j) = mis * xi + c * xj;
  }
}

template <typename Scalar>
FullState<Scalar> oracle_kick(FullState<Scalar> state, std::size_t probe, Scalar g) {
  oracle_kick_inplace(state, probe, g);
  return state;
}

template <typename Scalar>
Sample<Scalar> sample_of(const FullState<Scalar>& state, Scalar t) {
  return {t, state.p10(), state.p01(), state.pvac(), state.norm()};
}

/// Runs a schedule on the full register, using probe k for the k-th kick.
template <typename Scalar>
Trajectory<Scalar> oracle_run(const KickSchedule<Scalar>& schedule, const SystemParams<Scalar>& params) {
  params.validate();
  auto state = oracle_init<Scalar>(schedule.kicks.size());
  return walk_schedule(
      schedule, state,
      [&](FullState<Scalar>& s, Scalar dt) { oracle_free_step_inplace(s, dt, params); },
      [](FullState<Scalar>& s, std::size_t k, Scalar g) { oracle_kick_inplace(s, k, g); },
      [](const FullState<Scalar>& s, Scalar t) { return sample_of(s, t); });
}

/// One `index re im` line per basis state, in basis order.
template <typename Scalar>
void dump_state(std::ostream& os, const FullState<Scalar>& state) {
  const auto old_precision = os.precision(17);
  os << "# n_probes=" << state.n_probes << " index = b + 2a + 4*probes (probe k at bit k)\n";
  for (std::size_t i = 0; i < state.dimension(); ++i)
    os << i << ' ' << state.amplitudes(i).real() << ' ' << state.amplitudes(i).imag() << '\n';
  os.precision(old_precision);
}

}  // namespace zeno
