// The mean-estimation circuit and its estimators.
//
//   index |0>^n  --H--[      ]--H--o--H--
//   data  |0>    -----[ f(x) ]-----*-----
//   mean  |0>    ------------------X----- (measure)
//
// After the final Hadamard layer the mean qubit reads 1 with probability mu^2,
// mu = (1/N) sum_x f(x).

#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qmean/circuit.hpp"
#include "qmean/encoding.hpp"
#include "qmean/statevector.hpp"

namespace qmean {

inline void add_index_hadamards(Circuit& c) {
  for (Qubit q = 0; q < c.layout().n_index; ++q) c.add(GateOp::h(q));
}

/// X on the mean qubit, fired when the index register is all zeros and the
/// data qubit is 1.
inline GateOp extraction_gate(const QubitLayout& layout) {
  std::vector<Control> controls;
  controls.reserve(layout.n_index + 1);
  for (Qubit q = 0; q < layout.n_index; ++q) controls.push_back({q, Polarity::Open});
  controls.push_back({layout.data_pos(), Polarity::Closed});
  return GateOp::x(layout.mean_pos(), std::move(controls));
}

/// H layer, oracle, H layer, extraction, H layer; markers psi1..psi5 follow
/// each stage.
inline Circuit build_mean_circuit(const Dataset& dataset, OracleForm form = OracleForm::Fused) {
  const QubitLayout layout = dataset.layout();
  Circuit c(layout);
  add_index_hadamards(c);
  c.mark(Stage::Psi1);
  c.append(build_qram_oracle(dataset, layout, form));
  c.mark(Stage::Psi2);
  add_index_hadamards(c);
  c.mark(Stage::Psi3);
  c.add(extraction_gate(layout));
  c.mark(Stage::Psi4);
  add_index_hadamards(c);
  c.mark(Stage::Psi5);
  return c;
}

// Analytic checkpoints ------------------------------------------------------

/// Expected state at a marker, computed directly from f without simulating
/// gates. Also carries the aggregates of the final-state decomposition:
/// s_hat = sum sqrt(1 - f^2), s = sum f, and the offset delta(x) which is
/// N - 1 at x = 0 and -1 elsewhere.
struct CheckpointState {
  Stage stage;
  std::vector<Amplitude> amps;
  double s_hat = 0.0;
  double s = 0.0;
  std::size_t n = 0;

  double delta(std::size_t x) const noexcept {
    return x == 0 ? static_cast<double>(n) - 1.0 : -1.0;
  }
};

inline constexpr std::size_t kMaxAnalyticIndexQubits = 12;

/// psi3 uses a direct O(N^2) sum over (-1)^(x.y), so n_index is capped at 12.
inline CheckpointState expected_checkpoint(const Dataset& dataset, Stage stage) {
  const QubitLayout layout = dataset.layout();
  if (layout.n_index > kMaxAnalyticIndexQubits) {
    throw CapacityError("analytic checkpoints limited to n_index <= " + std::to_string(kMaxAnalyticIndexQubits));
  }
  const std::size_t n = layout.index_size();
  const double nd = static_cast<double>(n);
  const auto& f = dataset.f();

  std::vector<double> c(n);
  CheckpointState cp{stage, std::vector<Amplitude>(std::size_t{1} << layout.total_qubits()), 0.0, 0.0, n};
  for (std::size_t x = 0; x < n; ++x) {
    c[x] = std::sqrt(1.0 - f[x] * f[x]);
    cp.s_hat += c[x];
    cp.s += f[x];
  }
  auto& a = cp.amps;
  const double inv_sqrt_n = 1.0 / std::sqrt(nd);

  // psi3(x, d) = (1/N) sum_y (-1)^(x.y) e_d(y), e_0 = sqrt(1 - f^2), e_1 = f
  auto psi3 = [&](std::size_t x, unsigned d) {
    double sum = 0.0;
    for (std::size_t y = 0; y < n; ++y) {
      const double e = d ? f[y] : c[y];
      sum += (std::popcount(x & y) & 1) ? -e : e;
    }
    return sum / nd;
  };

  switch (stage) {
    case Stage::Psi1:
      for (std::size_t x = 0; x < n; ++x) a[layout.basis(x, 0, 0)] = inv_sqrt_n;
      break;
    case Stage::Psi2:
      for (std::size_t x = 0; x < n; ++x) {
        a[layout.basis(x, 0, 0)] = c[x] * inv_sqrt_n;
        a[layout.basis(x, 1, 0)] = f[x] * inv_sqrt_n;
      }
      break;
    case Stage::Psi3:
    case Stage::Psi4:
      for (std::size_t x = 0; x < n; ++x) {
        a[layout.basis(x, 0, 0)] = psi3(x, 0);
        a[layout.basis(x, 1, 0)] = psi3(x, 1);
      }
      if (stage == Stage::Psi4) {
        a[layout.basis(0, 1, 1)] = a[layout.basis(0, 1, 0)];
        a[layout.basis(0, 1, 0)] = 0.0;
      }
      break;
    case Stage::Psi5: {
      // The last H layer undoes the middle one except on the branch moved to
      // mean = 1, whose amplitude s/N spreads uniformly over the index.
      const double moved = cp.s / nd;
      for (std::size_t x = 0; x < n; ++x) {
        a[layout.basis(x, 0, 0)] = c[x] * inv_sqrt_n;
        a[layout.basis(x, 1, 0)] = (f[x] - moved) * inv_sqrt_n;
        a[layout.basis(x, 1, 1)] = moved * inv_sqrt_n;
      }
      break;
    }
  }
  return cp;
}

// Estimators ------------------------------------------------------------------

/// mu = (1/N) sum f over the padded N.
inline double classical_mean(const Dataset& dataset) {
  double sum = 0.0;
  for (double v : dataset.f()) sum += v;
  return sum / static_cast<double>(dataset.size());
}

inline StateVector simulate_mean_circuit(const Dataset& dataset, std::size_t max_qubits = kDefaultMaxQubits) {
  const QubitLayout layout = dataset.layout();
  return apply_circuit(new_ground_state(layout, max_qubits), build_mean_circuit(dataset));
}

/// P(mean qubit = 1) of the ideal final state.
inline double exact_probability(const Dataset& dataset, std::size_t max_qubits = kDefaultMaxQubits) {
  return simulate_mean_circuit(dataset, max_qubits).probability_of_bit(dataset.layout().mean_pos(), 1);
}

struct MeanEstimate {
  std::uint64_t shots = 0;  // 0 in exact mode
  std::uint64_t ones_count = 0;
  double p1 = 0.0;
  double magnitude = 0.0;  // sqrt(p1), estimate of |mu|
  std::optional<double> signed_mean;
  std::optional<double> epsilon;
  std::optional<double> classical_mean;
};

namespace detail {

inline void fill_truth(MeanEstimate& e, std::optional<double> truth) {
  if (!truth) return;
  e.classical_mean = truth;
  e.epsilon = e.signed_mean ? std::abs(*e.signed_mean - *truth) : std::abs(e.magnitude - std::abs(*truth));
}

}  // namespace detail

inline MeanEstimate estimate_mean_exact(const Dataset& dataset, std::optional<double> truth = std::nullopt,
                                        std::size_t max_qubits = kDefaultMaxQubits) {
  MeanEstimate e;
  e.p1 = std::min(1.0, exact_probability(dataset, max_qubits));
  e.magnitude = std::sqrt(e.p1);
  detail::fill_truth(e, truth);
  return e;
}

/// Simulates once, then reads the mean qubit `shots` times.
inline MeanEstimate estimate_mean(const Dataset& dataset, std::uint64_t shots, std::uint64_t seed,
                                  std::optional<double> truth = std::nullopt,
                                  std::size_t max_qubits = kDefaultMaxQubits) {
  if (shots == 0) throw std::invalid_argument("shots must be at least 1");
  const double p = std::min(1.0, exact_probability(dataset, max_qubits));
  MeanEstimate e;
  e.shots = shots;
  e.ones_count = sample_ones(p, shots, seed);
  e.p1 = static_cast<double>(e.ones_count) / static_cast<double>(shots);
  e.magnitude = std::sqrt(e.p1);
  detail::fill_truth(e, truth);
  return e;
}

// Sign recovery ---------------------------------------------------------------
//
// g(x) = (f(x) + 1) / 2 lies in [0, 1], so mu_g = (mu_f + 1) / 2 >= 0 and the
// magnitude estimate of g needs no sign. mu_f = 2 mu_g - 1.

inline Dataset shifted_dataset(const Dataset& dataset) {
  std::vector<double> g;
  g.reserve(dataset.size());
  for (double v : dataset.f()) g.push_back((v + 1.0) / 2.0);
  return Dataset::from_unit_values(std::move(g));
}

inline double resolve_sign(const Dataset& dataset, std::uint64_t shots, std::uint64_t seed,
                           std::size_t max_qubits = kDefaultMaxQubits) {
  return 2.0 * estimate_mean(shifted_dataset(dataset), shots, seed, std::nullopt, max_qubits).magnitude - 1.0;
}

inline double resolve_sign_exact(const Dataset& dataset, std::size_t max_qubits = kDefaultMaxQubits) {
  return 2.0 * estimate_mean_exact(shifted_dataset(dataset), std::nullopt, max_qubits).magnitude - 1.0;
}

}  // namespace qmean
