// Dense state-vector simulation for the mean-estimation circuit.
//
// Basis ordering: the index register occupies the least-significant bits,
// followed by the data qubit and then the mean qubit, i.e.
//
//     b = (mean << (n_index + 1)) | (data << n_index) | x
//
// All gates are applied in place over amplitude pairs; no operator matrix is
// ever materialized.

#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qmean {

using Amplitude = std::complex<double>;
using Qubit = std::size_t;

/// Raised when a requested register does not fit the configured memory cap.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kDefaultMaxQubits = 24;

struct QubitLayout {
  std::size_t n_index = 1;

  constexpr std::size_t total_qubits() const noexcept { return n_index + 2; }
  constexpr Qubit data_pos() const noexcept { return n_index; }
  constexpr Qubit mean_pos() const noexcept { return n_index + 1; }
  constexpr std::size_t index_size() const noexcept { return std::size_t{1} << n_index; }

  constexpr std::size_t basis(std::size_t x, unsigned data, unsigned mean) const noexcept {
    return (std::size_t{mean} << (n_index + 1)) | (std::size_t{data} << n_index) | x;
  }

  friend constexpr bool operator==(const QubitLayout&, const QubitLayout&) = default;
};

enum class GateKind { Hadamard, PauliX, RotY };

enum class Polarity {
  Open,    // fires on |0>
  Closed,  // fires on |1>
};

struct Control {
  Qubit qubit = 0;
  Polarity polarity = Polarity::Closed;

  friend constexpr bool operator==(const Control&, const Control&) = default;
};

struct GateOp {
  GateKind kind = GateKind::Hadamard;
  Qubit target = 0;
  double theta = 0.0;  // radians, RotY only
  std::vector<Control> controls;

  static GateOp h(Qubit t) { return {GateKind::Hadamard, t, 0.0, {}}; }
  static GateOp x(Qubit t, std::vector<Control> c = {}) { return {GateKind::PauliX, t, 0.0, std::move(c)}; }
  static GateOp ry(Qubit t, double theta, std::vector<Control> c = {}) {
    return {GateKind::RotY, t, theta, std::move(c)};
  }

  /// Throws std::invalid_argument if any position is >= num_qubits, the target
  /// appears among the controls, or a control position repeats.
  void validate(std::size_t num_qubits) const {
    if (target >= num_qubits) {
      throw std::invalid_argument("gate target " + std::to_string(target) + " out of range for " +
                                  std::to_string(num_qubits) + " qubits");
    }
    std::uint64_t seen = std::uint64_t{1} << target;
    for (const Control& c : controls) {
      if (c.qubit >= num_qubits) {
        throw std::invalid_argument("control qubit " + std::to_string(c.qubit) + " out of range");
      }
      const std::uint64_t bit = std::uint64_t{1} << c.qubit;
      if (seen & bit) {
        throw std::invalid_argument("control qubit " + std::to_string(c.qubit) +
                                    " repeats or coincides with the target");
      }
      seen |= bit;
    }
  }
};

/// Real 2x2 block acting on (|0>, |1>) of the target qubit.
struct Real2x2 {
  double m00, m01, m10, m11;
};

inline Real2x2 gate_matrix(GateKind kind, double theta) {
  switch (kind) {
    case GateKind::Hadamard: {
      const double r = 1.0 / std::sqrt(2.0);
      return {r, r, r, -r};
    }
    case GateKind::PauliX:
      return {0.0, 1.0, 1.0, 0.0};
    case GateKind::RotY: {
      const double c = std::cos(theta / 2.0);
      const double s = std::sin(theta / 2.0);
      return {c, -s, s, c};
    }
  }
  throw std::invalid_argument("unknown gate kind");
}

namespace detail {

// Spreads k over all bit positions except `pos` (inserts a zero at `pos`).
constexpr std::size_t insert_zero_bit(std::size_t k, std::size_t pos) noexcept {
  const std::size_t low = k & ((std::size_t{1} << pos) - 1);
  return ((k >> pos) << (pos + 1)) | low;
}

struct ControlMask {
  std::size_t mask = 0;
  std::size_t value = 0;
};

inline ControlMask control_mask(std::span<const Control> controls) noexcept {
  ControlMask cm;
  for (const Control& c : controls) {
    const std::size_t bit = std::size_t{1} << c.qubit;
    cm.mask |= bit;
    if (c.polarity == Polarity::Closed) cm.value |= bit;
  }
  return cm;
}

}  // namespace detail

class StateVector {
 public:
  /// Ground state |0...0> over `num_qubits` qubits.
  explicit StateVector(std::size_t num_qubits, std::size_t max_qubits = kDefaultMaxQubits)
      : num_qubits_(checked_size(num_qubits, max_qubits)), amps_(std::size_t{1} << num_qubits) {
    amps_[0] = 1.0;
  }

  /// Adopts an explicit amplitude array. The caller is responsible for normalization.
  StateVector(std::size_t num_qubits, std::vector<Amplitude> amps)
      : num_qubits_(num_qubits), amps_(std::move(amps)) {
    if (num_qubits >= 63 || amps_.size() != (std::size_t{1} << num_qubits)) {
      throw std::invalid_argument("amplitude array length must be 2^num_qubits");
    }
  }

  std::size_t num_qubits() const noexcept { return num_qubits_; }
  std::size_t dim() const noexcept { return amps_.size(); }
  std::span<const Amplitude> amplitudes() const noexcept { return amps_; }
  const Amplitude& operator[](std::size_t i) const { return amps_[i]; }

  double norm_squared() const noexcept {
    double sum = 0.0;
    for (const Amplitude& a : amps_) sum += std::norm(a);
    return sum;
  }

  /// Applies `op` in place. Only amplitude pairs whose control condition holds
  /// are touched.
  void apply(const GateOp& op) {
    op.validate(num_qubits_);
    apply_block(op.target, detail::control_mask(op.controls), gate_matrix(op.kind, op.theta));
  }

  /// Uniformly controlled RotY: for every basis state the rotation angle is
  /// selected by the bit pattern of `selectors` (selectors[j] supplies bit j of
  /// the pattern). One pass over the amplitude array.
  void apply_multiplexed_ry(std::span<const Qubit> selectors, Qubit target, std::span<const double> angles) {
    if (target >= num_qubits_) throw std::invalid_argument("multiplexer target out of range");
    if (selectors.size() >= 63 || angles.size() != (std::size_t{1} << selectors.size())) {
      throw std::invalid_argument("multiplexer needs 2^k angles for k selector qubits");
    }
    std::uint64_t seen = std::uint64_t{1} << target;
    bool contiguous_low = true;
    for (std::size_t j = 0; j < selectors.size(); ++j) {
      const Qubit q = selectors[j];
      if (q >= num_qubits_ || (seen & (std::uint64_t{1} << q))) {
        throw std::invalid_argument("multiplexer selector qubit invalid or repeated");
      }
      seen |= std::uint64_t{1} << q;
      contiguous_low = contiguous_low && q == j;
    }

    std::vector<double> cs(angles.size());
    std::vector<double> sn(angles.size());
    for (std::size_t a = 0; a < angles.size(); ++a) {
      cs[a] = std::cos(angles[a] / 2.0);
      sn[a] = std::sin(angles[a] / 2.0);
    }

    const std::size_t tbit = std::size_t{1} << target;
    const std::size_t half = amps_.size() / 2;
    const std::size_t low_mask = angles.size() - 1;
    for (std::size_t k = 0; k < half; ++k) {
      const std::size_t i0 = detail::insert_zero_bit(k, target);
      const std::size_t i1 = i0 | tbit;
      std::size_t pattern;
      if (contiguous_low) {
        pattern = i0 & low_mask;
      } else {
        pattern = 0;
        for (std::size_t j = 0; j < selectors.size(); ++j) pattern |= ((i0 >> selectors[j]) & 1u) << j;
      }
      const Amplitude a0 = amps_[i0];
      const Amplitude a1 = amps_[i1];
      amps_[i0] = cs[pattern] * a0 - sn[pattern] * a1;
      amps_[i1] = sn[pattern] * a0 + cs[pattern] * a1;
    }
  }

  /// P(qubit == value).
  double probability_of_bit(Qubit qubit, unsigned value) const {
    if (qubit >= num_qubits_) throw std::invalid_argument("qubit out of range");
    if (value > 1) throw std::invalid_argument("bit value must be 0 or 1");
    const std::size_t bit = std::size_t{1} << qubit;
    const std::size_t want = value ? bit : 0;
    double p = 0.0;
    for (std::size_t i = 0; i < amps_.size(); ++i) {
      if ((i & bit) == want) p += std::norm(amps_[i]);
    }
    return p;
  }

 private:
  static std::size_t checked_size(std::size_t num_qubits, std::size_t max_qubits) {
    if (num_qubits == 0) throw CapacityError("state vector needs at least one qubit");
    if (num_qubits > max_qubits || num_qubits >= 63) {
      throw CapacityError(std::to_string(num_qubits) + " qubits exceed the configured cap of " +
                          std::to_string(max_qubits));
    }
    return num_qubits;
  }

  void apply_block(Qubit target, detail::ControlMask cm, Real2x2 g) {
    const std::size_t tbit = std::size_t{1} << target;
    const std::size_t half = amps_.size() / 2;
    for (std::size_t k = 0; k < half; ++k) {
      const std::size_t i0 = detail::insert_zero_bit(k, target);
      if ((i0 & cm.mask) != cm.value) continue;
      const std::size_t i1 = i0 | tbit;
      const Amplitude a0 = amps_[i0];
      const Amplitude a1 = amps_[i1];
      amps_[i0] = g.m00 * a0 + g.m01 * a1;
      amps_[i1] = g.m10 * a0 + g.m11 * a1;
    }
  }

  std::size_t num_qubits_;
  std::vector<Amplitude> amps_;
};

/// psi_0 = |0>^n |0> |0>. Throws CapacityError when n_index == 0 or the
/// register exceeds `max_qubits`.
inline StateVector new_ground_state(const QubitLayout& layout, std::size_t max_qubits = kDefaultMaxQubits) {
  if (layout.n_index == 0) throw CapacityError("index register needs at least one qubit");
  return StateVector(layout.total_qubits(), max_qubits);
}

inline StateVector apply_gate(StateVector state, const GateOp& op) {
  state.apply(op);
  return state;
}

inline double probability_of_bit(const StateVector& state, Qubit qubit, unsigned value) {
  return state.probability_of_bit(qubit, value);
}

// Shot sampling.
//
// Generator: std::mt19937_64 seeded with `seed` (fully specified by the C++
// standard, hence identical on every platform). Each shot consumes one 64-bit
// output w, converted to u = (w >> 11) * 2^-53 in [0, 1); the shot reads 1 iff
// u < p1. The count is therefore an exact Binomial(shots, p1) draw and a pure
// function of (p1, shots, seed).

inline std::uint64_t sample_ones(double p1, std::uint64_t shots, std::uint64_t seed) {
  if (shots == 0) throw std::invalid_argument("shots must be at least 1");
  if (!(p1 >= 0.0 && p1 <= 1.0 + 1e-12)) throw std::invalid_argument("probability outside [0, 1]");
  std::mt19937_64 gen(seed);
  constexpr double kScale = 1.0 / 9007199254740992.0;  // 2^-53
  std::uint64_t ones = 0;
  for (std::uint64_t s = 0; s < shots; ++s) {
    const double u = static_cast<double>(gen() >> 11) * kScale;
    if (u < p1) ++ones;
  }
  return ones;
}

inline std::uint64_t sample_bit(const StateVector& state, Qubit qubit, std::uint64_t shots, std::uint64_t seed) {
  if (shots == 0) throw std::invalid_argument("shots must be at least 1");
  return sample_ones(state.probability_of_bit(qubit, 1), shots, seed);
}

}  // namespace qmean
