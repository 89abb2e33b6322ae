// Amplitude encoding of a data set into a single data qubit per index:
//
//     |x>|0>  ->  |x> ( sqrt(1 - f(x)^2) |0> + f(x) |1> )
//
// realized as a RotY(2 asin f(x)) on the data qubit, multiplexed over the
// index register. The qRAM of the algorithm is treated as a black box costing
// one query; here it costs N controlled rotations, or one fused pass.

#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qmean/circuit.hpp"
#include "qmean/statevector.hpp"

namespace qmean {

/// Input numbers together with their encodable form.
///
/// raw      - values as supplied (not padded)
/// f        - raw / scale, zero padded to 2^n_index entries, each in [-1, 1]
/// scale    - max|raw| if that exceeds 1, otherwise 1
class Dataset {
 public:
  const std::vector<double>& raw() const noexcept { return raw_; }
  const std::vector<double>& f() const noexcept { return f_; }
  double scale() const noexcept { return scale_; }
  std::size_t n_index() const noexcept { return n_index_; }
  std::size_t pad_count() const noexcept { return pad_count_; }
  std::size_t size() const noexcept { return f_.size(); }
  QubitLayout layout() const noexcept { return {n_index_}; }

  /// Builds a dataset directly from values already in [-1, 1] whose count is
  /// a power of two >= 2. No rescaling, no padding.
  static Dataset from_unit_values(std::vector<double> f) {
    if (f.size() < 2 || !std::has_single_bit(f.size())) {
      throw std::invalid_argument("unit dataset length must be a power of two >= 2");
    }
    for (double v : f) {
      if (!std::isfinite(v) || v < -1.0 || v > 1.0) throw std::invalid_argument("unit value outside [-1, 1]");
    }
    Dataset d;
    d.raw_ = f;
    d.n_index_ = static_cast<std::size_t>(std::countr_zero(f.size()));
    d.f_ = std::move(f);
    return d;
  }

 private:
  friend Dataset rescale(std::span<const double> raw);

  std::vector<double> raw_;
  std::vector<double> f_;
  double scale_ = 1.0;
  std::size_t n_index_ = 1;
  std::size_t pad_count_ = 0;
};

/// Divides by max|raw| when it exceeds 1 and zero-pads to the next power of
/// two (at least 2). Throws std::invalid_argument on empty or non-finite input.
inline Dataset rescale(std::span<const double> raw) {
  if (raw.empty()) throw std::invalid_argument("dataset is empty");
  double max_abs = 0.0;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (!std::isfinite(raw[i])) {
      throw std::invalid_argument("non-finite value at position " + std::to_string(i));
    }
    max_abs = std::max(max_abs, std::abs(raw[i]));
  }

  Dataset d;
  d.raw_.assign(raw.begin(), raw.end());
  d.scale_ = max_abs > 1.0 ? max_abs : 1.0;
  const std::size_t n = std::max<std::size_t>(2, std::bit_ceil(raw.size()));
  d.n_index_ = static_cast<std::size_t>(std::countr_zero(n));
  d.pad_count_ = n - raw.size();
  d.f_.assign(n, 0.0);
  for (std::size_t i = 0; i < raw.size(); ++i) {
    d.f_[i] = d.scale_ == 1.0 ? raw[i] : raw[i] / d.scale_;
  }
  return d;
}

inline Dataset rescale(std::initializer_list<double> raw) {
  return rescale(std::span<const double>(raw.begin(), raw.size()));
}

/// theta_x = 2 asin f(x), so RotY(theta_x)|0> = sqrt(1 - f^2)|0> + f|1>.
/// The |0> amplitude is always the non-negative root.
struct EncodedAngles {
  std::vector<double> theta;
};

inline EncodedAngles angles_of(const Dataset& dataset) {
  EncodedAngles out;
  out.theta.reserve(dataset.size());
  for (double v : dataset.f()) out.theta.push_back(2.0 * std::asin(v));
  return out;
}

/// Amplitudes (|0>, |1>) of the encoded single-qubit state for value v.
inline std::pair<double, double> encoded_qubit(double v) { return {std::sqrt(1.0 - v * v), v}; }

enum class OracleForm {
  Fused,     // one MultiplexedRotY op
  Expanded,  // one controlled RotY per index value
};

inline Circuit build_qram_oracle(const Dataset& dataset, const QubitLayout& layout,
                                 OracleForm form = OracleForm::Fused) {
  if (layout.n_index != dataset.n_index()) {
    throw std::invalid_argument("layout has " + std::to_string(layout.n_index) + " index qubits, dataset needs " +
                                std::to_string(dataset.n_index()));
  }
  MultiplexedRotY mux;
  mux.selectors.resize(layout.n_index);
  std::iota(mux.selectors.begin(), mux.selectors.end(), Qubit{0});
  mux.target = layout.data_pos();
  mux.angles = angles_of(dataset).theta;

  Circuit fragment(layout);
  if (form == OracleForm::Fused) {
    fragment.add(std::move(mux));
  } else {
    for (GateOp& g : expand_multiplexer(mux)) fragment.add(std::move(g));
  }
  return fragment;
}

inline constexpr std::size_t kMaxUnitarityCheckQubits = 10;

/// Materializes the oracle fragment column by column and checks U^dagger U = I
/// within `tol`. Throws CapacityError above 10 total qubits.
inline bool oracle_unitarity_check(const Dataset& dataset, double tol = 1e-10) {
  const QubitLayout layout = dataset.layout();
  const std::size_t q = layout.total_qubits();
  if (q > kMaxUnitarityCheckQubits) {
    throw CapacityError("unitarity check limited to " + std::to_string(kMaxUnitarityCheckQubits) + " qubits");
  }
  const Circuit oracle = build_qram_oracle(dataset, layout);
  const std::size_t dim = std::size_t{1} << q;

  std::vector<std::vector<Amplitude>> cols(dim);
  for (std::size_t c = 0; c < dim; ++c) {
    std::vector<Amplitude> basis(dim);
    basis[c] = 1.0;
    StateVector s = apply_circuit(StateVector(q, std::move(basis)), oracle);
    cols[c].assign(s.amplitudes().begin(), s.amplitudes().end());
  }
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      Amplitude dot = 0.0;
      for (std::size_t k = 0; k < dim; ++k) dot += std::conj(cols[i][k]) * cols[j][k];
      const Amplitude expect = i == j ? 1.0 : 0.0;
      if (std::abs(dot - expect) > tol) return false;
    }
  }
  return true;
}

}  // namespace qmean
