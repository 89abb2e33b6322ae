// Ordered gate lists with optional stage markers.

#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "qmean/statevector.hpp"

namespace qmean {

/// Uniformly controlled RotY. Pattern p (bit j taken from selectors[j])
/// rotates `target` by angles[p].
struct MultiplexedRotY {
  std::vector<Qubit> selectors;
  Qubit target = 0;
  std::vector<double> angles;
};

using Operation = std::variant<GateOp, MultiplexedRotY>;

enum class Stage { Psi1 = 1, Psi2, Psi3, Psi4, Psi5 };

inline constexpr Stage kAllStages[] = {Stage::Psi1, Stage::Psi2, Stage::Psi3, Stage::Psi4, Stage::Psi5};

inline std::string_view stage_name(Stage s) {
  switch (s) {
    case Stage::Psi1: return "psi1";
    case Stage::Psi2: return "psi2";
    case Stage::Psi3: return "psi3";
    case Stage::Psi4: return "psi4";
    case Stage::Psi5: return "psi5";
  }
  throw std::invalid_argument("unknown stage");
}

inline Stage stage_from_int(int k) {
  if (k < 1 || k > 5) throw std::invalid_argument("stage must be 1..5, got " + std::to_string(k));
  return static_cast<Stage>(k);
}

struct Checkpoint {
  Stage stage;
  std::size_t position;  // number of ops applied before the marker
};

class Circuit {
 public:
  Circuit() = default;
  explicit Circuit(QubitLayout layout) : layout_(layout) {}

  const QubitLayout& layout() const noexcept { return layout_; }
  const std::vector<Operation>& ops() const noexcept { return ops_; }
  const std::vector<Checkpoint>& checkpoints() const noexcept { return checkpoints_; }
  std::size_t size() const noexcept { return ops_.size(); }
  bool empty() const noexcept { return ops_.empty(); }

  Circuit& add(GateOp op) {
    op.validate(layout_.total_qubits());
    ops_.emplace_back(std::move(op));
    return *this;
  }

  Circuit& add(MultiplexedRotY mux) {
    const std::size_t total = layout_.total_qubits();
    if (mux.target >= total) throw std::invalid_argument("multiplexer target out of range");
    for (Qubit q : mux.selectors) {
      if (q >= total || q == mux.target) throw std::invalid_argument("multiplexer selector out of range");
    }
    if (mux.angles.size() != (std::size_t{1} << mux.selectors.size())) {
      throw std::invalid_argument("multiplexer needs 2^k angles");
    }
    ops_.emplace_back(std::move(mux));
    return *this;
  }

  /// Appends every op of `fragment` (markers are not copied).
  Circuit& append(const Circuit& fragment) {
    if (!(fragment.layout_ == layout_)) throw std::invalid_argument("layout mismatch");
    for (const Operation& op : fragment.ops_) ops_.push_back(op);
    return *this;
  }

  Circuit& mark(Stage stage) {
    checkpoints_.push_back({stage, ops_.size()});
    return *this;
  }

 private:
  QubitLayout layout_{};
  std::vector<Operation> ops_;
  std::vector<Checkpoint> checkpoints_;
};

inline void apply_operation(StateVector& state, const Operation& op) {
  std::visit(
      [&state](const auto& o) {
        using T = std::decay_t<decltype(o)>;
        if constexpr (std::is_same_v<T, GateOp>) {
          state.apply(o);
        } else {
          state.apply_multiplexed_ry(o.selectors, o.target, o.angles);
        }
      },
      op);
}

/// One RotY per pattern, controlled on the selectors with polarities spelling
/// out that pattern.
inline std::vector<GateOp> expand_multiplexer(const MultiplexedRotY& mux) {
  std::vector<GateOp> out;
  out.reserve(mux.angles.size());
  for (std::size_t p = 0; p < mux.angles.size(); ++p) {
    std::vector<Control> controls;
    controls.reserve(mux.selectors.size());
    for (std::size_t j = 0; j < mux.selectors.size(); ++j) {
      controls.push_back({mux.selectors[j], ((p >> j) & 1u) ? Polarity::Closed : Polarity::Open});
    }
    out.push_back(GateOp::ry(mux.target, mux.angles[p], std::move(controls)));
  }
  return out;
}

/// Same circuit with every multiplexer replaced by its per-pattern expansion.
inline Circuit expanded(const Circuit& circuit) {
  Circuit out(circuit.layout());
  std::size_t next_mark = 0;
  const auto& marks = circuit.checkpoints();
  for (std::size_t i = 0; i <= circuit.size(); ++i) {
    while (next_mark < marks.size() && marks[next_mark].position == i) out.mark(marks[next_mark++].stage);
    if (i == circuit.size()) break;
    if (const auto* mux = std::get_if<MultiplexedRotY>(&circuit.ops()[i])) {
      for (GateOp& g : expand_multiplexer(*mux)) out.add(std::move(g));
    } else {
      out.add(std::get<GateOp>(circuit.ops()[i]));
    }
  }
  return out;
}

inline StateVector apply_circuit(StateVector state, const Circuit& circuit) {
  if (state.num_qubits() != circuit.layout().total_qubits()) {
    throw std::invalid_argument("state and circuit disagree on qubit count");
  }
  for (const Operation& op : circuit.ops()) apply_operation(state, op);
  return state;
}

struct Snapshot {
  Stage stage;
  StateVector state;
};

struct CircuitRun {
  StateVector state;
  std::vector<Snapshot> snapshots;
};

/// Like apply_circuit, additionally copying the state at every marker.
inline CircuitRun apply_circuit_with_checkpoints(StateVector state, const Circuit& circuit) {
  if (state.num_qubits() != circuit.layout().total_qubits()) {
    throw std::invalid_argument("state and circuit disagree on qubit count");
  }
  std::vector<Snapshot> snaps;
  const auto& marks = circuit.checkpoints();
  std::size_t next_mark = 0;
  for (std::size_t i = 0; i <= circuit.size(); ++i) {
    while (next_mark < marks.size() && marks[next_mark].position == i) {
      snaps.push_back({marks[next_mark++].stage, state});
    }
    if (i == circuit.size()) break;
    apply_operation(state, circuit.ops()[i]);
  }
  return {std::move(state), std::move(snaps)};
}

}  // namespace qmean
