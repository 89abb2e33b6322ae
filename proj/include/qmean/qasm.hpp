// OpenQASM 2.0 export.
//
// Circuits are first lowered to the elementary set {h, x, ry, cx, ccx}:
//
//   - open controls are conjugated with x
//   - a multiplexed RotY over k selectors becomes 2^k (ry, cx) pairs along a
//     Gray-code walk of the selector patterns
//   - RotY with k >= 1 controls is that multiplexer with a single nonzero angle
//   - X with k >= 3 controls is lowered as the k-controlled RotY(pi), which
//     equals X up to a sign on the target's |1> -> |0> branch. A real gate set
//     cannot do better without an ancilla: on four or more qubits every gate in
//     {h, x, ry, cx, ccx} has determinant +1 while a full-width controlled X
//     has determinant -1.
//   - controlled H has no lowering and is rejected
//
// The lowered list is what gets serialized, so it can be simulated to check
// the export.

#pragma once

#include <bit>
#include <cstddef>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qmean/circuit.hpp"
#include "qmean/statevector.hpp"

namespace qmean {

class ExportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::size_t gray(std::size_t i) noexcept { return i ^ (i >> 1); }

/// theta_i = 2^-k sum_p alpha_p (-1)^popcount(p & gray(i)). Applying
/// ry(theta_i) then cx(selector l_i -> target) for i = 0..2^k-1, where l_i is
/// the bit flipped between gray(i) and gray(i+1 mod 2^k), rotates pattern p by
/// sum_i theta_i (-1)^popcount(p & gray(i)) = alpha_p.
inline std::vector<double> gray_code_angles(std::span<const double> alpha) {
  const std::size_t m = alpha.size();
  std::vector<double> w(alpha.begin(), alpha.end());
  // Walsh-Hadamard transform: w[g] = sum_p alpha_p (-1)^popcount(p & g)
  for (std::size_t len = 1; len < m; len <<= 1) {
    for (std::size_t i = 0; i < m; i += len << 1) {
      for (std::size_t j = i; j < i + len; ++j) {
        const double u = w[j];
        const double v = w[j + len];
        w[j] = u + v;
        w[j + len] = u - v;
      }
    }
  }
  std::vector<double> theta(m);
  for (std::size_t i = 0; i < m; ++i) theta[i] = w[gray(i)] / static_cast<double>(m);
  return theta;
}

inline void lower_multiplexer(std::span<const Qubit> selectors, Qubit target, std::span<const double> angles,
                              std::vector<GateOp>& out) {
  if (selectors.empty()) {
    out.push_back(GateOp::ry(target, angles[0]));
    return;
  }
  const std::vector<double> theta = gray_code_angles(angles);
  const std::size_t m = theta.size();
  for (std::size_t i = 0; i < m; ++i) {
    out.push_back(GateOp::ry(target, theta[i]));
    const std::size_t flipped = gray(i) ^ gray((i + 1) % m);
    const auto bit = static_cast<std::size_t>(std::countr_zero(flipped));
    out.push_back(GateOp::x(target, {{selectors[bit], Polarity::Closed}}));
  }
}

inline void lower_gate(const GateOp& op, std::vector<GateOp>& out) {
  if (op.controls.empty()) {
    out.push_back(op);
    return;
  }
  if (op.kind == GateKind::Hadamard) throw ExportError("controlled Hadamard has no lowering to the QASM gate set");

  std::vector<Qubit> open;
  std::vector<Control> closed;
  closed.reserve(op.controls.size());
  for (const Control& c : op.controls) {
    if (c.polarity == Polarity::Open) open.push_back(c.qubit);
    closed.push_back({c.qubit, Polarity::Closed});
  }
  for (Qubit q : open) out.push_back(GateOp::x(q));

  if (op.kind == GateKind::PauliX && closed.size() <= 2) {
    out.push_back(GateOp::x(op.target, closed));
  } else {
    const double theta = op.kind == GateKind::PauliX ? std::numbers::pi : op.theta;
    std::vector<Qubit> selectors;
    for (const Control& c : closed) selectors.push_back(c.qubit);
    std::vector<double> angles(std::size_t{1} << selectors.size(), 0.0);
    angles.back() = theta;
    lower_multiplexer(selectors, op.target, angles, out);
  }

  for (Qubit q : open) out.push_back(GateOp::x(q));
}

inline std::string format_angle(double theta) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", theta);
  return buf;
}

}  // namespace detail

/// Lowers every op to {h, x, ry, cx, ccx}. Throws ExportError for ops with
/// no lowering.
inline std::vector<GateOp> decompose(const Circuit& circuit) {
  std::vector<GateOp> out;
  for (const Operation& op : circuit.ops()) {
    if (const auto* mux = std::get_if<MultiplexedRotY>(&op)) {
      detail::lower_multiplexer(mux->selectors, mux->target, mux->angles, out);
    } else {
      detail::lower_gate(std::get<GateOp>(op), out);
    }
  }
  return out;
}

struct QasmDocument {
  std::string text;
  std::size_t gate_count = 0;  // excludes the measurement
};

inline std::string qasm_statement(const GateOp& g) {
  auto q = [](Qubit i) { return "q[" + std::to_string(i) + "]"; };
  switch (g.kind) {
    case GateKind::Hadamard:
      if (g.controls.empty()) return "h " + q(g.target) + ";";
      break;
    case GateKind::RotY:
      if (g.controls.empty()) return "ry(" + detail::format_angle(g.theta) + ") " + q(g.target) + ";";
      break;
    case GateKind::PauliX:
      if (g.controls.empty()) return "x " + q(g.target) + ";";
      if (g.controls.size() == 1 && g.controls[0].polarity == Polarity::Closed) {
        return "cx " + q(g.controls[0].qubit) + "," + q(g.target) + ";";
      }
      if (g.controls.size() == 2 && g.controls[0].polarity == Polarity::Closed &&
          g.controls[1].polarity == Polarity::Closed) {
        return "ccx " + q(g.controls[0].qubit) + "," + q(g.controls[1].qubit) + "," + q(g.target) + ";";
      }
      break;
  }
  throw ExportError("gate is not in the elementary QASM set");
}

/// OpenQASM 2.0 text: header, q[n_index + 2], c[1], the lowered gates, and a
/// final measurement of the mean qubit. LF line endings.
inline QasmDocument export_qasm(const Circuit& circuit) {
  const QubitLayout& layout = circuit.layout();
  const std::vector<GateOp> gates = decompose(circuit);
  QasmDocument doc;
  doc.gate_count = gates.size();
  std::string& t = doc.text;
  t += "OPENQASM 2.0;\n";
  t += "include \"qelib1.inc\";\n";
  t += "qreg q[" + std::to_string(layout.total_qubits()) + "];\n";
  t += "creg c[1];\n";
  for (const GateOp& g : gates) {
    t += qasm_statement(g);
    t += '\n';
  }
  t += "measure q[" + std::to_string(layout.mean_pos()) + "] -> c[0];\n";
  return doc;
}

inline void write_qasm(const QasmDocument& doc, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << doc.text;
  if (!out) throw std::runtime_error("failed writing " + path);
}

}  // namespace qmean
