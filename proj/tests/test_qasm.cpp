#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "qmean/experiments.hpp"
#include "qmean/mean_circuit.hpp"
#include "qmean/qasm.hpp"

namespace qmean {
namespace {

StateVector run_lowered(const std::vector<GateOp>& gates, std::size_t num_qubits) {
  StateVector s(num_qubits);
  for (const GateOp& g : gates) s.apply(g);
  return s;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

// Magnitude-wise agreement after removing one global phase.
double phase_free_deviation(const StateVector& a, const StateVector& b) {
  Amplitude overlap = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) overlap += std::conj(a[i]) * b[i];
  const Amplitude phase = std::abs(overlap) > 0 ? overlap / std::abs(overlap) : Amplitude(1.0);
  double worst = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    worst = std::max(worst, std::abs(std::abs(a[i] * phase) - std::abs(b[i])));
  }
  return worst;
}

TEST(Export, EmptyCircuit) {
  const QasmDocument doc = export_qasm(Circuit(QubitLayout{1}));
  EXPECT_EQ(doc.gate_count, 0u);
  EXPECT_EQ(doc.text,
            "OPENQASM 2.0;\n"
            "include \"qelib1.inc\";\n"
            "qreg q[3];\n"
            "creg c[1];\n"
            "measure q[2] -> c[0];\n");
}

TEST(Export, SingleHadamard) {
  Circuit c(QubitLayout{1});
  c.add(GateOp::h(0));
  const auto lines = lines_of(export_qasm(c).text);
  ASSERT_EQ(lines.size(), 6u);
  EXPECT_EQ(lines[4], "h q[0];");
}

TEST(Export, AnglesKeepFullPrecision) {
  Circuit c(QubitLayout{1});
  c.add(GateOp::ry(1, 0.1234567890123456789));
  const std::string text = export_qasm(c).text;
  const std::regex ry(R"(ry\(([-0-9.e+]+)\) q\[1\];)");
  std::smatch m;
  ASSERT_TRUE(std::regex_search(text, m, ry));
  EXPECT_EQ(std::stod(m[1].str()), 0.1234567890123456789);
  EXPECT_GE(m[1].str().size(), 17u);
}

TEST(Export, ControlledHadamardUnsupported) {
  Circuit c(QubitLayout{1});
  c.add(GateOp{GateKind::Hadamard, 0, 0.0, {{1, Polarity::Closed}}});
  EXPECT_THROW(export_qasm(c), ExportError);
}

TEST(Export, StatementsUseElementarySetOnly) {
  const QasmDocument doc = export_qasm(build_mean_circuit(rescale(experiments::kExperiment1)));
  const std::regex stmt(R"(^(h|x) q\[\d+\];$|^ry\([-0-9.e+]+\) q\[\d+\];$|^cx q\[\d+\],q\[\d+\];$|^ccx q\[\d+\],q\[\d+\],q\[\d+\];$)");
  const auto lines = lines_of(doc.text);
  ASSERT_EQ(lines.size(), doc.gate_count + 5);
  EXPECT_EQ(lines[0], "OPENQASM 2.0;");
  EXPECT_EQ(lines[2], "qreg q[4];");
  EXPECT_EQ(lines[3], "creg c[1];");
  for (std::size_t i = 4; i + 1 < lines.size(); ++i) EXPECT_TRUE(std::regex_match(lines[i], stmt)) << lines[i];
  EXPECT_EQ(lines.back(), "measure q[3] -> c[0];");
  EXPECT_EQ(doc.text.find('\r'), std::string::npos);
}

TEST(Export, Deterministic) {
  const Circuit c = build_mean_circuit(rescale(experiments::kExperiment2));
  EXPECT_EQ(export_qasm(c).text, export_qasm(c).text);
}

TEST(Export, WriteFailsForMissingDirectory) {
  EXPECT_THROW(write_qasm(export_qasm(Circuit(QubitLayout{1})), "/nonexistent-dir/x.qasm"), std::runtime_error);
}

TEST(Decompose, GrayCodeMultiplexerMatchesFused) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (std::size_t k = 0; k <= 4; ++k) {
    MultiplexedRotY mux;
    for (std::size_t j = 0; j < k; ++j) mux.selectors.push_back(j);
    mux.target = k;
    for (std::size_t p = 0; p < (std::size_t{1} << k); ++p) mux.angles.push_back(u(rng));
    std::vector<GateOp> lowered;
    detail::lower_multiplexer(mux.selectors, mux.target, mux.angles, lowered);
    EXPECT_EQ(lowered.size(), k == 0 ? 1u : 2u << k);

    const auto v = testing::random_state(k + 1, rng);
    StateVector fused(k + 1, v);
    fused.apply_multiplexed_ry(mux.selectors, mux.target, mux.angles);
    StateVector slow(k + 1, v);
    for (const GateOp& g : lowered) slow.apply(g);
    EXPECT_LT(testing::max_abs_diff(fused.amplitudes(), slow.amplitudes()), 1e-12) << "k = " << k;
  }
}

TEST(Decompose, ControlledGatesMatchDenseOperators) {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t nq = 2 + rng() % 3;
    GateOp op;
    op.kind = rng() % 2 ? GateKind::PauliX : GateKind::RotY;
    op.theta = std::uniform_real_distribution<double>(-3.0, 3.0)(rng);
    op.target = rng() % nq;
    for (Qubit q = 0; q < nq; ++q) {
      if (q != op.target && rng() % 3) op.controls.push_back({q, rng() % 2 ? Polarity::Open : Polarity::Closed});
    }
    std::vector<GateOp> lowered;
    detail::lower_gate(op, lowered);
    const auto v = testing::random_state(nq, rng);
    StateVector direct(nq, v);
    direct.apply(op);
    StateVector slow(nq, v);
    for (const GateOp& g : lowered) slow.apply(g);
    if (op.kind == GateKind::PauliX && op.controls.size() >= 3) {
      // Realized as controlled RotY(pi): equal up to relative signs.
      for (std::size_t i = 0; i < direct.dim(); ++i) EXPECT_NEAR(std::abs(direct[i]), std::abs(slow[i]), 1e-12);
    } else {
      EXPECT_LT(testing::max_abs_diff(direct.amplitudes(), slow.amplitudes()), 1e-12);
    }
  }
}

TEST(Decompose, MultiControlledXOnTargetZeroIsExact) {
  // The extraction gate only ever sees the mean qubit in |0>.
  std::mt19937_64 rng(43);
  const QubitLayout l{3};
  const GateOp mcx = extraction_gate(l);
  std::vector<GateOp> lowered;
  detail::lower_gate(mcx, lowered);
  auto v = testing::random_state(l.total_qubits(), rng);
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i >> l.mean_pos() & 1) v[i] = 0.0;
  }
  double norm = 0.0;
  for (auto& a : v) norm += std::norm(a);
  for (auto& a : v) a /= std::sqrt(norm);
  StateVector direct(l.total_qubits(), v);
  direct.apply(mcx);
  StateVector slow(l.total_qubits(), v);
  for (const GateOp& g : lowered) slow.apply(g);
  EXPECT_LT(testing::max_abs_diff(direct.amplitudes(), slow.amplitudes()), 1e-12);
}

TEST(Decompose, ExperimentOneRoundTrip) {
  const Dataset d = rescale(experiments::kExperiment1);
  const Circuit c = build_mean_circuit(d);
  const StateVector s = run_lowered(decompose(c), d.layout().total_qubits());
  EXPECT_NEAR(s.probability_of_bit(d.layout().mean_pos(), 1), 0.0570015625, 1e-9);
  EXPECT_EQ(decompose(c).size(), export_qasm(c).gate_count);
  // 2 h + 4 (ry, cx) + 2 h + (2 x, 8 (ry, cx), 2 x) + 2 h
  EXPECT_EQ(export_qasm(c).gate_count, 2u + 8u + 2u + 20u + 2u);
}

TEST(Decompose, RoundTripUpToGlobalPhase) {
  std::mt19937_64 rng(44);
  for (std::size_t n_index = 1; n_index <= 4; ++n_index) {
    const Dataset d = Dataset::from_unit_values(testing::random_unit_values(std::size_t{1} << n_index, rng));
    const std::size_t nq = d.layout().total_qubits();
    for (OracleForm form : {OracleForm::Fused, OracleForm::Expanded}) {
      const Circuit c = build_mean_circuit(d, form);
      const StateVector fused = apply_circuit(StateVector(nq), c);
      const StateVector lowered = run_lowered(decompose(c), nq);
      EXPECT_LT(phase_free_deviation(fused, lowered), 1e-9);
      EXPECT_NEAR(lowered.probability_of_bit(d.layout().mean_pos(), 1), exact_probability(d), 1e-9);
    }
  }
}

TEST(Decompose, TinyCircuitIsShort) {
  const QasmDocument doc = export_qasm(build_mean_circuit(Dataset::from_unit_values({0.3, -0.2})));
  EXPECT_LE(lines_of(doc.text).size(), 20u);
}

}  // namespace
}  // namespace qmean
