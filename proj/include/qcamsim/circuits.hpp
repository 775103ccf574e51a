#pragma once

// Circuit values for NEQR loading and Grover-based matching.
//
// Bit order inside a BitString: bit 0 is the most significant (leftmost)
// bit, so "01001101" has bit 1 set. Data register qubit t carries bit t.
// Address register qubit j carries bit j of the address (LSB first).

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "qcamsim/statevec.hpp"

namespace qcamsim {

class BitString {
 public:
  BitString(std::uint64_t value, int depth);
  // Parses "0110..."; the first character is bit 0.
  static BitString parse(const std::string& bits);

  std::uint64_t value() const { return value_; }
  int depth() const { return depth_; }
  // Bit i, counted from the left (most significant) end.
  bool bit(int i) const { return (value_ >> (depth_ - 1 - i)) & 1U; }
  std::string to_string() const;

  friend bool operator==(const BitString&, const BitString&) = default;

 private:
  std::uint64_t value_;
  int depth_;
};

class Sequence {
 public:
  Sequence() = default;
  Sequence(std::vector<std::uint64_t> values, int depth);
  Sequence(const std::vector<BitString>& items);

  int depth() const { return depth_; }
  std::size_t size() const { return values_.size(); }
  const std::vector<std::uint64_t>& values() const { return values_; }
  std::uint64_t operator[](std::size_t i) const { return values_[i]; }
  BitString item(std::size_t i) const { return BitString(values_[i], depth_); }

  bool is_power_of_two_length() const;
  // log2(size()); throws std::invalid_argument if size() is not a power of two.
  int address_width() const;

  friend bool operator==(const Sequence&, const Sequence&) = default;

 private:
  std::vector<std::uint64_t> values_;
  int depth_ = 0;
};

struct Register {
  std::string name;
  int offset = 0;
  int width = 0;

  int qubit(int i) const { return offset + i; }
  std::vector<int> qubits() const;
};

// addr_a | addr_b | data_a | data_b | anc [| ctrl], low to high qubit index.
// Zero-width registers are omitted.
struct RegisterLayout {
  int n_a = 0;
  int n_b = 0;
  int depth = 0;
  bool control = false;

  int total_qubits() const { return n_a + n_b + 2 * depth + 1 + (control ? 1 : 0); }
  Register addr_a() const { return {"addr_a", 0, n_a}; }
  Register addr_b() const { return {"addr_b", n_a, n_b}; }
  Register data_a() const { return {"data_a", n_a + n_b, depth}; }
  Register data_b() const { return {"data_b", n_a + n_b + depth, depth}; }
  Register anc() const { return {"anc", n_a + n_b + 2 * depth, 1}; }
  Register ctrl() const { return {"ctrl", n_a + n_b + 2 * depth + 1, control ? 1 : 0}; }
  // Combined search register addr_a followed by addr_b.
  std::vector<int> address_qubits() const;
  std::vector<Register> registers() const;
};

// Immutable gate list over named, contiguous registers.
class Circuit {
 public:
  Circuit(std::vector<Register> registers, std::vector<GateOp> ops, double global_phase = 0.0);

  const std::vector<Register>& registers() const { return registers_; }
  const std::vector<GateOp>& ops() const { return ops_; }
  // Applied as a factor exp(i * global_phase) after the gate list.
  double global_phase() const { return global_phase_; }
  int num_qubits() const { return num_qubits_; }

  const Register& reg(const std::string& name) const;
  bool has_reg(const std::string& name) const;

  // Number of ops of a given kind.
  std::size_t count(GateKind kind) const;

 private:
  std::vector<Register> registers_;
  std::vector<GateOp> ops_;
  double global_phase_ = 0.0;
  int num_qubits_ = 0;
};

// Rows are items, columns are bits: 0 for a clear bit, pi for a set bit.
std::shared_ptr<const AngleMatrix> angles_from_bits(const Sequence& seq);

// H on the address register and one PUCR: (1/sqrt N) sum_i |i>|y_i>.
// Registers: addr (n qubits) then data (d qubits).
Circuit build_qbart(const Sequence& seq);

// Phase -1 on |a>|b>|0> iff a == b. Registers: data_a, data_b, anc.
Circuit build_matching_oracle(int depth);

// Reflection 2|+><+| - I about the uniform state of addr_a and addr_b.
Circuit build_diffuser(int n_a, int n_b);

// Load, match, unload: -1 on address pairs (i, j) with a_i == b_j.
// `a` and `b` must share their depth and have power-of-two lengths.
Circuit build_grover_oracle(const Sequence& a, const Sequence& b);

// H on both address registers, k rounds of O_G then O_D, and a final load of
// both data registers for measurement.
Circuit build_qcam_circuit(const Sequence& a, const Sequence& b, int iterations);

// H-layer, O_G, H-layer over the search register; p0 = |<+|O_G|+>|^2.
Circuit build_heqc_squared(const Sequence& a, const Sequence& b);

// Hadamard test on a control qubit ("ctrl" register); <X> = Re <+|O_G|+>.
// With fully_controlled every gate of O_G is controlled, otherwise only the MCZ.
Circuit build_heqc_hadamard(const Sequence& a, const Sequence& b, bool fully_controlled = false);

// Same sequence of gates as build_grover_oracle, emitted into a layout.
// When control >= 0 the oracle is controlled on that qubit.
std::vector<GateOp> grover_oracle_ops(const RegisterLayout& layout, const Sequence& a,
                                      const Sequence& b, int control = -1,
                                      bool fully_controlled = false);
std::vector<GateOp> matching_oracle_ops(const RegisterLayout& layout, int control = -1,
                                        bool fully_controlled = false);
std::vector<GateOp> diffuser_ops(const RegisterLayout& layout);

// ceil(2^n * d / min(n, d)), the entangling-gate cycle depth of a braided PUCR.
std::uint64_t pucr_critical_depth(int address_width, int data_width);

// One multi-controlled RY per (address value, data qubit) pair, with X gates
// selecting the address value. Used to cross-check the PUCR kernel.
std::vector<GateOp> decompose_pucr(const GateOp& pucr);

// Applies the circuit to |0...0>.
QuantumState run(const Circuit& circuit, int max_qubits = kDefaultMaxQubits);
// Applies the circuit in place to an existing state of matching size.
void run_on(const Circuit& circuit, QuantumState& state);

nlohmann::ordered_json circuit_to_json(const Circuit& circuit);
Circuit circuit_from_json(const nlohmann::json& j);

}  // namespace qcamsim
