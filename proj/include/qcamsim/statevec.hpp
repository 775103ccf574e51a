#pragma once

// Dense statevector engine.
//
// Convention: qubit 0 is the least significant bit of the amplitude index,
// so X on qubit 0 of |00> gives basis index 1.

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace qcamsim {

using Amplitude = std::complex<double>;

inline constexpr int kDefaultMaxQubits = 28;

class QuantumState {
 public:
  // |0...0> on num_qubits qubits. Throws CapacityError outside [1, max_qubits].
  explicit QuantumState(int num_qubits, int max_qubits = kDefaultMaxQubits);

  // Takes ownership of a full amplitude vector; size must be a power of two.
  static QuantumState from_amplitudes(std::vector<Amplitude> amplitudes);

  int num_qubits() const { return num_qubits_; }
  std::size_t dimension() const { return amps_.size(); }

  std::span<const Amplitude> amplitudes() const { return amps_; }
  std::span<Amplitude> amplitudes() { return amps_; }
  const Amplitude& operator[](std::size_t i) const { return amps_[i]; }
  Amplitude& operator[](std::size_t i) { return amps_[i]; }

  double norm_squared() const;

 private:
  QuantumState() = default;

  int num_qubits_ = 0;
  std::vector<Amplitude> amps_;
};

// Memory needed for a q-qubit state, 16 * 2^q bytes.
std::uint64_t state_bytes(int num_qubits);

QuantumState new_state(int num_qubits, int max_qubits = kDefaultMaxQubits);

enum class GateKind { H, X, RY, CX, MCX, MCZ, PUCR, CPUCR };

std::string to_string(GateKind kind);
GateKind gate_kind_from_string(const std::string& name);

// Rows are address values, columns are data qubits. Row-major.
struct AngleMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;

  double at(std::size_t row, std::size_t col) const { return values[row * cols + col]; }
};

struct GateOp {
  GateKind kind = GateKind::H;
  std::vector<int> controls;
  std::vector<int> targets;
  // PUCR family: the multiplexing register, bit j of the address value is address[j].
  std::vector<int> address;
  double angle = 0.0;
  std::shared_ptr<const AngleMatrix> angles;
  bool adjoint = false;

  static GateOp h(int q);
  static GateOp x(int q);
  static GateOp ry(int q, double angle);
  static GateOp cx(int control, int target);
  static GateOp mcx(std::vector<int> controls, int target);
  // Phase -1 on the all-ones subspace of `qubits`; the last qubit is stored as the target.
  static GateOp mcz(std::vector<int> qubits);
  static GateOp pucr(std::vector<int> address, std::vector<int> data,
                     std::shared_ptr<const AngleMatrix> angles);
  static GateOp cpucr(int control, std::vector<int> address, std::vector<int> data,
                      std::shared_ptr<const AngleMatrix> angles);

  GateOp inverse() const;

  // Same gate with one more control qubit (H and RY included).
  GateOp controlled_by(int control) const;

  // Every qubit the op reads or writes.
  std::vector<int> qubits() const;

  // Throws std::invalid_argument / std::out_of_range on a malformed op.
  void validate(int num_qubits) const;
};

bool operator==(const GateOp& a, const GateOp& b);

// Applies one gate in place. Norm is preserved.
void apply(QuantumState& state, const GateOp& op);

// Applies a gate list in order. Consecutive permutation/phase gates and small
// runs of single-qubit gates are fused into single passes over the state; the
// result is bitwise identical to calling apply() per op.
void apply_all(QuantumState& state, std::span<const GateOp> ops);

// <a|b>
Amplitude inner_product(const QuantumState& a, const QuantumState& b);

struct ShotCounts {
  // Measured qubits in the order requested; bit j of an outcome value is qubits[j].
  std::vector<int> qubits;
  std::map<std::uint64_t, std::uint64_t> counts;
  std::uint64_t total_shots = 0;

  int width() const { return static_cast<int>(qubits.size()); }
  std::uint64_t count(std::uint64_t outcome) const;

  // Bit-string key: the last measured qubit is printed first, so basis
  // index 1 measured on qubits {0, 1} reads "01".
  std::string key(std::uint64_t outcome) const;
  std::map<std::string, std::uint64_t> by_key() const;
};

// Draws `shots` i.i.d. outcomes from the marginal of `qubits`. One sequential
// mt19937_64 stream per call, so identical inputs give identical counts.
ShotCounts sample(const QuantumState& state, std::span<const int> qubits, std::uint64_t shots,
                  std::uint64_t seed);

// Marginal probabilities over `qubits`, indexed as in ShotCounts.
std::vector<double> marginal_probabilities(const QuantumState& state, std::span<const int> qubits);

// Text dump: one "index real imag" line per amplitude with |a| >= 1e-12.
void dump_state(std::ostream& out, const QuantumState& state);

}  // namespace qcamsim
