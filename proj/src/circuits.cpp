#include "qcamsim/circuits.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace qcamsim {

namespace {

constexpr double kPi = std::numbers::pi;

void require_matching(const Sequence& a, const Sequence& b) {
  if (a.depth() != b.depth()) {
    throw std::invalid_argument("sequences have depths " + std::to_string(a.depth()) + " and " +
                                std::to_string(b.depth()) + "; pad them to a common depth first");
  }
  (void)a.address_width();
  (void)b.address_width();
}

RegisterLayout layout_for(const Sequence& a, const Sequence& b, bool control = false) {
  require_matching(a, b);
  return RegisterLayout{a.address_width(), b.address_width(), a.depth(), control};
}

double wrap_phase(double phase) {
  double p = std::fmod(phase, 2.0 * kPi);
  if (p < 0) p += 2.0 * kPi;
  return p;
}

}  // namespace

BitString::BitString(std::uint64_t value, int depth) : value_(value), depth_(depth) {
  if (depth < 1 || depth > 63) throw std::invalid_argument("bit depth must be in [1, 63]");
  if (value >> depth) {
    throw std::invalid_argument("value " + std::to_string(value) + " does not fit in " +
                                std::to_string(depth) + " bits");
  }
}

BitString BitString::parse(const std::string& bits) {
  std::uint64_t v = 0;
  for (char c : bits) {
    if (c != '0' && c != '1') throw std::invalid_argument("not a bit string: " + bits);
    v = (v << 1) | static_cast<std::uint64_t>(c == '1');
  }
  return BitString(v, static_cast<int>(bits.size()));
}

std::string BitString::to_string() const {
  std::string s(static_cast<std::size_t>(depth_), '0');
  for (int i = 0; i < depth_; ++i) {
    if (bit(i)) s[static_cast<std::size_t>(i)] = '1';
  }
  return s;
}

Sequence::Sequence(std::vector<std::uint64_t> values, int depth)
    : values_(std::move(values)), depth_(depth) {
  if (depth < 1 || depth > 63) throw std::invalid_argument("bit depth must be in [1, 63]");
  for (std::uint64_t v : values_) {
    if (v >> depth) {
      throw std::invalid_argument("item " + std::to_string(v) + " does not fit in " +
                                  std::to_string(depth) + " bits");
    }
  }
}

Sequence::Sequence(const std::vector<BitString>& items) {
  if (items.empty()) throw std::invalid_argument("empty item list");
  depth_ = items.front().depth();
  for (const BitString& b : items) {
    if (b.depth() != depth_) throw std::invalid_argument("items have different depths");
    values_.push_back(b.value());
  }
}

bool Sequence::is_power_of_two_length() const { return std::has_single_bit(values_.size()); }

int Sequence::address_width() const {
  if (!is_power_of_two_length()) {
    throw std::invalid_argument("sequence length " + std::to_string(values_.size()) +
                                " is not a power of two");
  }
  return std::countr_zero(values_.size());
}

std::vector<int> Register::qubits() const {
  std::vector<int> q(static_cast<std::size_t>(width));
  for (int i = 0; i < width; ++i) q[static_cast<std::size_t>(i)] = offset + i;
  return q;
}

std::vector<int> RegisterLayout::address_qubits() const {
  std::vector<int> q = addr_a().qubits();
  const auto b = addr_b().qubits();
  q.insert(q.end(), b.begin(), b.end());
  return q;
}

std::vector<Register> RegisterLayout::registers() const {
  std::vector<Register> out;
  for (const Register& r : {addr_a(), addr_b(), data_a(), data_b(), anc(), ctrl()}) {
    if (r.width > 0) out.push_back(r);
  }
  return out;
}

Circuit::Circuit(std::vector<Register> registers, std::vector<GateOp> ops, double global_phase)
    : registers_(std::move(registers)), ops_(std::move(ops)), global_phase_(wrap_phase(global_phase)) {
  int next = 0;
  for (const Register& r : registers_) {
    if (r.width < 1) throw std::invalid_argument("register " + r.name + " has no qubits");
    if (r.offset != next) throw std::invalid_argument("registers must be contiguous and ordered");
    if (has_reg(r.name) && &reg(r.name) != &r) {
      throw std::invalid_argument("duplicate register name " + r.name);
    }
    next += r.width;
  }
  num_qubits_ = next;
  for (const GateOp& op : ops_) op.validate(num_qubits_);
}

const Register& Circuit::reg(const std::string& name) const {
  for (const Register& r : registers_) {
    if (r.name == name) return r;
  }
  throw std::out_of_range("no register named " + name);
}

bool Circuit::has_reg(const std::string& name) const {
  return std::any_of(registers_.begin(), registers_.end(),
                     [&](const Register& r) { return r.name == name; });
}

std::size_t Circuit::count(GateKind kind) const {
  return static_cast<std::size_t>(
      std::count_if(ops_.begin(), ops_.end(), [&](const GateOp& op) { return op.kind == kind; }));
}

std::shared_ptr<const AngleMatrix> angles_from_bits(const Sequence& seq) {
  (void)seq.address_width();
  auto m = std::make_shared<AngleMatrix>();
  m->rows = seq.size();
  m->cols = static_cast<std::size_t>(seq.depth());
  m->values.resize(m->rows * m->cols);
  for (std::size_t i = 0; i < m->rows; ++i) {
    const BitString item = seq.item(i);
    for (int t = 0; t < seq.depth(); ++t) {
      m->values[i * m->cols + static_cast<std::size_t>(t)] = item.bit(t) ? kPi : 0.0;
    }
  }
  return m;
}

Circuit build_qbart(const Sequence& seq) {
  const int n = seq.address_width();
  const Register addr{"addr", 0, n};
  const Register data{"data", n, seq.depth()};
  std::vector<GateOp> ops;
  for (int q : addr.qubits()) ops.push_back(GateOp::h(q));
  ops.push_back(GateOp::pucr(addr.qubits(), data.qubits(), angles_from_bits(seq)));
  std::vector<Register> regs;
  if (n > 0) regs.push_back(addr);
  regs.push_back(data);
  return Circuit(std::move(regs), std::move(ops));
}

std::vector<GateOp> matching_oracle_ops(const RegisterLayout& layout, int control,
                                        bool fully_controlled) {
  const bool wrap = control >= 0 && fully_controlled;
  auto maybe_ctrl = [&](GateOp op) { return wrap ? op.controlled_by(control) : op; };
  const auto da = layout.data_a().qubits();
  const auto db = layout.data_b().qubits();
  const int anc = layout.anc().offset;

  std::vector<GateOp> ops;
  // O_B: data_b <- data_a XOR data_b
  for (std::size_t t = 0; t < da.size(); ++t) ops.push_back(maybe_ctrl(GateOp::cx(da[t], db[t])));
  // O_A: phase on an all-zero XOR, with the ancilla as an extra leg set to |1>
  std::vector<GateOp> x_layer;
  for (int q : db) x_layer.push_back(maybe_ctrl(GateOp::x(q)));
  x_layer.push_back(maybe_ctrl(GateOp::x(anc)));
  ops.insert(ops.end(), x_layer.begin(), x_layer.end());
  std::vector<int> legs = db;
  legs.push_back(anc);
  if (control >= 0) legs.push_back(control);
  ops.push_back(GateOp::mcz(legs));
  ops.insert(ops.end(), x_layer.rbegin(), x_layer.rend());
  // O_B dagger
  for (std::size_t t = da.size(); t-- > 0;) ops.push_back(maybe_ctrl(GateOp::cx(da[t], db[t])));
  return ops;
}

std::vector<GateOp> diffuser_ops(const RegisterLayout& layout) {
  const auto addr = layout.address_qubits();
  if (addr.empty()) throw std::invalid_argument("diffuser needs at least one address qubit");
  std::vector<GateOp> ops;
  for (int q : addr) ops.push_back(GateOp::h(q));
  for (int q : addr) ops.push_back(GateOp::x(q));
  ops.push_back(GateOp::mcz(addr));
  for (int q : addr) ops.push_back(GateOp::x(q));
  for (int q : addr) ops.push_back(GateOp::h(q));
  return ops;
}

std::vector<GateOp> grover_oracle_ops(const RegisterLayout& layout, const Sequence& a,
                                      const Sequence& b, int control, bool fully_controlled) {
  require_matching(a, b);
  const auto load_a = GateOp::pucr(layout.addr_a().qubits(), layout.data_a().qubits(), angles_from_bits(a));
  const auto load_b = GateOp::pucr(layout.addr_b().qubits(), layout.data_b().qubits(), angles_from_bits(b));
  const bool wrap = control >= 0 && fully_controlled;
  auto maybe_ctrl = [&](GateOp op) { return wrap ? op.controlled_by(control) : op; };

  std::vector<GateOp> ops;
  ops.push_back(maybe_ctrl(load_a));
  ops.push_back(maybe_ctrl(load_b));
  const auto match = matching_oracle_ops(layout, control, fully_controlled);
  ops.insert(ops.end(), match.begin(), match.end());
  ops.push_back(maybe_ctrl(load_b.inverse()));
  ops.push_back(maybe_ctrl(load_a.inverse()));
  return ops;
}

Circuit build_matching_oracle(int depth) {
  if (depth < 1) throw std::invalid_argument("matching oracle needs depth >= 1");
  const RegisterLayout layout{0, 0, depth, false};
  return Circuit(layout.registers(), matching_oracle_ops(layout));
}

Circuit build_diffuser(int n_a, int n_b) {
  if (n_a < 0 || n_b < 0 || n_a + n_b < 1) {
    throw std::invalid_argument("diffuser needs a combined address width >= 1");
  }
  const RegisterLayout layout{n_a, n_b, 0, false};
  std::vector<Register> regs;
  if (n_a > 0) regs.push_back(layout.addr_a());
  if (n_b > 0) regs.push_back(layout.addr_b());
  // H X MCZ X H equals -(2|+><+| - I); the global phase restores the sign.
  return Circuit(std::move(regs), diffuser_ops(layout), kPi);
}

Circuit build_grover_oracle(const Sequence& a, const Sequence& b) {
  const RegisterLayout layout = layout_for(a, b);
  return Circuit(layout.registers(), grover_oracle_ops(layout, a, b));
}

Circuit build_qcam_circuit(const Sequence& a, const Sequence& b, int iterations) {
  if (iterations < 0) throw std::invalid_argument("iteration count must be >= 0");
  const RegisterLayout layout = layout_for(a, b);
  std::vector<GateOp> ops;
  for (int q : layout.address_qubits()) ops.push_back(GateOp::h(q));
  if (iterations > 0) {
    const auto oracle = grover_oracle_ops(layout, a, b);
    const auto diffuser = diffuser_ops(layout);
    for (int it = 0; it < iterations; ++it) {
      ops.insert(ops.end(), oracle.begin(), oracle.end());
      ops.insert(ops.end(), diffuser.begin(), diffuser.end());
    }
  }
  ops.push_back(GateOp::pucr(layout.addr_a().qubits(), layout.data_a().qubits(), angles_from_bits(a)));
  ops.push_back(GateOp::pucr(layout.addr_b().qubits(), layout.data_b().qubits(), angles_from_bits(b)));
  return Circuit(layout.registers(), std::move(ops), (iterations % 2) * kPi);
}

Circuit build_heqc_squared(const Sequence& a, const Sequence& b) {
  const RegisterLayout layout = layout_for(a, b);
  std::vector<GateOp> ops;
  for (int q : layout.address_qubits()) ops.push_back(GateOp::h(q));
  const auto oracle = grover_oracle_ops(layout, a, b);
  ops.insert(ops.end(), oracle.begin(), oracle.end());
  for (int q : layout.address_qubits()) ops.push_back(GateOp::h(q));
  return Circuit(layout.registers(), std::move(ops));
}

Circuit build_heqc_hadamard(const Sequence& a, const Sequence& b, bool fully_controlled) {
  const RegisterLayout layout = layout_for(a, b, true);
  const int ctrl = layout.ctrl().offset;
  std::vector<GateOp> ops;
  ops.push_back(GateOp::h(ctrl));
  for (int q : layout.address_qubits()) ops.push_back(GateOp::h(q));
  const auto oracle = grover_oracle_ops(layout, a, b, ctrl, fully_controlled);
  ops.insert(ops.end(), oracle.begin(), oracle.end());
  for (int q : layout.address_qubits()) ops.push_back(GateOp::h(q));
  ops.push_back(GateOp::h(ctrl));
  return Circuit(layout.registers(), std::move(ops));
}

std::uint64_t pucr_critical_depth(int address_width, int data_width) {
  if (address_width < 1 || data_width < 1 || address_width > 62) {
    throw std::invalid_argument("pucr_critical_depth needs n >= 1 and d >= 1");
  }
  const std::uint64_t work = (std::uint64_t{1} << address_width) * static_cast<std::uint64_t>(data_width);
  const auto per_cycle = static_cast<std::uint64_t>(std::min(address_width, data_width));
  return (work + per_cycle - 1) / per_cycle;
}

std::vector<GateOp> decompose_pucr(const GateOp& pucr) {
  if (pucr.kind != GateKind::PUCR && pucr.kind != GateKind::CPUCR) {
    throw std::invalid_argument("decompose_pucr expects a PUCR gate");
  }
  const AngleMatrix& m = *pucr.angles;
  const double sign = pucr.adjoint ? -1.0 : 1.0;
  std::vector<GateOp> ops;
  for (std::size_t i = 0; i < m.rows; ++i) {
    std::vector<GateOp> select;
    for (std::size_t j = 0; j < pucr.address.size(); ++j) {
      if (((i >> j) & 1U) == 0) select.push_back(GateOp::x(pucr.address[j]));
    }
    ops.insert(ops.end(), select.begin(), select.end());
    for (std::size_t t = 0; t < m.cols; ++t) {
      GateOp r = GateOp::ry(pucr.targets[t], sign * m.at(i, t));
      r.controls = pucr.controls;
      r.controls.insert(r.controls.end(), pucr.address.begin(), pucr.address.end());
      ops.push_back(std::move(r));
    }
    ops.insert(ops.end(), select.begin(), select.end());
  }
  return ops;
}

void run_on(const Circuit& circuit, QuantumState& state) {
  if (state.num_qubits() != circuit.num_qubits()) {
    throw std::invalid_argument("state has " + std::to_string(state.num_qubits()) +
                                " qubits, circuit needs " + std::to_string(circuit.num_qubits()));
  }
  apply_all(state, circuit.ops());
  const double phase = circuit.global_phase();
  if (phase == 0.0) return;
  auto psi = state.amplitudes();
  if (phase == kPi) {
    for (Amplitude& a : psi) a = -a;
    return;
  }
  const Amplitude factor = std::polar(1.0, phase);
  for (Amplitude& a : psi) a *= factor;
}

QuantumState run(const Circuit& circuit, int max_qubits) {
  QuantumState state(circuit.num_qubits(), max_qubits);
  run_on(circuit, state);
  return state;
}

nlohmann::ordered_json circuit_to_json(const Circuit& circuit) {
  using json = nlohmann::ordered_json;
  json regs = json::array();
  for (const Register& r : circuit.registers()) regs.push_back({{"name", r.name}, {"width", r.width}});
  json ops = json::array();
  for (const GateOp& op : circuit.ops()) {
    json o;
    o["kind"] = to_string(op.kind);
    std::vector<int> controls = op.controls;
    controls.insert(controls.end(), op.address.begin(), op.address.end());
    o["controls"] = controls;
    o["targets"] = op.targets;
    if (op.kind == GateKind::RY) {
      o["params"] = std::vector<double>{op.angle};
    } else if (op.angles) {
      o["params"] = op.angles->values;
    } else {
      o["params"] = json::array();
    }
    o["adjoint"] = op.adjoint;
    ops.push_back(std::move(o));
  }
  json out;
  out["registers"] = std::move(regs);
  out["global_phase"] = circuit.global_phase();
  out["ops"] = std::move(ops);
  return out;
}

Circuit circuit_from_json(const nlohmann::json& j) {
  std::vector<Register> regs;
  int offset = 0;
  for (const auto& r : j.at("registers")) {
    Register reg{r.at("name").get<std::string>(), offset, r.at("width").get<int>()};
    offset += reg.width;
    regs.push_back(std::move(reg));
  }
  std::vector<GateOp> ops;
  for (const auto& o : j.at("ops")) {
    GateOp op;
    op.kind = gate_kind_from_string(o.at("kind").get<std::string>());
    op.controls = o.at("controls").get<std::vector<int>>();
    op.targets = o.at("targets").get<std::vector<int>>();
    op.adjoint = o.value("adjoint", false);
    const auto params = o.value("params", std::vector<double>{});
    if (op.kind == GateKind::RY) {
      if (params.size() != 1) throw std::invalid_argument("RY expects one parameter");
      op.angle = params[0];
    } else if (op.kind == GateKind::PUCR || op.kind == GateKind::CPUCR) {
      if (op.targets.empty() || params.size() % op.targets.size() != 0) {
        throw std::invalid_argument("PUCR parameter count does not match its data register");
      }
      const std::size_t rows = params.size() / op.targets.size();
      if (!std::has_single_bit(rows)) throw std::invalid_argument("PUCR row count is not a power of two");
      const auto n = static_cast<std::size_t>(std::countr_zero(rows));
      if (n > op.controls.size()) throw std::invalid_argument("PUCR address register too small");
      op.address.assign(op.controls.end() - static_cast<std::ptrdiff_t>(n), op.controls.end());
      op.controls.resize(op.controls.size() - n);
      auto m = std::make_shared<AngleMatrix>();
      m->rows = rows;
      m->cols = op.targets.size();
      m->values = params;
      op.angles = std::move(m);
    }
    ops.push_back(std::move(op));
  }
  return Circuit(std::move(regs), std::move(ops), j.value("global_phase", 0.0));
}

}  // namespace qcamsim
