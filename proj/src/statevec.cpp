#include "qcamsim/statevec.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include "bits.hpp"
#include "qcamsim/errors.hpp"

namespace qcamsim {

using detail::BitGather;
using detail::for_each_subset;
using detail::mask_of;

namespace {

constexpr int kDenseFuseQubits = 12;
constexpr int kClassicalFuseQubits = 20;

struct Real2x2 {
  double m00, m01, m10, m11;
};

// RY(theta), exact for the 0 and +-pi angles produced by bit loading.
Real2x2 ry_matrix(double theta) {
  if (theta == 0.0) return {1.0, 0.0, 0.0, 1.0};
  if (theta == std::numbers::pi) return {0.0, -1.0, 1.0, 0.0};
  if (theta == -std::numbers::pi) return {0.0, 1.0, -1.0, 0.0};
  const double c = std::cos(theta / 2.0);
  const double s = std::sin(theta / 2.0);
  return {c, -s, s, c};
}

constexpr Real2x2 kHadamard{std::numbers::sqrt2 / 2.0, std::numbers::sqrt2 / 2.0,
                            std::numbers::sqrt2 / 2.0, -std::numbers::sqrt2 / 2.0};

bool is_classical(GateKind k) {
  return k == GateKind::X || k == GateKind::CX || k == GateKind::MCX || k == GateKind::MCZ;
}

bool is_pucr(GateKind k) { return k == GateKind::PUCR || k == GateKind::CPUCR; }

std::uint64_t dim_mask(std::span<const Amplitude> psi) { return psi.size() - 1; }

void apply_matrix(std::span<Amplitude> psi, int target, std::uint64_t control_mask,
                  const Real2x2& m) {
  const std::uint64_t tbit = std::uint64_t{1} << target;
  const std::uint64_t free_bits = dim_mask(psi) & ~(tbit | control_mask);
  for_each_subset(free_bits, control_mask, [&](std::uint64_t i) {
    const Amplitude a0 = psi[i];
    const Amplitude a1 = psi[i | tbit];
    psi[i] = m.m00 * a0 + m.m01 * a1;
    psi[i | tbit] = m.m10 * a0 + m.m11 * a1;
  });
}

void apply_flip(std::span<Amplitude> psi, int target, std::uint64_t control_mask) {
  const std::uint64_t tbit = std::uint64_t{1} << target;
  const std::uint64_t free_bits = dim_mask(psi) & ~(tbit | control_mask);
  for_each_subset(free_bits, control_mask,
                  [&](std::uint64_t i) { std::swap(psi[i], psi[i | tbit]); });
}

void apply_phase_flip(std::span<Amplitude> psi, std::uint64_t mask) {
  const std::uint64_t free_bits = dim_mask(psi) & ~mask;
  for_each_subset(free_bits, mask, [&](std::uint64_t i) { psi[i] = -psi[i]; });
}

void apply_pucr_kernel(std::span<Amplitude> psi, const GateOp& op) {
  const AngleMatrix& angles = *op.angles;
  const std::uint64_t data_mask = mask_of(op.targets);
  const std::uint64_t control_mask = mask_of(op.controls);
  const std::uint64_t free_bits = dim_mask(psi) & ~(data_mask | control_mask);
  const std::vector<std::uint64_t> offsets = detail::scatter_offsets(op.targets);
  const BitGather address_of(op.address);
  const std::size_t d = op.targets.size();
  const std::size_t local = offsets.size();
  const double sign = op.adjoint ? -1.0 : 1.0;

  for_each_subset(free_bits, control_mask, [&](std::uint64_t base) {
    const std::uint64_t addr = op.address.empty() ? 0 : address_of(base);
    for (std::size_t t = 0; t < d; ++t) {
      const double theta = angles.at(addr, t);
      if (theta == 0.0) continue;
      const Real2x2 m = ry_matrix(sign * theta);
      const std::size_t tb = std::size_t{1} << t;
      for (std::size_t x = 0; x < local; ++x) {
        if (x & tb) continue;
        Amplitude& p0 = psi[base | offsets[x]];
        Amplitude& p1 = psi[base | offsets[x | tb]];
        const Amplitude a0 = p0;
        const Amplitude a1 = p1;
        p0 = m.m00 * a0 + m.m01 * a1;
        p1 = m.m10 * a0 + m.m11 * a1;
      }
    }
  });
}

void apply_kernel(std::span<Amplitude> psi, const GateOp& op) {
  const std::uint64_t cmask = mask_of(op.controls);
  switch (op.kind) {
    case GateKind::H:
      apply_matrix(psi, op.targets[0], cmask, kHadamard);
      break;
    case GateKind::RY:
      apply_matrix(psi, op.targets[0], cmask, ry_matrix(op.adjoint ? -op.angle : op.angle));
      break;
    case GateKind::X:
    case GateKind::CX:
    case GateKind::MCX:
      apply_flip(psi, op.targets[0], cmask);
      break;
    case GateKind::MCZ:
      apply_phase_flip(psi, cmask | mask_of(op.targets));
      break;
    case GateKind::PUCR:
    case GateKind::CPUCR:
      apply_pucr_kernel(psi, op);
      break;
  }
}

GateOp remap(const GateOp& op, std::span<const int> local_of) {
  GateOp out = op;
  for (int& q : out.controls) q = local_of[q];
  for (int& q : out.targets) q = local_of[q];
  for (int& q : out.address) q = local_of[q];
  return out;
}

// Runs `ops` on each 2^u sub-block spanned by `qubits`, one gather/scatter per block.
void apply_dense_block(std::span<Amplitude> psi, int num_qubits, std::span<const GateOp> ops,
                       std::span<const int> qubits) {
  std::vector<int> local_of(static_cast<std::size_t>(num_qubits), -1);
  for (std::size_t j = 0; j < qubits.size(); ++j) local_of[qubits[j]] = static_cast<int>(j);
  std::vector<GateOp> local_ops;
  local_ops.reserve(ops.size());
  for (const GateOp& op : ops) local_ops.push_back(remap(op, local_of));

  const std::vector<std::uint64_t> offsets = detail::scatter_offsets(qubits);
  std::vector<Amplitude> buf(offsets.size());
  const std::uint64_t free_bits = dim_mask(psi) & ~mask_of(qubits);
  for_each_subset(free_bits, 0, [&](std::uint64_t base) {
    for (std::size_t x = 0; x < buf.size(); ++x) buf[x] = psi[base | offsets[x]];
    for (const GateOp& op : local_ops) apply_kernel(buf, op);
    for (std::size_t x = 0; x < buf.size(); ++x) psi[base | offsets[x]] = buf[x];
  });
}

// X/CX/MCX/MCZ runs compose to |x> -> sign(x)|perm(x)>; tabulate once, apply in one pass.
void apply_classical_block(std::span<Amplitude> psi, int num_qubits,
                           std::span<const GateOp> ops, std::span<const int> qubits) {
  std::vector<int> local_of(static_cast<std::size_t>(num_qubits), -1);
  for (std::size_t j = 0; j < qubits.size(); ++j) local_of[qubits[j]] = static_cast<int>(j);

  struct LocalOp {
    bool phase;
    std::uint64_t cmask;
    std::uint64_t tbit;
  };
  std::vector<LocalOp> local_ops;
  for (const GateOp& g : ops) {
    const GateOp l = remap(g, local_of);
    if (g.kind == GateKind::MCZ) {
      local_ops.push_back({true, mask_of(l.controls) | mask_of(l.targets), 0});
    } else {
      local_ops.push_back({false, mask_of(l.controls), std::uint64_t{1} << l.targets[0]});
    }
  }

  const std::size_t n = std::size_t{1} << qubits.size();
  std::vector<std::uint64_t> perm(n);
  std::vector<bool> negate(n);
  bool identity = true;
  std::vector<std::uint64_t> negated;
  for (std::uint64_t x = 0; x < n; ++x) {
    std::uint64_t y = x;
    bool neg = false;
    for (const LocalOp& l : local_ops) {
      if ((y & l.cmask) != l.cmask) continue;
      if (l.phase) {
        neg = !neg;
      } else {
        y ^= l.tbit;
      }
    }
    perm[x] = y;
    negate[x] = neg;
    if (y != x) identity = false;
    if (neg) negated.push_back(x);
  }

  const std::vector<std::uint64_t> offsets = detail::scatter_offsets(qubits);
  const std::uint64_t free_bits = dim_mask(psi) & ~mask_of(qubits);
  if (identity) {
    if (negated.empty()) return;
    for_each_subset(free_bits, 0, [&](std::uint64_t base) {
      for (std::uint64_t x : negated) psi[base | offsets[x]] = -psi[base | offsets[x]];
    });
    return;
  }
  std::vector<Amplitude> buf(n);
  for_each_subset(free_bits, 0, [&](std::uint64_t base) {
    for (std::size_t x = 0; x < n; ++x) buf[x] = psi[base | offsets[x]];
    for (std::size_t x = 0; x < n; ++x) {
      psi[base | offsets[perm[x]]] = negate[x] ? -buf[x] : buf[x];
    }
  });
}

}  // namespace

QuantumState::QuantumState(int num_qubits, int max_qubits) {
  if (num_qubits < 1 || num_qubits > max_qubits) {
    std::ostringstream msg;
    msg << "cannot allocate " << num_qubits << " qubits (limit " << max_qubits << "); a state needs 16*2^"
        << num_qubits << " = ";
    if (num_qubits >= 1 && num_qubits < 64) {
      msg << state_bytes(num_qubits) << " bytes";
    } else {
      msg << "n/a bytes";
    }
    throw CapacityError(msg.str());
  }
  num_qubits_ = num_qubits;
  amps_.assign(std::size_t{1} << num_qubits, Amplitude{0.0, 0.0});
  amps_[0] = 1.0;
}

QuantumState QuantumState::from_amplitudes(std::vector<Amplitude> amplitudes) {
  const std::size_t n = amplitudes.size();
  if (n < 2 || (n & (n - 1)) != 0) {
    throw std::invalid_argument("amplitude vector size must be a power of two >= 2");
  }
  QuantumState s;
  s.num_qubits_ = std::countr_zero(n);
  s.amps_ = std::move(amplitudes);
  return s;
}

double QuantumState::norm_squared() const {
  double total = 0.0;
  for (const Amplitude& a : amps_) total += std::norm(a);
  return total;
}

std::uint64_t state_bytes(int num_qubits) { return std::uint64_t{16} << num_qubits; }

QuantumState new_state(int num_qubits, int max_qubits) { return QuantumState(num_qubits, max_qubits); }

std::string to_string(GateKind kind) {
  switch (kind) {
    case GateKind::H: return "H";
    case GateKind::X: return "X";
    case GateKind::RY: return "RY";
    case GateKind::CX: return "CX";
    case GateKind::MCX: return "MCX";
    case GateKind::MCZ: return "MCZ";
    case GateKind::PUCR: return "PUCR";
    case GateKind::CPUCR: return "CPUCR";
  }
  return "?";
}

GateKind gate_kind_from_string(const std::string& name) {
  for (GateKind k : {GateKind::H, GateKind::X, GateKind::RY, GateKind::CX, GateKind::MCX,
                     GateKind::MCZ, GateKind::PUCR, GateKind::CPUCR}) {
    if (to_string(k) == name) return k;
  }
  throw std::invalid_argument("unknown gate kind: " + name);
}

GateOp GateOp::h(int q) { return GateOp{.kind = GateKind::H, .targets = {q}}; }

GateOp GateOp::x(int q) { return GateOp{.kind = GateKind::X, .targets = {q}}; }

GateOp GateOp::ry(int q, double angle) {
  return GateOp{.kind = GateKind::RY, .targets = {q}, .angle = angle};
}

GateOp GateOp::cx(int control, int target) {
  return GateOp{.kind = GateKind::CX, .controls = {control}, .targets = {target}};
}

GateOp GateOp::mcx(std::vector<int> controls, int target) {
  return GateOp{.kind = GateKind::MCX, .controls = std::move(controls), .targets = {target}};
}

GateOp GateOp::mcz(std::vector<int> qubits) {
  if (qubits.empty()) throw std::invalid_argument("MCZ needs at least one qubit");
  const int last = qubits.back();
  qubits.pop_back();
  return GateOp{.kind = GateKind::MCZ, .controls = std::move(qubits), .targets = {last}};
}

GateOp GateOp::pucr(std::vector<int> address, std::vector<int> data,
                    std::shared_ptr<const AngleMatrix> angles) {
  return GateOp{.kind = GateKind::PUCR,
                .targets = std::move(data),
                .address = std::move(address),
                .angles = std::move(angles)};
}

GateOp GateOp::cpucr(int control, std::vector<int> address, std::vector<int> data,
                     std::shared_ptr<const AngleMatrix> angles) {
  return GateOp{.kind = GateKind::CPUCR,
                .controls = {control},
                .targets = std::move(data),
                .address = std::move(address),
                .angles = std::move(angles)};
}

GateOp GateOp::inverse() const {
  GateOp out = *this;
  // H, X and the multi-controlled flips are self-inverse.
  if (kind == GateKind::RY || is_pucr(kind)) out.adjoint = !adjoint;
  return out;
}

GateOp GateOp::controlled_by(int control) const {
  GateOp out = *this;
  out.controls.insert(out.controls.begin(), control);
  switch (kind) {
    case GateKind::X:
      out.kind = GateKind::CX;
      break;
    case GateKind::CX:
      out.kind = GateKind::MCX;
      break;
    case GateKind::PUCR:
      out.kind = GateKind::CPUCR;
      break;
    case GateKind::CPUCR:
      throw std::invalid_argument("CPUCR takes a single control");
    default:
      break;
  }
  return out;
}

std::vector<int> GateOp::qubits() const {
  std::vector<int> all = controls;
  all.insert(all.end(), address.begin(), address.end());
  all.insert(all.end(), targets.begin(), targets.end());
  return all;
}

void GateOp::validate(int num_qubits) const {
  const std::string name = to_string(kind);
  auto need = [&](bool ok, const std::string& what) {
    if (!ok) throw std::invalid_argument(name + ": " + what);
  };
  switch (kind) {
    case GateKind::H:
    case GateKind::X:
    case GateKind::RY:
      need(targets.size() == 1, "expects one target");
      break;
    case GateKind::CX:
      need(controls.size() == 1 && targets.size() == 1, "expects one control and one target");
      break;
    case GateKind::MCX:
      need(targets.size() == 1, "expects one target");
      break;
    case GateKind::MCZ:
      need(targets.size() == 1, "expects its last qubit as target");
      break;
    case GateKind::PUCR:
    case GateKind::CPUCR:
      need(kind == GateKind::PUCR ? controls.empty() : controls.size() == 1,
           "wrong number of controls");
      need(!targets.empty(), "needs a data register");
      need(angles != nullptr, "missing angle matrix");
      need(address.size() < 32, "address register too wide");
      need(angles->rows == (std::size_t{1} << address.size()) && angles->cols == targets.size() &&
               angles->values.size() == angles->rows * angles->cols,
           "angle matrix shape does not match address/data widths");
      break;
  }
  if (kind != GateKind::PUCR && kind != GateKind::CPUCR) need(address.empty(), "unexpected address register");
  const auto qs = qubits();
  for (int q : qs) {
    if (q < 0 || q >= num_qubits) {
      throw std::out_of_range(name + ": qubit index " + std::to_string(q) + " outside a " +
                              std::to_string(num_qubits) + "-qubit state");
    }
  }
  std::vector<int> sorted = qs;
  std::sort(sorted.begin(), sorted.end());
  need(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end(),
       "control, address and target qubits must be distinct");
}

bool operator==(const GateOp& a, const GateOp& b) {
  const bool same_angles =
      (a.angles == nullptr && b.angles == nullptr) ||
      (a.angles && b.angles && a.angles->rows == b.angles->rows && a.angles->cols == b.angles->cols &&
       a.angles->values == b.angles->values);
  return a.kind == b.kind && a.controls == b.controls && a.targets == b.targets &&
         a.address == b.address && a.angle == b.angle && a.adjoint == b.adjoint && same_angles;
}

void apply(QuantumState& state, const GateOp& op) {
  op.validate(state.num_qubits());
  apply_kernel(state.amplitudes(), op);
}

void apply_all(QuantumState& state, std::span<const GateOp> ops) {
  const int nq = state.num_qubits();
  for (const GateOp& op : ops) op.validate(nq);
  std::span<Amplitude> psi = state.amplitudes();

  std::size_t i = 0;
  while (i < ops.size()) {
    const GateOp& first = ops[i];
    if (is_pucr(first.kind)) {
      apply_kernel(psi, first);
      ++i;
      continue;
    }
    const bool classical = is_classical(first.kind);
    const int limit = std::min(nq, classical ? kClassicalFuseQubits : kDenseFuseQubits);
    std::size_t j = i + 1;
    std::set<int> group;
    for (int q : first.qubits()) group.insert(q);
    while (j < ops.size() && !is_pucr(ops[j].kind) && (!classical || is_classical(ops[j].kind))) {
      std::set<int> next = group;
      for (int q : ops[j].qubits()) next.insert(q);
      if (static_cast<int>(next.size()) > limit) break;
      group = std::move(next);
      ++j;
    }
    const std::vector<int> block(group.begin(), group.end());
    if (j - i == 1) {
      apply_kernel(psi, first);
    } else if (classical) {
      apply_classical_block(psi, nq, ops.subspan(i, j - i), block);
    } else {
      apply_dense_block(psi, nq, ops.subspan(i, j - i), block);
    }
    i = j;
  }
}

Amplitude inner_product(const QuantumState& a, const QuantumState& b) {
  if (a.num_qubits() != b.num_qubits()) {
    throw std::invalid_argument("inner_product: states have " + std::to_string(a.num_qubits()) +
                                " and " + std::to_string(b.num_qubits()) + " qubits");
  }
  Amplitude total{0.0, 0.0};
  const auto x = a.amplitudes();
  const auto y = b.amplitudes();
  for (std::size_t i = 0; i < x.size(); ++i) total += std::conj(x[i]) * y[i];
  return total;
}

std::uint64_t ShotCounts::count(std::uint64_t outcome) const {
  const auto it = counts.find(outcome);
  return it == counts.end() ? 0 : it->second;
}

std::string ShotCounts::key(std::uint64_t outcome) const {
  std::string s(qubits.size(), '0');
  for (std::size_t j = 0; j < qubits.size(); ++j) {
    if ((outcome >> j) & 1U) s[qubits.size() - 1 - j] = '1';
  }
  return s;
}

std::map<std::string, std::uint64_t> ShotCounts::by_key() const {
  std::map<std::string, std::uint64_t> out;
  for (const auto& [outcome, n] : counts) out[key(outcome)] = n;
  return out;
}

std::vector<double> marginal_probabilities(const QuantumState& state, std::span<const int> qubits) {
  if (qubits.empty()) throw std::invalid_argument("sample: empty qubit list");
  std::vector<int> sorted(qubits.begin(), qubits.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw std::invalid_argument("sample: measured qubits must be distinct");
  }
  for (int q : qubits) {
    if (q < 0 || q >= state.num_qubits()) {
      throw std::out_of_range("sample: qubit " + std::to_string(q) + " out of range");
    }
  }
  std::vector<double> probs(std::size_t{1} << qubits.size(), 0.0);
  const BitGather outcome_of(qubits);
  const auto psi = state.amplitudes();
  for (std::size_t i = 0; i < psi.size(); ++i) probs[outcome_of(i)] += std::norm(psi[i]);
  return probs;
}

ShotCounts sample(const QuantumState& state, std::span<const int> qubits, std::uint64_t shots,
                  std::uint64_t seed) {
  if (shots < 1) throw std::invalid_argument("sample: shots must be >= 1");
  std::vector<double> cdf = marginal_probabilities(state, qubits);
  for (std::size_t i = 1; i < cdf.size(); ++i) cdf[i] += cdf[i - 1];
  const double total = cdf.back();

  ShotCounts out;
  out.qubits.assign(qubits.begin(), qubits.end());
  out.total_shots = shots;
  std::mt19937_64 rng(seed);
  for (std::uint64_t s = 0; s < shots; ++s) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53 * total;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    if (it == cdf.end()) --it;
    ++out.counts[static_cast<std::uint64_t>(it - cdf.begin())];
  }
  return out;
}

void dump_state(std::ostream& out, const QuantumState& state) {
  const auto psi = state.amplitudes();
  const auto old_precision = out.precision(17);
  for (std::size_t i = 0; i < psi.size(); ++i) {
    if (std::abs(psi[i]) < 1e-12) continue;
    out << i << ' ' << psi[i].real() << ' ' << psi[i].imag() << '\n';
  }
  out.precision(old_precision);
}

}  // namespace qcamsim
