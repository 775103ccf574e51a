#include "qcamsim/heqc.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace qcamsim {

std::string to_string(HeqcVariant v) {
  switch (v) {
    case HeqcVariant::Squared: return "squared";
    case HeqcVariant::Hadamard: return "hadamard";
    case HeqcVariant::Exact: return "exact";
  }
  return "?";
}

HeqcVariant heqc_variant_from_string(const std::string& name) {
  if (name == "squared") return HeqcVariant::Squared;
  if (name == "hadamard") return HeqcVariant::Hadamard;
  if (name == "exact") return HeqcVariant::Exact;
  throw std::invalid_argument("unknown HEQC variant: " + name + " (squared|hadamard|exact)");
}

double run_heqc_squared(const Sequence& a, const Sequence& b, std::uint64_t shots,
                        std::uint64_t seed, int max_qubits) {
  const Circuit circuit = build_heqc_squared(a, b);
  const QuantumState state = run(circuit, max_qubits);
  const RegisterLayout layout{a.address_width(), b.address_width(), a.depth(), false};
  const std::vector<int> search = layout.address_qubits();
  // One address pair: O_G is a global sign and p0 is 1 whatever the data.
  if (search.empty()) return 1.0;
  const ShotCounts counts = sample(state, search, shots, seed);
  return static_cast<double>(counts.count(0)) / static_cast<double>(shots);
}

double run_heqc_hadamard(const Sequence& a, const Sequence& b, std::uint64_t shots,
                         std::uint64_t seed, int max_qubits) {
  const Circuit circuit = build_heqc_hadamard(a, b);
  const QuantumState state = run(circuit, max_qubits);
  const int ctrl = circuit.reg("ctrl").offset;
  const std::vector<int> measured{ctrl};
  const ShotCounts counts = sample(state, measured, shots, seed);
  const auto zeros = static_cast<double>(counts.count(0));
  const auto ones = static_cast<double>(counts.count(1));
  return (zeros - ones) / static_cast<double>(shots);
}

double exact_overlap(const Sequence& a, const Sequence& b, int max_qubits) {
  const RegisterLayout layout{a.address_width(), b.address_width(), a.depth(), false};
  std::vector<GateOp> prep;
  for (int q : layout.address_qubits()) prep.push_back(GateOp::h(q));
  QuantumState plus(layout.total_qubits(), max_qubits);
  apply_all(plus, prep);
  QuantumState rotated(layout.total_qubits(), max_qubits);
  std::vector<GateOp> ops = prep;
  const auto oracle = grover_oracle_ops(layout, a, b);
  ops.insert(ops.end(), oracle.begin(), oracle.end());
  apply_all(rotated, ops);
  return inner_product(plus, rotated).real();
}

ThetaEstimate theta_from_overlap(double value, HeqcVariant variant) {
  if (std::isnan(value)) throw std::domain_error("theta_from_overlap: NaN input");
  ThetaEstimate out;
  if (variant == HeqcVariant::Squared) {
    const double p0 = std::clamp(value, 0.0, 1.0);
    out.clamped = p0 != value;
    out.theta = std::acos(std::sqrt(p0));
  } else {
    const double c = std::clamp(value, -1.0, 1.0);
    out.clamped = c != value;
    out.theta = std::acos(c);
  }
  return out;
}

double solutions_from_theta(double theta, double search_space) {
  const double s = std::sin(theta / 2.0);
  return search_space * s * s;
}

std::optional<int> iterations_from_theta(double theta) {
  if (std::isnan(theta) || theta < 0.0 || theta > std::numbers::pi) {
    throw std::domain_error("iterations_from_theta: theta must lie in [0, pi]");
  }
  if (theta == 0.0) return std::nullopt;
  // std::round rounds halfway cases away from zero.
  return static_cast<int>(std::round((std::numbers::pi - theta) / (2.0 * theta)));
}

HeqcEstimate heqc_pipeline(const Sequence& a, const Sequence& b, std::uint64_t shots,
                           std::uint64_t seed, HeqcVariant variant, int max_qubits) {
  HeqcEstimate e;
  e.variant = variant;
  e.seed = seed;
  e.search_space = static_cast<std::uint64_t>(a.size()) * b.size();
  switch (variant) {
    case HeqcVariant::Squared:
      e.shots = shots;
      e.measured = run_heqc_squared(a, b, shots, seed, max_qubits);
      break;
    case HeqcVariant::Hadamard:
      e.shots = shots;
      e.measured = run_heqc_hadamard(a, b, shots, seed, max_qubits);
      break;
    case HeqcVariant::Exact:
      e.shots = 0;
      e.measured = exact_overlap(a, b, max_qubits);
      break;
  }
  const ThetaEstimate t = theta_from_overlap(e.measured, variant);
  e.theta = t.theta;
  e.clamped = t.clamped;
  e.overlap = std::cos(e.theta);
  e.m_est = solutions_from_theta(e.theta, static_cast<double>(e.search_space));
  e.k = iterations_from_theta(e.theta);
  return e;
}

nlohmann::ordered_json heqc_to_json(const HeqcEstimate& e) {
  nlohmann::ordered_json j;
  j["variant"] = to_string(e.variant);
  j["shots"] = e.shots;
  j["seed"] = e.seed;
  if (e.variant == HeqcVariant::Squared) {
    j["p0"] = e.measured;
  } else {
    j["x_expect"] = e.measured;
  }
  j["theta"] = e.theta;
  j["m_est"] = e.m_est;
  if (e.k) {
    j["k"] = *e.k;
  } else {
    j["k"] = nullptr;
  }
  if (e.clamped) j["clamped"] = true;
  return j;
}

}  // namespace qcamsim
