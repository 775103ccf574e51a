#pragma once

// Hardware-efficient quantum counting: estimate <+|O_G|+> directly and turn
// it into the Grover phase, the solution count and the iteration count.

#include <cstdint>
#include <optional>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "qcamsim/circuits.hpp"

namespace qcamsim {

enum class HeqcVariant { Squared, Hadamard, Exact };

std::string to_string(HeqcVariant v);
HeqcVariant heqc_variant_from_string(const std::string& name);

// Fraction of shots reading all zeros on the search register after
// H, O_G, H. Equals |<+|O_G|+>|^2 in expectation.
double run_heqc_squared(const Sequence& a, const Sequence& b, std::uint64_t shots,
                        std::uint64_t seed, int max_qubits = kDefaultMaxQubits);

// Empirical <X> of the Hadamard-test control qubit, an estimate of Re <+|O_G|+>.
double run_heqc_hadamard(const Sequence& a, const Sequence& b, std::uint64_t shots,
                         std::uint64_t seed, int max_qubits = kDefaultMaxQubits);

// Re <+|O_G|+> from the simulated state, no shot noise.
double exact_overlap(const Sequence& a, const Sequence& b, int max_qubits = kDefaultMaxQubits);

struct ThetaEstimate {
  double theta = 0.0;
  bool clamped = false;  // input was outside its valid range
};

// Squared: theta = arccos(sqrt(p0)) in [0, pi/2]. Hadamard and Exact:
// theta = arccos(c) in [0, pi]. Throws std::domain_error on NaN.
ThetaEstimate theta_from_overlap(double value, HeqcVariant variant);

// N sin^2(theta / 2).
double solutions_from_theta(double theta, double search_space);

// round((pi - theta) / (2 theta)), halves rounded away from zero.
// Returns nullopt for theta == 0, which means there is nothing to find.
std::optional<int> iterations_from_theta(double theta);

struct HeqcEstimate {
  HeqcVariant variant = HeqcVariant::Exact;
  double measured = 0.0;  // p0 (squared) or <X> / exact overlap
  double overlap = 0.0;   // cos(theta)
  double theta = 0.0;
  double m_est = 0.0;
  std::optional<int> k;
  std::uint64_t search_space = 0;
  std::uint64_t shots = 0;
  std::uint64_t seed = 0;
  bool clamped = false;
};

HeqcEstimate heqc_pipeline(const Sequence& a, const Sequence& b, std::uint64_t shots,
                           std::uint64_t seed, HeqcVariant variant,
                           int max_qubits = kDefaultMaxQubits);

// {variant, shots, seed, p0 | x_expect, theta, m_est, k}
nlohmann::ordered_json heqc_to_json(const HeqcEstimate& e);

}  // namespace qcamsim
