#pragma once

// End-to-end content-addressable matching of two sequences.

#include <cstdint>
#include <set>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "qcamsim/circuits.hpp"

namespace qcamsim {

// Address pairs (i, j) with a_i == b_j.
using MatchSet = std::set<std::pair<std::size_t, std::size_t>>;

// Brings both sequences to power-of-two lengths without creating matches.
// Unchanged if both lengths are already powers of two; otherwise both move to
// depth d+1: real items gain a leading 0, pads of `a` are 1 followed by zeros
// and pads of `b` are 1 followed by ones.
std::pair<Sequence, Sequence> pad_sequences(const Sequence& a, const Sequence& b);

// Exact double loop; the classical ground truth.
MatchSet brute_force_matches(const Sequence& a, const Sequence& b);

struct MatchRecord {
  std::size_t addr_a = 0;
  std::size_t addr_b = 0;
  BitString data_a{0, 1};
  BitString data_b{0, 1};
  std::uint64_t count = 0;
};

struct QcamResult {
  std::vector<MatchRecord> records;  // verified, sorted by (addr_a, addr_b)
  std::uint64_t rejected = 0;
  std::uint64_t shots = 0;
  int iterations = 0;
  std::uint64_t seed = 0;

  std::uint64_t verified_shots() const;
};

// Runs the QCAM circuit with `iterations` Grover rounds, measures the address
// and data registers, and checks every shot against the inputs.
QcamResult run_qcam(const Sequence& a, const Sequence& b, int iterations, std::uint64_t shots,
                    std::uint64_t seed, int max_qubits = kDefaultMaxQubits);

MatchSet collect_matches(const QcamResult& result);

// max(300, ceil(50 * m * ln(m + 1))): enough draws to see all m matches.
std::uint64_t default_shot_budget(double expected_matches, double factor = 50.0,
                                  std::uint64_t floor = 300);

// {k, shots, seed, matches: [{i, j, value, count}], rejected}
nlohmann::ordered_json qcam_result_to_json(const QcamResult& result);

struct PlantedInstance {
  Sequence a;
  Sequence b;
  MatchSet matches;
};

// Random sequences of 2^n_a and 2^n_b items at the given depth with exactly
// `matches` matching address pairs. Matching values are planted as complete
// bipartite blocks (one value shared by x items of a and y items of b); when
// possible every block is a single pair. All other items of a and b draw
// from two disjoint value pools.
PlantedInstance plant_matches(int n_a, int n_b, int depth, std::size_t matches, std::uint64_t seed);

}  // namespace qcamsim
