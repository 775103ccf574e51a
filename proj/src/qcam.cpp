#include "qcamsim/qcam.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <stdexcept>
#include <tuple>

#include <nlohmann/json.hpp>

namespace qcamsim {

std::pair<Sequence, Sequence> pad_sequences(const Sequence& a, const Sequence& b) {
  if (a.depth() != b.depth()) throw std::invalid_argument("pad_sequences: depth mismatch");
  if (a.size() == 0 || b.size() == 0) throw std::invalid_argument("pad_sequences: empty sequence");
  if (a.is_power_of_two_length() && b.is_power_of_two_length()) return {a, b};
  const int d = a.depth();
  if (d < 1) throw std::invalid_argument("pad_sequences: cannot pad depth-0 items");
  const std::uint64_t lead = std::uint64_t{1} << d;
  const std::uint64_t ones = lead - 1;

  auto widen = [&](const Sequence& s, std::uint64_t pad) {
    std::vector<std::uint64_t> v = s.values();
    v.resize(std::bit_ceil(v.size()), lead | pad);
    return Sequence(std::move(v), d + 1);
  };
  return {widen(a, 0), widen(b, ones)};
}

MatchSet brute_force_matches(const Sequence& a, const Sequence& b) {
  if (a.depth() != b.depth()) throw std::invalid_argument("brute_force_matches: depth mismatch");
  MatchSet out;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (a[i] == b[j]) out.emplace(i, j);
    }
  }
  return out;
}

std::uint64_t QcamResult::verified_shots() const {
  std::uint64_t n = 0;
  for (const MatchRecord& r : records) n += r.count;
  return n;
}

QcamResult run_qcam(const Sequence& a, const Sequence& b, int iterations, std::uint64_t shots,
                    std::uint64_t seed, int max_qubits) {
  if (shots < 1) throw std::invalid_argument("run_qcam: shots must be >= 1");
  const Circuit circuit = build_qcam_circuit(a, b, iterations);
  const QuantumState state = run(circuit, max_qubits);

  const RegisterLayout layout{a.address_width(), b.address_width(), a.depth(), false};
  std::vector<int> measured = layout.address_qubits();
  for (const Register& r : {layout.data_a(), layout.data_b()}) {
    const auto q = r.qubits();
    measured.insert(measured.end(), q.begin(), q.end());
  }
  const ShotCounts counts = sample(state, measured, shots, seed);

  const int n_a = layout.n_a;
  const int n_b = layout.n_b;
  const int d = layout.depth;
  auto field = [](std::uint64_t v, int shift, int width) {
    return (v >> shift) & ((std::uint64_t{1} << width) - 1);
  };
  // Data qubit t holds bit t counted from the most significant end.
  auto data_value = [d](std::uint64_t raw) {
    std::uint64_t v = 0;
    for (int t = 0; t < d; ++t) v |= ((raw >> t) & 1U) << (d - 1 - t);
    return v;
  };

  QcamResult result;
  result.shots = shots;
  result.iterations = iterations;
  result.seed = seed;
  std::map<std::tuple<std::size_t, std::size_t, std::uint64_t, std::uint64_t>, std::uint64_t> verified;
  for (const auto& [outcome, n] : counts.counts) {
    const auto i = static_cast<std::size_t>(field(outcome, 0, n_a));
    const auto j = static_cast<std::size_t>(field(outcome, n_a, n_b));
    const std::uint64_t da = data_value(field(outcome, n_a + n_b, d));
    const std::uint64_t db = data_value(field(outcome, n_a + n_b + d, d));
    if (a[i] == b[j] && da == a[i] && db == b[j]) {
      verified[{i, j, da, db}] += n;
    } else {
      result.rejected += n;
    }
  }
  for (const auto& [key, n] : verified) {
    const auto& [i, j, da, db] = key;
    result.records.push_back(MatchRecord{i, j, BitString(da, d), BitString(db, d), n});
  }
  return result;
}

MatchSet collect_matches(const QcamResult& result) {
  MatchSet out;
  for (const MatchRecord& r : result.records) out.emplace(r.addr_a, r.addr_b);
  return out;
}

std::uint64_t default_shot_budget(double expected_matches, double factor, std::uint64_t floor) {
  const double m = std::max(0.0, expected_matches);
  const auto budget = static_cast<std::uint64_t>(std::ceil(factor * m * std::log(m + 1.0)));
  return std::max(floor, budget);
}

nlohmann::ordered_json qcam_result_to_json(const QcamResult& result) {
  nlohmann::ordered_json matches = nlohmann::ordered_json::array();
  for (const MatchRecord& r : result.records) {
    nlohmann::ordered_json m;
    m["i"] = r.addr_a;
    m["j"] = r.addr_b;
    m["value"] = r.data_a.to_string();
    m["count"] = r.count;
    matches.push_back(std::move(m));
  }
  nlohmann::ordered_json out;
  out["k"] = result.iterations;
  out["shots"] = result.shots;
  out["seed"] = result.seed;
  out["matches"] = std::move(matches);
  out["rejected"] = result.rejected;
  return out;
}

namespace {

using Block = std::pair<std::size_t, std::size_t>;  // (items of a, items of b)

// Splits `m` into at most `max_blocks` products x*y using at most `room_a`
// items of a and `room_b` items of b. Largest blocks are tried first.
bool decompose(std::size_t m, std::size_t room_a, std::size_t room_b, int max_blocks,
               std::vector<Block>& out) {
  if (m == 0) return true;
  if (max_blocks == 0) return false;
  for (std::size_t y = std::min(room_b, m); y >= 1; --y) {
    const std::size_t x_max = std::min(room_a, m / y);
    for (std::size_t x = x_max; x >= 1; --x) {
      if (max_blocks == 1 && x * y != m) continue;
      out.emplace_back(x, y);
      if (decompose(m - x * y, room_a - x, room_b - y, max_blocks - 1, out)) return true;
      out.pop_back();
      if (max_blocks == 1) break;
    }
  }
  return false;
}

}  // namespace

PlantedInstance plant_matches(int n_a, int n_b, int depth, std::size_t matches, std::uint64_t seed) {
  if (n_a < 0 || n_b < 0 || depth < 1 || depth > 30) {
    throw std::invalid_argument("plant_matches: bad widths");
  }
  const std::size_t len_a = std::size_t{1} << n_a;
  const std::size_t len_b = std::size_t{1} << n_b;
  const std::size_t num_values = std::size_t{1} << depth;
  if (matches > len_a * len_b) throw std::invalid_argument("plant_matches: too many matches requested");

  std::vector<Block> blocks;
  if (matches <= std::min(len_a, len_b)) {
    blocks.assign(matches, Block{1, 1});
  } else {
    bool found = false;
    for (int max_blocks = 1; max_blocks <= 4 && !found; ++max_blocks) {
      blocks.clear();
      found = decompose(matches, len_a, len_b, max_blocks, blocks);
    }
    if (!found) throw std::invalid_argument("plant_matches: no block layout for this match count");
  }
  std::size_t used_a = 0;
  std::size_t used_b = 0;
  for (const Block& blk : blocks) {
    used_a += blk.first;
    used_b += blk.second;
  }
  const bool fill_a = used_a < len_a;
  const bool fill_b = used_b < len_b;
  const std::size_t needed = blocks.size() + (fill_a ? 1 : 0) + (fill_b ? 1 : 0);
  if (needed > num_values) throw std::invalid_argument("plant_matches: depth too small for this instance");

  std::mt19937_64 rng(seed);
  std::vector<std::uint64_t> values(num_values);
  std::iota(values.begin(), values.end(), std::uint64_t{0});
  std::shuffle(values.begin(), values.end(), rng);

  // Split the values not used by blocks into two disjoint filler pools.
  const std::size_t spare = num_values - blocks.size();
  std::size_t pool_a_size = 0;
  if (fill_a && fill_b) {
    pool_a_size = spare / 2;
  } else if (fill_a) {
    pool_a_size = spare;
  }
  const auto pool_a_begin = values.begin() + static_cast<std::ptrdiff_t>(blocks.size());
  const auto pool_b_begin = pool_a_begin + static_cast<std::ptrdiff_t>(pool_a_size);
  const std::vector<std::uint64_t> pool_a(pool_a_begin, pool_b_begin);
  const std::vector<std::uint64_t> pool_b(pool_b_begin, values.end());

  std::vector<std::size_t> pos_a(len_a);
  std::vector<std::size_t> pos_b(len_b);
  std::iota(pos_a.begin(), pos_a.end(), std::size_t{0});
  std::iota(pos_b.begin(), pos_b.end(), std::size_t{0});
  std::shuffle(pos_a.begin(), pos_a.end(), rng);
  std::shuffle(pos_b.begin(), pos_b.end(), rng);

  std::vector<std::uint64_t> va(len_a);
  std::vector<std::uint64_t> vb(len_b);
  std::size_t next_a = 0;
  std::size_t next_b = 0;
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    for (std::size_t x = 0; x < blocks[k].first; ++x) va[pos_a[next_a++]] = values[k];
    for (std::size_t y = 0; y < blocks[k].second; ++y) vb[pos_b[next_b++]] = values[k];
  }
  for (; next_a < len_a; ++next_a) {
    va[pos_a[next_a]] = pool_a[std::uniform_int_distribution<std::size_t>(0, pool_a.size() - 1)(rng)];
  }
  for (; next_b < len_b; ++next_b) {
    vb[pos_b[next_b]] = pool_b[std::uniform_int_distribution<std::size_t>(0, pool_b.size() - 1)(rng)];
  }

  PlantedInstance out{Sequence(std::move(va), depth), Sequence(std::move(vb), depth), {}};
  out.matches = brute_force_matches(out.a, out.b);
  if (out.matches.size() != matches) {
    throw std::logic_error("plant_matches: planted count does not match the request");
  }
  return out;
}

}  // namespace qcamsim
