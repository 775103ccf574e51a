#pragma once

// Bit-manipulation helpers shared by the kernels. Internal header.

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace qcamsim::detail {

inline std::uint64_t mask_of(std::span<const int> qubits) {
  std::uint64_t m = 0;
  for (int q : qubits) m |= std::uint64_t{1} << q;
  return m;
}

// Calls f(i | set_bits) for every i that is a subset of `free_bits`, in
// increasing order.
template <class F>
inline void for_each_subset(std::uint64_t free_bits, std::uint64_t set_bits, F&& f) {
  std::uint64_t i = 0;
  do {
    f(i | set_bits);
    i = (i - free_bits) & free_bits;
  } while (i != 0);
}

// offsets[x] = basis index with bit j of x placed at qubits[j].
inline std::vector<std::uint64_t> scatter_offsets(std::span<const int> qubits) {
  const std::size_t n = std::size_t{1} << qubits.size();
  std::vector<std::uint64_t> offsets(n, 0);
  for (std::size_t x = 0; x < n; ++x) {
    std::uint64_t off = 0;
    for (std::size_t j = 0; j < qubits.size(); ++j) {
      if ((x >> j) & 1U) off |= std::uint64_t{1} << qubits[j];
    }
    offsets[x] = off;
  }
  return offsets;
}

// Extracts the bits at `qubits` from a basis index (bit j of the result is
// qubits[j]) with one table lookup per index byte.
class BitGather {
 public:
  explicit BitGather(std::span<const int> qubits) {
    int max_q = -1;
    for (int q : qubits) max_q = q > max_q ? q : max_q;
    num_bytes_ = static_cast<std::size_t>(max_q / 8 + 1);
    tables_.assign(num_bytes_, std::array<std::uint64_t, 256>{});
    for (std::size_t b = 0; b < num_bytes_; ++b) {
      for (unsigned v = 0; v < 256; ++v) {
        std::uint64_t out = 0;
        for (std::size_t j = 0; j < qubits.size(); ++j) {
          const int q = qubits[j];
          if (q / 8 == static_cast<int>(b) && ((v >> (q % 8)) & 1U)) out |= std::uint64_t{1} << j;
        }
        tables_[b][v] = out;
      }
    }
  }

  std::uint64_t operator()(std::uint64_t index) const {
    std::uint64_t out = 0;
    for (std::size_t b = 0; b < num_bytes_; ++b) out |= tables_[b][(index >> (8 * b)) & 0xFFU];
    return out;
  }

 private:
  std::size_t num_bytes_ = 0;
  std::vector<std::array<std::uint64_t, 256>> tables_;
};

}  // namespace qcamsim::detail
