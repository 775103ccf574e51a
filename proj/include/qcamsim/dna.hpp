#pragma once

// k-mer encodings and Jaccard similarity, classical and via QCAM.
//
// Nucleotide codes: A=00, T=01, G=10, C=11, concatenated left to right.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "qcamsim/circuits.hpp"
#include "qcamsim/heqc.hpp"
#include "qcamsim/qcam.hpp"

namespace qcamsim {

class DnaStrand {
 public:
  // Upper-cases its input; throws std::invalid_argument on anything but ACGT.
  explicit DnaStrand(std::string bases);

  const std::string& bases() const { return bases_; }
  std::size_t length() const { return bases_.size(); }

  friend bool operator==(const DnaStrand&, const DnaStrand&) = default;

 private:
  std::string bases_;
};

BitString encode_kmer(std::string_view kmer);
std::string decode_kmer(std::uint64_t code, int k);

// The length-k+1 overlapping k-mers, in order, duplicates kept.
std::vector<std::string> kmer_strings(const DnaStrand& strand, int k);
Sequence kmerize(const DnaStrand& strand, int k);

// Unique k-mers with their first-appearance order.
class KmerSet {
 public:
  explicit KmerSet(int k) : k_(k) {}

  int k() const { return k_; }
  std::size_t size() const { return members_.size(); }
  bool contains(const std::string& kmer) const { return members_.count(kmer) != 0; }
  // Returns false if already present.
  bool insert(const std::string& kmer);

  const std::vector<std::string>& in_order() const { return order_; }
  const std::set<std::string>& members() const { return members_; }

 private:
  int k_;
  std::vector<std::string> order_;
  std::set<std::string> members_;
};

KmerSet unique_kmers(const DnaStrand& strand, int k);

DnaStrand generate_dna(std::size_t length, std::uint64_t seed);

// Each base is replaced with probability `rate` by one of the other three.
DnaStrand mutate(const DnaStrand& strand, double rate, std::uint64_t seed);

// |A n B| / (|A| + |B| - |A n B|). Throws if both sets are empty.
double jaccard_classical(const KmerSet& a, const KmerSet& b);
std::size_t intersection_size(const KmerSet& a, const KmerSet& b);

struct JaccardConfig {
  HeqcVariant variant = HeqcVariant::Hadamard;
  std::uint64_t heqc_shots = 2000;
  // Defaults to default_shot_budget(m_est) when unset.
  std::optional<std::uint64_t> shots;
  // Overrides the HEQC iteration count when set.
  std::optional<int> iterations;
  std::uint64_t seed = 1;
  int max_qubits = kDefaultMaxQubits;
};

struct JaccardReport {
  std::size_t size_a = 0;
  std::size_t size_b = 0;
  std::size_t size_intersection = 0;
  double jaccard = 0.0;
  KmerSet matched{0};
  HeqcEstimate heqc;
  QcamResult qcam;
  bool zero_estimate = false;  // HEQC found no solutions; Grover was skipped
  int address_a = 0;
  int address_b = 0;
  int depth = 0;
  int total_qubits = 0;  // QCAM circuit width
};

// k-merize, pad, estimate the match count with HEQC, run QCAM with the
// estimated iteration count, and deduplicate the matched k-mers.
// |A| and |B| are computed classically.
JaccardReport jaccard_qcam(const DnaStrand& a, const DnaStrand& b, int k,
                           const JaccardConfig& config = {});

// One record per '>' header; without headers every non-blank line is a record.
std::vector<DnaStrand> read_fasta(std::istream& in);

// Strand of equal length with '*' where a and b differ.
std::string common_string(const DnaStrand& a, const DnaStrand& b);

nlohmann::ordered_json jaccard_report_to_json(const JaccardReport& report, const DnaStrand& a,
                                              const DnaStrand& b);

}  // namespace qcamsim
