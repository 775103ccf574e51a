#include "qcamsim/dna.hpp"

#include <algorithm>
#include <cctype>
#include <istream>
#include <random>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace qcamsim {

namespace {

constexpr char kBases[4] = {'A', 'T', 'G', 'C'};

int base_code(char c) {
  switch (c) {
    case 'A': return 0;
    case 'T': return 1;
    case 'G': return 2;
    case 'C': return 3;
    default: throw std::invalid_argument(std::string("not a nucleotide: '") + c + "'");
  }
}

void check_k(const DnaStrand& strand, int k) {
  if (k < 1 || k > 31) throw std::invalid_argument("k must be in [1, 31]");
  if (strand.length() < static_cast<std::size_t>(k)) {
    throw std::invalid_argument("strand of length " + std::to_string(strand.length()) +
                                " is shorter than k = " + std::to_string(k));
  }
}

}  // namespace

DnaStrand::DnaStrand(std::string bases) : bases_(std::move(bases)) {
  if (bases_.empty()) throw std::invalid_argument("empty DNA strand");
  for (char& c : bases_) {
    c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    (void)base_code(c);
  }
}

BitString encode_kmer(std::string_view kmer) {
  if (kmer.empty() || kmer.size() > 31) throw std::invalid_argument("k-mer length must be in [1, 31]");
  std::uint64_t v = 0;
  for (char c : kmer) {
    v = (v << 2) | static_cast<std::uint64_t>(base_code(static_cast<char>(std::toupper(static_cast<unsigned char>(c)))));
  }
  return BitString(v, static_cast<int>(2 * kmer.size()));
}

std::string decode_kmer(std::uint64_t code, int k) {
  std::string s(static_cast<std::size_t>(k), 'A');
  for (int i = k - 1; i >= 0; --i) {
    s[static_cast<std::size_t>(i)] = kBases[code & 3U];
    code >>= 2;
  }
  return s;
}

std::vector<std::string> kmer_strings(const DnaStrand& strand, int k) {
  check_k(strand, k);
  const auto ku = static_cast<std::size_t>(k);
  std::vector<std::string> out;
  out.reserve(strand.length() - ku + 1);
  for (std::size_t i = 0; i + ku <= strand.length(); ++i) out.push_back(strand.bases().substr(i, ku));
  return out;
}

Sequence kmerize(const DnaStrand& strand, int k) {
  std::vector<std::uint64_t> codes;
  for (const std::string& s : kmer_strings(strand, k)) codes.push_back(encode_kmer(s).value());
  return Sequence(std::move(codes), 2 * k);
}

bool KmerSet::insert(const std::string& kmer) {
  if (static_cast<int>(kmer.size()) != k_) throw std::invalid_argument("k-mer has the wrong length");
  if (!members_.insert(kmer).second) return false;
  order_.push_back(kmer);
  return true;
}

KmerSet unique_kmers(const DnaStrand& strand, int k) {
  KmerSet out(k);
  for (const std::string& s : kmer_strings(strand, k)) out.insert(s);
  return out;
}

DnaStrand generate_dna(std::size_t length, std::uint64_t seed) {
  if (length < 1) throw std::invalid_argument("DNA length must be >= 1");
  std::mt19937_64 rng(seed);
  std::string s(length, 'A');
  for (char& c : s) c = kBases[rng() % 4];
  return DnaStrand(std::move(s));
}

DnaStrand mutate(const DnaStrand& strand, double rate, std::uint64_t seed) {
  if (!(rate >= 0.0 && rate <= 1.0)) throw std::invalid_argument("mutation rate must be in [0, 1]");
  std::mt19937_64 rng(seed);
  std::string s = strand.bases();
  for (char& c : s) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    const std::uint64_t shift = 1 + rng() % 3;
    if (u < rate) c = kBases[(static_cast<std::uint64_t>(base_code(c)) + shift) % 4];
  }
  return DnaStrand(std::move(s));
}

std::size_t intersection_size(const KmerSet& a, const KmerSet& b) {
  std::size_t n = 0;
  for (const std::string& s : a.members()) n += b.contains(s) ? 1 : 0;
  return n;
}

double jaccard_classical(const KmerSet& a, const KmerSet& b) {
  if (a.k() != b.k()) throw std::invalid_argument("k-mer sets use different k");
  if (a.size() == 0 && b.size() == 0) throw std::invalid_argument("Jaccard index of two empty sets");
  const std::size_t common = intersection_size(a, b);
  return static_cast<double>(common) / static_cast<double>(a.size() + b.size() - common);
}

JaccardReport jaccard_qcam(const DnaStrand& a, const DnaStrand& b, int k, const JaccardConfig& config) {
  const Sequence raw_a = kmerize(a, k);
  const Sequence raw_b = kmerize(b, k);
  const auto [seq_a, seq_b] = pad_sequences(raw_a, raw_b);

  JaccardReport report;
  report.address_a = seq_a.address_width();
  report.address_b = seq_b.address_width();
  report.depth = seq_a.depth();
  report.total_qubits = RegisterLayout{report.address_a, report.address_b, report.depth}.total_qubits();
  report.size_a = unique_kmers(a, k).size();
  report.size_b = unique_kmers(b, k).size();

  report.heqc = heqc_pipeline(seq_a, seq_b, config.heqc_shots, config.seed, config.variant,
                              config.max_qubits);
  int iterations = 0;
  if (config.iterations) {
    iterations = *config.iterations;
  } else if (report.heqc.k) {
    iterations = *report.heqc.k;
  } else {
    report.zero_estimate = true;
  }

  report.matched = KmerSet(k);
  if (!report.zero_estimate) {
    const std::uint64_t shots = config.shots.value_or(default_shot_budget(report.heqc.m_est));
    report.qcam = run_qcam(seq_a, seq_b, iterations, shots, config.seed + 1, config.max_qubits);
    for (const MatchRecord& r : report.qcam.records) {
      // Pads never verify, so every record is a real k-mer code below 4^k.
      report.matched.insert(decode_kmer(r.data_a.value(), k));
    }
  }
  report.size_intersection = report.matched.size();
  const std::size_t uni = report.size_a + report.size_b - report.size_intersection;
  report.jaccard = static_cast<double>(report.size_intersection) / static_cast<double>(uni);
  return report;
}

std::vector<DnaStrand> read_fasta(std::istream& in) {
  std::vector<std::string> records;
  bool headers = false;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) line.pop_back();
    std::size_t start = 0;
    while (start < line.size() && std::isspace(static_cast<unsigned char>(line[start]))) ++start;
    line.erase(0, start);
    if (!line.empty() && line.front() == '>') {
      headers = true;
      records.emplace_back();
      continue;
    }
    if (line.empty()) continue;
    if (headers) {
      records.back() += line;
    } else {
      records.push_back(line);
    }
  }
  std::vector<DnaStrand> out;
  for (std::string& r : records) {
    if (!r.empty()) out.emplace_back(std::move(r));
  }
  return out;
}

std::string common_string(const DnaStrand& a, const DnaStrand& b) {
  const std::size_t n = std::min(a.length(), b.length());
  std::string s(n, '*');
  for (std::size_t i = 0; i < n; ++i) {
    if (a.bases()[i] == b.bases()[i]) s[i] = a.bases()[i];
  }
  return s;
}

nlohmann::ordered_json jaccard_report_to_json(const JaccardReport& report, const DnaStrand& a,
                                              const DnaStrand& b) {
  nlohmann::ordered_json j;
  j["sample_a"] = a.bases();
  j["sample_b"] = b.bases();
  j["common"] = common_string(a, b);
  j["k"] = report.matched.k();
  j["matched_kmers"] = report.matched.members();
  j["size_a"] = report.size_a;
  j["size_b"] = report.size_b;
  j["size_intersection"] = report.size_intersection;
  j["jaccard"] = report.jaccard;
  j["zero_estimate"] = report.zero_estimate;
  j["total_qubits"] = report.total_qubits;
  j["heqc"] = heqc_to_json(report.heqc);
  nlohmann::ordered_json q;
  q["k"] = report.qcam.iterations;
  q["shots"] = report.qcam.shots;
  q["seed"] = report.qcam.seed;
  q["verified_shots"] = report.qcam.verified_shots();
  q["rejected"] = report.qcam.rejected;
  q["distinct_pairs"] = collect_matches(report.qcam).size();
  j["qcam"] = std::move(q);
  return j;
}

}  // namespace qcamsim
