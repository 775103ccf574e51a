#include <cmath>
#include <random>
#include <sstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "fig6.hpp"
#include "qcamsim/dna.hpp"

namespace qcamsim {
namespace {

TEST(EncodeKmer, Examples) {
  EXPECT_EQ(encode_kmer("TACT").to_string(), "01001101");
  EXPECT_EQ(encode_kmer("GATG").to_string(), "10000110");
  EXPECT_EQ(encode_kmer("A").to_string(), "00");
  EXPECT_EQ(encode_kmer("tact"), encode_kmer("TACT"));
  EXPECT_THROW((void)encode_kmer("TAXT"), std::invalid_argument);
  EXPECT_THROW((void)encode_kmer(""), std::invalid_argument);
}

TEST(EncodeKmer, InjectiveUpToFour) {
  for (int k = 1; k <= 4; ++k) {
    std::set<std::uint64_t> codes;
    const std::uint64_t total = std::uint64_t{1} << (2 * k);
    for (std::uint64_t c = 0; c < total; ++c) {
      const std::string s = decode_kmer(c, k);
      EXPECT_EQ(encode_kmer(s).value(), c);
      codes.insert(encode_kmer(s).value());
    }
    EXPECT_EQ(codes.size(), total);
  }
}

TEST(Kmerize, Examples) {
  EXPECT_EQ(kmer_strings(DnaStrand("ATGATGA"), 4),
            (std::vector<std::string>{"ATGA", "TGAT", "GATG", "ATGA"}));
  EXPECT_EQ(kmer_strings(DnaStrand("TGTCGAAA"), 3),
            (std::vector<std::string>{"TGT", "GTC", "TCG", "CGA", "GAA", "AAA"}));
  EXPECT_EQ(kmer_strings(DnaStrand("GATC"), 4), (std::vector<std::string>{"GATC"}));
  const Sequence s = kmerize(DnaStrand("ATGATGA"), 4);
  EXPECT_EQ(s.depth(), 8);
  EXPECT_EQ(s.values(), (std::vector<std::uint64_t>{0b00011000, 0b01100001, 0b10000110, 0b00011000}));
  EXPECT_THROW((void)kmerize(DnaStrand("ACG"), 4), std::invalid_argument);
}

TEST(Kmerize, TableOneRows) {
  const DnaStrand s("TGTCGAAA");
  EXPECT_EQ(unique_kmers(s, 1).in_order(), (std::vector<std::string>{"T", "G", "C", "A"}));
  EXPECT_EQ(unique_kmers(s, 2).in_order(),
            (std::vector<std::string>{"TG", "GT", "TC", "CG", "GA", "AA"}));
}

TEST(DnaStrand, Validation) {
  EXPECT_EQ(DnaStrand("acgt").bases(), "ACGT");
  EXPECT_THROW((void)DnaStrand(""), std::invalid_argument);
  EXPECT_THROW((void)DnaStrand("ACGU"), std::invalid_argument);
}

TEST(UniqueKmers, Examples) {
  const KmerSet s = unique_kmers(DnaStrand("AAAA"), 2);
  EXPECT_EQ(s.size(), 1U);
  EXPECT_TRUE(s.contains("AA"));
}

TEST(UniqueKmers, MatchesKmerizeValues) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 100; ++trial) {
    const DnaStrand s = generate_dna(5 + rng() % 40, rng());
    const int k = 1 + static_cast<int>(rng() % 4);
    const KmerSet u = unique_kmers(s, k);
    std::set<std::string> from_codes;
    const Sequence codes = kmerize(s, k);
    for (std::uint64_t v : codes.values()) from_codes.insert(decode_kmer(v, k));
    EXPECT_EQ(u.members(), from_codes);
    EXPECT_LE(u.size(), std::min<std::size_t>(s.length() - k + 1, std::size_t{1} << (2 * k)));
  }
}

TEST(Fig6, LiteralStrandsClassical) {
  const KmerSet a = unique_kmers(DnaStrand(testing::kFig6A), 4);
  const KmerSet b = unique_kmers(DnaStrand(testing::kFig6B), 4);
  EXPECT_EQ(DnaStrand(testing::kFig6A).length(), 68U);
  EXPECT_EQ(DnaStrand(testing::kFig6B).length(), 68U);
  // Overlapping 4-mers of the strands as printed.
  EXPECT_EQ(a.size(), 57U);
  EXPECT_EQ(b.size(), 56U);
  EXPECT_EQ(intersection_size(a, b), 37U);
  EXPECT_NEAR(jaccard_classical(a, b), 37.0 / 76.0, 1e-15);
}

TEST(Fig6, FirstSixtySevenBases) {
  // Dropping each strand's final base reproduces the published counts.
  const KmerSet a = unique_kmers(DnaStrand(std::string(testing::kFig6A).substr(0, 67)), 4);
  const KmerSet b = unique_kmers(DnaStrand(std::string(testing::kFig6B).substr(0, 67)), 4);
  EXPECT_EQ(a.size(), 56U);
  EXPECT_EQ(b.size(), 55U);
  EXPECT_EQ(intersection_size(a, b), 36U);
  EXPECT_EQ(jaccard_classical(a, b), 36.0 / 75.0);
}

TEST(GenerateAndMutate, Contracts) {
  const DnaStrand s = generate_dna(1000, 5);
  EXPECT_EQ(s.length(), 1000U);
  EXPECT_EQ(generate_dna(1000, 5), s);
  EXPECT_EQ(mutate(s, 0.0, 3), s);
  const DnaStrand all = mutate(s, 1.0, 3);
  for (std::size_t i = 0; i < s.length(); ++i) EXPECT_NE(all.bases()[i], s.bases()[i]);
  const DnaStrand some = mutate(s, 0.1, 4);
  std::size_t hamming = 0;
  for (std::size_t i = 0; i < s.length(); ++i) hamming += some.bases()[i] != s.bases()[i] ? 1 : 0;
  EXPECT_LT(std::abs(static_cast<double>(hamming) - 100.0), 5 * std::sqrt(1000 * 0.1 * 0.9));
  EXPECT_THROW((void)mutate(s, 1.5, 1), std::invalid_argument);
  EXPECT_THROW((void)generate_dna(0, 1), std::invalid_argument);
}

TEST(GenerateAndMutate, FrozenStrands) {
  EXPECT_EQ(generate_dna(16, 1).bases(), "AGGGATATAAACTCAT");
  EXPECT_EQ(mutate(generate_dna(16, 1), 0.25, 2).bases(), "AGGTCTAAAAGCTCAT");
}

TEST(JaccardClassical, Examples) {
  const KmerSet a = unique_kmers(DnaStrand("ACGTAC"), 2);
  EXPECT_EQ(jaccard_classical(a, a), 1.0);
  const KmerSet x = unique_kmers(DnaStrand("AAAA"), 2);
  const KmerSet y = unique_kmers(DnaStrand("CCCC"), 2);
  EXPECT_EQ(jaccard_classical(x, y), 0.0);
  EXPECT_THROW((void)jaccard_classical(KmerSet(2), KmerSet(2)), std::invalid_argument);
  EXPECT_THROW((void)jaccard_classical(x, unique_kmers(DnaStrand("AAAA"), 3)), std::invalid_argument);
}

TEST(JaccardQcam, IdenticalStrands) {
  const DnaStrand s = generate_dna(12, 3);
  const JaccardReport r = jaccard_qcam(s, s, 2);
  EXPECT_EQ(r.jaccard, 1.0);
  EXPECT_EQ(r.size_intersection, r.size_a);
}

TEST(JaccardQcam, AgreesWithClassicalAndIsSound) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const DnaStrand a = generate_dna(16, seed);
    const DnaStrand b = mutate(a, 0.1, seed + 100);
    JaccardConfig cfg;
    cfg.seed = seed;
    const JaccardReport r = jaccard_qcam(a, b, 2, cfg);
    const KmerSet ka = unique_kmers(a, 2);
    const KmerSet kb = unique_kmers(b, 2);
    EXPECT_EQ(r.jaccard, jaccard_classical(ka, kb)) << "seed " << seed;
    EXPECT_LE(r.size_intersection, std::min(r.size_a, r.size_b));
    for (const std::string& s : r.matched.members()) {
      EXPECT_TRUE(ka.contains(s) && kb.contains(s));
    }
    EXPECT_EQ(r.heqc.search_space, 16U * 16U);
    EXPECT_EQ(r.total_qubits, 4 + 4 + 2 * 5 + 1);
    EXPECT_EQ(r.size_a + r.size_b - r.size_intersection > 0, true);
  }
}

TEST(JaccardQcam, DisjointStrandsTakeZeroEstimatePath) {
  JaccardConfig cfg;
  cfg.variant = HeqcVariant::Exact;
  const JaccardReport r = jaccard_qcam(DnaStrand("AAAAA"), DnaStrand("CCCCC"), 2, cfg);
  EXPECT_TRUE(r.zero_estimate);
  EXPECT_EQ(r.jaccard, 0.0);
  EXPECT_EQ(r.qcam.shots, 0U);
}

TEST(ReadFasta, HeadersAndPlainLines) {
  std::istringstream with(">one\nACGT\nAC\n\n>two desc\nttgg\n");
  const auto a = read_fasta(with);
  ASSERT_EQ(a.size(), 2U);
  EXPECT_EQ(a[0].bases(), "ACGTAC");
  EXPECT_EQ(a[1].bases(), "TTGG");
  std::istringstream plain("ACGT\n  GGCC  \n");
  const auto b = read_fasta(plain);
  ASSERT_EQ(b.size(), 2U);
  EXPECT_EQ(b[1].bases(), "GGCC");
}

TEST(Report, CommonStringAndJson) {
  EXPECT_EQ(common_string(DnaStrand("ACGT"), DnaStrand("AGGA")), "A*G*");
  const DnaStrand a("ACGTACGT");
  const DnaStrand b("ACGTTCGT");
  const JaccardReport r = jaccard_qcam(a, b, 2);
  const nlohmann::ordered_json j = jaccard_report_to_json(r, a, b);
  EXPECT_EQ(j["common"], "ACGT*CGT");
  EXPECT_EQ(j["jaccard"].get<double>(), r.jaccard);
  EXPECT_EQ(j.begin().key(), "sample_a");
}

}  // namespace
}  // namespace qcamsim
