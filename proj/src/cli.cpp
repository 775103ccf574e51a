#include "qcamsim/cli.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "qcamsim/circuits.hpp"
#include "qcamsim/dna.hpp"
#include "qcamsim/errors.hpp"
#include "qcamsim/qcam.hpp"

namespace qcamsim::cli {

namespace {

using nlohmann::ordered_json;

std::string fmt_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

// Writes to --out when given, otherwise to `fallback`.
class Output {
 public:
  Output(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw std::ios_base::failure("cannot open output file " + path);
      stream_ = &file_;
    }
  }
  std::ostream& get() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

std::pair<Sequence, Sequence> read_sequences(const std::string& path, int depth) {
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot read " + path);
  std::vector<std::vector<std::uint64_t>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::vector<std::uint64_t> row;
    std::uint64_t v = 0;
    while (ls >> v) row.push_back(v);
    if (!ls.eof()) throw std::invalid_argument("non-integer entry in " + path);
    if (!row.empty()) rows.push_back(std::move(row));
  }
  if (rows.size() != 2) throw std::invalid_argument(path + " must hold exactly two lines of integers");
  return pad_sequences(Sequence(rows[0], depth), Sequence(rows[1], depth));
}

std::pair<Sequence, Sequence> input_sequences(const ExperimentConfig& c) {
  if (!c.input.empty()) return read_sequences(c.input, c.depth);
  const PlantedInstance p = plant_matches(c.n_a, c.n_b, c.depth, c.planted_m.value_or(1), c.seed);
  return {p.a, p.b};
}

std::pair<DnaStrand, DnaStrand> input_strands(const ExperimentConfig& c) {
  if (!c.input.empty()) {
    std::ifstream in(c.input);
    if (!in) throw std::ios_base::failure("cannot read " + c.input);
    auto strands = read_fasta(in);
    if (strands.size() < 2) throw std::invalid_argument(c.input + " must contain two strands");
    return {strands[0], strands[1]};
  }
  const DnaStrand a = generate_dna(c.dna_len, c.seed);
  return {a, mutate(a, c.mutation_rate, c.seed + 1)};
}

int cmd_heqc_sweep(const ExperimentConfig& c, std::ostream& out, std::ostream& err) {
  const auto rows = run_heqc_sweep(c);
  Output o(c.out, out);
  write_sweep_csv(o.get(), rows);
  const auto summary = summarize_sweep(rows);
  if (!c.summary.empty()) {
    Output s(c.summary, err);
    write_summary_csv(s.get(), summary);
  } else {
    write_summary_csv(err, summary);
  }
  return kSuccess;
}

int cmd_qcam(const ExperimentConfig& c, std::ostream& out) {
  const auto [a, b] = input_sequences(c);
  const MatchSet truth = brute_force_matches(a, b);
  ordered_json j;
  std::optional<int> k = c.iterations;
  double m_hat = static_cast<double>(truth.size());
  if (!k) {
    const HeqcEstimate est = heqc_pipeline(a, b, c.heqc_shots, c.seed, c.variant, c.max_qubits);
    j["heqc"] = heqc_to_json(est);
    k = est.k;
    m_hat = est.m_est;
  }
  MatchSet found;
  if (k) {
    const std::uint64_t shots = c.shots.value_or(default_shot_budget(m_hat));
    const QcamResult r = run_qcam(a, b, *k, shots, c.seed + 1, c.max_qubits);
    j["result"] = qcam_result_to_json(r);
    found = collect_matches(r);
  } else {
    j["result"] = nullptr;
  }
  const bool sound = std::includes(truth.begin(), truth.end(), found.begin(), found.end());
  j["brute_force_matches"] = truth.size();
  j["found_matches"] = found.size();
  j["sound"] = sound;
  j["complete"] = found == truth;
  Output o(c.out, out);
  o.get() << j.dump(2) << '\n';
  return sound ? kSuccess : kVerificationMismatch;
}

int cmd_jaccard(const ExperimentConfig& c, std::ostream& out) {
  const auto [a, b] = input_strands(c);
  const KmerSet ka = unique_kmers(a, c.kmer);
  const KmerSet kb = unique_kmers(b, c.kmer);
  std::set<std::string> common;
  for (const std::string& s : ka.members()) {
    if (kb.contains(s)) common.insert(s);
  }
  ordered_json classical;
  classical["size_a"] = ka.size();
  classical["size_b"] = kb.size();
  classical["size_intersection"] = common.size();
  classical["jaccard"] = jaccard_classical(ka, kb);

  ordered_json j;
  int code = kSuccess;
  if (c.classical_only) {
    j["sample_a"] = a.bases();
    j["sample_b"] = b.bases();
    j["common"] = common_string(a, b);
    j["k"] = c.kmer;
    j["matched_kmers"] = common;
    j["classical"] = classical;
  } else {
    JaccardConfig jc;
    jc.variant = c.variant;
    jc.heqc_shots = c.heqc_shots;
    jc.shots = c.shots;
    jc.iterations = c.iterations;
    jc.seed = c.seed;
    jc.max_qubits = c.max_qubits;
    const JaccardReport report = jaccard_qcam(a, b, c.kmer, jc);
    j = jaccard_report_to_json(report, a, b);
    j["classical"] = classical;
    const bool equal = report.matched.members() == common && report.size_a == ka.size() &&
                       report.size_b == kb.size();
    j["equal"] = equal;
    if (!equal) code = kVerificationMismatch;
  }
  Output o(c.out, out);
  o.get() << j.dump(2) << '\n';
  return code;
}

int cmd_export_circuit(const ExperimentConfig& c, std::ostream& out) {
  const std::string& name = c.circuit;
  std::optional<Circuit> circuit;
  if (name == "oracle") {
    circuit = build_matching_oracle(c.depth);
  } else if (name == "diffuser") {
    circuit = build_diffuser(c.n_a, c.n_b);
  } else {
    const auto [a, b] = input_sequences(c);
    if (name == "qbart") {
      circuit = build_qbart(a);
    } else if (name == "grover") {
      circuit = build_grover_oracle(a, b);
    } else if (name == "qcam") {
      circuit = build_qcam_circuit(a, b, c.iterations.value_or(1));
    } else if (name == "heqc-squared") {
      circuit = build_heqc_squared(a, b);
    } else if (name == "heqc-hadamard") {
      circuit = build_heqc_hadamard(a, b);
    } else {
      throw std::invalid_argument("unknown circuit '" + name +
                                  "' (qbart|oracle|diffuser|grover|qcam|heqc-squared|heqc-hadamard)");
    }
  }
  Output o(c.out, out);
  o.get() << circuit_to_json(*circuit).dump(2) << '\n';
  return kSuccess;
}

int cmd_selftest(const ExperimentConfig& c, std::ostream& out) {
  bool all = true;
  auto check = [&](const std::string& name, bool ok) {
    out << (ok ? "ok   " : "FAIL ") << name << '\n';
    all = all && ok;
  };

  {
    const QuantumState s = run(build_qbart(Sequence({0, 1}, 1)));
    const double h = std::sqrt(0.5);
    check("qbart bell state", std::abs(s[0] - h) < 1e-12 && std::abs(s[3] - h) < 1e-12);
  }
  {
    bool ok = true;
    const Circuit om = build_matching_oracle(2);
    for (std::uint64_t x = 0; x < 4; ++x) {
      for (std::uint64_t y = 0; y < 4; ++y) {
        QuantumState s(om.num_qubits());
        s[0] = 0.0;
        s[x | (y << 2)] = 1.0;
        run_on(om, s);
        ok = ok && std::abs(s[x | (y << 2)] - Amplitude(x == y ? -1.0 : 1.0)) < 1e-12;
      }
    }
    check("matching oracle truth table", ok);
  }
  {
    const PlantedInstance p = plant_matches(2, 2, 4, 2, c.seed);
    const HeqcEstimate e = heqc_pipeline(p.a, p.b, 0, c.seed, HeqcVariant::Exact);
    check("exact counting on a planted instance", std::abs(e.m_est - 2.0) < 1e-9);
    const QcamResult r = run_qcam(p.a, p.b, e.k.value_or(0), 500, c.seed);
    const MatchSet found = collect_matches(r);
    check("qcam soundness", std::includes(p.matches.begin(), p.matches.end(), found.begin(), found.end()));
    check("qcam completeness", found == p.matches);
  }
  {
    const DnaStrand a = generate_dna(16, c.seed);
    const DnaStrand b = mutate(a, 0.1, c.seed + 1);
    JaccardConfig jc;
    jc.seed = c.seed;
    const JaccardReport r = jaccard_qcam(a, b, 2, jc);
    check("jaccard quantum == classical",
          std::abs(r.jaccard - jaccard_classical(unique_kmers(a, 2), unique_kmers(b, 2))) < 1e-15);
  }
  return all ? kSuccess : kVerificationMismatch;
}

}  // namespace

std::vector<SweepRow> run_heqc_sweep(const ExperimentConfig& config) {
  ExperimentConfig c = config;
  if (c.large) {
    c.n_a = 5;
    c.n_b = 5;
    c.depth = 8;
  }
  const std::size_t max_m = c.planted_m.value_or(c.large ? 32 : 8);
  const std::uint64_t shots = c.shots.value_or(2000);
  if (c.repeats < 1) throw std::invalid_argument("repeats must be >= 1");
  const double n_total = std::ldexp(1.0, c.n_a + c.n_b);

  std::vector<SweepRow> rows;
  for (std::size_t m = 1; m <= max_m; ++m) {
    const double theta_true = 2.0 * std::asin(std::sqrt(static_cast<double>(m) / n_total));
    for (int trial = 0; trial < c.repeats; ++trial) {
      const std::uint64_t trial_seed = c.seed + static_cast<std::uint64_t>(trial);
      const PlantedInstance p =
          plant_matches(c.n_a, c.n_b, c.depth, m, trial_seed ^ (static_cast<std::uint64_t>(m) << 32));
      const HeqcEstimate e = heqc_pipeline(p.a, p.b, shots, trial_seed, c.variant, c.max_qubits);
      rows.push_back(SweepRow{m, trial, e.theta, theta_true, e.m_est, e.k});
    }
  }
  return rows;
}

std::vector<SweepSummary> summarize_sweep(const std::vector<SweepRow>& rows) {
  std::vector<SweepSummary> out;
  std::size_t i = 0;
  while (i < rows.size()) {
    std::size_t j = i;
    double sum = 0.0;
    while (j < rows.size() && rows[j].m_true == rows[i].m_true) sum += rows[j++].theta_hat;
    const auto n = static_cast<double>(j - i);
    const double mean = sum / n;
    double ss = 0.0;
    for (std::size_t t = i; t < j; ++t) ss += (rows[t].theta_hat - mean) * (rows[t].theta_hat - mean);
    const double sd = n > 1 ? std::sqrt(ss / (n - 1)) : 0.0;
    out.push_back(SweepSummary{rows[i].m_true, rows[i].theta_true, mean, sd, sd / std::sqrt(n)});
    i = j;
  }
  return out;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "M_true,trial,theta_hat,theta_true,m_est,k\n";
  for (const SweepRow& r : rows) {
    out << r.m_true << ',' << r.trial << ',' << fmt_double(r.theta_hat) << ','
        << fmt_double(r.theta_true) << ',' << fmt_double(r.m_est) << ',';
    if (r.k) out << *r.k;
    out << '\n';
  }
}

void write_summary_csv(std::ostream& out, const std::vector<SweepSummary>& summary) {
  out << "M_true,theta_true,theta_mean,theta_std,theta_stderr\n";
  for (const SweepSummary& s : summary) {
    out << s.m_true << ',' << fmt_double(s.theta_true) << ',' << fmt_double(s.mean) << ','
        << fmt_double(s.stddev) << ',' << fmt_double(s.stderr_mean) << '\n';
  }
}

int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  return main(static_cast<int>(argv.size()), argv.data(), out, err);
}

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Grover-based sequence matching, quantum counting and k-mer Jaccard on a statevector simulator"};
  app.set_config("--config", "", "Flat key=value file mirroring the long flags");
  app.require_subcommand(1);

  ExperimentConfig c;
  std::string variant = "hadamard";
  std::uint64_t shots = 0;
  int iterations = -1;
  std::size_t planted = 0;

  app.add_option("--seed", c.seed, "Base RNG seed");
  app.add_option("--shots", shots, "Measurement shots (default: per command)");
  app.add_option("--heqc-shots", c.heqc_shots, "Shots for the counting circuit");
  app.add_option("--repeats", c.repeats, "Trials per planted M (heqc-sweep)")->check(CLI::PositiveNumber);
  app.add_option("--variant", variant, "Counting circuit")
      ->check(CLI::IsMember({"squared", "hadamard", "exact"}));
  app.add_option("--k", c.kmer, "k-mer length (jaccard)")->check(CLI::Range(1, 31));
  app.add_option("--dna-len", c.dna_len, "Length of generated DNA strands")->check(CLI::PositiveNumber);
  app.add_option("--mutation-rate", c.mutation_rate, "Per-base substitution rate")->check(CLI::Range(0.0, 1.0));
  app.add_option("--planted-m", planted, "Planted match count (largest M for heqc-sweep)");
  app.add_option("--max-qubits", c.max_qubits, "Statevector capacity")->check(CLI::Range(1, 40));
  app.add_flag("--large", c.large, "Full-size sweep: two 32-item 8-bit sequences");
  app.add_flag("--classical-only", c.classical_only, "jaccard: skip the quantum pipeline");
  app.add_option("--n-a", c.n_a, "log2 length of sequence a")->check(CLI::Range(0, 20));
  app.add_option("--n-b", c.n_b, "log2 length of sequence b")->check(CLI::Range(0, 20));
  app.add_option("--depth", c.depth, "Bit depth of sequence items")->check(CLI::Range(1, 30));
  app.add_option("--iterations", iterations, "Grover iterations (default: from counting)");
  app.add_option("--circuit", c.circuit, "export-circuit: qbart|oracle|diffuser|grover|qcam|heqc-squared|heqc-hadamard");
  app.add_option("--input", c.input, "Input file: two integer lines (qcam) or FASTA (jaccard)");
  app.add_option("--out", c.out, "Output path (default: stdout)");
  app.add_option("--summary", c.summary, "heqc-sweep: per-M summary CSV path (default: stderr)");

  for (const char* name : {"heqc-sweep", "qcam", "jaccard", "export-circuit", "selftest"}) {
    app.add_subcommand(name)->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  }

  c.command = app.get_subcommands().front()->get_name();
  c.variant = heqc_variant_from_string(variant);
  if (app.count("--shots") > 0) {
    if (shots < 1) {
      err << "error: --shots must be >= 1\n";
      return kConfigError;
    }
    c.shots = shots;
  }
  if (c.heqc_shots < 1) {
    err << "error: --heqc-shots must be >= 1\n";
    return kConfigError;
  }
  if (iterations >= 0) c.iterations = iterations;
  if (app.count("--planted-m") > 0) c.planted_m = planted;

  try {
    if (c.command == "heqc-sweep") return cmd_heqc_sweep(c, out, err);
    if (c.command == "qcam") return cmd_qcam(c, out);
    if (c.command == "jaccard") return cmd_jaccard(c, out);
    if (c.command == "export-circuit") return cmd_export_circuit(c, out);
    return cmd_selftest(c, out);
  } catch (const CapacityError& e) {
    err << "capacity error: " << e.what() << '\n';
    return kCapacityError;
  } catch (const VerificationError& e) {
    err << "verification error: " << e.what() << '\n';
    return kVerificationMismatch;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  }
}

}  // namespace qcamsim::cli
