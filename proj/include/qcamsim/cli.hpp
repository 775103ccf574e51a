#pragma once

// Experiment driver behind the qcamsim command-line tool.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qcamsim/heqc.hpp"
#include "qcamsim/statevec.hpp"

namespace qcamsim::cli {

enum ExitCode : int {
  kSuccess = 0,
  kConfigError = 1,
  kCapacityError = 2,
  kVerificationMismatch = 3,
};

struct ExperimentConfig {
  std::string command;
  std::uint64_t seed = 1;
  std::optional<std::uint64_t> shots;
  std::uint64_t heqc_shots = 2000;
  int repeats = 21;
  HeqcVariant variant = HeqcVariant::Hadamard;
  int kmer = 2;
  std::size_t dna_len = 16;
  double mutation_rate = 0.1;
  std::optional<std::size_t> planted_m;
  int max_qubits = kDefaultMaxQubits;
  bool large = false;
  bool classical_only = false;
  int n_a = 4;
  int n_b = 4;
  int depth = 4;
  std::optional<int> iterations;
  std::string circuit = "qcam";
  std::string input;
  std::string out;
  std::string summary;
};

struct SweepRow {
  std::size_t m_true = 0;
  int trial = 0;
  double theta_hat = 0.0;
  double theta_true = 0.0;
  double m_est = 0.0;
  std::optional<int> k;
};

struct SweepSummary {
  std::size_t m_true = 0;
  double theta_true = 0.0;
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation over trials
  double stderr_mean = 0.0;
};

// Plants M = 1..max_m matches in two sequences of 2^n_a and 2^n_b items and
// runs HEQC `repeats` times per M. Trial t uses seed + t.
std::vector<SweepRow> run_heqc_sweep(const ExperimentConfig& config);
std::vector<SweepSummary> summarize_sweep(const std::vector<SweepRow>& rows);

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);
void write_summary_csv(std::ostream& out, const std::vector<SweepSummary>& summary);

// Parses argv and runs one subcommand: heqc-sweep, qcam, jaccard,
// export-circuit or selftest. Returns an ExitCode.
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qcamsim::cli
