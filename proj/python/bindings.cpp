#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qcamsim/cli.hpp"
#include "qcamsim/dna.hpp"
#include "qcamsim/errors.hpp"
#include "qcamsim/heqc.hpp"
#include "qcamsim/qcam.hpp"

namespace py = pybind11;
using namespace qcamsim;

namespace {

// Results cross the boundary as JSON text; the package decodes them.
std::string dump(const nlohmann::ordered_json& j) { return j.dump(); }

std::vector<std::pair<std::size_t, std::size_t>> to_list(const MatchSet& m) {
  return {m.begin(), m.end()};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Statevector simulation of quantum content-addressable memory";

  py::register_exception<CapacityError>(m, "CapacityError", PyExc_MemoryError);
  py::register_exception<VerificationError>(m, "VerificationError", PyExc_RuntimeError);

  m.def("brute_force_matches",
        [](const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b, int depth) {
          return to_list(brute_force_matches(Sequence(a, depth), Sequence(b, depth)));
        },
        py::arg("a"), py::arg("b"), py::arg("depth"));

  m.def("plant_matches",
        [](int n_a, int n_b, int depth, std::size_t matches, std::uint64_t seed) {
          const PlantedInstance p = plant_matches(n_a, n_b, depth, matches, seed);
          return py::make_tuple(p.a.values(), p.b.values(), to_list(p.matches));
        },
        py::arg("n_a"), py::arg("n_b"), py::arg("depth"), py::arg("matches"), py::arg("seed"));

  m.def("run_qcam",
        [](const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b, int depth,
           int iterations, std::uint64_t shots, std::uint64_t seed) {
          return dump(qcam_result_to_json(
              run_qcam(Sequence(a, depth), Sequence(b, depth), iterations, shots, seed)));
        },
        py::arg("a"), py::arg("b"), py::arg("depth"), py::arg("iterations"), py::arg("shots"),
        py::arg("seed"));

  m.def("heqc",
        [](const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b, int depth,
           std::uint64_t shots, std::uint64_t seed, const std::string& variant) {
          return dump(heqc_to_json(heqc_pipeline(Sequence(a, depth), Sequence(b, depth), shots,
                                                 seed, heqc_variant_from_string(variant))));
        },
        py::arg("a"), py::arg("b"), py::arg("depth"), py::arg("shots"), py::arg("seed"),
        py::arg("variant"));

  m.def("theta_from_overlap",
        [](double value, const std::string& variant) {
          return theta_from_overlap(value, heqc_variant_from_string(variant)).theta;
        },
        py::arg("value"), py::arg("variant"));
  m.def("solutions_from_theta", &solutions_from_theta, py::arg("theta"), py::arg("search_space"));
  m.def("iterations_from_theta", &iterations_from_theta, py::arg("theta"));

  m.def("encode_kmer", [](const std::string& k) { return encode_kmer(k).to_string(); },
        py::arg("kmer"));
  m.def("generate_dna", [](std::size_t n, std::uint64_t seed) { return generate_dna(n, seed).bases(); },
        py::arg("length"), py::arg("seed"));
  m.def("mutate",
        [](const std::string& s, double rate, std::uint64_t seed) {
          return mutate(DnaStrand(s), rate, seed).bases();
        },
        py::arg("strand"), py::arg("rate"), py::arg("seed"));
  m.def("jaccard_classical",
        [](const std::string& a, const std::string& b, int k) {
          return jaccard_classical(unique_kmers(DnaStrand(a), k), unique_kmers(DnaStrand(b), k));
        },
        py::arg("a"), py::arg("b"), py::arg("k"));
  m.def("jaccard_qcam",
        [](const std::string& a, const std::string& b, int k, std::uint64_t seed,
           const std::string& variant) {
          JaccardConfig cfg;
          cfg.seed = seed;
          cfg.variant = heqc_variant_from_string(variant);
          const DnaStrand sa(a);
          const DnaStrand sb(b);
          return dump(jaccard_report_to_json(jaccard_qcam(sa, sb, k, cfg), sa, sb));
        },
        py::arg("a"), py::arg("b"), py::arg("k"), py::arg("seed") = 1,
        py::arg("variant") = "hadamard");

  m.def("cli",
        [](const std::vector<std::string>& args) {
          std::ostringstream out;
          std::ostringstream err;
          int code = 0;
          {
            py::gil_scoped_release release;
            code = cli::main(args, out, err);
          }
          return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"));
}
