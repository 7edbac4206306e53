#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "repcap/collapse.hpp"
#include "repcap/io.hpp"
#include "repcap/sims.hpp"

namespace py = pybind11;
using namespace repcap;

namespace {

Pmf pmf_from_probs(const std::vector<double>& probs) {
  return Pmf(Alphabet::indexed(probs.size()), probs);
}

JointPmf joint_from_matrix(const std::vector<std::vector<double>>& m) {
  if (m.empty()) throw InvalidParams("empty joint matrix");
  return JointPmf(Alphabet::indexed(m.size()), Alphabet::indexed(m.front().size()), m);
}

DiscreteChannel channel_from_matrix(const std::vector<std::vector<double>>& t) {
  if (t.empty()) throw InvalidParams("empty channel matrix");
  return DiscreteChannel(Alphabet::indexed(t.size()), Alphabet::indexed(t.front().size()), t);
}

py::dict capacity_dict(const CapacityResult& r) {
  py::dict d;
  d["capacity_bits"] = r.capacity_bits;
  d["optimal_input"] = r.optimal_input.probs();
  d["iterations"] = r.iterations;
  d["residual"] = r.residual;
  d["achieved_cost"] = r.achieved_cost;
  return d;
}

}  // namespace

PYBIND11_MODULE(_repcap, m) {
  m.doc() = "Finite-alphabet information measures, Blahut-Arimoto solvers and "
            "typicality experiments";

  m.def("entropy", [](const std::vector<double>& p) { return entropy(pmf_from_probs(p)); },
        py::arg("pmf"), "Shannon entropy in bits");
  m.def("binary_entropy", &binary_entropy, py::arg("p"));
  m.def(
      "kl_divergence",
      [](const std::vector<double>& p, const std::vector<double>& q) {
        return kl_divergence(pmf_from_probs(p), pmf_from_probs(q));
      },
      py::arg("p"), py::arg("q"), "KL divergence in bits");
  m.def(
      "mutual_information",
      [](const std::vector<std::vector<double>>& joint) {
        return mutual_information(joint_from_matrix(joint));
      },
      py::arg("joint"), "Mutual information of a joint pmf matrix, in bits");

  m.def(
      "entropy_rate_markov",
      [](const std::vector<std::vector<double>>& t) {
        return MarkovSource(Alphabet::indexed(t.size()), t).entropy_rate();
      },
      py::arg("transition"), "Entropy rate of a stationary ergodic Markov chain");

  m.def(
      "capacity",
      [](const std::vector<std::vector<double>>& t, double tol) {
        return capacity_dict(blahut_arimoto_capacity(channel_from_matrix(t), tol));
      },
      py::arg("transition"), py::arg("tol") = 1e-9,
      "Blahut-Arimoto channel capacity for a row-stochastic matrix");

  m.def(
      "rate_distortion_point",
      [](const std::vector<double>& source, const std::vector<std::vector<double>>& d,
         double slope) {
        const Pmf p = pmf_from_probs(source);
        DistortionMeasure meas(p.alphabet(), Alphabet::indexed(d.front().size()), d);
        const RdPoint pt = blahut_arimoto_rd(p, meas, slope);
        py::dict out;
        out["distortion"] = pt.distortion;
        out["rate"] = pt.rate;
        out["slope"] = pt.slope;
        out["test_channel"] = pt.test_channel;
        return out;
      },
      py::arg("source"), py::arg("distortion"), py::arg("slope"));

  m.def(
      "rd_curve",
      [](const std::vector<double>& source, std::size_t points) {
        const Pmf p = pmf_from_probs(source);
        const auto curve = rd_curve(p, DistortionMeasure::hamming(p.alphabet()), points);
        py::list out;
        for (const auto& pt : curve) {
          py::dict d;
          d["distortion"] = pt.distortion;
          d["rate"] = pt.rate;
          out.append(d);
        }
        return out;
      },
      py::arg("source"), py::arg("points") = 17, "Hamming rate-distortion curve");

  m.def(
      "representation_rate",
      [](std::size_t q, std::size_t bits, std::size_t n) {
        return representation_rate(EmbeddingSpace(q, bits), n);
      },
      py::arg("q"), py::arg("bits"), py::arg("n"), "Embedding bits per input symbol");

  m.def(
      "effective_support",
      [](const std::vector<std::vector<double>>& embeddings) {
        const SupportAudit a = effective_support_audit(embeddings);
        py::dict d;
        d["distinct_nonzero_count"] = a.distinct_nonzero_count;
        d["q_tilde"] = a.q_tilde;
        return d;
      },
      py::arg("embeddings"));

  m.def(
      "etf_residuals",
      [](const std::vector<std::vector<double>>& means) {
        const EtfResiduals r = etf_residuals(means);
        py::dict d;
        d["mean_sum_norm"] = r.mean_sum_norm;
        d["norm_spread"] = r.norm_spread;
        d["gram_deviation"] = r.gram_deviation;
        return d;
      },
      py::arg("means"), "Simplex-ETF residuals of globally centered class means");

  m.def("theorem7_bound", &theorem7_bound, py::arg("delta"), py::arg("sigma"),
        py::arg("k_c"), py::arg("k_g"));

  m.def(
      "run_experiment",
      [](const std::string& config_json, std::size_t workers) {
        const Json rep = run_experiment(Json::parse(config_json), workers);
        return canonical_json(rep);
      },
      py::arg("config_json"), py::arg("workers") = 1,
      "Run a theorem experiment from a JSON config string; returns canonical "
      "JSON");

  m.attr("__version__") = REPCAP_VERSION;

  py::register_exception<Error>(m, "RepcapError");
}
