#ifndef REPCAP_SIMS_HPP
#define REPCAP_SIMS_HPP

#include <json.hpp>
#include <memory>

#include "repcap/channels.hpp"
#include "repcap/embedding.hpp"
#include "repcap/rate_distortion.hpp"

namespace repcap {

using Json = nlohmann::json;

// Config factories shared with the CLI. Specs are JSON objects:
//   source:     {"kind":"bernoulli","p":..} | {"kind":"iid","probs":[..]}
//               | {"kind":"markov","flip":..} | {"kind":"markov","transition":[[..]]}
//               | {"kind":"csv","path":..,"markov":bool}
//   channel:    {"kind":"bsc","p":..} | {"kind":"identity","size":..}
//               | {"kind":"modular","m":..,"noise":..,"disjoint":bool}
//               | {"kind":"qawgn","snr":..,"levels":..,"amplitude":..,"bins":..}
//               | {"kind":"csv","path":..}
//   distortion: {"kind":"hamming"} | {"kind":"csv","path":..}
std::unique_ptr<Source> make_source(const Json& spec);
DiscreteChannel make_channel(const Json& spec);
DistortionMeasure make_distortion(const Json& spec, const Alphabet& v_alphabet);
TypicalityRule parse_rule(const std::string& name);

// 95% Wilson score half-width for a binomial proportion.
double wilson_half_width(double p_hat, std::size_t n);

// Experiment configs carry {theorem, source, channel?, distortion?, n,
// epsilon, rates[], trials, seed} plus per-theorem fields documented in the
// runners. Reports are canonical-JSON-ready objects; reruns with the same
// config and seed are bit-identical for any worker count.
Json run_theorem3(const Json& config, std::size_t workers = 1);
Json run_theorem4(const Json& config, std::size_t workers = 1);
Json run_theorem5(const Json& config, std::size_t workers = 1);
Json run_theorem6(const Json& config, std::size_t workers = 1);
Json run_theorem7(const Json& config);

// Dispatch on config["theorem"] ("thm3".."thm7").
Json run_experiment(const Json& config, std::size_t workers = 1);

double theorem7_bound(double delta, double sigma, double k_c, double k_g);

// Lagrange slope whose BA fixed point achieves the target distortion.
double slope_for_distortion(const Pmf& source, const DistortionMeasure& measure,
                            double target_distortion);

}  // namespace repcap

#endif
