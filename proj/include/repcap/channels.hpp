#ifndef REPCAP_CHANNELS_HPP
#define REPCAP_CHANNELS_HPP

#include "repcap/pmf.hpp"
#include "repcap/rng.hpp"

namespace repcap {

// Discrete memoryless channel P(y|x); rows are indexed by input symbols.
class DiscreteChannel {
 public:
  DiscreteChannel(Alphabet input_alphabet, Alphabet output_alphabet,
                  std::vector<std::vector<double>> transition);

  const Alphabet& input_alphabet() const { return in_; }
  const Alphabet& output_alphabet() const { return out_; }
  const std::vector<std::vector<double>>& transition() const { return t_; }
  double prob(std::size_t x, std::size_t y) const { return t_[x][y]; }

  Symbols transmit(const Symbols& x, Rng& rng) const;
  Symbols transmit(const Symbols& x, std::uint64_t seed) const;

  JointPmf induced_joint(const Pmf& input) const;

 private:
  Alphabet in_, out_;
  std::vector<std::vector<double>> t_;
  std::vector<std::vector<double>> cum_;
};

double channel_mutual_information(const Pmf& input, const DiscreteChannel& channel);

struct CapacityResult {
  double capacity_bits = 0.0;       // lower bound of the final bracket
  Pmf optimal_input;                // achieving input distribution
  std::size_t iterations = 0;
  double residual = 0.0;            // upper - lower bracket gap at termination
  double achieved_cost = 0.0;       // only meaningful for cost-constrained solves
  double multiplier = 0.0;
};

// Alternating maximization with the standard per-iteration bracket
// C_low = I(r) <= C <= max_x D(P(.|x) || q_r); terminates when the gap <= tol.
CapacityResult blahut_arimoto_capacity(const DiscreteChannel& channel, double tol = 1e-9,
                                       std::size_t max_iter = 100000);

// Cost-constrained capacity C(S) = max { I(r) : E s(x,y) <= budget } realized
// as a Lagrange-penalized BA with a scalar multiplier sweep. A zero cost
// matrix leaves the constraint inactive.
CapacityResult blahut_arimoto_capacity_cost(const DiscreteChannel& channel,
                                            const std::vector<std::vector<double>>& cost,
                                            double budget, double tol = 1e-9,
                                            std::size_t max_iter = 100000);

// Built-in channels from the worked examples.
//
// Modular-additive: y = x + e (mod |Y|) with e uniform over P values. With
// disjoint_cosets the inputs are embedded at stride P in Z_{M*P}, so each
// input owns its own block of P outputs and I(X;Y) = log2 M at uniform input.
DiscreteChannel make_modular_additive_channel(std::size_t m, std::size_t p,
                                              bool disjoint_cosets = false);

// Quantized AWGN: x on a 2^k-level uniform grid over [-amplitude, amplitude],
// y = snr*x + e with unit-variance Gaussian e, y quantized into output_bins
// over [-snr*amplitude - tail, snr*amplitude + tail]; rows renormalized after
// the +-tail truncation (mass error < 1e-8 at tail = 6).
DiscreteChannel make_quantized_awgn_channel(double snr, std::size_t levels,
                                            double amplitude = 1.0,
                                            std::size_t output_bins = 801,
                                            double tail = 6.0);

DiscreteChannel make_binary_symmetric_channel(double crossover);
DiscreteChannel make_identity_channel(std::size_t size);

// Input grid of the quantized-AWGN construction (for oracles/reports).
std::vector<double> quantized_awgn_input_grid(std::size_t levels, double amplitude = 1.0);

}  // namespace repcap

#endif
