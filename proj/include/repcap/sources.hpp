#ifndef REPCAP_SOURCES_HPP
#define REPCAP_SOURCES_HPP

#include <memory>
#include <optional>

#include "repcap/pmf.hpp"
#include "repcap/rng.hpp"

namespace repcap {

struct SequenceSample {
  Symbols symbols;
  double log2_prob = 0.0;  // exact source log-probability; -inf for impossible
};

// Stationary ergodic source over a finite alphabet. Implementations expose
// per-step log costs so enumeration and sampling accumulate identically
// (left to right, in sequence order).
class Source {
 public:
  virtual ~Source() = default;
  virtual const Alphabet& alphabet() const = 0;
  virtual double entropy_rate() const = 0;  // bits per symbol
  virtual double initial_log2(std::uint32_t symbol) const = 0;
  virtual double step_log2(std::uint32_t prev, std::uint32_t symbol) const = 0;
  virtual std::uint32_t draw_initial(Rng& rng) const = 0;
  virtual std::uint32_t draw_step(std::uint32_t prev, Rng& rng) const = 0;

  SequenceSample sample(std::size_t n, Rng& rng) const;
  SequenceSample sample(std::size_t n, std::uint64_t seed) const;
  double sequence_log2_prob(const Symbols& symbols) const;
};

class IidSource : public Source {
 public:
  explicit IidSource(Pmf pmf);
  const Pmf& pmf() const { return pmf_; }

  const Alphabet& alphabet() const override { return pmf_.alphabet(); }
  double entropy_rate() const override { return entropy_; }
  double initial_log2(std::uint32_t s) const override { return log2_[s]; }
  double step_log2(std::uint32_t, std::uint32_t s) const override { return log2_[s]; }
  std::uint32_t draw_initial(Rng& rng) const override;
  std::uint32_t draw_step(std::uint32_t, Rng& rng) const override;

 private:
  Pmf pmf_;
  std::vector<double> log2_;
  double entropy_;
};

// First-order stationary Markov chain, started from the stationary law.
// Construction verifies irreducibility and aperiodicity and solves for the
// stationary distribution by power iteration (residual <= 1e-12).
class MarkovSource : public Source {
 public:
  MarkovSource(Alphabet alphabet, std::vector<std::vector<double>> transition);

  // Binary chain that flips state with probability `flip` each step.
  static MarkovSource symmetric_binary(double flip);

  const std::vector<std::vector<double>>& transition() const { return transition_; }
  const Pmf& stationary() const { return *stationary_; }

  const Alphabet& alphabet() const override { return alphabet_; }
  double entropy_rate() const override { return entropy_rate_; }
  double initial_log2(std::uint32_t s) const override { return stat_log2_[s]; }
  double step_log2(std::uint32_t prev, std::uint32_t s) const override {
    return trans_log2_[prev][s];
  }
  std::uint32_t draw_initial(Rng& rng) const override;
  std::uint32_t draw_step(std::uint32_t prev, Rng& rng) const override;

 private:
  Alphabet alphabet_;
  std::vector<std::vector<double>> transition_;
  std::optional<Pmf> stationary_;
  std::vector<double> stat_log2_;
  std::vector<std::vector<double>> trans_log2_;
  std::vector<std::vector<double>> trans_cum_;
  double entropy_rate_ = 0.0;
};

struct EmpiricalEntropyRate {
  double mean = 0.0;
  double std_dev = 0.0;  // population std over trials
  std::size_t trials = 0;
};

// Monte Carlo estimate of -(1/n) log2 P(sample); per-trial streams are
// derived from (seed, trial index) so serial and parallel runs agree.
EmpiricalEntropyRate empirical_entropy_rate(const Source& source, std::size_t n,
                                            std::size_t trials, std::uint64_t seed);

}  // namespace repcap

#endif
