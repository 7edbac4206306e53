#ifndef REPCAP_PMF_HPP
#define REPCAP_PMF_HPP

#include <vector>

#include "repcap/alphabet.hpp"

namespace repcap {

// Probabilities are stored linearly; sequence probabilities elsewhere are
// kept as log2 to avoid underflow at long block lengths.
//
// Normalization policy: |sum - 1| <= 1e-12 accepted as-is, <= 1e-9
// renormalized (tolerates text-file rounding), beyond that rejected.
class Pmf {
 public:
  Pmf(Alphabet alphabet, std::vector<double> probs);

  static Pmf bernoulli(double p1);  // binary alphabet {"0","1"}, P(1) = p1
  static Pmf uniform(Alphabet alphabet);

  const Alphabet& alphabet() const { return alphabet_; }
  std::size_t size() const { return probs_.size(); }
  double prob(std::size_t i) const { return probs_.at(i); }
  const std::vector<double>& probs() const { return probs_; }
  const std::vector<double>& cumulative() const { return cum_; }

 private:
  Alphabet alphabet_;
  std::vector<double> probs_;
  std::vector<double> cum_;
};

class JointPmf {
 public:
  JointPmf(Alphabet row_alphabet, Alphabet col_alphabet,
           std::vector<std::vector<double>> probs);

  const Alphabet& row_alphabet() const { return rows_; }
  const Alphabet& col_alphabet() const { return cols_; }
  double prob(std::size_t r, std::size_t c) const { return probs_[r][c]; }
  const std::vector<std::vector<double>>& probs() const { return probs_; }

  Pmf row_marginal() const;
  Pmf col_marginal() const;
  JointPmf transposed() const;

 private:
  Alphabet rows_, cols_;
  std::vector<std::vector<double>> probs_;
};

// All information measures in bits (log base 2); 0*log2(0) := 0.
double entropy(const Pmf& p);
double kl_divergence(const Pmf& p, const Pmf& q);
double mutual_information(const JointPmf& j);
double joint_entropy(const JointPmf& j);

// Entropy of a raw probability vector (no Pmf validation); test helper
// and building block for the solvers.
double entropy_bits(const std::vector<double>& probs);
double binary_entropy(double p);

}  // namespace repcap

#endif
