#include "repcap/pmf.hpp"

#include <cmath>
#include <numeric>

namespace repcap {

namespace {

constexpr double kExactTol = 1e-12;
constexpr double kRenormTol = 1e-9;

void normalize(std::vector<double>& probs, double sum) {
  const double err = std::abs(sum - 1.0);
  if (err <= kExactTol) return;
  if (err <= kRenormTol) {
    for (auto& p : probs) p /= sum;
    return;
  }
  throw InvalidParams("probabilities sum to " + std::to_string(sum) +
                      ", outside the 1e-9 renormalization tolerance");
}

}  // namespace

Pmf::Pmf(Alphabet alphabet, std::vector<double> probs)
    : alphabet_(std::move(alphabet)), probs_(std::move(probs)) {
  if (probs_.size() != alphabet_.size())
    throw InvalidParams("pmf length does not match alphabet size");
  double sum = 0.0;
  for (double p : probs_) {
    if (!(p >= 0.0) || p > 1.0 + kRenormTol)
      throw InvalidParams("pmf entries must lie in [0,1]");
    sum += p;
  }
  normalize(probs_, sum);
  cum_.resize(probs_.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < probs_.size(); ++i) {
    acc += probs_[i];
    cum_[i] = acc;
  }
  cum_.back() = 1.0;
}

Pmf Pmf::bernoulli(double p1) {
  return Pmf(Alphabet({"0", "1"}), {1.0 - p1, p1});
}

Pmf Pmf::uniform(Alphabet alphabet) {
  const std::size_t n = alphabet.size();
  return Pmf(std::move(alphabet), std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

JointPmf::JointPmf(Alphabet row_alphabet, Alphabet col_alphabet,
                   std::vector<std::vector<double>> probs)
    : rows_(std::move(row_alphabet)), cols_(std::move(col_alphabet)), probs_(std::move(probs)) {
  if (probs_.size() != rows_.size())
    throw InvalidParams("joint pmf row count does not match row alphabet");
  double sum = 0.0;
  for (const auto& row : probs_) {
    if (row.size() != cols_.size())
      throw InvalidParams("joint pmf column count does not match column alphabet");
    for (double p : row) {
      if (!(p >= 0.0)) throw InvalidParams("joint pmf entries must be nonnegative");
      sum += p;
    }
  }
  const double err = std::abs(sum - 1.0);
  if (err > kExactTol) {
    if (err > kRenormTol)
      throw InvalidParams("joint pmf sums to " + std::to_string(sum));
    for (auto& row : probs_)
      for (auto& p : row) p /= sum;
  }
}

Pmf JointPmf::row_marginal() const {
  std::vector<double> m(rows_.size(), 0.0);
  for (std::size_t r = 0; r < rows_.size(); ++r)
    m[r] = std::accumulate(probs_[r].begin(), probs_[r].end(), 0.0);
  return Pmf(rows_, std::move(m));
}

Pmf JointPmf::col_marginal() const {
  std::vector<double> m(cols_.size(), 0.0);
  for (const auto& row : probs_)
    for (std::size_t c = 0; c < cols_.size(); ++c) m[c] += row[c];
  return Pmf(cols_, std::move(m));
}

JointPmf JointPmf::transposed() const {
  std::vector<std::vector<double>> t(cols_.size(), std::vector<double>(rows_.size()));
  for (std::size_t r = 0; r < rows_.size(); ++r)
    for (std::size_t c = 0; c < cols_.size(); ++c) t[c][r] = probs_[r][c];
  return JointPmf(cols_, rows_, std::move(t));
}

double entropy_bits(const std::vector<double>& probs) {
  double h = 0.0;
  for (double p : probs)
    if (p > 0.0) h -= p * std::log2(p);
  return h;
}

double binary_entropy(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

double entropy(const Pmf& p) { return entropy_bits(p.probs()); }

double kl_divergence(const Pmf& p, const Pmf& q) {
  if (!(p.alphabet() == q.alphabet()))
    throw InvalidParams("kl_divergence requires a common alphabet");
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double pi = p.prob(i), qi = q.prob(i);
    if (pi == 0.0) continue;  // 0*log(0/q) = 0
    if (qi == 0.0)
      throw AbsoluteContinuityViolated("p has mass where q is zero (symbol " +
                                       p.alphabet().symbol(i) + ")");
    d += pi * std::log2(pi / qi);
  }
  return d;
}

double joint_entropy(const JointPmf& j) {
  double h = 0.0;
  for (const auto& row : j.probs())
    for (double p : row)
      if (p > 0.0) h -= p * std::log2(p);
  return h;
}

double mutual_information(const JointPmf& j) {
  // D(P_XY || P_X P_Y); 0*log(0/0) = 0.
  const Pmf px = j.row_marginal();
  const Pmf py = j.col_marginal();
  double i = 0.0;
  for (std::size_t r = 0; r < px.size(); ++r) {
    for (std::size_t c = 0; c < py.size(); ++c) {
      const double pxy = j.prob(r, c);
      if (pxy <= 0.0) continue;
      i += pxy * std::log2(pxy / (px.prob(r) * py.prob(c)));
    }
  }
  return i;
}

}  // namespace repcap
