#include "repcap/sources.hpp"

#include <cmath>
#include <limits>
#include <numeric>

namespace repcap {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double safe_log2(double p) { return p > 0.0 ? std::log2(p) : kNegInf; }

// gcd of (d[u] + 1 - d[v]) over edges of a strongly connected graph equals
// the chain period.
std::size_t graph_period(const std::vector<std::vector<double>>& t) {
  const std::size_t n = t.size();
  std::vector<long long> depth(n, -1);
  std::vector<std::size_t> queue{0};
  depth[0] = 0;
  long long g = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const std::size_t u = queue[head];
    for (std::size_t v = 0; v < n; ++v) {
      if (t[u][v] <= 0.0) continue;
      if (depth[v] < 0) {
        depth[v] = depth[u] + 1;
        queue.push_back(v);
      } else {
        g = std::gcd(g, std::abs(depth[u] + 1 - depth[v]));
      }
    }
  }
  return g == 0 ? 0 : static_cast<std::size_t>(g);
}

bool strongly_connected(const std::vector<std::vector<double>>& t) {
  const std::size_t n = t.size();
  auto reachable = [&](bool transpose) {
    std::vector<char> seen(n, 0);
    std::vector<std::size_t> stack{0};
    seen[0] = 1;
    while (!stack.empty()) {
      const std::size_t u = stack.back();
      stack.pop_back();
      for (std::size_t v = 0; v < n; ++v) {
        const double w = transpose ? t[v][u] : t[u][v];
        if (w > 0.0 && !seen[v]) {
          seen[v] = 1;
          stack.push_back(v);
        }
      }
    }
    for (char s : seen)
      if (!s) return false;
    return true;
  };
  return reachable(false) && reachable(true);
}

}  // namespace

SequenceSample Source::sample(std::size_t n, Rng& rng) const {
  if (n < 1) throw InvalidParams("sequence length must be >= 1");
  SequenceSample out;
  out.symbols.reserve(n);
  std::uint32_t s = draw_initial(rng);
  out.symbols.push_back(s);
  out.log2_prob = initial_log2(s);
  for (std::size_t t = 1; t < n; ++t) {
    const std::uint32_t next = draw_step(s, rng);
    out.log2_prob += step_log2(s, next);
    out.symbols.push_back(next);
    s = next;
  }
  return out;
}

SequenceSample Source::sample(std::size_t n, std::uint64_t seed) const {
  Rng rng(seed);
  return sample(n, rng);
}

double Source::sequence_log2_prob(const Symbols& symbols) const {
  if (symbols.empty()) throw InvalidParams("empty sequence");
  double lp = initial_log2(symbols[0]);
  for (std::size_t t = 1; t < symbols.size(); ++t)
    lp += step_log2(symbols[t - 1], symbols[t]);
  return lp;
}

IidSource::IidSource(Pmf pmf) : pmf_(std::move(pmf)) {
  log2_.reserve(pmf_.size());
  for (double p : pmf_.probs()) log2_.push_back(safe_log2(p));
  entropy_ = entropy(pmf_);
}

std::uint32_t IidSource::draw_initial(Rng& rng) const {
  return static_cast<std::uint32_t>(sample_cumulative(pmf_.cumulative(), rng));
}

std::uint32_t IidSource::draw_step(std::uint32_t, Rng& rng) const {
  return draw_initial(rng);
}

MarkovSource::MarkovSource(Alphabet alphabet, std::vector<std::vector<double>> transition)
    : alphabet_(std::move(alphabet)), transition_(std::move(transition)) {
  const std::size_t n = alphabet_.size();
  if (transition_.size() != n)
    throw InvalidParams("transition matrix row count does not match alphabet");
  for (auto& row : transition_) {
    if (row.size() != n) throw InvalidParams("transition matrix must be square");
    double sum = 0.0;
    for (double p : row) {
      if (!(p >= 0.0)) throw InvalidParams("transition probabilities must be nonnegative");
      sum += p;
    }
    const double err = std::abs(sum - 1.0);
    if (err > 1e-12) {
      if (err > 1e-9) throw InvalidParams("transition row sums to " + std::to_string(sum));
      for (auto& p : row) p /= sum;
    }
  }

  if (!strongly_connected(transition_))
    throw InvalidParams("markov chain is not irreducible; an ergodic source is required");
  if (graph_period(transition_) != 1)
    throw InvalidParams("markov chain is periodic; an ergodic source is required");

  // stationary law by power iteration
  std::vector<double> pi(n, 1.0 / static_cast<double>(n)), next(n);
  bool converged = false;
  for (std::size_t it = 0; it < 100000; ++it) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) next[j] += pi[i] * transition_[i][j];
    double resid = 0.0;
    for (std::size_t j = 0; j < n; ++j) resid += std::abs(next[j] - pi[j]);
    pi.swap(next);
    if (resid <= 1e-12) {
      converged = true;
      break;
    }
  }
  if (!converged) throw NotConverged("stationary distribution did not converge in 1e5 iterations");
  const double mass = std::accumulate(pi.begin(), pi.end(), 0.0);
  for (auto& p : pi) p /= mass;
  stationary_.emplace(alphabet_, pi);

  stat_log2_.reserve(n);
  for (double p : stationary_->probs()) stat_log2_.push_back(safe_log2(p));
  trans_log2_.resize(n);
  trans_cum_.resize(n);
  entropy_rate_ = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    trans_log2_[i].reserve(n);
    trans_cum_[i].resize(n);
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      trans_log2_[i].push_back(safe_log2(transition_[i][j]));
      acc += transition_[i][j];
      trans_cum_[i][j] = acc;
      if (transition_[i][j] > 0.0)
        entropy_rate_ -= stationary_->prob(i) * transition_[i][j] * std::log2(transition_[i][j]);
    }
    trans_cum_[i].back() = 1.0;
  }
}

MarkovSource MarkovSource::symmetric_binary(double flip) {
  if (!(flip > 0.0) || !(flip < 1.0))
    throw InvalidParams("flip probability must lie in (0,1)");
  return MarkovSource(Alphabet({"0", "1"}),
                      {{1.0 - flip, flip}, {flip, 1.0 - flip}});
}

std::uint32_t MarkovSource::draw_initial(Rng& rng) const {
  return static_cast<std::uint32_t>(sample_cumulative(stationary_->cumulative(), rng));
}

std::uint32_t MarkovSource::draw_step(std::uint32_t prev, Rng& rng) const {
  return static_cast<std::uint32_t>(sample_cumulative(trans_cum_[prev], rng));
}

EmpiricalEntropyRate empirical_entropy_rate(const Source& source, std::size_t n,
                                            std::size_t trials, std::uint64_t seed) {
  if (n < 1 || trials < 1) throw InvalidParams("n and trials must be >= 1");
  std::vector<double> rates(trials);
  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng = Rng::stream(seed, t);
    const SequenceSample s = source.sample(n, rng);
    rates[t] = -s.log2_prob / static_cast<double>(n);
  }
  EmpiricalEntropyRate out;
  out.trials = trials;
  out.mean = std::accumulate(rates.begin(), rates.end(), 0.0) / static_cast<double>(trials);
  double ss = 0.0;
  for (double r : rates) ss += (r - out.mean) * (r - out.mean);
  out.std_dev = std::sqrt(ss / static_cast<double>(trials));
  return out;
}

}  // namespace repcap
