#include "repcap/channels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace repcap {

DiscreteChannel::DiscreteChannel(Alphabet input_alphabet, Alphabet output_alphabet,
                                 std::vector<std::vector<double>> transition)
    : in_(std::move(input_alphabet)), out_(std::move(output_alphabet)), t_(std::move(transition)) {
  if (t_.size() != in_.size())
    throw InvalidParams("transition row count does not match input alphabet");
  cum_.resize(t_.size());
  for (std::size_t x = 0; x < t_.size(); ++x) {
    auto& row = t_[x];
    if (row.size() != out_.size())
      throw InvalidParams("transition column count does not match output alphabet");
    double sum = 0.0;
    for (double p : row) {
      if (!(p >= 0.0)) throw InvalidParams("channel probabilities must be nonnegative");
      sum += p;
    }
    const double err = std::abs(sum - 1.0);
    if (err > 1e-12) {
      if (err > 1e-9) throw InvalidParams("channel row sums to " + std::to_string(sum));
      for (auto& p : row) p /= sum;
    }
    cum_[x].resize(row.size());
    double acc = 0.0;
    for (std::size_t y = 0; y < row.size(); ++y) {
      acc += row[y];
      cum_[x][y] = acc;
    }
    cum_[x].back() = 1.0;
  }
}

Symbols DiscreteChannel::transmit(const Symbols& x, Rng& rng) const {
  Symbols y(x.size());
  for (std::size_t t = 0; t < x.size(); ++t) {
    if (x[t] >= in_.size()) throw InvalidParams("input symbol outside channel alphabet");
    y[t] = static_cast<std::uint32_t>(sample_cumulative(cum_[x[t]], rng));
  }
  return y;
}

Symbols DiscreteChannel::transmit(const Symbols& x, std::uint64_t seed) const {
  Rng rng(seed);
  return transmit(x, rng);
}

JointPmf DiscreteChannel::induced_joint(const Pmf& input) const {
  if (!(input.alphabet() == in_))
    throw InvalidParams("input pmf alphabet does not match channel input alphabet");
  std::vector<std::vector<double>> j(in_.size(), std::vector<double>(out_.size()));
  for (std::size_t x = 0; x < in_.size(); ++x)
    for (std::size_t y = 0; y < out_.size(); ++y) j[x][y] = input.prob(x) * t_[x][y];
  return JointPmf(in_, out_, std::move(j));
}

double channel_mutual_information(const Pmf& input, const DiscreteChannel& channel) {
  return mutual_information(channel.induced_joint(input));
}

namespace {

// D(P(.|x) || q) in bits for each input, given output marginal q.
void relative_entropies(const std::vector<std::vector<double>>& t,
                        const std::vector<double>& q, std::vector<double>& ix) {
  const std::size_t nx = t.size();
  const std::size_t ny = q.size();
  for (std::size_t x = 0; x < nx; ++x) {
    double d = 0.0;
    for (std::size_t y = 0; y < ny; ++y) {
      const double p = t[x][y];
      if (p > 0.0) d += p * std::log2(p / q[y]);
    }
    ix[x] = d;
  }
}

CapacityResult run_ba(const DiscreteChannel& channel,
                      const std::vector<double>& penalty,  // per-input cost * multiplier
                      double tol, std::size_t max_iter) {
  const auto& t = channel.transition();
  const std::size_t nx = t.size();
  const std::size_t ny = channel.output_alphabet().size();
  std::vector<double> r(nx, 1.0 / static_cast<double>(nx));
  std::vector<double> q(ny), ix(nx);

  double low = 0.0, up = 0.0;
  std::size_t it = 0;
  for (; it < max_iter; ++it) {
    std::fill(q.begin(), q.end(), 0.0);
    for (std::size_t x = 0; x < nx; ++x)
      for (std::size_t y = 0; y < ny; ++y) q[y] += r[x] * t[x][y];
    relative_entropies(t, q, ix);

    low = 0.0;
    up = -std::numeric_limits<double>::infinity();
    for (std::size_t x = 0; x < nx; ++x) {
      low += r[x] * ix[x];
      // the capacity bracket ignores the penalty; for the penalized solve the
      // bracket applies to the penalized objective instead
      up = std::max(up, ix[x] - penalty[x]);
    }
    double low_pen = low;
    for (std::size_t x = 0; x < nx; ++x) low_pen -= r[x] * penalty[x];
    if (up - low_pen <= tol) break;

    // multiplicative update r'(x) ∝ r(x) 2^{I_x - penalty_x}, with the max
    // subtracted for overflow safety
    double mx = -std::numeric_limits<double>::infinity();
    for (std::size_t x = 0; x < nx; ++x)
      if (r[x] > 0.0) mx = std::max(mx, ix[x] - penalty[x]);
    double sum = 0.0;
    for (std::size_t x = 0; x < nx; ++x) {
      r[x] = r[x] > 0.0 ? r[x] * std::exp2(ix[x] - penalty[x] - mx) : 0.0;
      sum += r[x];
    }
    for (auto& v : r) v /= sum;
  }
  if (it == max_iter)
    throw NotConverged("blahut-arimoto did not reach tol within max_iter");

  CapacityResult out{low, Pmf(channel.input_alphabet(), r), it + 1, 0.0, 0.0, 0.0};
  double low_pen = low;
  for (std::size_t x = 0; x < nx; ++x) low_pen -= r[x] * penalty[x];
  out.residual = up - low_pen;
  return out;
}

}  // namespace

CapacityResult blahut_arimoto_capacity(const DiscreteChannel& channel, double tol,
                                       std::size_t max_iter) {
  if (tol <= 0.0) throw InvalidParams("tol must be positive");
  std::vector<double> zero(channel.input_alphabet().size(), 0.0);
  return run_ba(channel, zero, tol, max_iter);
}

CapacityResult blahut_arimoto_capacity_cost(const DiscreteChannel& channel,
                                            const std::vector<std::vector<double>>& cost,
                                            double budget, double tol,
                                            std::size_t max_iter) {
  const auto& t = channel.transition();
  const std::size_t nx = t.size();
  if (cost.size() != nx) throw InvalidParams("cost matrix row count mismatch");
  std::vector<double> cx(nx, 0.0);
  bool any = false;
  for (std::size_t x = 0; x < nx; ++x) {
    if (cost[x].size() != channel.output_alphabet().size())
      throw InvalidParams("cost matrix column count mismatch");
    for (std::size_t y = 0; y < cost[x].size(); ++y) {
      cx[x] += t[x][y] * cost[x][y];
      if (cost[x][y] != 0.0) any = true;
    }
  }

  auto expected_cost = [&](const Pmf& r) {
    double c = 0.0;
    for (std::size_t x = 0; x < nx; ++x) c += r.prob(x) * cx[x];
    return c;
  };

  CapacityResult unconstrained = blahut_arimoto_capacity(channel, tol, max_iter);
  unconstrained.achieved_cost = expected_cost(unconstrained.optimal_input);
  if (!any || unconstrained.achieved_cost <= budget) return unconstrained;

  // multiplier sweep; keep the best feasible point
  CapacityResult best = unconstrained;
  bool found = false;
  for (int k = -20; k <= 40; ++k) {
    const double lambda = std::pow(2.0, 0.5 * static_cast<double>(k));
    std::vector<double> penalty(nx);
    for (std::size_t x = 0; x < nx; ++x) penalty[x] = lambda * cx[x];
    CapacityResult r = run_ba(channel, penalty, tol, max_iter);
    r.achieved_cost = expected_cost(r.optimal_input);
    r.multiplier = lambda;
    if (r.achieved_cost <= budget + 1e-12 &&
        (!found || r.capacity_bits > best.capacity_bits)) {
      best = r;
      found = true;
    }
  }
  if (!found) throw NotConverged("no feasible point found in the multiplier sweep");
  return best;
}

DiscreteChannel make_modular_additive_channel(std::size_t m, std::size_t p,
                                              bool disjoint_cosets) {
  if (m < 1 || p < 1) throw InvalidParams("modular channel needs M >= 1 and P >= 1");
  if (disjoint_cosets) {
    const std::size_t ny = m * p;
    std::vector<std::vector<double>> t(m, std::vector<double>(ny, 0.0));
    for (std::size_t x = 0; x < m; ++x)
      for (std::size_t e = 0; e < p; ++e) t[x][(x * p + e) % ny] = 1.0 / static_cast<double>(p);
    return DiscreteChannel(Alphabet::indexed(m), Alphabet::indexed(ny), std::move(t));
  }
  if (p > m) throw InvalidParams("modular channel needs P <= M unless cosets are disjoint");
  std::vector<std::vector<double>> t(m, std::vector<double>(m, 0.0));
  for (std::size_t x = 0; x < m; ++x)
    for (std::size_t e = 0; e < p; ++e) t[x][(x + e) % m] = 1.0 / static_cast<double>(p);
  return DiscreteChannel(Alphabet::indexed(m), Alphabet::indexed(m), std::move(t));
}

std::vector<double> quantized_awgn_input_grid(std::size_t levels, double amplitude) {
  if (levels < 2) throw InvalidParams("quantized AWGN needs at least 2 input levels");
  std::vector<double> xs(levels);
  for (std::size_t i = 0; i < levels; ++i)
    xs[i] = -amplitude + 2.0 * amplitude * static_cast<double>(i) /
                             static_cast<double>(levels - 1);
  return xs;
}

DiscreteChannel make_quantized_awgn_channel(double snr, std::size_t levels, double amplitude,
                                            std::size_t output_bins, double tail) {
  if (!(snr >= 0.0)) throw InvalidParams("snr must be nonnegative");
  if (output_bins < 2) throw InvalidParams("need at least 2 output bins");
  const std::vector<double> xs = quantized_awgn_input_grid(levels, amplitude);
  const double lo = -snr * amplitude - tail;
  const double hi = snr * amplitude + tail;
  const double width = (hi - lo) / static_cast<double>(output_bins);
  auto normal_cdf = [](double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); };

  std::vector<std::vector<double>> t(levels, std::vector<double>(output_bins, 0.0));
  for (std::size_t i = 0; i < levels; ++i) {
    const double mean = snr * xs[i];
    double sum = 0.0;
    double prev = normal_cdf(lo - mean);
    for (std::size_t b = 0; b < output_bins; ++b) {
      const double edge = lo + width * static_cast<double>(b + 1);
      const double cur = normal_cdf(edge - mean);
      t[i][b] = std::max(0.0, cur - prev);
      sum += t[i][b];
      prev = cur;
    }
    for (auto& v : t[i]) v /= sum;  // fold the truncated +-tail mass back in
  }
  return DiscreteChannel(Alphabet::indexed(levels, "x"), Alphabet::indexed(output_bins, "y"),
                         std::move(t));
}

DiscreteChannel make_binary_symmetric_channel(double crossover) {
  if (!(crossover >= 0.0) || !(crossover <= 1.0))
    throw InvalidParams("crossover must lie in [0,1]");
  return DiscreteChannel(Alphabet({"0", "1"}), Alphabet({"0", "1"}),
                         {{1.0 - crossover, crossover}, {crossover, 1.0 - crossover}});
}

DiscreteChannel make_identity_channel(std::size_t size) {
  std::vector<std::vector<double>> t(size, std::vector<double>(size, 0.0));
  for (std::size_t i = 0; i < size; ++i) t[i][i] = 1.0;
  return DiscreteChannel(Alphabet::indexed(size), Alphabet::indexed(size), std::move(t));
}

}  // namespace repcap
