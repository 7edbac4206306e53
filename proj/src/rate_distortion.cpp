#include "repcap/rate_distortion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace repcap {

DistortionMeasure::DistortionMeasure(Alphabet v_alphabet, Alphabet vhat_alphabet,
                                     std::vector<std::vector<double>> d)
    : v_(std::move(v_alphabet)), vhat_(std::move(vhat_alphabet)), d_(std::move(d)) {
  if (d_.size() != v_.size()) throw InvalidParams("distortion row count mismatch");
  for (const auto& row : d_) {
    if (row.size() != vhat_.size()) throw InvalidParams("distortion column count mismatch");
    for (double v : row) {
      if (!(v >= 0.0) || !std::isfinite(v))
        throw InvalidParams("distortion entries must be finite and nonnegative");
      d_max_ = std::max(d_max_, v);
    }
  }
}

DistortionMeasure DistortionMeasure::hamming(const Alphabet& alphabet) {
  const std::size_t n = alphabet.size();
  std::vector<std::vector<double>> d(n, std::vector<double>(n, 1.0));
  for (std::size_t i = 0; i < n; ++i) d[i][i] = 0.0;
  return DistortionMeasure(alphabet, alphabet, std::move(d));
}

std::vector<double> test_channel_output_marginal(const Pmf& source,
                                                 const std::vector<std::vector<double>>& q) {
  std::vector<double> r(q.front().size(), 0.0);
  for (std::size_t x = 0; x < source.size(); ++x)
    for (std::size_t v = 0; v < r.size(); ++v) r[v] += source.prob(x) * q[x][v];
  return r;
}

double test_channel_rate(const Pmf& source, const std::vector<std::vector<double>>& q) {
  const std::vector<double> r = test_channel_output_marginal(source, q);
  double rate = 0.0;
  for (std::size_t x = 0; x < source.size(); ++x)
    for (std::size_t v = 0; v < r.size(); ++v) {
      const double p = source.prob(x) * q[x][v];
      if (p > 0.0 && r[v] > 0.0) rate += p * std::log2(q[x][v] / r[v]);
    }
  return rate;
}

double test_channel_distortion(const Pmf& source, const DistortionMeasure& measure,
                               const std::vector<std::vector<double>>& q) {
  double d = 0.0;
  for (std::size_t x = 0; x < source.size(); ++x)
    for (std::size_t v = 0; v < q[x].size(); ++v)
      d += source.prob(x) * q[x][v] * measure(x, v);
  return d;
}

RdPoint blahut_arimoto_rd(const Pmf& source, const DistortionMeasure& measure, double slope,
                          double tol, std::size_t max_iter) {
  if (slope > 0.0) throw InvalidParams("slope must be <= 0");
  if (source.size() != measure.v_alphabet().size())
    throw InvalidParams("source alphabet does not match the distortion v-alphabet");
  const std::size_t nx = source.size();
  const std::size_t nv = measure.vhat_alphabet().size();

  // 2^{slope*d} precomputed per cell
  std::vector<std::vector<double>> a(nx, std::vector<double>(nv));
  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t v = 0; v < nv; ++v) a[x][v] = std::exp2(slope * measure(x, v));

  std::vector<double> r(nv, 1.0 / static_cast<double>(nv));
  std::vector<std::vector<double>> q(nx, std::vector<double>(nv, 0.0));
  double prev_rate = std::numeric_limits<double>::quiet_NaN();
  std::size_t it = 0;
  for (; it < max_iter; ++it) {
    for (std::size_t x = 0; x < nx; ++x) {
      double sum = 0.0;
      for (std::size_t v = 0; v < nv; ++v) {
        q[x][v] = r[v] * a[x][v];
        sum += q[x][v];
      }
      if (sum <= 0.0) throw NotConverged("degenerate test channel row");
      for (auto& val : q[x]) val /= sum;
    }
    r = test_channel_output_marginal(source, q);
    const double rate = test_channel_rate(source, q);
    if (!std::isnan(prev_rate) && std::abs(rate - prev_rate) <= tol) break;
    prev_rate = rate;
  }
  if (it == max_iter) throw NotConverged("rate-distortion BA did not converge");

  RdPoint out;
  out.slope = slope;
  out.test_channel = q;
  out.rate = test_channel_rate(source, q);
  out.distortion = test_channel_distortion(source, measure, q);
  out.iterations = it + 1;
  return out;
}

std::vector<RdPoint> rd_curve(const Pmf& source, const DistortionMeasure& measure,
                              std::size_t num_points) {
  if (num_points < 2) throw InvalidParams("num_points must be >= 2");
  std::vector<RdPoint> pts;

  // steep -> shallow slope schedule; geometric in |slope|
  const double s_hi = 30.0, s_lo = 0.05;
  const std::size_t sweep = num_points - 1;
  for (std::size_t i = 0; i < sweep; ++i) {
    const double f = sweep == 1 ? 0.0
                                : static_cast<double>(i) / static_cast<double>(sweep - 1);
    const double mag = s_hi * std::pow(s_lo / s_hi, f);
    pts.push_back(blahut_arimoto_rd(source, measure, -mag));
  }

  // exact R = 0 endpoint: constant reproduction at the min expected distortion
  {
    const std::size_t nv = measure.vhat_alphabet().size();
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_v = 0;
    for (std::size_t v = 0; v < nv; ++v) {
      double d = 0.0;
      for (std::size_t x = 0; x < source.size(); ++x) d += source.prob(x) * measure(x, v);
      if (d < best) {
        best = d;
        best_v = v;
      }
    }
    RdPoint end;
    end.slope = 0.0;
    end.rate = 0.0;
    end.distortion = best;
    end.test_channel.assign(source.size(), std::vector<double>(nv, 0.0));
    for (auto& row : end.test_channel) row[best_v] = 1.0;
    pts.push_back(end);
  }

  std::sort(pts.begin(), pts.end(),
            [](const RdPoint& a, const RdPoint& b) { return a.distortion < b.distortion; });
  // drop points that do not strictly advance D (slope grid can saturate)
  std::vector<RdPoint> out;
  for (auto& p : pts) {
    if (!out.empty() && p.distortion <= out.back().distortion + 1e-12) continue;
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace repcap
