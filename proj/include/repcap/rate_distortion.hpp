#ifndef REPCAP_RATE_DISTORTION_HPP
#define REPCAP_RATE_DISTORTION_HPP

#include "repcap/pmf.hpp"

namespace repcap {

// Distortion d(v, vhat) on the reproduction pairing v = g(x); g is a
// bijection and defaults to the identity, so rows are indexed by the source
// alphabet.
class DistortionMeasure {
 public:
  DistortionMeasure(Alphabet v_alphabet, Alphabet vhat_alphabet,
                    std::vector<std::vector<double>> d);

  static DistortionMeasure hamming(const Alphabet& alphabet);

  const Alphabet& v_alphabet() const { return v_; }
  const Alphabet& vhat_alphabet() const { return vhat_; }
  double operator()(std::size_t v, std::size_t vhat) const { return d_[v][vhat]; }
  const std::vector<std::vector<double>>& matrix() const { return d_; }
  double d_max() const { return d_max_; }

 private:
  Alphabet v_, vhat_;
  std::vector<std::vector<double>> d_;
  double d_max_ = 0.0;
};

struct RdPoint {
  double distortion = 0.0;                        // achieved E d under the test channel
  double rate = 0.0;                              // I(X; Vhat) in bits/symbol
  double slope = 0.0;                             // Lagrange parameter (<= 0)
  std::vector<std::vector<double>> test_channel;  // q(vhat | x)
  std::size_t iterations = 0;
};

// One Lagrangian point of R(D): q(vhat|x) ∝ r(vhat) 2^{slope * d}, alternating
// with r = sum_x p(x) q(vhat|x) until the rate change per iteration <= tol.
RdPoint blahut_arimoto_rd(const Pmf& source, const DistortionMeasure& measure, double slope,
                          double tol = 1e-10, std::size_t max_iter = 100000);

// Slope sweep plus the exact R = 0 endpoint, sorted by increasing D with
// duplicates removed. Points lie on the lower convex envelope.
std::vector<RdPoint> rd_curve(const Pmf& source, const DistortionMeasure& measure,
                              std::size_t num_points);

// Output marginal r(vhat) induced by a test channel.
std::vector<double> test_channel_output_marginal(const Pmf& source,
                                                 const std::vector<std::vector<double>>& q);

// Mutual information of source + test channel (self-consistency checks).
double test_channel_rate(const Pmf& source, const std::vector<std::vector<double>>& q);
double test_channel_distortion(const Pmf& source, const DistortionMeasure& measure,
                               const std::vector<std::vector<double>>& q);

}  // namespace repcap

#endif
