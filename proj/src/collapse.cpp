#include "repcap/collapse.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace repcap {

namespace {

double sq_dist(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

double norm(const std::vector<double>& a) {
  double s = 0.0;
  for (double v : a) s += v * v;
  return std::sqrt(s);
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

LabeledEmbeddings LabeledEmbeddings::from_rows(std::vector<LabeledRow> rows) {
  if (rows.empty()) throw EmptyClass("no rows");
  LabeledEmbeddings data;
  data.q = rows.front().embedding.size();
  if (data.q == 0) throw DimensionMismatch("embeddings must have dimension >= 1");
  for (const auto& r : rows)
    if (r.embedding.size() != data.q)
      throw DimensionMismatch("all embeddings must share dimension q");
  data.rows = std::move(rows);
  return data;
}

ClassStatistics class_statistics(const LabeledEmbeddings& data) {
  if (data.rows.empty()) throw EmptyClass("no rows");
  const std::size_t q = data.q;

  std::map<std::string, std::vector<const LabeledRow*>> by_label;
  for (const auto& r : data.rows) by_label[r.label].push_back(&r);

  ClassStatistics out;
  out.global_mean.assign(q, 0.0);
  for (const auto& r : data.rows)
    for (std::size_t i = 0; i < q; ++i) out.global_mean[i] += r.embedding[i];
  for (auto& v : out.global_mean) v /= static_cast<double>(data.rows.size());

  for (const auto& [label, members] : by_label) {
    ClassStats cs;
    cs.label = label;
    cs.count = members.size();
    cs.mean.assign(q, 0.0);
    for (const auto* r : members)
      for (std::size_t i = 0; i < q; ++i) cs.mean[i] += r->embedding[i];
    for (auto& v : cs.mean) v /= static_cast<double>(members.size());
    for (const auto* r : members) cs.within_variance += sq_dist(r->embedding, cs.mean);
    cs.within_variance /= static_cast<double>(members.size());
    out.classes.push_back(std::move(cs));
  }

  for (const auto& r : data.rows) out.total_variance += sq_dist(r.embedding, out.global_mean);
  out.total_variance /= static_cast<double>(data.rows.size());
  return out;
}

EtfResiduals etf_residuals(const std::vector<std::vector<double>>& means) {
  const std::size_t m = means.size();
  if (m < 2) throw InvalidParams("ETF residuals need at least 2 class means");
  const std::size_t q = means.front().size();
  for (const auto& mu : means)
    if (mu.size() != q) throw DimensionMismatch("class means must share dimension");

  std::vector<double> norms(m);
  for (std::size_t c = 0; c < m; ++c) {
    norms[c] = norm(means[c]);
    if (norms[c] < 1e-12) throw DegenerateMeans("class mean has vanishing norm");
  }

  EtfResiduals out;
  std::vector<double> sum(q, 0.0);
  for (const auto& mu : means)
    for (std::size_t i = 0; i < q; ++i) sum[i] += mu[i];
  out.mean_sum_norm = norm(sum);

  const double mx = *std::max_element(norms.begin(), norms.end());
  const double mn = *std::min_element(norms.begin(), norms.end());
  const double avg = std::accumulate(norms.begin(), norms.end(), 0.0) / static_cast<double>(m);
  out.norm_spread = (mx - mn) / avg;

  const double target = -1.0 / static_cast<double>(m - 1);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = a + 1; b < m; ++b) {
      const double cosab = dot(means[a], means[b]) / (norms[a] * norms[b]);
      out.gram_deviation = std::max(out.gram_deviation, std::abs(cosab - target));
    }
  return out;
}

DegeneracyReport regression_degeneracy_check(const LabeledEmbeddings& data,
                                             double collapse_tol) {
  bool any_target = false;
  std::size_t target_dim = 0;
  for (const auto& r : data.rows)
    if (!r.target.empty()) {
      any_target = true;
      target_dim = r.target.size();
      break;
    }
  if (!any_target) throw MissingTargets("regression targets are required");
  for (const auto& r : data.rows)
    if (r.target.size() != target_dim)
      throw DimensionMismatch("all regression targets must share dimension");

  // tolerance relative to the global embedding scale
  double rms = 0.0;
  for (const auto& r : data.rows)
    for (double v : r.embedding) rms += v * v;
  rms = std::sqrt(rms / static_cast<double>(data.rows.size()));

  DegeneracyReport rep;
  rep.effective_tol = collapse_tol * (rms > 0.0 ? rms : 1.0);

  std::map<std::string, std::vector<const LabeledRow*>> by_label;
  for (const auto& r : data.rows) by_label[r.label].push_back(&r);
  for (const auto& [label, members] : by_label) {
    ClassDegeneracy cd;
    cd.label = label;
    for (std::size_t a = 0; a < members.size(); ++a)
      for (std::size_t b = a + 1; b < members.size(); ++b) {
        cd.embedding_spread = std::max(
            cd.embedding_spread, std::sqrt(sq_dist(members[a]->embedding, members[b]->embedding)));
        cd.target_spread = std::max(
            cd.target_spread, std::sqrt(sq_dist(members[a]->target, members[b]->target)));
      }
    cd.degenerate =
        cd.embedding_spread <= rep.effective_tol && cd.target_spread > rep.effective_tol;
    rep.degeneracy_flag = rep.degeneracy_flag || cd.degenerate;
    rep.classes.push_back(std::move(cd));
  }
  return rep;
}

CollapseReport collapse_report(const LabeledEmbeddings& data, double collapse_tol) {
  CollapseReport rep;
  rep.stats = class_statistics(data);

  double within = 0.0;
  std::size_t total = 0;
  for (const auto& c : rep.stats.classes) {
    within += static_cast<double>(c.count) * c.within_variance;
    total += c.count;
  }
  within /= static_cast<double>(total);
  rep.collapse_index = rep.stats.total_variance > 0.0 ? within / rep.stats.total_variance : 0.0;

  if (rep.stats.classes.size() >= 2) {
    std::vector<std::vector<double>> centered;
    // center the class means by their own mean (Sum mu_c = 0 presumes centering)
    std::vector<double> center(data.q, 0.0);
    for (const auto& c : rep.stats.classes)
      for (std::size_t i = 0; i < data.q; ++i) center[i] += c.mean[i];
    for (auto& v : center) v /= static_cast<double>(rep.stats.classes.size());
    for (const auto& c : rep.stats.classes) {
      std::vector<double> mu(data.q);
      for (std::size_t i = 0; i < data.q; ++i) mu[i] = c.mean[i] - center[i];
      centered.push_back(std::move(mu));
    }
    try {
      rep.etf = etf_residuals(centered);
      rep.etf_defined = true;
    } catch (const DegenerateMeans&) {
      rep.etf_defined = false;
    }
  }

  bool has_targets = false;
  for (const auto& r : data.rows)
    if (!r.target.empty()) has_targets = true;
  if (has_targets) {
    DegeneracyReport d = regression_degeneracy_check(data, collapse_tol);
    rep.degeneracy_flag = d.degeneracy_flag;
    rep.degeneracy = std::move(d.classes);
  }
  return rep;
}

}  // namespace repcap
