#include <doctest.h>

#include <cmath>

#include "repcap/collapse.hpp"
#include "repcap/rng.hpp"

using namespace repcap;

namespace {

LabeledRow row(const std::string& id, const std::string& label, std::vector<double> z,
               std::vector<double> v = {}) {
  return LabeledRow{id, label, std::move(v), std::move(z)};
}

std::vector<std::vector<double>> simplex_means(std::size_t m) {
  // exact simplex ETF fixtures in dimension m-1 (and M=2 antipodal in 1D)
  if (m == 2) return {{1.0}, {-1.0}};
  if (m == 3) {
    const double s = std::sqrt(3.0) / 2.0;
    return {{1.0, 0.0}, {-0.5, s}, {-0.5, -s}};
  }
  // M=4: regular tetrahedron vertices centered at the origin
  const double a = 1.0 / std::sqrt(3.0);
  return {{a, a, a}, {a, -a, -a}, {-a, a, -a}, {-a, -a, a}};
}

}  // namespace

TEST_CASE("class statistics") {
  LabeledEmbeddings same = LabeledEmbeddings::from_rows(
      {row("1", "a", {2, 3}), row("2", "a", {2, 3}), row("3", "a", {2, 3})});
  const ClassStatistics s = class_statistics(same);
  CHECK(s.classes.size() == 1);
  CHECK(s.classes[0].within_variance == doctest::Approx(0.0));

  LabeledEmbeddings sym = LabeledEmbeddings::from_rows(
      {row("1", "a", {1, 2}), row("2", "a", {-1, -2})});
  const ClassStatistics t = class_statistics(sym);
  CHECK(t.classes[0].mean[0] == doctest::Approx(0.0));
  CHECK(t.classes[0].mean[1] == doctest::Approx(0.0));

  // randomized data against an independent two-pass computation
  Rng rng(505);
  std::vector<LabeledRow> rows;
  for (int i = 0; i < 60; ++i) {
    std::vector<double> z{rng.next_unit() * 4 - 2, rng.next_unit() * 4 - 2,
                          rng.next_unit() * 4 - 2};
    rows.push_back(row(std::to_string(i), std::string(1, char('a' + i % 3)), z));
  }
  const LabeledEmbeddings data = LabeledEmbeddings::from_rows(rows);
  const ClassStatistics st = class_statistics(data);
  for (const auto& cls : st.classes) {
    std::vector<double> mean(3, 0.0);
    std::size_t cnt = 0;
    for (const auto& r : rows)
      if (r.label == cls.label) {
        ++cnt;
        for (int k = 0; k < 3; ++k) mean[k] += r.embedding[k];
      }
    for (auto& v : mean) v /= double(cnt);
    double var = 0.0;
    for (const auto& r : rows)
      if (r.label == cls.label)
        for (int k = 0; k < 3; ++k)
          var += (r.embedding[k] - mean[k]) * (r.embedding[k] - mean[k]);
    var /= double(cnt);
    CHECK(cls.count == cnt);
    for (int k = 0; k < 3; ++k) CHECK(cls.mean[k] == doctest::Approx(mean[k]).epsilon(1e-12));
    CHECK(cls.within_variance == doctest::Approx(var).epsilon(1e-12));
  }
}

TEST_CASE("etf residuals on exact fixtures") {
  for (std::size_t m : {2u, 3u, 4u}) {
    const EtfResiduals r = etf_residuals(simplex_means(m));
    CHECK(r.mean_sum_norm < 1e-10);
    CHECK(r.norm_spread < 1e-10);
    CHECK(r.gram_deviation < 1e-10);
  }
  // M=3 at 120 degrees: pairwise cosine -1/2 by construction
  const auto means = simplex_means(3);
  const double cos01 = means[0][0] * means[1][0] + means[0][1] * means[1][1];
  CHECK(cos01 == doctest::Approx(-0.5));

  CHECK_THROWS_AS(etf_residuals({{1.0, 0.0}}), InvalidParams);
  CHECK_THROWS_AS(etf_residuals({{0.0, 0.0}, {1.0, 0.0}}), DegenerateMeans);
}

TEST_CASE("random means are far from an ETF") {
  Rng rng(909);
  std::size_t far = 0;
  const int seeds = 100;
  for (int s = 0; s < seeds; ++s) {
    std::vector<std::vector<double>> means(4, std::vector<double>(8));
    std::vector<double> center(8, 0.0);
    for (auto& mu : means) {
      double nrm = 0.0;
      for (auto& v : mu) {
        const double a = rng.next_unit(), b = rng.next_unit();
        v = std::sqrt(-2.0 * std::log(1.0 - a)) * std::cos(6.283185307179586 * b);
        nrm += v * v;
      }
      nrm = std::sqrt(nrm);
      for (std::size_t k = 0; k < 8; ++k) {
        mu[k] /= nrm;
        center[k] += mu[k] / 4.0;
      }
    }
    for (auto& mu : means)
      for (std::size_t k = 0; k < 8; ++k) mu[k] -= center[k];
    if (etf_residuals(means).gram_deviation > 0.1) ++far;
  }
  CHECK(far == seeds);
}

TEST_CASE("etf residuals invariant under rotation and scaling") {
  const auto means = simplex_means(3);
  // rotate by an arbitrary angle and scale by 7
  const double th = 1.234;
  std::vector<std::vector<double>> moved;
  for (const auto& mu : means)
    moved.push_back({7.0 * (std::cos(th) * mu[0] - std::sin(th) * mu[1]),
                     7.0 * (std::sin(th) * mu[0] + std::cos(th) * mu[1])});
  const EtfResiduals a = etf_residuals(moved);
  CHECK(a.norm_spread < 1e-10);
  CHECK(a.gram_deviation < 1e-10);
}

TEST_CASE("regression degeneracy") {
  // collapsed embeddings with two distinct targets: flagged
  LabeledEmbeddings bad = LabeledEmbeddings::from_rows(
      {row("1", "a", {1, 1}, {0.0}), row("2", "a", {1, 1}, {1.0})});
  const DegeneracyReport r = regression_degeneracy_check(bad, 1e-6);
  CHECK(r.degeneracy_flag);
  CHECK(r.classes[0].degenerate);

  // spread-out embeddings: not flagged regardless of targets
  LabeledEmbeddings good = LabeledEmbeddings::from_rows(
      {row("1", "a", {0, 0}, {0.0}), row("2", "a", {1, 0}, {1.0})});
  CHECK_FALSE(regression_degeneracy_check(good, 1e-6).degeneracy_flag);

  CHECK_THROWS_AS(regression_degeneracy_check(
                      LabeledEmbeddings::from_rows({row("1", "a", {1, 2})}), 1e-6),
                  MissingTargets);
}

TEST_CASE("degeneracy tolerance sensitivity") {
  // z = class mean + 0.01 * target-dependent offset; global scale ~ 1
  std::vector<LabeledRow> rows;
  for (int i = 0; i < 8; ++i) {
    const double v = double(i) / 8.0;
    rows.push_back(row(std::to_string(i), "a",
                       {1.0 + 0.01 * v, 0.0}, {v}));
  }
  const LabeledEmbeddings data = LabeledEmbeddings::from_rows(rows);
  CHECK_FALSE(regression_degeneracy_check(data, 1e-3).degeneracy_flag);
  CHECK(regression_degeneracy_check(data, 0.1).degeneracy_flag);
}

TEST_CASE("collapse index extremes") {
  // every class a single point, means distinct: index 0
  LabeledEmbeddings pointy = LabeledEmbeddings::from_rows(
      {row("1", "a", {0, 0}), row("2", "a", {0, 0}), row("3", "b", {4, 0}),
       row("4", "b", {4, 0})});
  CHECK(collapse_report(pointy).collapse_index == doctest::Approx(0.0));

  // class means coincide, spread inside classes: index 1
  LabeledEmbeddings merged = LabeledEmbeddings::from_rows(
      {row("1", "a", {-1, 0}), row("2", "a", {1, 0}), row("3", "b", {0, -1}),
       row("4", "b", {0, 1})});
  CHECK(collapse_report(merged).collapse_index == doctest::Approx(1.0));
}
