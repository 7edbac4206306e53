#include <doctest.h>

#include <cmath>

#include "repcap/pmf.hpp"
#include "repcap/rng.hpp"

using namespace repcap;

namespace {

Pmf random_pmf(std::size_t size, Rng& rng) {
  std::vector<double> p(size);
  double sum = 0.0;
  for (auto& v : p) {
    v = -std::log(1.0 - rng.next_unit());
    sum += v;
  }
  for (auto& v : p) v /= sum;
  return Pmf(Alphabet::indexed(size), p);
}

JointPmf random_joint(std::size_t nr, std::size_t nc, Rng& rng) {
  std::vector<std::vector<double>> p(nr, std::vector<double>(nc));
  double sum = 0.0;
  for (auto& row : p)
    for (auto& v : row) {
      v = -std::log(1.0 - rng.next_unit());
      sum += v;
    }
  for (auto& row : p)
    for (auto& v : row) v /= sum;
  return JointPmf(Alphabet::indexed(nr), Alphabet::indexed(nc), p);
}

}  // namespace

TEST_CASE("entropy basics") {
  CHECK(entropy(Pmf::bernoulli(0.5)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(entropy(Pmf::uniform(Alphabet::indexed(256))) == doctest::Approx(8.0).epsilon(1e-12));
  // closed form -p log2 p - (1-p) log2 (1-p)
  CHECK(entropy(Pmf::bernoulli(0.2)) ==
        doctest::Approx(0.7219280948873623).epsilon(1e-12));
  CHECK(entropy(Pmf::bernoulli(0.0)) == doctest::Approx(0.0));
  CHECK(binary_entropy(0.2) == doctest::Approx(0.7219280948873623).epsilon(1e-12));
}

TEST_CASE("pmf validation and renormalization") {
  CHECK_THROWS_AS(Pmf(Alphabet::indexed(2), {0.5, 0.6}), InvalidParams);
  CHECK_THROWS_AS(Pmf(Alphabet::indexed(2), {-0.1, 1.1}), InvalidParams);
  CHECK_THROWS_AS(Pmf(Alphabet::indexed(3), {0.5, 0.5}), InvalidParams);
  // off by <= 1e-9 is renormalized
  Pmf p(Alphabet::indexed(2), {0.5 + 4e-10, 0.5});
  CHECK(p.prob(0) + p.prob(1) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(Alphabet({"a", "a"}), InvalidParams);
}

TEST_CASE("kl divergence") {
  CHECK(kl_divergence(Pmf::bernoulli(0.3), Pmf::bernoulli(0.3)) == doctest::Approx(0.0));
  CHECK(kl_divergence(Pmf::bernoulli(1.0), Pmf::bernoulli(0.5)) ==
        doctest::Approx(1.0).epsilon(1e-12));
  // 1 - H2(0.2)
  CHECK(kl_divergence(Pmf::bernoulli(0.2), Pmf::bernoulli(0.5)) ==
        doctest::Approx(0.2780719051126377).epsilon(1e-12));
  CHECK_THROWS_AS(kl_divergence(Pmf::bernoulli(0.5), Pmf::bernoulli(1.0)),
                  AbsoluteContinuityViolated);
}

TEST_CASE("mutual information") {
  // independent product joint
  JointPmf indep(Alphabet::indexed(2), Alphabet::indexed(3),
                 {{0.2 * 0.5, 0.2 * 0.3, 0.2 * 0.2}, {0.8 * 0.5, 0.8 * 0.3, 0.8 * 0.2}});
  CHECK(mutual_information(indep) == doctest::Approx(0.0).epsilon(1e-12));

  JointPmf copy(Alphabet::indexed(2), Alphabet::indexed(2), {{0.5, 0.0}, {0.0, 0.5}});
  CHECK(mutual_information(copy) == doctest::Approx(1.0).epsilon(1e-12));

  // doubly symmetric binary joint, crossover 0.11: I = 1 - H2(0.11)
  const double c = 0.11;
  JointPmf dsb(Alphabet::indexed(2), Alphabet::indexed(2),
               {{0.5 * (1 - c), 0.5 * c}, {0.5 * c, 0.5 * (1 - c)}});
  CHECK(mutual_information(dsb) ==
        doctest::Approx(1.0 - binary_entropy(0.11)).epsilon(1e-12));
  CHECK(1.0 - binary_entropy(0.11) == doctest::Approx(0.500084041835472).epsilon(1e-12));
}

TEST_CASE("information inequalities on randomized inputs") {
  Rng rng(20240811);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t nr = 2 + rng.below(5), nc = 2 + rng.below(5);
    const Pmf p = random_pmf(nr, rng);
    CHECK(entropy(p) <= std::log2(double(nr)) + 1e-12);

    const JointPmf j = random_joint(nr, nc, rng);
    const double i = mutual_information(j);
    CHECK(i >= -1e-12);
    CHECK(i == doctest::Approx(mutual_information(j.transposed())).epsilon(1e-10));
    const double hx = entropy(j.row_marginal());
    const double hy = entropy(j.col_marginal());
    const double hxy = joint_entropy(j);
    CHECK(hxy <= hx + hy + 1e-12);                       // subadditivity
    CHECK(i == doctest::Approx(hx + hy - hxy).epsilon(1e-10));
  }
  // equality iff uniform
  CHECK(entropy(Pmf::uniform(Alphabet::indexed(7))) ==
        doctest::Approx(std::log2(7.0)).epsilon(1e-12));
}

TEST_CASE("log-domain round trips") {
  Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const Pmf p = random_pmf(2 + rng.below(6), rng);
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (p.prob(i) <= 0.0) continue;
      const double round = std::exp2(std::log2(p.prob(i)));
      CHECK(round == doctest::Approx(p.prob(i)).epsilon(1e-12));
    }
  }
}
