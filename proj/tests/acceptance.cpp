// Acceptance suite: runs every gate criterion at its stated tolerance and
// prints one PASS/FAIL line per criterion. Exit code = number of failures.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>

#include "repcap/io.hpp"
#include "repcap/sims.hpp"

using namespace repcap;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

class Criterion {
 public:
  Criterion(int number, std::string title, double time_limit_s)
      : number_(number), title_(std::move(title)), limit_(time_limit_s), start_(Clock::now()) {}

  void check(bool ok, const std::string& what) {
    if (!ok) problems_.push_back(what);
  }

  void finish() {
    const double secs =
        std::chrono::duration<double>(Clock::now() - start_).count();
    if (secs > limit_)
      problems_.push_back("runtime " + std::to_string(secs) + "s exceeds " +
                          std::to_string(limit_) + "s");
    if (problems_.empty()) {
      std::printf("criterion %2d: PASS  %s  (%.2fs)\n", number_, title_.c_str(), secs);
    } else {
      ++failures;
      std::printf("criterion %2d: FAIL  %s  (%.2fs)\n", number_, title_.c_str(), secs);
      for (const auto& p : problems_) std::printf("               - %s\n", p.c_str());
    }
  }

 private:
  int number_;
  std::string title_;
  double limit_;
  Clock::time_point start_;
  std::vector<std::string> problems_;
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

// ---- criterion 1: LeNet worked example -------------------------------------
void criterion1() {
  Criterion c(1, "representation rate and embedding deficit", 0.001);
  const double rate = representation_rate(EmbeddingSpace(128, 31), 1024);
  c.check(rate == 3.875, "rate " + fmt(rate) + " != 3.875 exactly");
  const FeasibilityReport rep = feasibility_report(EmbeddingSpace(128, 31), 1024, 8.0);
  const auto& chk = rep.check("source_rate");
  c.check(!chk.satisfied, "deficit check unexpectedly satisfied");
  c.check(chk.margin_bits == -4224.0, "margin " + fmt(chk.margin_bits) + " != -4224");
  c.finish();
}

// ---- criterion 2: BSC capacity oracle --------------------------------------
void criterion2() {
  Criterion c(2, "Blahut-Arimoto matches 1 - H2(p) on BSC", 1.0);
  for (double p : {0.0, 0.05, 0.11, 0.25, 0.5}) {
    const CapacityResult r = blahut_arimoto_capacity(make_binary_symmetric_channel(p));
    const double target = 1.0 - binary_entropy(p);
    c.check(std::abs(r.capacity_bits - target) <= 1e-8,
            "p=" + fmt(p) + ": capacity " + fmt(r.capacity_bits) + " vs " + fmt(target));
    c.check(std::abs(r.optimal_input.prob(0) - 0.5) <= 1e-8,
            "p=" + fmt(p) + ": optimal input not uniform");
  }
  c.finish();
}

// ---- criterion 3: modular-additive worked example --------------------------
void criterion3() {
  Criterion c(3, "disjoint-coset modular channel has I = H(X) = 3", 1.0);
  const DiscreteChannel ch = make_modular_additive_channel(8, 4, true);
  const double i = channel_mutual_information(Pmf::uniform(ch.input_alphabet()), ch);
  c.check(std::abs(i - 3.0) <= 1e-10, "I = " + fmt(i));
  c.finish();
}

// ---- criterion 4: quantized-AWGN vs quadrature oracle ----------------------
double quadrature_mi(const std::vector<double>& grid, double snr, const Pmf& input) {
  // I(X;Y) with continuous output: h(Y) - (1/2) log2(2 pi e)
  const double span = snr * std::abs(grid.back()) + 8.0;
  const std::size_t npts = 40001;
  const double lo = -span, hi = span;
  const double dy = (hi - lo) / static_cast<double>(npts - 1);
  const double inv_sqrt2pi = 0.3989422804014327;
  double h_y = 0.0;
  for (std::size_t i = 0; i < npts; ++i) {
    const double y = lo + dy * static_cast<double>(i);
    double f = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const double z = y - snr * grid[k];
      f += input.prob(k) * inv_sqrt2pi * std::exp(-0.5 * z * z);
    }
    if (f > 0.0) h_y -= f * std::log2(f) * dy;
  }
  const double h_noise = 0.5 * std::log2(2.0 * 3.141592653589793 * 2.718281828459045);
  return h_y - h_noise;
}

void criterion4() {
  Criterion c(4, "quantized-AWGN capacity matches the integration oracle", 30.0);
  const double snr = 1.0;
  const std::size_t levels = 64;
  const DiscreteChannel ch = make_quantized_awgn_channel(snr, levels, 1.0, 801);
  const CapacityResult r = blahut_arimoto_capacity(ch, 1e-9);
  const std::vector<double> grid = quantized_awgn_input_grid(levels, 1.0);
  const double oracle = quadrature_mi(grid, snr, r.optimal_input);
  c.check(std::abs(r.capacity_bits - oracle) <= 0.05,
          "BA " + fmt(r.capacity_bits) + " vs oracle " + fmt(oracle));
  double var = 0.0, mean = 0.0;
  for (double x : grid) mean += x / static_cast<double>(levels);
  for (double x : grid) var += (x - mean) * (x - mean) / static_cast<double>(levels);
  const double gaussian_ref = 0.5 * std::log2(1.0 + snr * snr * var);
  std::printf("               [capacity %.6f, oracle %.6f, (1/2)log2(1+snr^2 VarX) %.6f]\n",
              r.capacity_bits, oracle, gaussian_ref);
  c.finish();
}

// ---- criterion 5: AEP bounds by enumeration ---------------------------------
void criterion5() {
  Criterion c(5, "AEP inequalities and typical-mass trend", 20.0);
  IidSource bern(Pmf::bernoulli(0.2));
  MarkovSource markov = MarkovSource::symmetric_binary(0.1);
  const std::vector<const Source*> sources{&bern, &markov};
  const char* names[] = {"bernoulli(0.2)", "markov(0.1)"};

  for (std::size_t s = 0; s < sources.size(); ++s) {
    std::vector<double> mass_at_015;
    for (std::size_t n : {8u, 12u, 16u}) {
      for (double eps : {0.1, 0.15, 0.2}) {
        const TypicalSet set = enumerate_typical_set(*sources[s], n, eps);
        const std::string tag =
            std::string(names[s]) + " n=" + std::to_string(n) + " eps=" + fmt(eps);
        c.check(set.prob_lower_ok(), tag + ": member probability lower bound");
        c.check(set.prob_upper_ok(), tag + ": member probability upper bound");
        c.check(set.size_upper_ok(), tag + ": |A| upper bound");
        if (eps == 0.15) mass_at_015.push_back(set.total_prob);
      }
    }
    for (std::size_t i = 1; i < mass_at_015.size(); ++i) {
      c.check(mass_at_015[i] >= mass_at_015[i - 1],
              std::string(names[s]) + ": typical mass at eps=0.15 not nondecreasing (" +
                  fmt(mass_at_015[i - 1]) + " -> " + fmt(mass_at_015[i]) + ")");
    }
  }
  c.finish();
}

// ---- criterion 6: theorem 3 phase transition --------------------------------
void criterion6() {
  Criterion c(6, "theorem 3 phase transition with uncovered-mass oracle", 30.0);
  const Json cfg = {{"theorem", "thm3"},
                    {"source", {{"kind", "bernoulli"}, {"p", 0.2}}},
                    {"n", 16},
                    {"epsilon", 0.45},
                    {"rates", {0.4, 1.0}},
                    {"trials", 10000},
                    {"seed", 61803}};
  const Json rep = run_theorem3(cfg, 0);
  const auto& low = rep.at("records")[0];
  const auto& high = rep.at("records")[1];
  const double err_low = low.at("error_rate").get<double>();
  const double err_high = high.at("error_rate").get<double>();
  c.check(err_high < 0.05, "error at rate 1.0 is " + fmt(err_high));
  c.check(err_low > 0.95, "error at rate 0.4 is " + fmt(err_low));
  for (const auto& rec : rep.at("records")) {
    const double diff = std::abs(rec.at("error_rate").get<double>() -
                                 rec.at("oracle_error").get<double>());
    c.check(diff <= 0.02, "oracle gap " + fmt(diff) + " at rate " +
                              fmt(rec.at("rate").get<double>()));
  }
  c.finish();
}

// ---- criterion 7: theorem 4 phase transition --------------------------------
void criterion7() {
  Criterion c(7, "theorem 4 phase transition with exact case breakdown", 300.0);
  std::vector<double> err_low, err_high;
  for (std::size_t n : {16u, 24u, 32u}) {
    const Json cfg = {{"theorem", "thm4"},
                      {"source", {{"kind", "bernoulli"}, {"p", 0.5}}},
                      {"channel", {{"kind", "bsc"}, {"p", 0.11}}},
                      {"n", n},
                      {"epsilon", 0.08},
                      {"rates", {0.25, 0.9}},
                      {"trials", 10000},
                      {"seed", 271828},
                      {"rule", "mismatch"}};
    const Json rep = run_theorem4(cfg, 0);
    const auto& lo = rep.at("records")[0];
    const auto& hi = rep.at("records")[1];
    err_low.push_back(lo.at("error_rate").get<double>());
    err_high.push_back(hi.at("error_rate").get<double>());
    for (const auto& rec : rep.at("records")) {
      const std::size_t sum = rec.at("case_atypical_codeword").get<std::size_t>() +
                              rec.at("case_pair_atypical").get<std::size_t>() +
                              rec.at("case_impostor").get<std::size_t>();
      c.check(sum == rec.at("errors").get<std::size_t>(),
              "case breakdown does not sum to total at n=" + std::to_string(n));
    }
    c.check(err_low.back() < err_high.back(),
            "n=" + std::to_string(n) + ": low-rate error not below high-rate error");
  }
  for (std::size_t i = 1; i < err_low.size(); ++i) {
    c.check(err_low[i] <= err_low[i - 1],
            "low-rate error not decreasing in n (" + fmt(err_low[i - 1]) + " -> " +
                fmt(err_low[i]) + ")");
    c.check(err_high[i] >= err_high[i - 1],
            "high-rate error not increasing in n (" + fmt(err_high[i - 1]) + " -> " +
                fmt(err_high[i]) + ")");
  }
  c.finish();
}

// ---- criterion 8: theorem 5 ---------------------------------------------------
void criterion8() {
  Criterion c(8, "theorem 5 R(D) oracle and simulated encoding", 180.0);
  const Pmf src = Pmf::bernoulli(0.3);
  const DistortionMeasure d = DistortionMeasure::hamming(src.alphabet());
  const RdPoint pt = blahut_arimoto_rd(src, d, std::log2(0.1 / 0.9));
  const double closed_form = binary_entropy(0.3) - binary_entropy(0.1);
  c.check(std::abs(pt.rate - closed_form) <= 1e-6,
          "BA R(D) " + fmt(pt.rate) + " vs closed form " + fmt(closed_form));

  const Json cfg = {{"theorem", "thm5"},
                    {"source", {{"kind", "bernoulli"}, {"p", 0.3}}},
                    {"distortion", {{"kind", "hamming"}}},
                    {"n", 24},
                    {"epsilon", 0.1},
                    {"rates", {0.26, 0.562}},
                    {"trials", 1000},
                    {"seed", 141421},
                    {"target_distortion", 0.1},
                    {"rule", "entropy"}};
  const Json rep = run_theorem5(cfg, 0);
  const double d_low = rep.at("records")[0].at("mean_distortion").get<double>();
  const double d_high = rep.at("records")[1].at("mean_distortion").get<double>();
  c.check(d_high <= 0.15, "distortion at rate 0.562 is " + fmt(d_high));
  c.check(d_low > 0.1, "distortion at rate 0.26 is " + fmt(d_low));
  c.finish();
}

// ---- criterion 9: theorem 6 sandwich ------------------------------------------
void criterion9() {
  Criterion c(9, "theorem 6 composition distortion and support sandwich", 300.0);
  const Json cfg = {{"theorem", "thm6"},
                    {"source", {{"kind", "bernoulli"}, {"p", 0.3}}},
                    {"distortion", {{"kind", "hamming"}}},
                    {"channel", {{"kind", "bsc"}, {"p", 0.11}}},
                    {"n", 24},
                    {"channel_n", 48},
                    {"epsilon", 0.1},
                    {"channel_epsilon", 0.08},
                    {"rates", {0.4583333333333333}},
                    {"trials", 4000},
                    {"seed", 173205},
                    {"target_distortion", 0.1},
                    {"source_rule", "entropy"},
                    {"channel_rule", "mismatch"}};
  const Json rep = run_theorem6(cfg, 0);
  const double rd = rep.at("thresholds").at("rd_rate").get<double>();
  const double mi = rep.at("thresholds").at("channel_mutual_information").get<double>();
  c.check(rd < 0.42 && rd > 0.40, "R(D) = " + fmt(rd));
  c.check(mi > 0.49 && mi < 0.51, "I(X;Y) = " + fmt(mi));
  bool any_success = false;
  for (const auto& rec : rep.at("records")) {
    const double dist = rec.at("mean_distortion").get<double>();
    c.check(dist <= 0.17, "end-to-end distortion " + fmt(dist));
    if (rec.at("success").get<bool>()) {
      any_success = true;
      const double sr = rec.at("support_rate").get<double>();
      c.check(rd < sr && sr < mi,
              "support rate " + fmt(sr) + " outside (" + fmt(rd) + ", " + fmt(mi) + ")");
    }
  }
  c.check(any_success, "no successful run to audit");
  c.finish();
}

// ---- criterion 10: theorem 7 ----------------------------------------------------
void criterion10() {
  Criterion c(10, "theorem 7 bound, random and adversarial perturbations", 10.0);
  c.check(theorem7_bound(0.1, 0.05, 2.0, 3.0) == 0.1 + 0.05 * 2.0 * 3.0,
          "bound arithmetic");
  const Json rep = run_theorem7({{"theorem", "thm7"},
                                 {"delta", 0.0},
                                 {"sigma", 0.05},
                                 {"k_c", 2.0},
                                 {"k_g", 3.0},
                                 {"empirical",
                                  {{"dim", 24}, {"trials", 100000}, {"seed", 314159}}}});
  const auto& emp = rep.at("empirical");
  c.check(!emp.at("bound_exceeded").get<bool>(), "a random perturbation exceeded the bound");
  c.check(emp.at("aligned_ratio").get<double>() >= 0.99,
          "aligned ratio " + fmt(emp.at("aligned_ratio").get<double>()));
  c.finish();
}

// ---- criterion 11: collapse diagnostics -------------------------------------------
void criterion11() {
  Criterion c(11, "collapse and simplex-ETF diagnostics", 5.0);
  // exact fixtures
  {
    const EtfResiduals m2 = etf_residuals({{1.0}, {-1.0}});
    c.check(m2.mean_sum_norm < 1e-10 && m2.norm_spread < 1e-10 && m2.gram_deviation < 1e-10,
            "M=2 fixture residuals");
    const double s = std::sqrt(3.0) / 2.0;
    const EtfResiduals m3 = etf_residuals({{1.0, 0.0}, {-0.5, s}, {-0.5, -s}});
    c.check(m3.mean_sum_norm < 1e-10 && m3.norm_spread < 1e-10 && m3.gram_deviation < 1e-10,
            "M=3 fixture residuals");
    const double a = 1.0 / std::sqrt(3.0);
    const EtfResiduals m4 =
        etf_residuals({{a, a, a}, {a, -a, -a}, {-a, a, -a}, {-a, -a, a}});
    c.check(m4.mean_sum_norm < 1e-10 && m4.norm_spread < 1e-10 && m4.gram_deviation < 1e-10,
            "M=4 fixture residuals");
  }
  // collapsed embeddings with varying targets raise the flag
  {
    std::vector<LabeledRow> rows;
    for (int i = 0; i < 6; ++i)
      rows.push_back({std::to_string(i), i < 3 ? "a" : "b",
                      {static_cast<double>(i)},
                      {i < 3 ? 1.0 : -1.0, i < 3 ? 0.5 : -0.5}});
    const DegeneracyReport r =
        regression_degeneracy_check(LabeledEmbeddings::from_rows(rows), 1e-6);
    c.check(r.degeneracy_flag, "collapsed fixture did not raise the degeneracy flag");
  }
  // random embeddings do not
  {
    Rng rng(1618);
    std::vector<LabeledRow> rows;
    for (int i = 0; i < 40; ++i) {
      rows.push_back({std::to_string(i), i % 2 ? "a" : "b",
                      {rng.next_unit()},
                      {rng.next_unit() * 2 - 1, rng.next_unit() * 2 - 1}});
    }
    const DegeneracyReport r =
        regression_degeneracy_check(LabeledEmbeddings::from_rows(rows), 1e-6);
    c.check(!r.degeneracy_flag, "random fixture raised the degeneracy flag");
  }
  c.finish();
}

// ---- criterion 12: byte-identical reruns across worker counts ---------------------
void criterion12() {
  Criterion c(12, "simulate reruns byte-identical at --workers 1 and 8", 300.0);
  const char* bin = std::getenv("REPCAP_BIN");
  if (!bin || !*bin) {
    c.check(false, "REPCAP_BIN not set");
    c.finish();
    return;
  }
  const fs::path dir = fs::temp_directory_path() / "repcap_acceptance_cli";
  fs::create_directories(dir);

  std::vector<std::pair<std::string, Json>> configs;
  configs.emplace_back(
      "thm3", Json{{"source", {{"kind", "bernoulli"}, {"p", 0.2}}}, {"n", 12},
                   {"epsilon", 0.3}, {"rates", {0.5, 1.0}}, {"trials", 400}, {"seed", 12}});
  configs.emplace_back(
      "thm4", Json{{"source", {{"kind", "bernoulli"}, {"p", 0.5}}},
                   {"channel", {{"kind", "bsc"}, {"p", 0.11}}}, {"n", 16},
                   {"epsilon", 0.08}, {"rates", {0.25, 0.6}}, {"trials", 400},
                   {"seed", 12}, {"rule", "mismatch"}});
  configs.emplace_back(
      "thm5", Json{{"source", {{"kind", "bernoulli"}, {"p", 0.3}}},
                   {"distortion", {{"kind", "hamming"}}}, {"n", 16}, {"epsilon", 0.12},
                   {"rates", {0.5}}, {"trials", 300}, {"seed", 12},
                   {"target_distortion", 0.1}});
  configs.emplace_back(
      "thm6", Json{{"source", {{"kind", "bernoulli"}, {"p", 0.3}}},
                   {"distortion", {{"kind", "hamming"}}},
                   {"channel", {{"kind", "bsc"}, {"p", 0.11}}}, {"n", 16},
                   {"channel_n", 32}, {"epsilon", 0.12}, {"channel_epsilon", 0.08},
                   {"rates", {0.5}}, {"trials", 300}, {"seed", 12},
                   {"target_distortion", 0.1}});
  configs.emplace_back(
      "thm7", Json{{"delta", 0.0}, {"sigma", 0.1}, {"k_c", 2.0}, {"k_g", 1.5},
                   {"empirical", {{"dim", 8}, {"trials", 5000}, {"seed", 12}}}});

  for (const auto& [theorem, cfg] : configs) {
    const std::string cfg_path = (dir / (theorem + ".json")).string();
    write_file_bytes(cfg_path, cfg.dump());
    const std::string out1 = (dir / (theorem + "_w1.json")).string();
    const std::string out8 = (dir / (theorem + "_w8.json")).string();
    const std::string base =
        std::string(bin) + " simulate " + theorem + " --config " + cfg_path;
    const int rc1 = std::system(
        (base + " --workers 1 --out " + out1 + " >/dev/null 2>&1").c_str());
    const int rc8 = std::system(
        (base + " --workers 8 --out " + out8 + " >/dev/null 2>&1").c_str());
    c.check(rc1 == 0 && rc8 == 0, theorem + ": CLI run failed");
    if (rc1 == 0 && rc8 == 0) {
      c.check(read_file_bytes(out1) == read_file_bytes(out8),
              theorem + ": outputs differ between worker counts");
    }
  }
  fs::remove_all(dir);
  c.finish();
}

}  // namespace

int main() {
  std::printf("repcap acceptance suite\n");
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  criterion10();
  criterion11();
  criterion12();
  if (failures == 0)
    std::printf("all criteria passed\n");
  else
    std::printf("%d criterion(s) failed\n", failures);
  return failures;
}
