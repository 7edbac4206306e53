#include "repcap/sims.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <mutex>
#include <thread>
#include <unordered_set>

#include "repcap/io.hpp"

namespace repcap {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// domain separation tags for derived rng streams
enum : std::uint64_t {
  kTagThm3Cover = 0x7233,
  kTagThm3Trial = 0x7203,
  kTagThm4Codebook = 0x7244,
  kTagThm4Trial = 0x7204,
  kTagThm5Codebook = 0x7255,
  kTagThm5Trial = 0x7205,
  kTagThm6SourceCb = 0x7266,
  kTagThm6ChannelCb = 0x7267,
  kTagThm6Trial = 0x7206,
  kTagThm7Trial = 0x7207,
};

void parallel_for(std::size_t count, std::size_t workers,
                  const std::function<void(std::size_t)>& fn) {
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, count == 0 ? std::size_t{1} : count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::mutex error_mu;
  const std::size_t chunk = (count + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t lo = w * chunk;
    const std::size_t hi = std::min(count, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&, lo, hi] {
      try {
        for (std::size_t i = lo; i < hi; ++i) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

double get_num(const Json& j, const std::string& key) {
  if (!j.contains(key)) throw InvalidParams("config missing field '" + key + "'");
  return j.at(key).get<double>();
}

std::uint64_t codeword_count(std::size_t n, double rate) {
  // 2^{nR} rounded to the nearest integer, at least 1
  const double m = std::exp2(static_cast<double>(n) * rate);
  if (m >= 9e15) throw InvalidParams("2^{nR} too large to simulate");
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::llround(m)));
}

// Default grid brackets the relevant threshold so the finite-n transition is
// visible on both sides.
std::vector<double> default_rate_grid(double threshold) {
  return {0.5 * threshold, 0.75 * threshold, 1.25 * threshold, 1.5 * threshold};
}

std::vector<double> validated_rates(Json& cfg, double threshold) {
  if (!cfg.contains("rates")) cfg["rates"] = default_rate_grid(threshold);
  if (!cfg.at("rates").is_array() || cfg.at("rates").empty())
    throw InvalidParams("config needs a non-empty 'rates' array");
  std::vector<double> rates = cfg.at("rates").get<std::vector<double>>();
  for (std::size_t i = 1; i < rates.size(); ++i)
    if (!(rates[i] > rates[i - 1]))
      throw InvalidParams("rate grid must be strictly increasing");
  return rates;
}

double resolved_epsilon(Json& cfg, std::size_t n) {
  if (!cfg.contains("epsilon")) cfg["epsilon"] = n <= 24 ? 0.1 : 0.05;
  return get_num(cfg, "epsilon");
}

const IidSource& require_iid(const Source& src, const char* what) {
  const auto* iid = dynamic_cast<const IidSource*>(&src);
  if (!iid) throw InvalidParams(std::string(what) + " requires an i.i.d. source");
  return *iid;
}

// Precomputed tables for the lazy codebook scan (no per-candidate allocation).
struct ScanTables {
  TypicalityRule rule = TypicalityRule::kEntropy;
  double eps = 0.0;
  std::size_t n = 0;
  // entropy rule
  double h_joint = 0.0, h_row = 0.0, h_col = 0.0;
  std::vector<std::vector<double>> l2joint;  // log2 p(a,b); -inf disallowed
  std::vector<double> l2row, l2col;
  // mismatch rule
  std::vector<char> pass_k;
  int max_pass_k = -1;
  double expected_mismatch = 0.0;

  static ScanTables build(const JointTypicalityContext& ctx) {
    ScanTables tb;
    tb.rule = ctx.rule();
    tb.eps = ctx.epsilon();
    tb.n = ctx.n();
    tb.h_joint = ctx.h_joint();
    tb.h_row = ctx.h_row();
    tb.h_col = ctx.h_col();
    const auto& joint = ctx.joint();
    const Pmf pr = joint.row_marginal();
    const Pmf pc = joint.col_marginal();
    const std::size_t nr = pr.size(), nc = pc.size();
    tb.l2joint.assign(nr, std::vector<double>(nc, kNegInf));
    for (std::size_t a = 0; a < nr; ++a)
      for (std::size_t b = 0; b < nc; ++b)
        if (joint.prob(a, b) > 0.0) tb.l2joint[a][b] = std::log2(joint.prob(a, b));
    tb.l2row.assign(nr, kNegInf);
    for (std::size_t a = 0; a < nr; ++a)
      if (pr.prob(a) > 0.0) tb.l2row[a] = std::log2(pr.prob(a));
    tb.l2col.assign(nc, kNegInf);
    for (std::size_t b = 0; b < nc; ++b)
      if (pc.prob(b) > 0.0) tb.l2col[b] = std::log2(pc.prob(b));
    if (tb.rule == TypicalityRule::kMismatch) {
      tb.expected_mismatch = ctx.expected_mismatch();
      tb.pass_k.assign(tb.n + 1, 0);
      for (std::size_t k = 0; k <= tb.n; ++k) {
        const double frac = static_cast<double>(k) / static_cast<double>(tb.n);
        if (std::abs(frac - tb.expected_mismatch) < tb.eps) {
          tb.pass_k[k] = 1;
          tb.max_pass_k = static_cast<int>(k);
        }
      }
    }
    return tb;
  }

  // y-marginal condition; constant across candidates for a fixed y.
  bool y_marginal_ok(const Symbols& y) const {
    if (rule == TypicalityRule::kMismatch) return true;
    double ly = 0.0;
    for (std::uint32_t b : y) {
      if (l2col[b] == kNegInf) return false;
      ly += l2col[b];
    }
    return std::abs(-ly / static_cast<double>(n) - h_col) < eps;
  }

  // Regenerates candidate `rng`'s codeword symbol by symbol and tests the
  // pair condition against y, bailing out as soon as it cannot pass.
  bool candidate_passes(const Source& src, Rng rng, const Symbols& y) const {
    if (rule == TypicalityRule::kMismatch) {
      int k = 0;
      std::uint32_t prev = 0;
      for (std::size_t t = 0; t < n; ++t) {
        const std::uint32_t s = t == 0 ? src.draw_initial(rng) : src.draw_step(prev, rng);
        prev = s;
        if (l2joint[s][y[t]] == kNegInf) return false;
        if (s != y[t] && ++k > max_pass_k) return false;
      }
      return pass_k[static_cast<std::size_t>(k)] != 0;
    }
    double lj = 0.0, lx = 0.0;
    std::uint32_t prev = 0;
    for (std::size_t t = 0; t < n; ++t) {
      const std::uint32_t s = t == 0 ? src.draw_initial(rng) : src.draw_step(prev, rng);
      prev = s;
      const double j = l2joint[s][y[t]];
      if (j == kNegInf) return false;
      lj += j;
      lx += l2row[s];
    }
    const double inv_n = 1.0 / static_cast<double>(n);
    return std::abs(-lj * inv_n - h_joint) < eps && std::abs(-lx * inv_n - h_row) < eps;
  }
};

Json base_report(const std::string& theorem, const Json& resolved_config) {
  Json rep = Json::object();
  rep["theorem"] = theorem;
  rep["config"] = resolved_config;
  rep["ci_method"] = "wilson95";
  rep["warnings"] = Json::array();
  return rep;
}

Pmf pmf_from_vector(const std::vector<double>& probs, const std::string& prefix = "") {
  return Pmf(Alphabet::indexed(probs.size(), prefix), probs);
}

}  // namespace

double wilson_half_width(double p_hat, std::size_t n) {
  if (n == 0) return 0.0;
  const double z = 1.959963984540054;
  const double nn = static_cast<double>(n);
  const double denom = 1.0 + z * z / nn;
  return (z * std::sqrt(p_hat * (1.0 - p_hat) / nn + z * z / (4.0 * nn * nn))) / denom;
}

TypicalityRule parse_rule(const std::string& name) {
  if (name == "entropy") return TypicalityRule::kEntropy;
  if (name == "mismatch") return TypicalityRule::kMismatch;
  throw InvalidParams("unknown typicality rule '" + name + "'");
}

std::unique_ptr<Source> make_source(const Json& spec) {
  const std::string kind = spec.value("kind", "");
  if (kind == "bernoulli") {
    return std::make_unique<IidSource>(Pmf::bernoulli(get_num(spec, "p")));
  }
  if (kind == "iid") {
    auto probs = spec.at("probs").get<std::vector<double>>();
    if (spec.contains("symbols"))
      return std::make_unique<IidSource>(
          Pmf(Alphabet(spec.at("symbols").get<std::vector<std::string>>()), probs));
    return std::make_unique<IidSource>(pmf_from_vector(probs));
  }
  if (kind == "markov") {
    if (spec.contains("flip"))
      return std::make_unique<MarkovSource>(MarkovSource::symmetric_binary(get_num(spec, "flip")));
    auto t = spec.at("transition").get<std::vector<std::vector<double>>>();
    Alphabet a = spec.contains("symbols")
                     ? Alphabet(spec.at("symbols").get<std::vector<std::string>>())
                     : Alphabet::indexed(t.size());
    return std::make_unique<MarkovSource>(std::move(a), std::move(t));
  }
  if (kind == "csv") {
    const std::string path = spec.at("path").get<std::string>();
    if (spec.value("markov", false))
      return std::make_unique<MarkovSource>(read_markov_csv(path));
    return std::make_unique<IidSource>(read_pmf_csv(path));
  }
  throw InvalidParams("unknown source kind '" + kind + "'");
}

DiscreteChannel make_channel(const Json& spec) {
  const std::string kind = spec.value("kind", "");
  if (kind == "bsc") return make_binary_symmetric_channel(get_num(spec, "p"));
  if (kind == "identity")
    return make_identity_channel(spec.at("size").get<std::size_t>());
  if (kind == "modular")
    return make_modular_additive_channel(spec.at("m").get<std::size_t>(),
                                         spec.at("noise").get<std::size_t>(),
                                         spec.value("disjoint", false));
  if (kind == "qawgn")
    return make_quantized_awgn_channel(
        get_num(spec, "snr"), spec.at("levels").get<std::size_t>(),
        spec.value("amplitude", 1.0), spec.value("bins", std::size_t{801}),
        spec.value("tail", 6.0));
  if (kind == "csv") return read_channel_csv(spec.at("path").get<std::string>());
  throw InvalidParams("unknown channel kind '" + kind + "'");
}

DistortionMeasure make_distortion(const Json& spec, const Alphabet& v_alphabet) {
  const std::string kind = spec.value("kind", "hamming");
  if (kind == "hamming") return DistortionMeasure::hamming(v_alphabet);
  if (kind == "csv") return read_distortion_csv(spec.at("path").get<std::string>());
  throw InvalidParams("unknown distortion kind '" + kind + "'");
}

double theorem7_bound(double delta, double sigma, double k_c, double k_g) {
  if (delta < 0.0 || sigma < 0.0 || k_c < 0.0 || k_g < 0.0)
    throw InvalidParams("theorem 7 inputs must be nonnegative");
  return delta + sigma * k_c * k_g;
}

double slope_for_distortion(const Pmf& source, const DistortionMeasure& measure,
                            double target_distortion) {
  // D(slope) is continuous and nondecreasing toward slope -> 0-
  double lo = -60.0, hi = -1e-6;
  const auto dist_at = [&](double s) {
    return blahut_arimoto_rd(source, measure, s).distortion;
  };
  if (dist_at(lo) > target_distortion)
    throw InvalidParams("target distortion below the achievable floor");
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (dist_at(mid) <= target_distortion)
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

// ---------------------------------------------------------------- theorem 3

Json run_theorem3(const Json& config, std::size_t workers) {
  Json cfg = config;
  const std::size_t n = static_cast<std::size_t>(get_num(cfg, "n"));
  const double eps = resolved_epsilon(cfg, n);
  const std::size_t trials = static_cast<std::size_t>(get_num(cfg, "trials"));
  const std::uint64_t seed = cfg.at("seed").get<std::uint64_t>();
  const std::uint64_t cap = cfg.value("enumeration_cap", std::uint64_t{1} << 24);
  auto source = make_source(cfg.at("source"));
  if (trials < 1) throw InvalidParams("trials must be >= 1");
  const double h = source->entropy_rate();
  const std::vector<double> rates = validated_rates(cfg, h);

  const TypicalSet set = enumerate_typical_set(*source, n, eps, cap);

  Json rep = base_report("thm3", cfg);
  rep["thresholds"] = {{"source_entropy", h}};
  rep["typical_set"] = {{"size", set.members.size()}, {"mass", set.total_prob}};
  Json records = Json::array();

  for (std::size_t ri = 0; ri < rates.size(); ++ri) {
    const double rate = rates[ri];
    const std::uint64_t capacity = codeword_count(n, rate);
    const bool feasible = set.members.size() <= capacity;

    // cover: whole typical set when it fits, else a seeded uniform subset
    std::vector<std::uint32_t> chosen;  // indices into set.members
    double covered_mass = 0.0;
    std::unordered_set<std::uint64_t> covered_codes;
    if (feasible) {
      covered_mass = set.total_prob;
    } else {
      std::vector<std::uint32_t> idx(set.members.size());
      for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<std::uint32_t>(i);
      Rng rng = Rng::stream(seed, kTagThm3Cover, ri);
      for (std::uint64_t i = 0; i < capacity; ++i) {
        const std::uint64_t j = i + rng.below(idx.size() - i);
        std::swap(idx[i], idx[j]);
        chosen.push_back(idx[i]);
      }
      covered_codes.reserve(chosen.size() * 2);
      for (std::uint32_t i : chosen) {
        covered_mass += std::exp2(set.members[i].log2_prob);
        covered_codes.insert(set.members[i].code);
      }
    }
    const double oracle_error = 1.0 - covered_mass;

    std::vector<char> errors(trials);
    parallel_for(trials, workers, [&](std::size_t t) {
      Rng rng = Rng::stream(seed, kTagThm3Trial, ri, t);
      const SequenceSample x = source->sample(n, rng);
      bool representable = is_typical(x, *source, eps);
      if (representable && !feasible)
        representable =
            covered_codes.count(pack_sequence(x.symbols, source->alphabet().size())) != 0;
      errors[t] = representable ? 0 : 1;
    });
    std::size_t nerr = 0;
    for (char e : errors) nerr += e;
    const double err = static_cast<double>(nerr) / static_cast<double>(trials);

    records.push_back({{"rate", rate},
                       {"embedding_bits", static_cast<double>(n) * rate},
                       {"codebook_capacity", capacity},
                       {"feasible", feasible},
                       {"error_rate", err},
                       {"ci_half_width", wilson_half_width(err, trials)},
                       {"oracle_error", oracle_error},
                       {"achievable_regime", rate >= h},
                       {"converse_regime", rate < h - eps}});
  }
  rep["records"] = std::move(records);
  return rep;
}

// ---------------------------------------------------------------- theorem 4

Json run_theorem4(const Json& config, std::size_t workers) {
  Json cfg = config;
  const std::size_t n = static_cast<std::size_t>(get_num(cfg, "n"));
  const double eps = resolved_epsilon(cfg, n);
  const std::size_t trials = static_cast<std::size_t>(get_num(cfg, "trials"));
  const std::uint64_t seed = cfg.at("seed").get<std::uint64_t>();
  const TypicalityRule rule = parse_rule(cfg.value("rule", "entropy"));
  cfg["rule"] = rule == TypicalityRule::kEntropy ? "entropy" : "mismatch";

  auto source = make_source(cfg.at("source"));
  const IidSource& input = require_iid(*source, "theorem 4");
  DiscreteChannel channel = make_channel(cfg.at("channel"));
  if (!(input.pmf().alphabet().size() == channel.input_alphabet().size()))
    throw InvalidParams("input pmf does not match channel input alphabet");

  const JointTypicalityContext ctx = JointTypicalityContext::from_input_and_channel(
      input.pmf(), channel.transition(), channel.output_alphabet(), n, eps, rule);
  const ScanTables tables = ScanTables::build(ctx);

  const double mi = channel_mutual_information(input.pmf(), channel);
  const std::vector<double> rates = validated_rates(cfg, mi);
  const CapacityResult cap = blahut_arimoto_capacity(channel);
  const double hy = entropy(channel.induced_joint(input.pmf()).col_marginal());

  Json rep = base_report("thm4", cfg);
  rep["thresholds"] = {{"mutual_information", mi},
                       {"capacity", cap.capacity_bits},
                       {"output_entropy", hy}};
  Json records = Json::array();

  for (std::size_t ri = 0; ri < rates.size(); ++ri) {
    const double rate = rates[ri];
    const std::uint64_t m = codeword_count(n, rate);

    // outcome per trial: 0 success, 1..3 = error case
    std::vector<std::uint8_t> outcome(trials);
    parallel_for(trials, workers, [&](std::size_t t) {
      Rng rng = Rng::stream(seed, kTagThm4Trial, ri, t);
      const std::uint64_t w = 1 + rng.below(m);
      Rng wrng = Rng::stream(seed, kTagThm4Codebook, ri, w);
      const SequenceSample xw = source->sample(n, wrng);
      const Symbols y = channel.transmit(xw.symbols, rng);

      std::uint64_t what = 1;  // decoder convention: fallback index 1
      if (tables.y_marginal_ok(y)) {
        for (std::uint64_t i = 1; i <= m; ++i) {
          if (tables.candidate_passes(*source, Rng::stream(seed, kTagThm4Codebook, ri, i), y)) {
            what = i;
            break;
          }
        }
      }
      if (what == w) {
        outcome[t] = 0;
      } else if (!is_typical(xw, *source, eps)) {
        outcome[t] = 1;  // codeword atypical
      } else if (!ctx.jointly_typical(xw.symbols, y)) {
        outcome[t] = 2;  // true pair atypical
      } else {
        outcome[t] = 3;  // impostor with a smaller index
      }
    });

    std::size_t c1 = 0, c2 = 0, c3 = 0;
    for (std::uint8_t o : outcome) {
      c1 += o == 1;
      c2 += o == 2;
      c3 += o == 3;
    }
    const std::size_t nerr = c1 + c2 + c3;
    const double err = static_cast<double>(nerr) / static_cast<double>(trials);
    const double union_bound = std::min(
        1.0, static_cast<double>(m - 1) *
                 std::exp2(-static_cast<double>(n) * (mi - 2.0 * eps * hy)));

    records.push_back({{"rate", rate},
                       {"num_messages", m},
                       {"error_rate", err},
                       {"ci_half_width", wilson_half_width(err, trials)},
                       {"errors", nerr},
                       {"case_atypical_codeword", c1},
                       {"case_pair_atypical", c2},
                       {"case_impostor", c3},
                       {"case_rate_atypical_codeword",
                        static_cast<double>(c1) / static_cast<double>(trials)},
                       {"case_rate_pair_atypical",
                        static_cast<double>(c2) / static_cast<double>(trials)},
                       {"case_rate_impostor",
                        static_cast<double>(c3) / static_cast<double>(trials)},
                       {"impostor_union_bound", union_bound}});
  }
  rep["records"] = std::move(records);
  return rep;
}

// ---------------------------------------------------------------- theorem 5

namespace {

struct SourceCodeSetup {
  Pmf source;
  DistortionMeasure measure;
  RdPoint rd;
  Pmf reproduction_marginal;
  double slope = 0.0;
};

SourceCodeSetup source_code_setup(const Json& cfg, const Source& src) {
  const IidSource& iid = require_iid(src, "rate-distortion simulation");
  SourceCodeSetup s{iid.pmf(), make_distortion(cfg.value("distortion", Json{{"kind", "hamming"}}),
                                               iid.pmf().alphabet()),
                    RdPoint{}, Pmf::bernoulli(0.5), 0.0};
  if (cfg.contains("slope"))
    s.slope = cfg.at("slope").get<double>();
  else if (cfg.contains("target_distortion"))
    s.slope = slope_for_distortion(s.source, s.measure, get_num(cfg, "target_distortion"));
  else
    throw InvalidParams("config needs 'slope' or 'target_distortion'");
  s.rd = blahut_arimoto_rd(s.source, s.measure, s.slope);
  s.reproduction_marginal =
      Pmf(s.measure.vhat_alphabet(), test_channel_output_marginal(s.source, s.rd.test_channel));
  return s;
}

JointPmf source_reproduction_joint(const SourceCodeSetup& s) {
  std::vector<std::vector<double>> j(s.source.size(),
                                     std::vector<double>(s.measure.vhat_alphabet().size()));
  for (std::size_t x = 0; x < s.source.size(); ++x)
    for (std::size_t v = 0; v < j[x].size(); ++v)
      j[x][v] = s.source.prob(x) * s.rd.test_channel[x][v];
  return JointPmf(s.source.alphabet(), s.measure.vhat_alphabet(), std::move(j));
}

// Jointly typical candidate with minimum distortion (ties: smallest index);
// falls back to the minimum-distortion codeword when no candidate passes.
struct EncodeOutcome {
  std::uint64_t index = 0;  // 1-based
  double distortion = 0.0;
  bool hit = false;  // a jointly typical candidate existed
};

EncodeOutcome encode_to_codebook(const Symbols& x, const std::vector<Symbols>& codebook,
                                 const JointTypicalityContext& ctx,
                                 const DistortionMeasure& measure) {
  const std::size_t n = x.size();
  EncodeOutcome best_hit, best_any;
  best_hit.distortion = best_any.distortion = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < codebook.size(); ++i) {
    const Symbols& v = codebook[i];
    double d = 0.0;
    for (std::size_t t = 0; t < n; ++t) d += measure(x[t], v[t]);
    d /= static_cast<double>(n);
    if (d < best_any.distortion) {
      best_any.index = i + 1;
      best_any.distortion = d;
    }
    if (ctx.jointly_typical(x, v) && d < best_hit.distortion) {
      best_hit.index = i + 1;
      best_hit.distortion = d;
      best_hit.hit = true;
    }
  }
  return best_hit.hit ? best_hit : best_any;
}

}  // namespace

Json run_theorem5(const Json& config, std::size_t workers) {
  Json cfg = config;
  const std::size_t n = static_cast<std::size_t>(get_num(cfg, "n"));
  const double eps = resolved_epsilon(cfg, n);
  const std::size_t trials = static_cast<std::size_t>(get_num(cfg, "trials"));
  const std::uint64_t seed = cfg.at("seed").get<std::uint64_t>();
  const TypicalityRule rule = parse_rule(cfg.value("rule", "entropy"));
  cfg["rule"] = rule == TypicalityRule::kEntropy ? "entropy" : "mismatch";

  auto source = make_source(cfg.at("source"));
  const SourceCodeSetup setup = source_code_setup(cfg, *source);
  const std::vector<double> rates = validated_rates(cfg, setup.rd.rate);
  const JointTypicalityContext ctx(source_reproduction_joint(setup), n, eps, rule);
  const IidSource reproduction(setup.reproduction_marginal);

  Json rep = base_report("thm5", cfg);
  rep["thresholds"] = {{"rd_rate", setup.rd.rate},
                       {"rd_distortion", setup.rd.distortion},
                       {"slope", setup.slope},
                       {"source_entropy", entropy(setup.source)}};
  {
    Json curve = Json::array();
    for (const RdPoint& p : rd_curve(setup.source, setup.measure, 17))
      curve.push_back({{"distortion", p.distortion}, {"rate", p.rate}});
    rep["rd_curve"] = std::move(curve);
  }

  Json records = Json::array();
  for (std::size_t ri = 0; ri < rates.size(); ++ri) {
    const double rate = rates[ri];
    const std::uint64_t m = codeword_count(n, rate);
    if (m > (std::uint64_t{1} << 26))
      throw InvalidParams("theorem 5 codebook too large to materialize");
    std::vector<Symbols> codebook(m);
    for (std::uint64_t i = 0; i < m; ++i) {
      Rng rng = Rng::stream(seed, kTagThm5Codebook, ri, i + 1);
      codebook[i] = reproduction.sample(n, rng).symbols;
    }

    struct Outcome {
      double distortion = 0.0;
      std::uint8_t event = 0;  // 1 = x atypical, 2 = no candidate, 3 = covered
    };
    std::vector<Outcome> outcomes(trials);
    parallel_for(trials, workers, [&](std::size_t t) {
      Rng rng = Rng::stream(seed, kTagThm5Trial, ri, t);
      const SequenceSample x = source->sample(n, rng);
      const EncodeOutcome enc = encode_to_codebook(x.symbols, codebook, ctx, setup.measure);
      Outcome o;
      o.distortion = enc.distortion;
      if (!is_typical(x, *source, eps))
        o.event = 1;
      else if (!enc.hit)
        o.event = 2;
      else
        o.event = 3;
      outcomes[t] = o;
    });

    double total_d = 0.0;
    std::size_t e1 = 0, e2 = 0, e3 = 0;
    double d1 = 0.0, d2 = 0.0, d3 = 0.0;
    for (const Outcome& o : outcomes) {
      total_d += o.distortion;
      if (o.event == 1) {
        ++e1;
        d1 += o.distortion;
      } else if (o.event == 2) {
        ++e2;
        d2 += o.distortion;
      } else {
        ++e3;
        d3 += o.distortion;
      }
    }
    const double mean_d = total_d / static_cast<double>(trials);
    double var = 0.0;
    for (const Outcome& o : outcomes) var += (o.distortion - mean_d) * (o.distortion - mean_d);
    var /= static_cast<double>(trials);

    records.push_back(
        {{"rate", rate},
         {"num_codewords", m},
         {"mean_distortion", mean_d},
         {"distortion_ci_half_width",
          1.959963984540054 * std::sqrt(var / static_cast<double>(trials))},
         {"event_rate_atypical_source", static_cast<double>(e1) / static_cast<double>(trials)},
         {"event_rate_no_candidate", static_cast<double>(e2) / static_cast<double>(trials)},
         {"event_rate_covered", static_cast<double>(e3) / static_cast<double>(trials)},
         {"event_counts", {e1, e2, e3}},
         {"mean_distortion_by_event",
          {e1 ? d1 / e1 : 0.0, e2 ? d2 / e2 : 0.0, e3 ? d3 / e3 : 0.0}}});
  }
  rep["records"] = std::move(records);
  return rep;
}

// ---------------------------------------------------------------- theorem 6

Json run_theorem6(const Json& config, std::size_t workers) {
  Json cfg = config;
  const std::size_t n = static_cast<std::size_t>(get_num(cfg, "n"));
  const double eps = resolved_epsilon(cfg, n);
  const std::size_t trials = static_cast<std::size_t>(get_num(cfg, "trials"));
  const std::uint64_t seed = cfg.at("seed").get<std::uint64_t>();
  const std::size_t channel_n =
      cfg.contains("channel_n") ? static_cast<std::size_t>(get_num(cfg, "channel_n")) : n;
  const double channel_eps =
      cfg.contains("channel_epsilon") ? get_num(cfg, "channel_epsilon") : eps;
  const TypicalityRule source_rule = parse_rule(cfg.value("source_rule", "entropy"));
  const TypicalityRule channel_rule = parse_rule(cfg.value("channel_rule", "mismatch"));
  const double success_margin = cfg.value("success_margin", 0.07);
  cfg["channel_n"] = channel_n;
  cfg["channel_epsilon"] = channel_eps;
  cfg["source_rule"] = source_rule == TypicalityRule::kEntropy ? "entropy" : "mismatch";
  cfg["channel_rule"] = channel_rule == TypicalityRule::kEntropy ? "entropy" : "mismatch";
  cfg["success_margin"] = success_margin;

  auto source = make_source(cfg.at("source"));
  const SourceCodeSetup setup = source_code_setup(cfg, *source);
  const std::vector<double> rates = validated_rates(cfg, setup.rd.rate);
  const double target_d = setup.rd.distortion;
  DiscreteChannel channel = make_channel(cfg.at("channel"));
  const Pmf channel_input =
      cfg.contains("channel_input")
          ? Pmf(channel.input_alphabet(), cfg.at("channel_input").get<std::vector<double>>())
          : Pmf::uniform(channel.input_alphabet());
  const IidSource channel_input_source(channel_input);
  const IidSource reproduction(setup.reproduction_marginal);

  const JointTypicalityContext src_ctx(source_reproduction_joint(setup), n, eps, source_rule);
  const JointTypicalityContext ch_ctx = JointTypicalityContext::from_input_and_channel(
      channel_input, channel.transition(), channel.output_alphabet(), channel_n, channel_eps,
      channel_rule);

  const double i_xv = setup.rd.rate;
  const double i_xy = channel_mutual_information(channel_input, channel);
  const CapacityResult cap = blahut_arimoto_capacity(channel);

  Json rep = base_report("thm6", cfg);
  rep["thresholds"] = {{"rd_rate", i_xv},
                       {"rd_distortion", target_d},
                       {"channel_mutual_information", i_xy},
                       {"capacity", cap.capacity_bits}};
  Json records = Json::array();

  for (std::size_t ri = 0; ri < rates.size(); ++ri) {
    const double rate = rates[ri];
    const std::uint64_t m = codeword_count(n, rate);
    if (m > (std::uint64_t{1} << 22))
      throw InvalidParams("theorem 6 codebooks too large to materialize");

    std::vector<Symbols> source_cb(m), channel_cb(m);
    for (std::uint64_t i = 0; i < m; ++i) {
      Rng r1 = Rng::stream(seed, kTagThm6SourceCb, ri, i + 1);
      source_cb[i] = reproduction.sample(n, r1).symbols;
      Rng r2 = Rng::stream(seed, kTagThm6ChannelCb, ri, i + 1);
      channel_cb[i] = channel_input_source.sample(channel_n, r2).symbols;
    }

    struct Outcome {
      double distortion = 0.0;
      std::uint32_t w = 0;
      bool channel_error = false;
    };
    std::vector<Outcome> outcomes(trials);
    parallel_for(trials, workers, [&](std::size_t t) {
      Rng rng = Rng::stream(seed, kTagThm6Trial, ri, t);
      const SequenceSample x = source->sample(n, rng);
      const EncodeOutcome enc = encode_to_codebook(x.symbols, source_cb, src_ctx, setup.measure);
      const std::uint64_t w = enc.index;
      const Symbols y = channel.transmit(channel_cb[w - 1], rng);
      const DecodeResult dec = joint_typicality_decode(y, channel_cb, ch_ctx);
      const Symbols& vhat = source_cb[dec.index - 1];
      double d = 0.0;
      for (std::size_t k = 0; k < n; ++k) d += setup.measure(x.symbols[k], vhat[k]);
      outcomes[t] = Outcome{d / static_cast<double>(n), static_cast<std::uint32_t>(w),
                            dec.index != w};
    });

    double total_d = 0.0;
    std::size_t ch_err = 0;
    std::vector<std::vector<double>> embeddings;
    std::unordered_set<std::uint32_t> used;
    const std::size_t q_dim = static_cast<std::size_t>(std::ceil(std::log2(
                                  static_cast<double>(m) + 1.0)));
    for (const Outcome& o : outcomes) {
      total_d += o.distortion;
      ch_err += o.channel_error;
      if (used.insert(o.w).second) {
        std::vector<double> z(q_dim, 0.0);
        for (std::size_t b = 0; b < q_dim; ++b) z[b] = (o.w >> b) & 1u ? 1.0 : 0.0;
        embeddings.push_back(std::move(z));
      }
    }
    const double mean_d = total_d / static_cast<double>(trials);
    const SupportAudit audit = effective_support_audit(embeddings);
    const double support_rate = audit.q_tilde / static_cast<double>(n);
    const bool success = mean_d <= target_d + success_margin;
    const double ch_err_rate = static_cast<double>(ch_err) / static_cast<double>(trials);

    records.push_back({{"rate", rate},
                       {"num_messages", m},
                       {"mean_distortion", mean_d},
                       {"channel_error_rate", ch_err_rate},
                       {"channel_error_ci_half_width", wilson_half_width(ch_err_rate, trials)},
                       {"distinct_embeddings", audit.distinct_nonzero_count},
                       {"effective_support_bits", audit.q_tilde},
                       {"support_rate", support_rate},
                       {"success", success},
                       {"sandwich_ok", i_xv < support_rate && support_rate < i_xy}});
  }
  rep["records"] = std::move(records);
  return rep;
}

// ---------------------------------------------------------------- theorem 7

namespace {

// Exactly orthogonal rotation assembled from seeded Givens rotations.
std::vector<std::vector<double>> seeded_rotation(std::size_t dim, Rng& rng) {
  std::vector<std::vector<double>> r(dim, std::vector<double>(dim, 0.0));
  for (std::size_t i = 0; i < dim; ++i) r[i][i] = 1.0;
  const std::size_t sweeps = 3 * dim;
  for (std::size_t s = 0; s < sweeps; ++s) {
    const std::size_t i = rng.below(dim);
    std::size_t j = rng.below(dim - 1);
    if (j >= i) ++j;
    const double theta = rng.next_unit() * 6.283185307179586;
    const double c = std::cos(theta), sn = std::sin(theta);
    for (std::size_t col = 0; col < dim; ++col) {
      const double a = r[i][col], b = r[j][col];
      r[i][col] = c * a - sn * b;
      r[j][col] = sn * a + c * b;
    }
  }
  return r;
}

std::vector<double> matvec(const std::vector<std::vector<double>>& m,
                           const std::vector<double>& v) {
  std::vector<double> out(m.size(), 0.0);
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) out[i] += m[i][j] * v[j];
  return out;
}

double vec_norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

Json run_theorem7(const Json& config) {
  Json cfg = config;
  const double delta = get_num(cfg, "delta");
  const double sigma = get_num(cfg, "sigma");
  const double k_c = get_num(cfg, "k_c");
  const double k_g = get_num(cfg, "k_g");
  const double bound = theorem7_bound(delta, sigma, k_c, k_g);

  Json rep = base_report("thm7", cfg);
  rep["bound"] = bound;

  if (cfg.contains("empirical")) {
    const Json& emp = cfg.at("empirical");
    const std::size_t dim = emp.at("dim").get<std::size_t>();
    const std::size_t trials = emp.at("trials").get<std::size_t>();
    const std::uint64_t seed = emp.at("seed").get<std::uint64_t>();
    if (dim < 2 || trials < 1) throw InvalidParams("empirical spec needs dim >= 2, trials >= 1");

    // encoder F = k_c * R1 and decoder G = k_g * R2; operator norms are the
    // scales exactly, so the bound is tight along any direction
    Rng mr = Rng::stream(seed, 0x7251);
    auto r1 = seeded_rotation(dim, mr);
    auto r2 = seeded_rotation(dim, mr);
    auto apply = [&](const std::vector<double>& u) {
      std::vector<double> z = matvec(r1, u);
      for (auto& v : z) v *= k_c;
      std::vector<double> out = matvec(r2, z);
      for (auto& v : out) v *= k_g;
      return out;
    };

    double max_loss = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
      Rng rng = Rng::stream(seed, kTagThm7Trial, t);
      // perturbation with ||y - x|| <= sigma: uniform direction, radius
      // sigma * u^(1/dim)
      std::vector<double> u(dim);
      for (std::size_t i = 0; i < dim; ++i) {
        const double a = rng.next_unit(), b = rng.next_unit();
        u[i] = std::sqrt(-2.0 * std::log(1.0 - a)) * std::cos(6.283185307179586 * b);
      }
      const double norm_u = vec_norm(u);
      const double radius = sigma * std::pow(rng.next_unit(), 1.0 / static_cast<double>(dim));
      for (auto& v : u) v *= radius / (norm_u > 0.0 ? norm_u : 1.0);
      max_loss = std::max(max_loss, delta + vec_norm(apply(u)));
    }

    // adversarial perturbation aligned with the composed map's top singular
    // direction (any direction for scaled rotations)
    std::vector<double> aligned(dim, 0.0);
    aligned[0] = sigma;
    const double aligned_loss = delta + vec_norm(apply(aligned));

    rep["empirical"] = {{"dim", dim},
                        {"trials", trials},
                        {"max_loss", max_loss},
                        {"max_ratio", bound > 0.0 ? max_loss / bound : 0.0},
                        {"aligned_loss", aligned_loss},
                        {"aligned_ratio", bound > 0.0 ? aligned_loss / bound : 0.0},
                        {"bound_exceeded", max_loss > bound + 1e-12}};
  }
  return rep;
}

Json run_experiment(const Json& config, std::size_t workers) {
  const std::string theorem = config.value("theorem", "");
  if (theorem == "thm3") return run_theorem3(config, workers);
  if (theorem == "thm4") return run_theorem4(config, workers);
  if (theorem == "thm5") return run_theorem5(config, workers);
  if (theorem == "thm6") return run_theorem6(config, workers);
  if (theorem == "thm7") return run_theorem7(config);
  throw InvalidParams("unknown theorem '" + theorem + "' (expected thm3..thm7)");
}

}  // namespace repcap
