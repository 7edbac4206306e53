#include "repcap/typicality.hpp"

#include <cmath>
#include <limits>

namespace repcap {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

bool is_typical_log2(double log2_prob, std::size_t n, double entropy_rate, double epsilon) {
  if (epsilon <= 0.0) throw InvalidParams("epsilon must be positive");
  if (std::isinf(log2_prob)) return false;  // zero-probability sequences are never typical
  const double rate = -log2_prob / static_cast<double>(n);
  return std::abs(rate - entropy_rate) < epsilon;
}

bool is_typical(const SequenceSample& seq, const Source& source, double epsilon) {
  return is_typical_log2(seq.log2_prob, seq.symbols.size(), source.entropy_rate(), epsilon);
}

std::uint64_t pack_sequence(const Symbols& symbols, std::size_t alphabet_size) {
  std::uint64_t code = 0;
  for (std::uint32_t s : symbols) code = code * alphabet_size + s;
  return code;
}

Symbols unpack_sequence(std::uint64_t code, std::size_t n, std::size_t alphabet_size) {
  Symbols out(n);
  for (std::size_t i = n; i-- > 0;) {
    out[i] = static_cast<std::uint32_t>(code % alphabet_size);
    code /= alphabet_size;
  }
  return out;
}

TypicalSet enumerate_typical_set(const Source& source, std::size_t n, double epsilon,
                                 std::uint64_t enumeration_cap) {
  if (n < 1) throw InvalidParams("n must be >= 1");
  if (epsilon <= 0.0) throw InvalidParams("epsilon must be positive");
  const std::size_t k = source.alphabet().size();
  double total = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    total *= static_cast<double>(k);
    if (total > static_cast<double>(enumeration_cap))
      throw EnumerationTooLarge("|U|^n exceeds the enumeration cap");
  }

  TypicalSet set;
  set.n = n;
  set.epsilon = epsilon;
  set.source_entropy_rate = source.entropy_rate();
  set.alphabet_size = k;

  // Depth-first walk in lexicographic order; log-probabilities accumulate
  // left to right, matching Source::sample's accumulation exactly.
  Symbols seq(n, 0);
  std::vector<double> prefix_log2(n, 0.0);
  std::size_t depth = 0;
  seq[0] = 0;
  prefix_log2[0] = source.initial_log2(0);
  for (;;) {
    if (depth + 1 == n) {
      const double lp = prefix_log2[depth];
      if (is_typical_log2(lp, n, set.source_entropy_rate, epsilon)) {
        set.members.push_back({pack_sequence(seq, k), lp});
        set.total_prob += std::exp2(lp);
      }
      // advance at the deepest level
      while (true) {
        if (seq[depth] + 1 < k) {
          ++seq[depth];
          prefix_log2[depth] =
              (depth == 0 ? source.initial_log2(seq[0])
                          : prefix_log2[depth - 1] + source.step_log2(seq[depth - 1], seq[depth]));
          break;
        }
        if (depth == 0) return set;
        seq[depth] = 0;
        --depth;
      }
    } else {
      ++depth;
      seq[depth] = 0;
      prefix_log2[depth] = prefix_log2[depth - 1] + source.step_log2(seq[depth - 1], 0);
    }
  }
}

bool TypicalSet::prob_lower_ok() const {
  const double lo = -static_cast<double>(n) * (source_entropy_rate + epsilon);
  for (const auto& m : members)
    if (m.log2_prob < lo) return false;
  return true;
}

bool TypicalSet::prob_upper_ok() const {
  const double hi = -static_cast<double>(n) * (source_entropy_rate - epsilon);
  for (const auto& m : members)
    if (m.log2_prob > hi) return false;
  return true;
}

bool TypicalSet::size_upper_ok() const {
  if (members.empty()) return true;
  return std::log2(static_cast<double>(members.size())) <=
         static_cast<double>(n) * (source_entropy_rate + epsilon);
}

bool TypicalSet::size_lower_ok() const {
  const double bound =
      (1.0 - epsilon) * std::exp2(static_cast<double>(n) * (source_entropy_rate - epsilon));
  return static_cast<double>(members.size()) >= bound;
}

bool TypicalSet::mass_lower_ok() const { return total_prob > 1.0 - epsilon; }

JointTypicalityContext::JointTypicalityContext(JointPmf joint, std::size_t n, double epsilon,
                                               TypicalityRule rule)
    : joint_(std::move(joint)), n_(n), epsilon_(epsilon), rule_(rule) {
  if (n_ < 1) throw InvalidParams("n must be >= 1");
  if (epsilon_ <= 0.0) throw InvalidParams("epsilon must be positive");
  const Pmf pr = joint_.row_marginal();
  const Pmf pc = joint_.col_marginal();
  h_row_ = entropy(pr);
  h_col_ = entropy(pc);
  h_joint_ = joint_entropy(joint_);

  const std::size_t nr = joint_.row_alphabet().size();
  const std::size_t nc = joint_.col_alphabet().size();
  log2_joint_.assign(nr, std::vector<double>(nc, kNegInf));
  for (std::size_t r = 0; r < nr; ++r)
    for (std::size_t c = 0; c < nc; ++c)
      if (joint_.prob(r, c) > 0.0) log2_joint_[r][c] = std::log2(joint_.prob(r, c));
  log2_row_.assign(nr, kNegInf);
  log2_col_.assign(nc, kNegInf);
  for (std::size_t r = 0; r < nr; ++r)
    if (pr.prob(r) > 0.0) log2_row_[r] = std::log2(pr.prob(r));
  for (std::size_t c = 0; c < nc; ++c)
    if (pc.prob(c) > 0.0) log2_col_[c] = std::log2(pc.prob(c));

  if (rule_ == TypicalityRule::kMismatch) {
    if (nr != nc)
      throw InvalidParams("mismatch rule needs positionally comparable alphabets");
    expected_mismatch_ = 0.0;
    for (std::size_t r = 0; r < nr; ++r)
      for (std::size_t c = 0; c < nc; ++c)
        if (r != c) expected_mismatch_ += joint_.prob(r, c);
  }
}

JointTypicalityContext JointTypicalityContext::from_input_and_channel(
    const Pmf& input, const std::vector<std::vector<double>>& transition,
    const Alphabet& out_alphabet, std::size_t n, double epsilon, TypicalityRule rule) {
  std::vector<std::vector<double>> j(input.size(), std::vector<double>(out_alphabet.size()));
  for (std::size_t r = 0; r < input.size(); ++r)
    for (std::size_t c = 0; c < out_alphabet.size(); ++c)
      j[r][c] = input.prob(r) * transition[r][c];
  return JointTypicalityContext(JointPmf(input.alphabet(), out_alphabet, std::move(j)), n,
                                epsilon, rule);
}

bool JointTypicalityContext::jointly_typical(const Symbols& x, const Symbols& y) const {
  if (x.size() != n_ || y.size() != n_)
    throw InvalidParams("sequence lengths do not match the context (d = n pairing)");
  if (rule_ == TypicalityRule::kMismatch) {
    std::size_t mism = 0;
    for (std::size_t t = 0; t < n_; ++t) {
      if (log2_joint_[x[t]][y[t]] == kNegInf) return false;
      if (x[t] != y[t]) ++mism;
    }
    const double frac = static_cast<double>(mism) / static_cast<double>(n_);
    return std::abs(frac - expected_mismatch_) < epsilon_;
  }
  double lj = 0.0, lx = 0.0, ly = 0.0;
  for (std::size_t t = 0; t < n_; ++t) {
    const double j = log2_joint_[x[t]][y[t]];
    if (j == kNegInf) return false;
    lj += j;
    lx += log2_row_[x[t]];
    ly += log2_col_[y[t]];
  }
  const double inv_n = 1.0 / static_cast<double>(n_);
  return std::abs(-lj * inv_n - h_joint_) < epsilon_ &&
         std::abs(-lx * inv_n - h_row_) < epsilon_ &&
         std::abs(-ly * inv_n - h_col_) < epsilon_;
}

bool is_jointly_typical(const Symbols& x, const Symbols& y,
                        const JointTypicalityContext& ctx) {
  return ctx.jointly_typical(x, y);
}

std::vector<std::size_t> conditional_typical_filter(
    const JointTypicalityContext& ctx, const Symbols& x,
    const std::vector<Symbols>& y_candidates) {
  std::vector<std::size_t> out;
  // A(P_XY | x) = empty when x is not marginally typical.
  if (ctx.rule() == TypicalityRule::kEntropy) {
    const Pmf px = ctx.joint().row_marginal();
    double lx = 0.0;
    for (std::uint32_t s : x) {
      if (px.prob(s) <= 0.0) return out;
      lx += std::log2(px.prob(s));
    }
    if (!(std::abs(-lx / static_cast<double>(ctx.n()) - ctx.h_row()) < ctx.epsilon()))
      return out;
  }
  for (std::size_t i = 0; i < y_candidates.size(); ++i)
    if (ctx.jointly_typical(x, y_candidates[i])) out.push_back(i);
  return out;
}

}  // namespace repcap
