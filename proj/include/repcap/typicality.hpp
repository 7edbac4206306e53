#ifndef REPCAP_TYPICALITY_HPP
#define REPCAP_TYPICALITY_HPP

#include <cstdint>
#include <functional>

#include "repcap/sources.hpp"

namespace repcap {

// Membership uses the strict "< epsilon" form of the AEP statement.
bool is_typical(const SequenceSample& seq, const Source& source, double epsilon);
bool is_typical_log2(double log2_prob, std::size_t n, double entropy_rate, double epsilon);

struct TypicalMember {
  std::uint64_t code = 0;  // base-|U| packed symbol indices, first symbol most significant
  double log2_prob = 0.0;
};

struct TypicalSet {
  std::size_t n = 0;
  double epsilon = 0.0;
  double source_entropy_rate = 0.0;
  std::size_t alphabet_size = 0;
  std::vector<TypicalMember> members;  // canonical (lexicographic) order
  double total_prob = 0.0;

  // AEP checks. The first three hold for every n; the last two are
  // asymptotic ("n sufficiently large") and may fail at desk scale.
  bool prob_lower_ok() const;   // P(u) >= 2^{-n(H+eps)} for every member
  bool prob_upper_ok() const;   // P(u) <= 2^{-n(H-eps)} for every member
  bool size_upper_ok() const;   // |A| <= 2^{n(H+eps)}
  bool size_lower_ok() const;   // (1-eps) 2^{n(H-eps)} <= |A|
  bool mass_lower_ok() const;   // Pr[A] > 1 - eps
};

std::uint64_t pack_sequence(const Symbols& symbols, std::size_t alphabet_size);
Symbols unpack_sequence(std::uint64_t code, std::size_t n, std::size_t alphabet_size);

// Exhaustive enumeration; throws EnumerationTooLarge when |U|^n exceeds the cap.
TypicalSet enumerate_typical_set(const Source& source, std::size_t n, double epsilon,
                                 std::uint64_t enumeration_cap = (1ull << 24));

enum class TypicalityRule {
  // |−(1/n)log2 P − H| < ε for the pair and both marginals (the classical
  // log-probability window; the default everywhere).
  kEntropy,
  // |empirical mismatch fraction − E[mismatch]| < ε plus a positive-probability
  // guard; needs positionally comparable alphabets. The statistically robust
  // decoding test at short block lengths.
  kMismatch,
};

// Joint law over (X, V) pairs with the entropies and decode rule baked in.
// Pairing is positional with d = n (identity pairing); d != n is rejected.
class JointTypicalityContext {
 public:
  JointTypicalityContext(JointPmf joint, std::size_t n, double epsilon,
                         TypicalityRule rule = TypicalityRule::kEntropy);

  static JointTypicalityContext from_input_and_channel(
      const Pmf& input, const std::vector<std::vector<double>>& transition,
      const Alphabet& out_alphabet, std::size_t n, double epsilon,
      TypicalityRule rule = TypicalityRule::kEntropy);

  const JointPmf& joint() const { return joint_; }
  std::size_t n() const { return n_; }
  double epsilon() const { return epsilon_; }
  TypicalityRule rule() const { return rule_; }
  double h_row() const { return h_row_; }
  double h_col() const { return h_col_; }
  double h_joint() const { return h_joint_; }
  double expected_mismatch() const { return expected_mismatch_; }
  double mutual_information_bits() const { return h_row_ + h_col_ - h_joint_; }

  bool jointly_typical(const Symbols& x, const Symbols& y) const;

 private:
  JointPmf joint_;
  std::size_t n_;
  double epsilon_;
  TypicalityRule rule_;
  double h_row_, h_col_, h_joint_;
  double expected_mismatch_ = 0.0;
  std::vector<std::vector<double>> log2_joint_;
  std::vector<double> log2_row_, log2_col_;
};

bool is_jointly_typical(const Symbols& x, const Symbols& y,
                        const JointTypicalityContext& ctx);

// A(P_XY | x^n): filter over y-candidates; empty when x itself is not
// marginally typical.
std::vector<std::size_t> conditional_typical_filter(
    const JointTypicalityContext& ctx, const Symbols& x,
    const std::vector<Symbols>& y_candidates);

}  // namespace repcap

#endif
