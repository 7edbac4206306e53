#ifndef REPCAP_EMBEDDING_HPP
#define REPCAP_EMBEDDING_HPP

#include <optional>
#include <unordered_map>

#include "repcap/typicality.hpp"

namespace repcap {

// q coordinates of b bits each; total budget Q_z = q*b bits.
struct EmbeddingSpace {
  std::size_t q = 0;
  std::size_t bits_per_coord = 0;

  EmbeddingSpace(std::size_t q_, std::size_t b_) : q(q_), bits_per_coord(b_) {
    if (q < 1 || bits_per_coord < 1)
      throw InvalidParams("embedding space needs q >= 1 and b >= 1");
  }
  double capacity_bits() const {
    return static_cast<double>(q) * static_cast<double>(bits_per_coord);
  }
};

// R = q*b/n bits per input symbol.
double representation_rate(const EmbeddingSpace& space, std::size_t n);

struct FeasibilityCheck {
  std::string name;
  double required_bits = 0.0;   // right-hand side of the inequality
  double available_bits = 0.0;  // left-hand side
  bool satisfied = false;
  double margin_bits = 0.0;     // available - required (>= 0 iff satisfied)
};

struct FeasibilityReport {
  std::vector<FeasibilityCheck> checks;
  const FeasibilityCheck& check(const std::string& name) const;
};

// One verdict per applicable inequality:
//   source_rate:      Q_z >= n H(X)
//   support_budget:   Q_z <  n I(X;Y)          (when channel_I given)
//   compressed_rate:  Q_z >= n I(X,Vhat)       (when rd_I given)
//   output_alphabet:  d log2|V| >= n H(X)      (when output_bits given)
FeasibilityReport feasibility_report(const EmbeddingSpace& space, std::size_t n,
                                     double source_entropy,
                                     std::optional<double> channel_mi = std::nullopt,
                                     std::optional<double> rd_mi = std::nullopt,
                                     std::optional<double> output_bits = std::nullopt);

// Codebook over the typical set: every typical sequence gets a distinct
// embedding index (1-based, in enumeration order); atypical inputs map to the
// fallback all-zeros index 0.
class EmbeddingCode {
 public:
  EmbeddingCode(EmbeddingSpace space, std::size_t n, std::size_t alphabet_size);

  static constexpr std::uint64_t kFallbackIndex = 0;

  const EmbeddingSpace& space() const { return space_; }
  std::size_t n() const { return n_; }
  std::size_t size() const { return reverse_.size(); }

  void insert(std::uint64_t seq_code);  // assigns the next index
  std::uint64_t encode(const Symbols& x) const;      // fallback index when absent
  Symbols decode(std::uint64_t index) const;         // sequence for a coded index

 private:
  EmbeddingSpace space_;
  std::size_t n_;
  std::size_t alphabet_size_;
  std::unordered_map<std::uint64_t, std::uint64_t> codebook_;  // seq code -> index (1-based)
  std::vector<std::uint64_t> reverse_;                         // index-1 -> seq code
};

EmbeddingCode build_typical_codebook(const Source& source, std::size_t n, double epsilon,
                                     const EmbeddingSpace& space,
                                     std::uint64_t enumeration_cap = (1ull << 24));

struct RandomCodebook {
  std::vector<Symbols> codewords;  // 1-based message w maps to codewords[w-1]
  std::size_t collisions = 0;      // duplicates retained, only counted
};

RandomCodebook random_codebook(std::size_t num_messages, const Source& source, std::size_t n,
                               std::uint64_t seed);

struct DecodeResult {
  std::uint64_t index = 1;   // decoded message (1-based); fallback 1
  bool no_candidate = false;
};

// Smallest-index jointly typical codeword; fallback index 1 when none.
DecodeResult joint_typicality_decode(const Symbols& y, const std::vector<Symbols>& codebook,
                                     const JointTypicalityContext& ctx);

struct SupportAudit {
  std::size_t distinct_nonzero_count = 0;
  double q_tilde = 0.0;  // log2(count); 0 for count <= 1
};

// Distinct embedding vectors that are not identically zero.
SupportAudit effective_support_audit(const std::vector<std::vector<double>>& embeddings);

}  // namespace repcap

#endif
