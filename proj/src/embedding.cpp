#include "repcap/embedding.hpp"

#include <cmath>
#include <cstring>
#include <unordered_set>

namespace repcap {

double representation_rate(const EmbeddingSpace& space, std::size_t n) {
  if (n < 1) throw InvalidParams("n must be >= 1");
  return space.capacity_bits() / static_cast<double>(n);
}

const FeasibilityCheck& FeasibilityReport::check(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return c;
  throw InvalidParams("no feasibility check named " + name);
}

FeasibilityReport feasibility_report(const EmbeddingSpace& space, std::size_t n,
                                     double source_entropy, std::optional<double> channel_mi,
                                     std::optional<double> rd_mi,
                                     std::optional<double> output_bits) {
  const double qz = space.capacity_bits();
  const double nd = static_cast<double>(n);
  FeasibilityReport rep;
  rep.checks.push_back({"source_rate", nd * source_entropy, qz,
                        qz >= nd * source_entropy, qz - nd * source_entropy});
  if (channel_mi) {
    // achievability needs R < I(X;Y); margin is the headroom below the bound
    rep.checks.push_back({"support_budget", nd * *channel_mi, qz, qz < nd * *channel_mi,
                          nd * *channel_mi - qz});
  }
  if (rd_mi) {
    rep.checks.push_back({"compressed_rate", nd * *rd_mi, qz, qz >= nd * *rd_mi,
                          qz - nd * *rd_mi});
  }
  if (output_bits) {
    rep.checks.push_back({"output_alphabet", nd * source_entropy, *output_bits,
                          *output_bits >= nd * source_entropy,
                          *output_bits - nd * source_entropy});
  }
  return rep;
}

EmbeddingCode::EmbeddingCode(EmbeddingSpace space, std::size_t n, std::size_t alphabet_size)
    : space_(space), n_(n), alphabet_size_(alphabet_size) {}

void EmbeddingCode::insert(std::uint64_t seq_code) {
  const double next = static_cast<double>(reverse_.size() + 1);
  if (std::log2(next) > space_.capacity_bits())
    throw InsufficientRate("codebook exceeds the embedding budget");
  const std::uint64_t index = reverse_.size() + 1;
  if (!codebook_.emplace(seq_code, index).second)
    throw InvalidParams("duplicate sequence in typical codebook");
  reverse_.push_back(seq_code);
}

std::uint64_t EmbeddingCode::encode(const Symbols& x) const {
  const auto it = codebook_.find(pack_sequence(x, alphabet_size_));
  return it == codebook_.end() ? kFallbackIndex : it->second;
}

Symbols EmbeddingCode::decode(std::uint64_t index) const {
  if (index == kFallbackIndex || index > reverse_.size())
    throw InvalidParams("index is not a coded embedding index");
  return unpack_sequence(reverse_[index - 1], n_, alphabet_size_);
}

EmbeddingCode build_typical_codebook(const Source& source, std::size_t n, double epsilon,
                                     const EmbeddingSpace& space,
                                     std::uint64_t enumeration_cap) {
  const TypicalSet set = enumerate_typical_set(source, n, epsilon, enumeration_cap);
  const double need = set.members.empty() ? 0.0
                                          : std::log2(static_cast<double>(set.members.size()));
  if (need > space.capacity_bits())
    throw InsufficientRate("|A^n_eps| = " + std::to_string(set.members.size()) +
                           " needs " + std::to_string(need) + " bits > Q_z = " +
                           std::to_string(space.capacity_bits()) +
                           " (embedding budget below the typical-set size)");
  EmbeddingCode code(space, n, source.alphabet().size());
  for (const auto& m : set.members) code.insert(m.code);
  return code;
}

RandomCodebook random_codebook(std::size_t num_messages, const Source& source, std::size_t n,
                               std::uint64_t seed) {
  if (num_messages < 1) throw InvalidParams("num_messages must be >= 1");
  RandomCodebook out;
  out.codewords.reserve(num_messages);
  std::unordered_set<std::string> seen;
  for (std::size_t w = 0; w < num_messages; ++w) {
    Rng rng = Rng::stream(seed, w);
    out.codewords.push_back(source.sample(n, rng).symbols);
    const auto& word = out.codewords.back();
    std::string key(reinterpret_cast<const char*>(word.data()),
                    word.size() * sizeof(word[0]));
    if (!seen.insert(std::move(key)).second) ++out.collisions;
  }
  return out;
}

DecodeResult joint_typicality_decode(const Symbols& y, const std::vector<Symbols>& codebook,
                                     const JointTypicalityContext& ctx) {
  for (std::size_t w = 0; w < codebook.size(); ++w) {
    if (ctx.jointly_typical(codebook[w], y))
      return {static_cast<std::uint64_t>(w + 1), false};
  }
  return {1, true};  // no candidate: the decoder falls back to index 1
}

SupportAudit effective_support_audit(const std::vector<std::vector<double>>& embeddings) {
  SupportAudit audit;
  if (embeddings.empty()) return audit;
  const std::size_t q = embeddings.front().size();
  std::unordered_set<std::string> distinct;
  for (const auto& z : embeddings) {
    if (z.size() != q) throw DimensionMismatch("embedding tuples must share dimension q");
    bool nonzero = false;
    for (double v : z)
      if (v != 0.0) {
        nonzero = true;
        break;
      }
    if (!nonzero) continue;
    std::string key(reinterpret_cast<const char*>(z.data()), q * sizeof(double));
    distinct.insert(std::move(key));
  }
  audit.distinct_nonzero_count = distinct.size();
  audit.q_tilde = distinct.size() <= 1
                      ? 0.0
                      : std::log2(static_cast<double>(distinct.size()));
  return audit;
}

}  // namespace repcap
