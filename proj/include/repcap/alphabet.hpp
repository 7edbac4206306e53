#ifndef REPCAP_ALPHABET_HPP
#define REPCAP_ALPHABET_HPP

#include <cstddef>
#include <string>
#include <unordered_map>
#include <vector>

#include "repcap/errors.hpp"

namespace repcap {

// Ordered set of distinct symbol labels; the ordering defines the
// index <-> symbol bijection used everywhere else.
class Alphabet {
 public:
  Alphabet() = default;

  explicit Alphabet(std::vector<std::string> symbols) : symbols_(std::move(symbols)) {
    if (symbols_.empty()) throw InvalidParams("alphabet must have at least one symbol");
    for (std::size_t i = 0; i < symbols_.size(); ++i) {
      if (!index_.emplace(symbols_[i], i).second)
        throw InvalidParams("duplicate alphabet symbol: " + symbols_[i]);
    }
  }

  // Convenience: symbols "0", "1", ..., "size-1".
  static Alphabet indexed(std::size_t size, const std::string& prefix = "") {
    std::vector<std::string> syms;
    syms.reserve(size);
    for (std::size_t i = 0; i < size; ++i) syms.push_back(prefix + std::to_string(i));
    return Alphabet(std::move(syms));
  }

  std::size_t size() const { return symbols_.size(); }
  const std::string& symbol(std::size_t i) const { return symbols_.at(i); }
  const std::vector<std::string>& symbols() const { return symbols_; }

  std::size_t index_of(const std::string& symbol) const {
    auto it = index_.find(symbol);
    if (it == index_.end()) throw InvalidParams("symbol not in alphabet: " + symbol);
    return it->second;
  }

  bool contains(const std::string& symbol) const { return index_.count(symbol) != 0; }

  friend bool operator==(const Alphabet& a, const Alphabet& b) {
    return a.symbols_ == b.symbols_;
  }

 private:
  std::vector<std::string> symbols_;
  std::unordered_map<std::string, std::size_t> index_;
};

using Symbols = std::vector<std::uint32_t>;  // sequence of alphabet indices

}  // namespace repcap

#endif
