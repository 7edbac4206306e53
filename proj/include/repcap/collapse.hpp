#ifndef REPCAP_COLLAPSE_HPP
#define REPCAP_COLLAPSE_HPP

#include <map>
#include <string>
#include <vector>

#include "repcap/errors.hpp"

namespace repcap {

struct LabeledRow {
  std::string id;
  std::string label;
  std::vector<double> target;     // optional regression target (may be empty)
  std::vector<double> embedding;  // dimension q
};

struct LabeledEmbeddings {
  std::size_t q = 0;
  std::vector<LabeledRow> rows;

  static LabeledEmbeddings from_rows(std::vector<LabeledRow> rows);
};

struct ClassStats {
  std::string label;
  std::size_t count = 0;
  std::vector<double> mean;
  double within_variance = 0.0;  // mean squared distance to the class mean
};

struct ClassStatistics {
  std::vector<ClassStats> classes;  // ordered by label
  std::vector<double> global_mean;
  double total_variance = 0.0;      // mean squared distance to the global mean
};

ClassStatistics class_statistics(const LabeledEmbeddings& data);

struct EtfResiduals {
  double mean_sum_norm = 0.0;    // ||sum_c mu_c||
  double norm_spread = 0.0;      // (max - min) / mean of ||mu_c|| (scale free)
  double gram_deviation = 0.0;   // max |cos(mu_c, mu_c') + 1/(M-1)|
};

// Means must be globally centered (sum of the global mean subtracted).
EtfResiduals etf_residuals(const std::vector<std::vector<double>>& means);

struct ClassDegeneracy {
  std::string label;
  double embedding_spread = 0.0;  // max pairwise distance among embeddings
  double target_spread = 0.0;     // max pairwise distance among targets
  bool degenerate = false;        // collapsed embeddings but varying targets
};

struct DegeneracyReport {
  bool degeneracy_flag = false;
  double effective_tol = 0.0;  // collapse_tol scaled by the global embedding RMS
  std::vector<ClassDegeneracy> classes;
};

// A class whose embeddings have collapsed (spread <= tol) cannot represent
// distinct targets under ANY deterministic decoder. No decoder is fit; the
// check compares spreads only.
DegeneracyReport regression_degeneracy_check(const LabeledEmbeddings& data,
                                             double collapse_tol = 1e-6);

struct CollapseReport {
  ClassStatistics stats;
  double collapse_index = 0.0;  // within-class variance share of total variance
  EtfResiduals etf;
  bool etf_defined = false;  // false when class means merge (degenerate)
  bool degeneracy_flag = false;
  std::vector<ClassDegeneracy> degeneracy;
};

CollapseReport collapse_report(const LabeledEmbeddings& data, double collapse_tol = 1e-6);

}  // namespace repcap

#endif
