#ifndef REPCAP_IO_HPP
#define REPCAP_IO_HPP

#include <json.hpp>

#include "repcap/channels.hpp"
#include "repcap/collapse.hpp"
#include "repcap/rate_distortion.hpp"
#include "repcap/sources.hpp"

namespace repcap {

using Json = nlohmann::json;

// --- CSV file formats (declared by the owning modules) ---
// Pmf:          header "symbol,prob", one row per symbol
// JointPmf:     matrix; first row = column symbols, first column = row symbols
// Markov:       transition matrix with symbol header row/column
// Channel:      matrix; header = output symbols, first column = input symbols
// Distortion:   plain numeric matrix (optionally with the symbol headers)
// Embeddings:   header "id,label[,v_1..v_d],z_1..z_q"

Pmf read_pmf_csv(const std::string& path);
void write_pmf_csv(const Pmf& pmf, const std::string& path);

JointPmf read_joint_pmf_csv(const std::string& path);

MarkovSource read_markov_csv(const std::string& path);
void write_matrix_csv(const std::vector<std::string>& row_labels,
                      const std::vector<std::string>& col_labels,
                      const std::vector<std::vector<double>>& m, const std::string& path);

DiscreteChannel read_channel_csv(const std::string& path);

DistortionMeasure read_distortion_csv(const std::string& path);

LabeledEmbeddings read_embeddings_csv(const std::string& path);

std::string read_file_bytes(const std::string& path);
void write_file_bytes(const std::string& path, const std::string& bytes);

// SHA-256 of a byte string, lowercase hex.
std::string sha256_hex(const std::string& bytes);

// Canonical JSON: keys sorted (nlohmann's std::map ordering), no spaces,
// floats printed with 12 significant digits, NaN/inf serialized as null.
// Any NaN/inf replaced during sanitization is reported in *warnings.
std::string canonical_json(const Json& j);
Json sanitize_json(const Json& j, std::vector<std::string>* warnings,
                   const std::string& path = "$");

std::vector<std::string> split_csv_line(const std::string& line);

}  // namespace repcap

#endif
