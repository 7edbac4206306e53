#include "repcap/io.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace repcap {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (!line.empty()) lines.push_back(line);
  }
  if (lines.empty()) throw IoError("empty file: " + path);
  return lines;
}

double parse_double(const std::string& s, const std::string& path) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw IoError("bad numeric field '" + s + "' in " + path);
  }
}

}  // namespace

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(trim(cur));
  return out;
}

Pmf read_pmf_csv(const std::string& path) {
  const auto lines = read_lines(path);
  std::size_t start = 0;
  {
    const auto head = split_csv_line(lines[0]);
    if (head.size() >= 2 && head[0] == "symbol" && head[1] == "prob") start = 1;
  }
  std::vector<std::string> symbols;
  std::vector<double> probs;
  for (std::size_t i = start; i < lines.size(); ++i) {
    const auto f = split_csv_line(lines[i]);
    if (f.size() != 2) throw IoError("pmf rows need 'symbol,prob' in " + path);
    symbols.push_back(f[0]);
    probs.push_back(parse_double(f[1], path));
  }
  return Pmf(Alphabet(std::move(symbols)), std::move(probs));
}

void write_pmf_csv(const Pmf& pmf, const std::string& path) {
  std::ostringstream out;
  out << "symbol,prob\n";
  char buf[64];
  for (std::size_t i = 0; i < pmf.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g", pmf.prob(i));
    out << pmf.alphabet().symbol(i) << "," << buf << "\n";
  }
  write_file_bytes(path, out.str());
}

namespace {

struct LabeledMatrix {
  std::vector<std::string> row_labels, col_labels;
  std::vector<std::vector<double>> values;
};

LabeledMatrix read_labeled_matrix(const std::string& path) {
  const auto lines = read_lines(path);
  if (lines.size() < 2) throw IoError("matrix file needs a header and rows: " + path);
  LabeledMatrix m;
  auto head = split_csv_line(lines[0]);
  // header may or may not carry a corner label; detect by column count below
  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) rows.push_back(split_csv_line(lines[i]));
  const std::size_t ncols = rows[0].size() - 1;  // first column = row symbol
  if (head.size() == ncols + 1)
    head.erase(head.begin());  // drop the corner cell
  else if (head.size() != ncols)
    throw IoError("header width does not match rows in " + path);
  m.col_labels = head;
  for (const auto& r : rows) {
    if (r.size() != ncols + 1) throw IoError("ragged matrix rows in " + path);
    m.row_labels.push_back(r[0]);
    std::vector<double> vals;
    for (std::size_t c = 1; c < r.size(); ++c) vals.push_back(parse_double(r[c], path));
    m.values.push_back(std::move(vals));
  }
  return m;
}

}  // namespace

JointPmf read_joint_pmf_csv(const std::string& path) {
  auto m = read_labeled_matrix(path);
  return JointPmf(Alphabet(std::move(m.row_labels)), Alphabet(std::move(m.col_labels)),
                  std::move(m.values));
}

MarkovSource read_markov_csv(const std::string& path) {
  auto m = read_labeled_matrix(path);
  if (m.row_labels != m.col_labels)
    throw IoError("markov transition matrix needs matching row/column symbols: " + path);
  return MarkovSource(Alphabet(std::move(m.row_labels)), std::move(m.values));
}

void write_matrix_csv(const std::vector<std::string>& row_labels,
                      const std::vector<std::string>& col_labels,
                      const std::vector<std::vector<double>>& m, const std::string& path) {
  std::ostringstream out;
  for (const auto& c : col_labels) out << "," << c;
  out << "\n";
  char buf[64];
  for (std::size_t r = 0; r < m.size(); ++r) {
    out << row_labels[r];
    for (double v : m[r]) {
      std::snprintf(buf, sizeof(buf), "%.17g", v);
      out << "," << buf;
    }
    out << "\n";
  }
  write_file_bytes(path, out.str());
}

DiscreteChannel read_channel_csv(const std::string& path) {
  auto m = read_labeled_matrix(path);
  return DiscreteChannel(Alphabet(std::move(m.row_labels)), Alphabet(std::move(m.col_labels)),
                         std::move(m.values));
}

DistortionMeasure read_distortion_csv(const std::string& path) {
  auto m = read_labeled_matrix(path);
  return DistortionMeasure(Alphabet(std::move(m.row_labels)),
                           Alphabet(std::move(m.col_labels)), std::move(m.values));
}

LabeledEmbeddings read_embeddings_csv(const std::string& path) {
  const auto lines = read_lines(path);
  const auto head = split_csv_line(lines[0]);
  if (head.size() < 3 || head[0] != "id" || head[1] != "label")
    throw IoError("embeddings csv needs header 'id,label[,v_*],z_*': " + path);
  std::size_t n_targets = 0, n_coords = 0;
  for (std::size_t i = 2; i < head.size(); ++i) {
    if (head[i].rfind("v_", 0) == 0)
      ++n_targets;
    else if (head[i].rfind("z_", 0) == 0)
      ++n_coords;
    else
      throw IoError("unexpected embeddings column '" + head[i] + "' in " + path);
  }
  if (n_coords == 0) throw IoError("embeddings csv has no z_* columns: " + path);

  std::vector<LabeledRow> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto f = split_csv_line(lines[i]);
    if (f.size() != head.size()) throw IoError("ragged embeddings row in " + path);
    LabeledRow r;
    r.id = f[0];
    r.label = f[1];
    for (std::size_t c = 0; c < n_targets; ++c)
      r.target.push_back(parse_double(f[2 + c], path));
    for (std::size_t c = 0; c < n_coords; ++c)
      r.embedding.push_back(parse_double(f[2 + n_targets + c], path));
    rows.push_back(std::move(r));
  }
  return LabeledEmbeddings::from_rows(std::move(rows));
}

std::string read_file_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_bytes(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed for " + path);
}

// ---- SHA-256 (FIPS 180-4), compact implementation ----
namespace {

constexpr std::array<std::uint32_t, 64> kSha256K = {
    0x428a2f98, 0x71374491, 0xb5c0fbcf, 0xe9b5dba5, 0x3956c25b, 0x59f111f1, 0x923f82a4,
    0xab1c5ed5, 0xd807aa98, 0x12835b01, 0x243185be, 0x550c7dc3, 0x72be5d74, 0x80deb1fe,
    0x9bdc06a7, 0xc19bf174, 0xe49b69c1, 0xefbe4786, 0x0fc19dc6, 0x240ca1cc, 0x2de92c6f,
    0x4a7484aa, 0x5cb0a9dc, 0x76f988da, 0x983e5152, 0xa831c66d, 0xb00327c8, 0xbf597fc7,
    0xc6e00bf3, 0xd5a79147, 0x06ca6351, 0x14292967, 0x27b70a85, 0x2e1b2138, 0x4d2c6dfc,
    0x53380d13, 0x650a7354, 0x766a0abb, 0x81c2c92e, 0x92722c85, 0xa2bfe8a1, 0xa81a664b,
    0xc24b8b70, 0xc76c51a3, 0xd192e819, 0xd6990624, 0xf40e3585, 0x106aa070, 0x19a4c116,
    0x1e376c08, 0x2748774c, 0x34b0bcb5, 0x391c0cb3, 0x4ed8aa4a, 0x5b9cca4f, 0x682e6ff3,
    0x748f82ee, 0x78a5636f, 0x84c87814, 0x8cc70208, 0x90befffa, 0xa4506ceb, 0xbef9a3f7,
    0xc67178f2};

std::uint32_t rotr(std::uint32_t x, int n) { return (x >> n) | (x << (32 - n)); }

}  // namespace

std::string sha256_hex(const std::string& bytes) {
  std::array<std::uint32_t, 8> h = {0x6a09e667, 0xbb67ae85, 0x3c6ef372, 0xa54ff53a,
                                    0x510e527f, 0x9b05688c, 0x1f83d9ab, 0x5be0cd19};
  std::string msg = bytes;
  const std::uint64_t bit_len = static_cast<std::uint64_t>(msg.size()) * 8;
  msg.push_back('\x80');
  while (msg.size() % 64 != 56) msg.push_back('\0');
  for (int i = 7; i >= 0; --i) msg.push_back(static_cast<char>((bit_len >> (8 * i)) & 0xff));

  std::array<std::uint32_t, 64> w;
  for (std::size_t chunk = 0; chunk < msg.size(); chunk += 64) {
    for (int i = 0; i < 16; ++i) {
      const auto* p = reinterpret_cast<const unsigned char*>(msg.data() + chunk + 4 * i);
      w[i] = (std::uint32_t(p[0]) << 24) | (std::uint32_t(p[1]) << 16) |
             (std::uint32_t(p[2]) << 8) | std::uint32_t(p[3]);
    }
    for (int i = 16; i < 64; ++i) {
      const std::uint32_t s0 = rotr(w[i - 15], 7) ^ rotr(w[i - 15], 18) ^ (w[i - 15] >> 3);
      const std::uint32_t s1 = rotr(w[i - 2], 17) ^ rotr(w[i - 2], 19) ^ (w[i - 2] >> 10);
      w[i] = w[i - 16] + s0 + w[i - 7] + s1;
    }
    auto [a, b, c, d, e, f, g, hh] = h;
    for (int i = 0; i < 64; ++i) {
      const std::uint32_t s1 = rotr(e, 6) ^ rotr(e, 11) ^ rotr(e, 25);
      const std::uint32_t ch = (e & f) ^ (~e & g);
      const std::uint32_t t1 = hh + s1 + ch + kSha256K[i] + w[i];
      const std::uint32_t s0 = rotr(a, 2) ^ rotr(a, 13) ^ rotr(a, 22);
      const std::uint32_t maj = (a & b) ^ (a & c) ^ (b & c);
      const std::uint32_t t2 = s0 + maj;
      hh = g; g = f; f = e; e = d + t1;
      d = c; c = b; b = a; a = t1 + t2;
    }
    h[0] += a; h[1] += b; h[2] += c; h[3] += d;
    h[4] += e; h[5] += f; h[6] += g; h[7] += hh;
  }
  char out[65];
  for (int i = 0; i < 8; ++i) std::snprintf(out + 8 * i, 9, "%08x", h[i]);
  return std::string(out, 64);
}

// ---- canonical JSON ----

Json sanitize_json(const Json& j, std::vector<std::string>* warnings, const std::string& path) {
  if (j.is_number_float()) {
    const double v = j.get<double>();
    if (!std::isfinite(v)) {
      if (warnings) warnings->push_back("non-finite value at " + path + " serialized as null");
      return nullptr;
    }
    return j;
  }
  if (j.is_object()) {
    Json out = Json::object();
    for (auto it = j.begin(); it != j.end(); ++it)
      out[it.key()] = sanitize_json(it.value(), warnings, path + "." + it.key());
    return out;
  }
  if (j.is_array()) {
    Json out = Json::array();
    std::size_t i = 0;
    for (const auto& v : j)
      out.push_back(sanitize_json(v, warnings, path + "[" + std::to_string(i++) + "]"));
    return out;
  }
  return j;
}

namespace {

void emit(const Json& j, std::string& out) {
  switch (j.type()) {
    case Json::value_t::object: {
      out.push_back('{');
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {  // std::map: keys sorted
        if (!first) out.push_back(',');
        first = false;
        out += Json(it.key()).dump();
        out.push_back(':');
        emit(it.value(), out);
      }
      out.push_back('}');
      break;
    }
    case Json::value_t::array: {
      out.push_back('[');
      bool first = true;
      for (const auto& v : j) {
        if (!first) out.push_back(',');
        first = false;
        emit(v, out);
      }
      out.push_back(']');
      break;
    }
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      if (!std::isfinite(v)) {
        out += "null";
        break;
      }
      char buf[40];
      std::snprintf(buf, sizeof(buf), "%.12g", v);
      out += buf;
      // keep floats recognizably floating-point
      if (!std::strpbrk(buf, ".eE")) out += ".0";
      break;
    }
    default:
      out += j.dump();
  }
}

}  // namespace

std::string canonical_json(const Json& j) {
  std::string out;
  emit(j, out);
  return out;
}

}  // namespace repcap
