#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <map>
#include <sstream>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "xlg/error.hpp"

namespace xlg {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Sentence embeddings for one language: one row per sentence, one verse ID per row.
/// Values are held in double precision regardless of the on-disk format.
class EmbeddingMatrix {
 public:
  EmbeddingMatrix() = default;

  /// Validates the matrix: n_rows >= 1, dim >= 2, finite entries, no zero rows,
  /// unique IDs. Empty `ids` default to "0", "1", ...
  EmbeddingMatrix(std::string lang, RowMatrix data, std::vector<std::string> ids = {})
      : lang_(std::move(lang)), data_(std::move(data)), ids_(std::move(ids)) {
    if (data_.rows() < 1) detail::fail_input("embedding matrix has no rows");
    if (data_.cols() < 2) detail::fail_input("embedding dimension must be at least 2");
    if (ids_.empty()) {
      ids_.reserve(static_cast<std::size_t>(data_.rows()));
      for (Eigen::Index i = 0; i < data_.rows(); ++i) ids_.push_back(std::to_string(i));
    }
    if (ids_.size() != static_cast<std::size_t>(data_.rows()))
      detail::fail_input("embedding matrix: " + std::to_string(ids_.size()) + " ids for " +
                         std::to_string(data_.rows()) + " rows");
    for (Eigen::Index i = 0; i < data_.rows(); ++i) {
      bool nonzero = false;
      for (Eigen::Index j = 0; j < data_.cols(); ++j) {
        const double v = data_(i, j);
        if (!std::isfinite(v))
          detail::fail_input("non-finite value at row " + std::to_string(i));
        nonzero = nonzero || v != 0.0;
      }
      if (!nonzero) detail::fail_input("zero row at index " + std::to_string(i));
    }
    std::unordered_set<std::string> seen;
    for (const auto& id : ids_)
      if (!seen.insert(id).second) detail::fail_input("duplicate sentence id '" + id + "'");
  }

  const std::string& lang() const { return lang_; }
  std::size_t n_rows() const { return static_cast<std::size_t>(data_.rows()); }
  std::size_t dim() const { return static_cast<std::size_t>(data_.cols()); }
  const RowMatrix& data() const { return data_; }
  const std::vector<std::string>& ids() const { return ids_; }

 private:
  std::string lang_;
  RowMatrix data_;
  std::vector<std::string> ids_;
};

struct RowPair {
  std::size_t a = 0;
  std::size_t b = 0;
  friend auto operator<=>(const RowPair&, const RowPair&) = default;
};

using Alignment = std::vector<RowPair>;

/// Two embedding matrices plus the gold alignment over their shared sentence IDs.
struct BitextPair {
  EmbeddingMatrix a;
  EmbeddingMatrix b;
  Alignment gold;  // ordered by shared ID, lexicographically
};

/// Pairs rows by shared ID. Rows present on only one side stay in the matrices as
/// retrieval distractors.
inline BitextPair align_pair(const EmbeddingMatrix& ea, const EmbeddingMatrix& eb) {
  if (ea.dim() != eb.dim())
    detail::fail_input("dimension mismatch: " + std::to_string(ea.dim()) + " vs " +
                       std::to_string(eb.dim()));
  std::map<std::string_view, std::size_t> index_b;
  for (std::size_t j = 0; j < eb.n_rows(); ++j) index_b.emplace(eb.ids()[j], j);
  std::vector<std::pair<std::string_view, RowPair>> shared;
  for (std::size_t i = 0; i < ea.n_rows(); ++i) {
    auto it = index_b.find(ea.ids()[i]);
    if (it != index_b.end()) shared.push_back({it->first, RowPair{i, it->second}});
  }
  if (shared.empty())
    detail::fail_input("no shared sentence ids between '" + ea.lang() + "' and '" + eb.lang() + "'");
  std::sort(shared.begin(), shared.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });
  BitextPair pair{ea, eb, {}};
  pair.gold.reserve(shared.size());
  for (const auto& s : shared) pair.gold.push_back(s.second);
  return pair;
}

enum class MatrixFormat { binary, text };

namespace detail {

inline constexpr char kMagic[4] = {'X', 'E', 'M', 'B'};
inline constexpr std::uint8_t kVersion = 0x01;

inline std::uint32_t read_u32_le(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

inline void write_u32_le(std::ostream& out, std::uint32_t v) {
  const char bytes[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                         static_cast<char>((v >> 16) & 0xff), static_cast<char>((v >> 24) & 0xff)};
  out.write(bytes, 4);
}

inline std::vector<unsigned char> slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail_input("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline std::string lang_from_path(const std::filesystem::path& path) {
  return path.stem().string();
}

inline EmbeddingMatrix parse_binary(const std::vector<unsigned char>& buf, std::string lang,
                                    const std::string& origin) {
  constexpr std::size_t header = 4 + 1 + 4 + 4;
  if (buf.size() < header) fail_input(origin + ": truncated header");
  if (std::memcmp(buf.data(), kMagic, 4) != 0) fail_input(origin + ": bad magic");
  if (buf[4] != kVersion) fail_input(origin + ": unsupported version " + std::to_string(buf[4]));
  const std::uint32_t rows = read_u32_le(buf.data() + 5);
  const std::uint32_t dim = read_u32_le(buf.data() + 9);
  const std::size_t payload = static_cast<std::size_t>(rows) * dim * 4;
  if (buf.size() < header + payload)
    fail_input(origin + ": payload shorter than header-declared " + std::to_string(rows) + "x" +
               std::to_string(dim));
  RowMatrix data(rows, dim);
  const unsigned char* p = buf.data() + header;
  for (std::uint32_t i = 0; i < rows; ++i)
    for (std::uint32_t j = 0; j < dim; ++j, p += 4)
      data(i, j) = static_cast<double>(std::bit_cast<float>(read_u32_le(p)));

  std::vector<std::string> ids;
  std::size_t pos = header + payload;
  if (pos < buf.size()) {
    ids.reserve(rows);
    for (std::uint32_t i = 0; i < rows; ++i) {
      if (pos + 4 > buf.size()) fail_input(origin + ": truncated id block");
      const std::uint32_t len = read_u32_le(buf.data() + pos);
      pos += 4;
      if (pos + len > buf.size()) fail_input(origin + ": truncated id string");
      ids.emplace_back(reinterpret_cast<const char*>(buf.data() + pos), len);
      pos += len;
    }
    if (pos != buf.size()) fail_input(origin + ": trailing bytes after id block");
  }
  return EmbeddingMatrix(std::move(lang), std::move(data), std::move(ids));
}

inline EmbeddingMatrix parse_text(std::istream& in, std::string lang, const std::string& origin) {
  std::vector<std::vector<double>> rows;
  std::vector<std::string> ids;
  std::size_t with_id = 0;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::istringstream ss(line);
    std::string tok;
    std::vector<double> row;
    bool first = true;
    while (ss >> tok) {
      if (first && tok.rfind("#id:", 0) == 0) {
        ids.push_back(tok.substr(4));
        ++with_id;
        first = false;
        continue;
      }
      first = false;
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(tok, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != tok.size())
        fail_input(origin + ":" + std::to_string(lineno) + ": not a number '" + tok + "'");
      row.push_back(v);
    }
    if (!rows.empty() && row.size() != rows.front().size())
      fail_input(origin + ":" + std::to_string(lineno) + ": row has " + std::to_string(row.size()) +
                 " values, expected " + std::to_string(rows.front().size()));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) fail_input(origin + ": no rows");
  if (with_id != 0 && with_id != rows.size())
    fail_input(origin + ": '#id:' present on some rows but not all");
  RowMatrix data(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      data(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  return EmbeddingMatrix(std::move(lang), std::move(data), std::move(ids));
}

}  // namespace detail

/// Loads an embedding matrix; the language code is taken from the file stem.
inline EmbeddingMatrix load_embeddings(const std::filesystem::path& path, MatrixFormat format) {
  if (format == MatrixFormat::binary)
    return detail::parse_binary(detail::slurp(path), detail::lang_from_path(path), path.string());
  std::ifstream in(path);
  if (!in) detail::fail_input("cannot open " + path.string());
  return detail::parse_text(in, detail::lang_from_path(path), path.string());
}

/// Picks the format from the extension: ".xemb" is binary, anything else text.
inline EmbeddingMatrix load_embeddings(const std::filesystem::path& path) {
  return load_embeddings(path, path.extension() == ".xemb" ? MatrixFormat::binary : MatrixFormat::text);
}

/// Writes the XEMB binary format. Values are narrowed to float32; IDs are always written.
inline void save_embeddings_binary(const EmbeddingMatrix& m, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) detail::fail_input("cannot write " + path.string());
  out.write(detail::kMagic, 4);
  out.put(static_cast<char>(detail::kVersion));
  detail::write_u32_le(out, static_cast<std::uint32_t>(m.n_rows()));
  detail::write_u32_le(out, static_cast<std::uint32_t>(m.dim()));
  for (std::size_t i = 0; i < m.n_rows(); ++i)
    for (std::size_t j = 0; j < m.dim(); ++j)
      detail::write_u32_le(out, std::bit_cast<std::uint32_t>(static_cast<float>(
                                    m.data()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)))));
  for (const auto& id : m.ids()) {
    detail::write_u32_le(out, static_cast<std::uint32_t>(id.size()));
    out.write(id.data(), static_cast<std::streamsize>(id.size()));
  }
}

inline void save_embeddings_text(const EmbeddingMatrix& m, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) detail::fail_input("cannot write " + path.string());
  out.precision(17);
  for (std::size_t i = 0; i < m.n_rows(); ++i) {
    out << "#id:" << m.ids()[i];
    for (std::size_t j = 0; j < m.dim(); ++j)
      out << ' ' << m.data()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    out << '\n';
  }
}

}  // namespace xlg
