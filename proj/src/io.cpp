#include "repeval/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <limits>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace repeval {

namespace {

constexpr char kMagic[4] = {'E', 'M', 'B', '1'};
constexpr std::size_t kHeaderSize = 24;
constexpr std::uint32_t kFormatVersion = 1;

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

std::uint32_t get_u32(const unsigned char* p) {
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

std::uint64_t get_u64(const unsigned char* p) {
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

double get_f64(const unsigned char* p) {
  const std::uint64_t bits = get_u64(p);
  double d;
  std::memcpy(&d, &bits, sizeof d);
  return d;
}

float get_f32(const unsigned char* p) {
  const std::uint32_t bits = get_u32(p);
  float f;
  std::memcpy(&f, &bits, sizeof f);
  return f;
}

std::string read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error(ErrorCode::FileError, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return std::move(buf).str();
}

}  // namespace

EmbeddingSet read_embeddings(const std::filesystem::path& path) {
  const std::string bytes = read_file_bytes(path);
  if (bytes.size() < kHeaderSize)
    throw Error(ErrorCode::TruncatedFile,
                path.string() + " is shorter than the 24-byte header");
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
  if (std::memcmp(p, kMagic, 4) != 0)
    throw Error(ErrorCode::BadMagic, path.string() + " is not an EMB1 file");
  const std::uint32_t version = get_u32(p + 4);
  if (version != kFormatVersion)
    throw Error(ErrorCode::InvalidArgument,
                "unsupported format version " + std::to_string(version));
  const std::uint64_t rows = get_u64(p + 8);
  const std::uint32_t cols = get_u32(p + 16);
  const std::uint8_t dtype = p[20];
  if (dtype != static_cast<std::uint8_t>(EmbDtype::F32) &&
      dtype != static_cast<std::uint8_t>(EmbDtype::F64))
    throw Error(ErrorCode::InvalidArgument,
                "unknown dtype " + std::to_string(dtype));

  const std::size_t width = dtype == static_cast<std::uint8_t>(EmbDtype::F64) ? 8 : 4;
  if (cols == 0 || rows == 0)
    throw Error(ErrorCode::InvalidArgument, path.string() + " declares an empty matrix");
  if (rows > (std::numeric_limits<std::uint64_t>::max() - kHeaderSize) / cols / width)
    throw Error(ErrorCode::TruncatedFile, path.string() + " declares an impossible size");
  const std::uint64_t expect = kHeaderSize + rows * cols * width;
  if (bytes.size() != expect)
    throw Error(ErrorCode::TruncatedFile,
                path.string() + " holds " + std::to_string(bytes.size()) +
                    " bytes, header implies " + std::to_string(expect));

  EmbeddingSet e;
  e.data.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  const unsigned char* v = p + kHeaderSize;
  for (std::uint64_t i = 0; i < rows; ++i)
    for (std::uint32_t j = 0; j < cols; ++j, v += width) {
      const double x = width == 8 ? get_f64(v) : static_cast<double>(get_f32(v));
      if (!std::isfinite(x))
        throw Error(ErrorCode::NonFiniteValue,
                    "non-finite value at row " + std::to_string(i) + ", column " +
                        std::to_string(j));
      e.data(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = x;
    }
  return e;
}

void write_embeddings(const std::filesystem::path& path, const EmbeddingSet& e,
                      EmbDtype dtype) {
  std::string out;
  const std::size_t width = dtype == EmbDtype::F64 ? 8 : 4;
  out.reserve(kHeaderSize + static_cast<std::size_t>(e.rows()) *
                                static_cast<std::size_t>(e.cols()) * width);
  out.append(kMagic, 4);
  put_u32(out, kFormatVersion);
  put_u64(out, static_cast<std::uint64_t>(e.rows()));
  put_u32(out, static_cast<std::uint32_t>(e.cols()));
  out.push_back(static_cast<char>(dtype));
  out.append(3, '\0');
  for (Eigen::Index i = 0; i < e.rows(); ++i)
    for (Eigen::Index j = 0; j < e.cols(); ++j) {
      if (dtype == EmbDtype::F64) {
        std::uint64_t bits;
        const double d = e.data(i, j);
        std::memcpy(&bits, &d, sizeof bits);
        put_u64(out, bits);
      } else {
        std::uint32_t bits;
        const float f = static_cast<float>(e.data(i, j));
        std::memcpy(&bits, &f, sizeof bits);
        put_u32(out, bits);
      }
    }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw Error(ErrorCode::FileError, "cannot write " + path.string());
  file.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!file) throw Error(ErrorCode::FileError, "short write to " + path.string());
}

EmbeddingSet read_csv_embeddings(const std::filesystem::path& path, bool has_header) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::FileError, "cannot open " + path.string());

  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  std::size_t cols = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (has_header && line_no == 1) continue;
    if (line.empty()) continue;
    std::vector<double> row;
    std::size_t pos = 0;
    while (pos <= line.size()) {
      const std::size_t comma = std::min(line.find(',', pos), line.size());
      const std::string cell = line.substr(pos, comma - pos);
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (end == cell.c_str() || *end != '\0')
        throw Error(ErrorCode::InvalidArgument,
                    "cannot parse '" + cell + "' on line " + std::to_string(line_no));
      if (!std::isfinite(v))
        throw Error(ErrorCode::NonFiniteValue,
                    "non-finite value on line " + std::to_string(line_no));
      row.push_back(v);
      pos = comma + 1;
    }
    if (rows.empty()) {
      cols = row.size();
    } else if (row.size() != cols) {
      throw Error(ErrorCode::RaggedCsv,
                  "line " + std::to_string(line_no) + " has " +
                      std::to_string(row.size()) + " fields, expected " +
                      std::to_string(cols));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty())
    throw Error(ErrorCode::InvalidArgument, path.string() + " has no data rows");

  EmbeddingSet e;
  e.data.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols; ++j)
      e.data(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  return e;
}

void write_csv_embeddings(const std::filesystem::path& path, const EmbeddingSet& e) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::FileError, "cannot write " + path.string());
  out << std::setprecision(17);
  for (Eigen::Index i = 0; i < e.rows(); ++i) {
    for (Eigen::Index j = 0; j < e.cols(); ++j) {
      if (j) out << ',';
      out << e.data(i, j);
    }
    out << '\n';
  }
  if (!out) throw Error(ErrorCode::FileError, "short write to " + path.string());
}

EmbeddingSet read_embeddings_any(const std::filesystem::path& path, bool csv_has_header) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (ext == ".csv") return read_csv_embeddings(path, csv_has_header);
  return read_embeddings(path);
}

std::vector<int> read_labels(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::FileError, "cannot open " + path.string());
  std::vector<int> labels;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    char* end = nullptr;
    const long v = std::strtol(line.c_str(), &end, 10);
    if (end == line.c_str() || *end != '\0')
      throw Error(ErrorCode::InvalidArgument,
                  "cannot parse label '" + line + "' on line " + std::to_string(line_no));
    labels.push_back(static_cast<int>(v));
  }
  return labels;
}

void write_labels(const std::filesystem::path& path, const std::vector<int>& labels) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::FileError, "cannot write " + path.string());
  for (const int l : labels) out << l << '\n';
  if (!out) throw Error(ErrorCode::FileError, "short write to " + path.string());
}

Manifest read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::FileError, "cannot open " + path.string());
  Json doc = Json::parse(in, nullptr, false);
  if (doc.is_discarded() || !doc.is_object() || !doc.contains("models") ||
      !doc["models"].is_array())
    throw Error(ErrorCode::InvalidArgument,
                path.string() + " is not a manifest with a \"models\" array");

  const std::filesystem::path base = path.has_parent_path()
                                         ? path.parent_path()
                                         : std::filesystem::path(".");
  const auto resolve = [&](const std::string& rel) {
    std::filesystem::path p(rel);
    if (p.is_relative()) p = base / p;
    p = std::filesystem::absolute(p);
    if (!std::filesystem::exists(p))
      throw Error(ErrorCode::FileError, p.string() + " does not exist");
    return p;
  };

  Manifest man;
  std::set<std::string> seen;
  for (const auto& entry : doc["models"]) {
    if (!entry.is_object() || !entry.contains("name") || !entry["name"].is_string() ||
        !entry.contains("embeddings_path") || !entry["embeddings_path"].is_string())
      throw Error(ErrorCode::InvalidArgument,
                  "each model needs a \"name\" and an \"embeddings_path\"");
    ManifestEntry m;
    m.name = entry["name"].get<std::string>();
    if (!seen.insert(m.name).second)
      throw Error(ErrorCode::InvalidArgument, "duplicate model name " + m.name);
    m.embeddings_path = resolve(entry["embeddings_path"].get<std::string>());
    if (entry.contains("paired_path"))
      m.paired_path = resolve(entry["paired_path"].get<std::string>());
    if (entry.contains("labels_path"))
      m.labels_path = resolve(entry["labels_path"].get<std::string>());
    if (entry.contains("accuracy")) {
      if (!entry["accuracy"].is_number())
        throw Error(ErrorCode::InvalidArgument,
                    "accuracy of " + m.name + " is not a number");
      m.accuracy = entry["accuracy"].get<double>();
    }
    man.models.push_back(std::move(m));
  }
  return man;
}

}  // namespace repeval
