#pragma once

#include "repeval/types.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace repeval {

using Json = nlohmann::ordered_json;

enum class EmbDtype : std::uint8_t { F32 = 0, F64 = 1 };

// Binary embedding container: magic "EMB1", little-endian u32 version (=1),
// u64 n_rows, u32 n_cols, u8 dtype (0 = f32, 1 = f64), 3 reserved zero
// bytes, then row-major little-endian values. The declared sizes must match
// the file length exactly.
EmbeddingSet read_embeddings(const std::filesystem::path& path);
void write_embeddings(const std::filesystem::path& path, const EmbeddingSet& e,
                      EmbDtype dtype = EmbDtype::F64);

// CSV: one sample per row, double precision, optional header row skipped.
EmbeddingSet read_csv_embeddings(const std::filesystem::path& path,
                                 bool has_header = false);
void write_csv_embeddings(const std::filesystem::path& path,
                          const EmbeddingSet& e);

// Reads either format by extension: .csv -> CSV, anything else -> EMB1.
EmbeddingSet read_embeddings_any(const std::filesystem::path& path,
                                 bool csv_has_header = false);

// Integer labels, one per line.
std::vector<int> read_labels(const std::filesystem::path& path);
void write_labels(const std::filesystem::path& path,
                  const std::vector<int>& labels);

struct ManifestEntry {
  std::string name;
  std::filesystem::path embeddings_path;
  std::optional<std::filesystem::path> paired_path;
  std::optional<std::filesystem::path> labels_path;
  std::optional<double> accuracy;
};

struct Manifest {
  std::vector<ManifestEntry> models;
};

// JSON document: {"models": [{"name": ..., "embeddings_path": ...,
// "paired_path"?, "labels_path"?, "accuracy"?}, ...]}. Relative paths are
// resolved against the manifest's directory. Names must be unique and the
// referenced files must exist.
Manifest read_manifest(const std::filesystem::path& path);

}  // namespace repeval
