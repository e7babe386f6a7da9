#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "repeval/baselines.hpp"
#include "repeval/clustering.hpp"
#include "repeval/io.hpp"
#include "repeval/learnability.hpp"
#include "repeval/predictors.hpp"
#include "repeval/types.hpp"

namespace repeval {

// Knobs shared by every scoring pass. n_clusters <= 0 selects ceil(sqrt(N)).
struct ScoreConfig {
  Metric metric = Metric::Cosine;
  int n_clusters = 0;
  int n_neighbors = 1;
  Eigen::Index chunk_size = 1000;
  std::uint64_t seed = 0;
  double smoothing = 1.0;
  double discard_fraction = 0.1;
  int mle_k = 20;
  int entropy_k = 10;
  CodingRateParams coding{};
  AlignUnifParams align_unif{};
  int pretext_k = 1;
  KMeansOptions kmeans{};
};

// Scores one embedding set. `paired` adds alignment/uniformity/contrastive,
// `labels` adds conditional coding rates and pretext accuracy. Absent inputs
// leave the corresponding metrics absent in the report.
Json score_model(const std::string& name, const EmbeddingSet& e,
                 const ScoreConfig& cfg, const PairedEmbeddings* paired = nullptr,
                 const std::vector<int>* labels = nullptr);

struct RankInput {
  std::string name;
  EmbeddingSet embeddings;
  std::optional<double> accuracy;
  std::optional<PairedEmbeddings> paired;
  std::optional<std::vector<int>> labels;
};

// Parsed form of --sweep tokens such as "neighbors=1,5,10" and
// "clusters=0.1%,1%,sqrt,10%". Cluster tokens stay symbolic until a dataset
// size is known.
struct SweepSpec {
  std::vector<int> neighbors;
  std::vector<std::string> cluster_tokens;
};

SweepSpec parse_sweep(const std::vector<std::string>& tokens);

// "sqrt" -> ceil(sqrt(n)); "2.5%" -> ceil(n * 0.025); plain integer -> itself.
// Always at least 1, at most n.
Eigen::Index resolve_cluster_token(const std::string& token, Eigen::Index n);

Metric parse_metric(const std::string& name);

struct RankConfig {
  ScoreConfig score{};
  bool fit_wclid = false;
  bool loo = false;
  std::optional<SweepSpec> sweep;
};

// Scores every model, correlates each predictor with supplied accuracies,
// optionally fits the weighted combination and runs the sensitivity sweep.
// Per-model scoring failures are recorded in the report; the run continues.
Json rank_models(const std::vector<RankInput>& models, const RankConfig& cfg);

struct TransferConfig {
  ScoreConfig score{};
};

// Predictor ranking computed on source embeddings, evaluated against target
// accuracies; when every source model carries an accuracy, also reports the
// joint rank-product ranking. Model name sets must match exactly.
Json transfer_rank(const std::vector<RankInput>& source,
                   const std::vector<std::pair<std::string, double>>& target_accuracy,
                   const TransferConfig& cfg);

// ---- file-level command wrappers (CLI entry points) ----

struct ScoreOptions {
  std::string input;
  std::string metric = "cosine";
  std::string clusters = "auto";
  int neighbors = 1;
  long long chunk_size = 1000;
  std::uint64_t seed = 0;
  double discard_fraction = 0.1;
  double eps_sq = 0.5;
  std::string paired;
  std::string labels;
  std::string out;
  bool csv_has_header = false;
};

Json cmd_score(const ScoreOptions& opt);

struct RankOptions {
  std::string manifest;
  std::string metric = "cosine";
  std::string clusters = "auto";
  int neighbors = 1;
  long long chunk_size = 1000;
  std::uint64_t seed = 0;
  double discard_fraction = 0.1;
  double eps_sq = 0.5;
  bool fit_wclid = false;
  bool loo = false;
  std::vector<std::string> sweep;
  std::string out;
  bool csv_has_header = false;
};

Json cmd_rank(const RankOptions& opt);

struct TransferOptions {
  std::string source_manifest;
  std::string target_manifest;
  std::string metric = "cosine";
  std::string clusters = "auto";
  int neighbors = 1;
  long long chunk_size = 1000;
  std::uint64_t seed = 0;
  double discard_fraction = 0.1;
  double eps_sq = 0.5;
  std::string out;
  bool csv_has_header = false;
};

Json cmd_transfer(const TransferOptions& opt);

struct SynthOptions {
  std::string kind = "hypercube";
  long long n = 1000;
  int d = 2;
  int m = 16;
  int blobs = 1;
  double separation = 0.0;
  double sigma = 1.0;
  std::uint64_t seed = 0;
  std::string out;
  std::string labels_out;
};

Json cmd_synth(const SynthOptions& opt);

// Structural check for emitted reports; returns false and fills `why` on the
// first violation.
bool validate_report(const Json& report, std::string* why = nullptr);

// Full argv-level entry point. Returns the process exit code: 0 on success,
// 2 for file/parse failures, 1 for everything else. Errors print a one-line
// JSON object on stderr.
int run_cli(int argc, const char* const* argv);

} // namespace repeval
