#include "repeval/learnability.hpp"

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "repeval/core.hpp"
#include "repeval/parallel.hpp"
#include "repeval/rng.hpp"

namespace repeval {

namespace {

struct Layout {
  std::vector<std::size_t> perm;
  std::vector<std::pair<std::size_t, std::size_t>> chunks;  // (start, length)
};

Layout make_layout(Eigen::Index n, const PrequentialConfig& cfg) {
  if (cfg.chunk_size < 2)
    throw Error(ErrorCode::InvalidArgument, "chunk size must be at least 2");
  Layout lay;
  lay.perm = Rng(cfg.seed).permutation(static_cast<std::size_t>(n));
  const auto chunk = static_cast<std::size_t>(cfg.chunk_size);
  for (std::size_t start = 0; start < lay.perm.size(); start += chunk) {
    const std::size_t len = std::min(chunk, lay.perm.size() - start);
    if (len >= 2) lay.chunks.emplace_back(start, len);
  }
  if (lay.chunks.empty())
    throw Error(ErrorCode::EmptyAfterChunking, "no chunk has at least 2 points");
  return lay;
}

// Sorted (distance, earlier-position) lists of the up-to-budget nearest
// previously seen points, one list per scored position.
std::vector<std::vector<std::pair<double, std::size_t>>> scan_neighbors(
    const Matrix& x, const Layout& lay, int budget, Metric metric) {
  const Eigen::Index n = x.rows();
  std::vector<double> norm;
  if (metric == Metric::Cosine) {
    norm.resize(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
      double s = 0.0;
      for (Eigen::Index c = 0; c < x.cols(); ++c) s += x(i, c) * x(i, c);
      if (s == 0.0)
        throw Error(ErrorCode::ZeroNormRow,
                    "row " + std::to_string(i) + " has zero norm");
      norm[static_cast<std::size_t>(i)] = std::sqrt(s);
    }
  }

  // flatten (chunk, position >= 1) into one task list
  std::vector<std::pair<std::size_t, std::size_t>> tasks;  // (chunk index, position)
  for (std::size_t c = 0; c < lay.chunks.size(); ++c)
    for (std::size_t p = 1; p < lay.chunks[c].second; ++p) tasks.emplace_back(c, p);

  std::vector<std::vector<std::pair<double, std::size_t>>> lists(tasks.size());
  parallel_for(tasks.size(), [&](std::size_t t) {
    const auto [c, p] = tasks[t];
    const std::size_t start = lay.chunks[c].first;
    const auto i = static_cast<Eigen::Index>(lay.perm[start + p]);
    const std::size_t keep = std::min<std::size_t>(static_cast<std::size_t>(budget), p);
    auto& list = lists[t];
    list.reserve(keep);
    for (std::size_t q = 0; q < p; ++q) {
      const auto j = static_cast<Eigen::Index>(lay.perm[start + q]);
      double d;
      if (metric == Metric::Euclidean) {
        d = std::sqrt(squared_euclidean(x, i, x, j));
      } else {
        double dot = 0.0;
        for (Eigen::Index col = 0; col < x.cols(); ++col) dot += x(i, col) * x(j, col);
        d = 2.0 - 2.0 * dot /
                      (norm[static_cast<std::size_t>(i)] * norm[static_cast<std::size_t>(j)]);
      }
      // insert (d, q), keeping the list sorted by (distance, position)
      if (list.size() == keep) {
        if (!(d < list.back().first)) continue;
        list.back() = {d, q};
      } else {
        list.emplace_back(d, q);
      }
      std::size_t s = list.size() - 1;
      while (s > 0 && (d < list[s - 1].first ||
                       (d == list[s - 1].first && q < list[s - 1].second))) {
        std::swap(list[s], list[s - 1]);
        --s;
      }
    }
  });
  return lists;
}

}  // namespace

std::vector<std::vector<PrequentialResult>> prequential_knn_grid(
    const EmbeddingSet& e, const std::vector<std::vector<int>>& labelings,
    const std::vector<int>& neighbor_counts, Metric metric,
    const PrequentialConfig& cfg) {
  if (labelings.empty())
    throw Error(ErrorCode::InvalidArgument, "no labelings given");
  if (neighbor_counts.empty())
    throw Error(ErrorCode::InvalidArgument, "no neighbor counts given");
  for (const int nb : neighbor_counts)
    if (nb < 1)
      throw Error(ErrorCode::InvalidArgument, "neighbor count must be at least 1");

  const Eigen::Index n = e.rows();
  std::vector<int> n_classes(labelings.size());
  for (std::size_t v = 0; v < labelings.size(); ++v) {
    const auto& labels = labelings[v];
    if (static_cast<Eigen::Index>(labels.size()) != n)
      throw Error(ErrorCode::LabelLengthMismatch,
                  "got " + std::to_string(labels.size()) + " labels for " +
                      std::to_string(n) + " rows");
    int k = 0;
    for (const int l : labels) {
      if (l < 0) throw Error(ErrorCode::InvalidArgument, "labels must be non-negative");
      k = std::max(k, l + 1);
    }
    n_classes[v] = k;
  }

  const Layout lay = make_layout(n, cfg);
  int budget = 1;
  for (const int nb : neighbor_counts) budget = std::max(budget, nb);
  const auto lists = scan_neighbors(e.data, lay, budget, metric);

  std::vector<std::vector<PrequentialResult>> grid(
      labelings.size(), std::vector<PrequentialResult>(neighbor_counts.size()));
  for (std::size_t v = 0; v < labelings.size(); ++v) {
    const auto& labels = labelings[v];
    const double sk = cfg.smoothing * static_cast<double>(n_classes[v]);
    for (std::size_t u = 0; u < neighbor_counts.size(); ++u) {
      const auto nb = static_cast<std::size_t>(neighbor_counts[u]);
      PrequentialResult res;
      std::size_t task = 0;
      for (const auto& [start, len] : lay.chunks) {
        std::size_t correct = 0;
        for (std::size_t p = 1; p < len; ++p, ++task) {
          const int truth = labels[lay.perm[start + p]];
          const auto& list = lists[task];
          const std::size_t used = std::min(nb, p);
          int best_label = -1, best_count = 0, truth_count = 0;
          for (std::size_t a = 0; a < used; ++a) {
            const int la = labels[lay.perm[start + list[a].second]];
            int count = 0;
            for (std::size_t b = 0; b < used; ++b)
              if (labels[lay.perm[start + list[b].second]] == la) ++count;
            if (count > best_count || (count == best_count && la < best_label)) {
              best_count = count;
              best_label = la;
            }
            if (la == truth) truth_count = count;
          }
          if (best_label == truth) ++correct;
          const double p_true = (static_cast<double>(truth_count) + cfg.smoothing) /
                                (static_cast<double>(used) + sk);
          res.codelength -= std::log(p_true);
        }
        res.per_chunk_accuracy.push_back(static_cast<double>(correct) /
                                         static_cast<double>(len - 1));
        res.n_predictions += len - 1;
      }
      double acc = 0.0;
      for (const double a : res.per_chunk_accuracy) acc += a;
      res.cl = acc / static_cast<double>(res.per_chunk_accuracy.size());
      grid[v][u] = std::move(res);
    }
  }
  return grid;
}

PrequentialResult prequential_knn(const EmbeddingSet& e,
                                  const std::vector<int>& labels, Metric metric,
                                  const PrequentialConfig& cfg) {
  if (cfg.n_neighbors < 1)
    throw Error(ErrorCode::InvalidArgument, "neighbor count must be at least 1");
  auto grid = prequential_knn_grid(e, {labels}, {cfg.n_neighbors}, metric, cfg);
  return std::move(grid[0][0]);
}

ClResult cluster_learnability(const EmbeddingSet& e, Metric metric, int n_clusters,
                              const PrequentialConfig& cfg, std::uint64_t kmeans_seed,
                              const KMeansOptions& kopts) {
  const Eigen::Index n = e.rows();
  int k = n_clusters;
  if (k <= 0)
    k = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n))));
  ClResult out;
  out.partition = kmeans(e, k, metric, kmeans_seed, kopts);
  out.preq = prequential_knn(e, out.partition.labels, metric, cfg);
  return out;
}

}  // namespace repeval
