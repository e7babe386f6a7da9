#include "repeval/baselines.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "repeval/core.hpp"
#include "repeval/parallel.hpp"
#include "repeval/rng.hpp"

namespace repeval {

namespace {

double log_sum_exp_mean(const std::vector<double>& vs) {
  double mx = vs[0];
  for (const double v : vs) mx = std::max(mx, v);
  double s = 0.0;
  for (const double v : vs) s += std::exp(v - mx);
  return mx + std::log(s) - std::log(static_cast<double>(vs.size()));
}

// 0.5 * logdet(I + scale * Z^T Z), via the Cholesky factor of the Gram matrix
double half_logdet_gram(const Matrix& z, double scale) {
  const Eigen::Index m = z.cols();
  Eigen::MatrixXd gram = Eigen::MatrixXd::Identity(m, m);
  gram.noalias() += scale * (z.transpose() * z);
  Eigen::LLT<Eigen::MatrixXd> llt(gram);
  if (llt.info() != Eigen::Success)
    throw Error(ErrorCode::NonFiniteLogDet, "Gram matrix is not positive definite");
  double ld = 0.0;
  const auto& l = llt.matrixLLT();
  for (Eigen::Index i = 0; i < m; ++i) ld += std::log(l(i, i));
  if (!std::isfinite(ld))
    throw Error(ErrorCode::NonFiniteLogDet, "log-determinant is not finite");
  return ld;
}

}  // namespace

double alignment_loss(const PairedEmbeddings& p, const AlignUnifParams& params) {
  if (p.view_a.rows() != p.view_b.rows() || p.view_a.cols() != p.view_b.cols())
    throw Error(ErrorCode::ShapeMismatch,
                "views have shapes " + std::to_string(p.view_a.rows()) + "x" +
                    std::to_string(p.view_a.cols()) + " and " +
                    std::to_string(p.view_b.rows()) + "x" +
                    std::to_string(p.view_b.cols()));
  const Eigen::Index n = p.view_a.rows();
  if (n < 1) throw Error(ErrorCode::TooFewPoints, "no pairs");

  const Matrix a =
      params.normalize_alignment ? normalize_rows(p.view_a).data : p.view_a.data;
  const Matrix b =
      params.normalize_alignment ? normalize_rows(p.view_b).data : p.view_b.data;
  double s = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    s += std::pow((a.row(i) - b.row(i)).norm(), params.alpha);
  return s / static_cast<double>(n);
}

UniformityResult uniformity_loss(const EmbeddingSet& e, const AlignUnifParams& params) {
  const Eigen::Index n = e.rows();
  if (n < 2) throw Error(ErrorCode::TooFewPoints, "need at least 2 points");
  const Matrix z = normalize_rows(e).data;

  const std::uint64_t total =
      static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(n - 1) / 2;
  UniformityResult out;
  std::vector<double> vs;
  if (params.exact_pairs || total <= static_cast<std::uint64_t>(params.pair_budget)) {
    vs.reserve(static_cast<std::size_t>(total));
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = i + 1; j < n; ++j)
        vs.push_back(-params.t * (z.row(i) - z.row(j)).squaredNorm());
    out.exact = true;
  } else {
    // Systematic sample of the unordered-pair lattice: exactly `budget`
    // distinct pairs, evenly spaced, rotated by a seeded offset. Much lower
    // variance than iid pair draws and still uniform over offsets.
    const auto budget = static_cast<std::uint64_t>(params.pair_budget);
    const std::uint64_t offset = Rng(params.pair_seed).next_below(total);
    const auto nn = static_cast<std::uint64_t>(n);
    // pairs with first index < i come before S(i) in lexicographic order
    const auto lex_start = [nn](std::uint64_t i) { return i * (2 * nn - i - 1) / 2; };
    vs.reserve(static_cast<std::size_t>(budget));
    for (std::uint64_t p = 0; p < budget; ++p) {
      const std::uint64_t u = static_cast<std::uint64_t>(
          (offset + static_cast<unsigned __int128>(p) * total / budget) % total);
      double disc = (2.0 * static_cast<double>(nn) - 1.0);
      disc = disc * disc - 8.0 * static_cast<double>(u);
      auto i = static_cast<std::uint64_t>(std::max(
          0.0, (2.0 * static_cast<double>(nn) - 1.0 - std::sqrt(std::max(0.0, disc))) / 2.0));
      i = std::min(i, nn - 2);
      while (i > 0 && lex_start(i) > u) --i;
      while (i + 2 < nn && lex_start(i + 1) <= u) ++i;
      const std::uint64_t j = i + 1 + (u - lex_start(i));
      vs.push_back(-params.t * (z.row(static_cast<Eigen::Index>(i)) -
                                z.row(static_cast<Eigen::Index>(j)))
                                   .squaredNorm());
    }
    out.exact = false;
  }
  out.n_pairs = vs.size();
  out.value = log_sum_exp_mean(vs);
  return out;
}

double contrastive_score(const PairedEmbeddings& p, const AlignUnifParams& params) {
  const double align = alignment_loss(p, params);
  Matrix stacked(p.view_a.rows() + p.view_b.rows(), p.view_a.cols());
  stacked << p.view_a.data, p.view_b.data;
  const double unif = uniformity_loss(EmbeddingSet{std::move(stacked)}, params).value;
  return -align - unif;
}

double coding_rate(const EmbeddingSet& e, const CodingRateParams& params) {
  if (params.eps_sq <= 0.0)
    throw Error(ErrorCode::InvalidArgument, "eps_sq must be positive");
  const Eigen::Index n = e.rows();
  if (n < 1) throw Error(ErrorCode::TooFewPoints, "no points");
  const double scale =
      static_cast<double>(e.cols()) / (static_cast<double>(n) * params.eps_sq);
  return half_logdet_gram(e.data, scale);
}

double coding_rate_conditional(const EmbeddingSet& e, const Partition& part,
                               const CodingRateParams& params) {
  if (params.eps_sq <= 0.0)
    throw Error(ErrorCode::InvalidArgument, "eps_sq must be positive");
  const Eigen::Index n = e.rows();
  if (static_cast<Eigen::Index>(part.labels.size()) != n)
    throw Error(ErrorCode::LabelLengthMismatch,
                "got " + std::to_string(part.labels.size()) + " labels for " +
                    std::to_string(n) + " rows");
  for (const int l : part.labels)
    if (l < 0 || l >= part.k)
      throw Error(ErrorCode::InvalidArgument, "label " + std::to_string(l) +
                                                  " is outside [0, " +
                                                  std::to_string(part.k) + ")");

  double total = 0.0;
  for (int g = 0; g < part.k; ++g) {
    Eigen::Index count = 0;
    for (const int l : part.labels) count += l == g;
    if (count == 0) continue;
    Matrix zg(count, e.cols());
    Eigen::Index r = 0;
    for (Eigen::Index i = 0; i < n; ++i)
      if (part.labels[static_cast<std::size_t>(i)] == g) zg.row(r++) = e.data.row(i);
    const double scale =
        static_cast<double>(e.cols()) / (static_cast<double>(count) * params.eps_sq);
    total += (static_cast<double>(count) / static_cast<double>(n)) *
             half_logdet_gram(zg, scale);
  }
  return total;
}

double mcr2_delta(const EmbeddingSet& e, const Partition& part,
                  const CodingRateParams& params) {
  const EmbeddingSet zn = normalize_rows(e);
  return coding_rate(zn, params) - coding_rate_conditional(zn, part, params);
}

double pretext_knn_accuracy(const EmbeddingSet& train,
                            const std::vector<int>& train_labels,
                            const EmbeddingSet& test,
                            const std::vector<int>& test_labels, int k, Metric metric) {
  if (train.cols() != test.cols())
    throw Error(ErrorCode::ShapeMismatch,
                "train has " + std::to_string(train.cols()) + " columns, test has " +
                    std::to_string(test.cols()));
  const Eigen::Index n_tr = train.rows();
  const Eigen::Index n_te = test.rows();
  if (static_cast<Eigen::Index>(train_labels.size()) != n_tr ||
      static_cast<Eigen::Index>(test_labels.size()) != n_te)
    throw Error(ErrorCode::LabelLengthMismatch, "label counts do not match the rows");
  if (k < 1) throw Error(ErrorCode::KOutOfRange, "k must be at least 1");
  if (static_cast<Eigen::Index>(k) > n_tr)
    throw Error(ErrorCode::KTooLarge, "k=" + std::to_string(k) + " exceeds " +
                                          std::to_string(n_tr) + " training points");
  for (const int l : train_labels)
    if (l < 0) throw Error(ErrorCode::InvalidArgument, "labels must be non-negative");

  std::vector<double> tr_norm, te_norm;
  if (metric == Metric::Cosine) {
    const auto fill = [](const Matrix& x, std::vector<double>& out) {
      out.resize(static_cast<std::size_t>(x.rows()));
      for (Eigen::Index i = 0; i < x.rows(); ++i) {
        double s = 0.0;
        for (Eigen::Index c = 0; c < x.cols(); ++c) s += x(i, c) * x(i, c);
        if (s == 0.0)
          throw Error(ErrorCode::ZeroNormRow,
                      "row " + std::to_string(i) + " has zero norm");
        out[static_cast<std::size_t>(i)] = std::sqrt(s);
      }
    };
    fill(train.data, tr_norm);
    fill(test.data, te_norm);
  }

  std::vector<char> hit(static_cast<std::size_t>(n_te), 0);
  parallel_for(static_cast<std::size_t>(n_te), [&](std::size_t row) {
    const auto i = static_cast<Eigen::Index>(row);
    std::vector<std::pair<double, Eigen::Index>> best;
    best.reserve(static_cast<std::size_t>(k));
    for (Eigen::Index j = 0; j < n_tr; ++j) {
      double d;
      if (metric == Metric::Euclidean) {
        d = std::sqrt(squared_euclidean(test.data, i, train.data, j));
      } else {
        double dot = 0.0;
        for (Eigen::Index c = 0; c < test.data.cols(); ++c)
          dot += test.data(i, c) * train.data(j, c);
        d = 2.0 - 2.0 * dot /
                      (te_norm[static_cast<std::size_t>(i)] *
                       tr_norm[static_cast<std::size_t>(j)]);
      }
      if (best.size() == static_cast<std::size_t>(k)) {
        if (!(d < best.back().first)) continue;
        best.back() = {d, j};
      } else {
        best.emplace_back(d, j);
      }
      std::size_t s = best.size() - 1;
      while (s > 0 && (best[s].first < best[s - 1].first ||
                       (best[s].first == best[s - 1].first &&
                        best[s].second < best[s - 1].second))) {
        std::swap(best[s], best[s - 1]);
        --s;
      }
    }
    // vote ties break toward the label seen closest first, which keeps the
    // result invariant under relabelings
    int best_label = -1, best_count = 0;
    for (std::size_t a = 0; a < best.size(); ++a) {
      const int la = train_labels[static_cast<std::size_t>(best[a].second)];
      int count = 0;
      for (std::size_t b = 0; b < best.size(); ++b)
        if (train_labels[static_cast<std::size_t>(best[b].second)] == la) ++count;
      if (count > best_count) {
        best_count = count;
        best_label = la;
      }
    }
    hit[row] = best_label == test_labels[row];
  });

  std::size_t correct = 0;
  for (const char h : hit) correct += h;
  return static_cast<double>(correct) / static_cast<double>(n_te);
}

}  // namespace repeval
