#include "repeval/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "repeval/core.hpp"
#include "repeval/id_estimation.hpp"
#include "repeval/rank_stats.hpp"
#include "repeval/rng.hpp"
#include "repeval/synth.hpp"

namespace repeval {

namespace {

const char* metric_name(Metric m) {
  return m == Metric::Cosine ? "cosine" : "euclidean";
}

int auto_clusters(Eigen::Index n) {
  return static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n))));
}

PrequentialConfig prequential_config(const ScoreConfig& cfg) {
  PrequentialConfig pc;
  pc.n_neighbors = cfg.n_neighbors;
  pc.chunk_size = cfg.chunk_size;
  pc.seed = cfg.seed;
  pc.smoothing = cfg.smoothing;
  return pc;
}

void write_report(const Json& rep, const std::string& out) {
  if (out.empty()) {
    std::cout << rep.dump(2) << "\n";
    return;
  }
  std::ofstream f(out, std::ios::trunc);
  if (!f) throw Error(ErrorCode::FileError, "cannot write " + out);
  f << rep.dump(2) << "\n";
  if (!f) throw Error(ErrorCode::FileError, "short write to " + out);
}

bool all_equal(const std::vector<double>& xs) {
  for (const double x : xs)
    if (x != xs[0]) return false;
  return true;
}

// Correlates predictor values with accuracies. Identical accuracies cannot be
// ranked against at all; identical predictor values merely leave the
// correlation undefined, so those keys are omitted.
std::optional<std::pair<double, double>> correlate(const std::vector<double>& values,
                                                   const std::vector<double>& accs) {
  if (all_equal(accs))
    throw Error(ErrorCode::AllTied, "the supplied accuracies are all identical");
  if (all_equal(values)) return std::nullopt;
  return std::make_pair(kendall_tau(values, accs, TauVariant::TieCorrected),
                        pearson(values, accs));
}

struct ScoredModel {
  const RankInput* input = nullptr;
  bool ok = false;
  double cl = 0.0;
  double id = 0.0;
  std::string error_code;
  std::string error_message;
};

// The scoring core shared by rank and transfer: cluster learnability plus
// intrinsic dimension, nothing else.
std::pair<double, double> cl_and_id(const EmbeddingSet& e, const ScoreConfig& cfg) {
  e.validate();
  const int k = cfg.n_clusters > 0 ? cfg.n_clusters : auto_clusters(e.rows());
  const auto res = cluster_learnability(e, cfg.metric, k, prequential_config(cfg),
                                        cfg.seed, cfg.kmeans);
  const auto fit = twonn_id(e, cfg.metric, cfg.discard_fraction);
  return {res.preq.cl, fit.id};
}

std::vector<ScoredModel> score_population(const std::vector<RankInput>& models,
                                          const ScoreConfig& cfg) {
  std::vector<ScoredModel> rows;
  rows.reserve(models.size());
  for (const auto& m : models) {
    ScoredModel row;
    row.input = &m;
    try {
      const auto [cl, id] = cl_and_id(m.embeddings, cfg);
      row.cl = cl;
      row.id = id;
      row.ok = true;
    } catch (const Error& err) {
      row.error_code = error_code_name(err.code());
      row.error_message = err.what();
    }
    rows.push_back(std::move(row));
  }
  std::sort(rows.begin(), rows.end(), [](const ScoredModel& a, const ScoredModel& b) {
    return a.input->name < b.input->name;
  });
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (rows[i].input->name == rows[i - 1].input->name)
      throw Error(ErrorCode::InvalidArgument,
                  "duplicate model name " + rows[i].input->name);
  return rows;
}

std::vector<ModelMetrics> valid_metrics(const std::vector<ScoredModel>& rows) {
  std::vector<ModelMetrics> pop;
  for (const auto& r : rows) {
    if (!r.ok) continue;
    ModelMetrics m;
    m.name = r.input->name;
    m.cl = r.cl;
    m.id = r.id;
    m.accuracy = r.input->accuracy;
    pop.push_back(std::move(m));
  }
  return pop;
}

ScoreConfig config_from_knobs(const std::string& metric, int neighbors,
                              long long chunk_size, std::uint64_t seed,
                              double discard_fraction, double eps_sq) {
  ScoreConfig cfg;
  cfg.metric = parse_metric(metric);
  cfg.n_neighbors = neighbors;
  cfg.chunk_size = static_cast<Eigen::Index>(chunk_size);
  cfg.seed = seed;
  cfg.discard_fraction = discard_fraction;
  cfg.coding.eps_sq = eps_sq;
  return cfg;
}

// rank/transfer see models of differing sizes, so their --clusters only
// accepts "auto" or an explicit count
int parse_cluster_count(const std::string& token) {
  if (token == "auto") return 0;
  char* end = nullptr;
  const long v = std::strtol(token.c_str(), &end, 10);
  if (end == token.c_str() || *end != '\0' || v < 1)
    throw Error(ErrorCode::InvalidArgument,
                "--clusters must be \"auto\" or a positive integer, got '" + token + "'");
  return static_cast<int>(v);
}

std::vector<RankInput> load_manifest_models(const std::string& manifest_path,
                                            bool csv_has_header) {
  const Manifest man = read_manifest(manifest_path);
  std::vector<RankInput> inputs;
  inputs.reserve(man.models.size());
  for (const auto& entry : man.models) {
    RankInput in;
    in.name = entry.name;
    in.embeddings = read_embeddings_any(entry.embeddings_path, csv_has_header);
    in.accuracy = entry.accuracy;
    if (entry.paired_path) {
      PairedEmbeddings p;
      p.view_a = in.embeddings;
      p.view_b = read_embeddings_any(*entry.paired_path, csv_has_header);
      in.paired = std::move(p);
    }
    if (entry.labels_path) in.labels = read_labels(*entry.labels_path);
    inputs.push_back(std::move(in));
  }
  return inputs;
}

}  // namespace

Metric parse_metric(const std::string& name) {
  if (name == "cosine") return Metric::Cosine;
  if (name == "euclidean") return Metric::Euclidean;
  throw Error(ErrorCode::InvalidArgument, "unknown metric '" + name + "'");
}

Eigen::Index resolve_cluster_token(const std::string& token, Eigen::Index n) {
  if (token.empty())
    throw Error(ErrorCode::InvalidArgument, "empty cluster token");
  Eigen::Index k;
  if (token == "sqrt") {
    k = static_cast<Eigen::Index>(std::ceil(std::sqrt(static_cast<double>(n))));
  } else if (token.back() == '%') {
    const std::string head = token.substr(0, token.size() - 1);
    char* end = nullptr;
    const double pct = std::strtod(head.c_str(), &end);
    if (head.empty() || end != head.c_str() + head.size() || pct < 0.0)
      throw Error(ErrorCode::InvalidArgument, "bad cluster percentage '" + token + "'");
    k = static_cast<Eigen::Index>(
        std::ceil(static_cast<double>(n) * pct / 100.0));
  } else {
    char* end = nullptr;
    const long long v = std::strtoll(token.c_str(), &end, 10);
    if (end == token.c_str() || *end != '\0')
      throw Error(ErrorCode::InvalidArgument, "bad cluster token '" + token + "'");
    k = static_cast<Eigen::Index>(v);
  }
  return std::max<Eigen::Index>(1, std::min(k, n));
}

SweepSpec parse_sweep(const std::vector<std::string>& tokens) {
  SweepSpec spec;
  bool saw_neighbors = false, saw_clusters = false;
  for (const auto& token : tokens) {
    const std::size_t eq = token.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorCode::InvalidArgument, "sweep token '" + token +
                                                  "' is not key=values");
    const std::string key = token.substr(0, eq);
    const std::string rest = token.substr(eq + 1);
    if (rest.empty())
      throw Error(ErrorCode::InvalidArgument, "sweep axis '" + key + "' has no values");

    std::vector<std::string> parts;
    std::size_t pos = 0;
    while (pos <= rest.size()) {
      const std::size_t comma = std::min(rest.find(',', pos), rest.size());
      parts.push_back(rest.substr(pos, comma - pos));
      pos = comma + 1;
    }
    for (const auto& p : parts)
      if (p.empty())
        throw Error(ErrorCode::InvalidArgument, "sweep axis '" + key +
                                                    "' has an empty value");

    if (key == "neighbors") {
      if (saw_neighbors)
        throw Error(ErrorCode::InvalidArgument, "duplicate sweep axis 'neighbors'");
      saw_neighbors = true;
      for (const auto& p : parts) {
        char* end = nullptr;
        const long v = std::strtol(p.c_str(), &end, 10);
        if (end == p.c_str() || *end != '\0' || v < 1)
          throw Error(ErrorCode::InvalidArgument,
                      "bad neighbor count '" + p + "' in sweep");
        spec.neighbors.push_back(static_cast<int>(v));
      }
    } else if (key == "clusters") {
      if (saw_clusters)
        throw Error(ErrorCode::InvalidArgument, "duplicate sweep axis 'clusters'");
      saw_clusters = true;
      spec.cluster_tokens = parts;
    } else {
      throw Error(ErrorCode::InvalidArgument, "unknown sweep axis '" + key + "'");
    }
  }
  if (!saw_neighbors || !saw_clusters)
    throw Error(ErrorCode::InvalidArgument,
                "a sweep needs both a 'neighbors' and a 'clusters' axis");
  return spec;
}

Json score_model(const std::string& name, const EmbeddingSet& e,
                 const ScoreConfig& cfg, const PairedEmbeddings* paired,
                 const std::vector<int>* labels) {
  e.validate();
  const Eigen::Index n = e.rows();
  const int k = cfg.n_clusters > 0 ? cfg.n_clusters : auto_clusters(n);

  const auto cl_res = cluster_learnability(e, cfg.metric, k, prequential_config(cfg),
                                           cfg.seed, cfg.kmeans);
  const auto twonn = twonn_id(e, cfg.metric, cfg.discard_fraction);
  const auto table = knn_query(e, std::max(2, cfg.mle_k), cfg.metric);
  const auto mle = mle_local_id(table, cfg.mle_k, IdPooling::Arithmetic);
  const auto ent = knn_entropy(e, cfg.entropy_k, cfg.metric);

  Json metrics;
  metrics["cl"] = cl_res.preq.cl;
  metrics["codelength"] = cl_res.preq.codelength;
  metrics["id_twonn"] = twonn.id;
  metrics["id_mle"] = mle.global_id;
  metrics["entropy"] = ent.entropy;
  metrics["clid_raw"] = cl_res.preq.cl + twonn.id;
  metrics["coding_rate"] = coding_rate(e, cfg.coding);
  metrics["coding_rate_conditional"] =
      coding_rate_conditional(e, cl_res.partition, cfg.coding);
  metrics["mcr2_delta"] = mcr2_delta(e, cl_res.partition, cfg.coding);

  if (paired) {
    metrics["l_align"] = alignment_loss(*paired, cfg.align_unif);
    Matrix stacked(paired->view_a.rows() + paired->view_b.rows(),
                   paired->view_a.cols());
    stacked << paired->view_a.data, paired->view_b.data;
    metrics["l_unif"] =
        uniformity_loss(EmbeddingSet{std::move(stacked)}, cfg.align_unif).value;
    metrics["contrastive"] = contrastive_score(*paired, cfg.align_unif);
  }
  if (labels) {
    if (static_cast<Eigen::Index>(labels->size()) != n)
      throw Error(ErrorCode::LabelLengthMismatch,
                  "got " + std::to_string(labels->size()) + " labels for " +
                      std::to_string(n) + " rows");
    if (n < 2)
      throw Error(ErrorCode::TooFewPoints, "the pretext split needs at least 2 rows");
    const auto perm = Rng(cfg.seed).permutation(static_cast<std::size_t>(n));
    const Eigen::Index n_train = (n + 1) / 2;
    EmbeddingSet train, test;
    train.data.resize(n_train, e.cols());
    test.data.resize(n - n_train, e.cols());
    std::vector<int> train_labels(static_cast<std::size_t>(n_train));
    std::vector<int> test_labels(static_cast<std::size_t>(n - n_train));
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto src = static_cast<Eigen::Index>(perm[static_cast<std::size_t>(i)]);
      if (i < n_train) {
        train.data.row(i) = e.data.row(src);
        train_labels[static_cast<std::size_t>(i)] =
            (*labels)[static_cast<std::size_t>(src)];
      } else {
        test.data.row(i - n_train) = e.data.row(src);
        test_labels[static_cast<std::size_t>(i - n_train)] =
            (*labels)[static_cast<std::size_t>(src)];
      }
    }
    metrics["pretext_acc"] = pretext_knn_accuracy(train, train_labels, test,
                                                  test_labels, cfg.pretext_k,
                                                  cfg.metric);
  }

  Json rep;
  rep["report"] = "score";
  rep["model"] = name;
  rep["n_rows"] = n;
  rep["n_cols"] = e.cols();
  rep["metrics"] = std::move(metrics);

  Json prov;
  prov["metric"] = metric_name(cfg.metric);
  prov["clusters"] = k;
  prov["clusters_mode"] = cfg.n_clusters > 0 ? "explicit" : "auto";
  prov["n_neighbors"] = cfg.n_neighbors;
  prov["chunk_size"] = static_cast<long long>(cfg.chunk_size);
  prov["seed"] = cfg.seed;
  prov["smoothing"] = cfg.smoothing;
  prov["discard_fraction"] = cfg.discard_fraction;
  prov["mle_k"] = cfg.mle_k;
  prov["entropy_k"] = cfg.entropy_k;
  prov["eps_sq"] = cfg.coding.eps_sq;
  rep["provenance"] = std::move(prov);
  return rep;
}

Json rank_models(const std::vector<RankInput>& models, const RankConfig& cfg) {
  if (models.size() < 2)
    throw Error(ErrorCode::TooFewPoints, "ranking needs at least two models");

  const auto rows = score_population(models, cfg.score);
  const auto pop = valid_metrics(rows);
  if (pop.size() < 2)
    throw Error(ErrorCode::TooFewPoints,
                "fewer than two models were scored successfully");

  const auto clid = clid_score(pop, ClidNormalization::ZScore);

  Json rep;
  rep["report"] = "rank";
  rep["n_models"] = models.size();
  rep["models"] = Json::array();
  {
    std::size_t v = 0;
    for (const auto& r : rows) {
      Json entry;
      entry["name"] = r.input->name;
      if (r.ok) {
        entry["cl"] = r.cl;
        entry["id_twonn"] = r.id;
        entry["clid"] = clid.values[v++];
        if (r.input->accuracy) entry["accuracy"] = *r.input->accuracy;
      } else {
        entry["error"] = Json{{"code", r.error_code}, {"message", r.error_message}};
      }
      rep["models"].push_back(std::move(entry));
    }
  }

  Json jclid;
  jclid["values"] = Json::object();
  for (std::size_t i = 0; i < pop.size(); ++i)
    jclid["values"][pop[i].name] = clid.values[i];
  if (clid.degenerate_cl) jclid["degenerate_cl"] = true;
  if (clid.degenerate_id) jclid["degenerate_id"] = true;

  std::vector<double> acc_values, accs;
  std::vector<std::size_t> acc_idx;
  for (std::size_t i = 0; i < pop.size(); ++i) {
    if (!pop[i].accuracy) continue;
    acc_values.push_back(clid.values[i]);
    accs.push_back(*pop[i].accuracy);
    acc_idx.push_back(i);
  }
  if (accs.size() >= 2) {
    if (const auto corr = correlate(acc_values, accs)) {
      jclid["kendall"] = corr->first;
      jclid["pearson"] = corr->second;
    }
  }
  rep["predictors"] = Json::object();
  rep["predictors"]["clid"] = std::move(jclid);

  if (cfg.fit_wclid) {
    const auto weights = fit_wclid(pop);
    Json jw;
    jw["weights"] = Json::array({weights.w[0], weights.w[1], weights.w[2]});
    jw["rss"] = weights.rss;
    jw["n_models"] = weights.n_models;

    std::vector<double> pred;
    for (const auto i : acc_idx) pred.push_back(wclid_score(weights, pop[i]));
    if (accs.size() >= 2) {
      if (const auto corr = correlate(pred, accs)) {
        jw["kendall"] = corr->first;
        jw["pearson"] = corr->second;
      }
    }

    if (cfg.loo) {
      if (accs.size() < 4) {
        std::cerr << "leave-one-out needs at least 4 models with accuracy; skipping\n";
      } else {
        std::vector<double> held_pred;
        bool loo_ok = true;
        for (std::size_t drop = 0; drop < acc_idx.size() && loo_ok; ++drop) {
          std::vector<ModelMetrics> rest;
          for (std::size_t i = 0; i < pop.size(); ++i)
            if (i != acc_idx[drop]) rest.push_back(pop[i]);
          try {
            const auto w = fit_wclid(rest);
            held_pred.push_back(wclid_score(w, pop[acc_idx[drop]]));
          } catch (const Error& err) {
            std::cerr << "leave-one-out fit failed (" << err.what() << "); skipping\n";
            loo_ok = false;
          }
        }
        if (loo_ok) {
          Json jl;
          if (const auto corr = correlate(held_pred, accs)) {
            jl["kendall"] = corr->first;
            jl["pearson"] = corr->second;
          }
          jw["loo"] = std::move(jl);
        }
      }
    }
    rep["predictors"]["wclid"] = std::move(jw);
  }

  if (cfg.sweep) {
    const SweepSpec& sw = *cfg.sweep;
    const std::size_t n_tokens = sw.cluster_tokens.size();
    const std::size_t n_counts = sw.neighbors.size();
    // cl per (token, neighbor count, model)
    std::vector<std::vector<std::vector<double>>> cell_cl(
        n_tokens, std::vector<std::vector<double>>(n_counts));
    std::vector<Eigen::Index> resolved(n_tokens, 0);

    for (std::size_t mi = 0; mi < pop.size(); ++mi) {
      const RankInput* in = nullptr;
      for (const auto& r : rows)
        if (r.ok && r.input->name == pop[mi].name) in = r.input;
      const EmbeddingSet& e = in->embeddings;
      const Eigen::Index n = e.rows();

      std::map<Eigen::Index, std::vector<int>> labels_by_k;
      std::vector<std::vector<int>> labelings(n_tokens);
      for (std::size_t t = 0; t < n_tokens; ++t) {
        const Eigen::Index k = resolve_cluster_token(sw.cluster_tokens[t], n);
        if (mi == 0) resolved[t] = k;
        auto found = labels_by_k.find(k);
        if (found == labels_by_k.end()) {
          auto part = kmeans(e, static_cast<int>(k), cfg.score.metric,
                             cfg.score.seed, cfg.score.kmeans);
          found = labels_by_k.emplace(k, std::move(part.labels)).first;
        }
        labelings[t] = found->second;
      }
      const auto grid = prequential_knn_grid(e, labelings, sw.neighbors,
                                             cfg.score.metric,
                                             prequential_config(cfg.score));
      for (std::size_t t = 0; t < n_tokens; ++t)
        for (std::size_t u = 0; u < n_counts; ++u)
          cell_cl[t][u].push_back(grid[t][u].cl);
    }

    rep["sweep"] = Json::array();
    for (std::size_t u = 0; u < n_counts; ++u) {
      for (std::size_t t = 0; t < n_tokens; ++t) {
        Json cell;
        cell["n_neighbors"] = sw.neighbors[u];
        cell["clusters_token"] = sw.cluster_tokens[t];
        cell["clusters"] = static_cast<long long>(resolved[t]);
        double mean_cl = 0.0;
        for (const double c : cell_cl[t][u]) mean_cl += c;
        cell["mean_cl"] = mean_cl / static_cast<double>(cell_cl[t][u].size());

        std::vector<ModelMetrics> cell_pop = pop;
        for (std::size_t mi = 0; mi < pop.size(); ++mi)
          cell_pop[mi].cl = cell_cl[t][u][mi];
        const auto cell_scores = clid_score(cell_pop, ClidNormalization::ZScore);
        std::vector<double> vals;
        for (const auto i : acc_idx) vals.push_back(cell_scores.values[i]);
        if (accs.size() >= 2) {
          if (const auto corr = correlate(vals, accs)) {
            cell["kendall"] = corr->first;
            cell["pearson"] = corr->second;
          }
        }
        rep["sweep"].push_back(std::move(cell));
      }
    }
  }
  return rep;
}

Json transfer_rank(const std::vector<RankInput>& source,
                   const std::vector<std::pair<std::string, double>>& target_accuracy,
                   const TransferConfig& cfg) {
  if (source.size() < 2)
    throw Error(ErrorCode::TooFewPoints, "transfer needs at least two models");

  std::set<std::string> source_names, target_names;
  for (const auto& m : source)
    if (!source_names.insert(m.name).second)
      throw Error(ErrorCode::InvalidArgument, "duplicate model name " + m.name);
  for (const auto& [name, acc] : target_accuracy)
    if (!target_names.insert(name).second)
      throw Error(ErrorCode::InvalidArgument, "duplicate model name " + name);
  if (source_names != target_names)
    throw Error(ErrorCode::NameMismatch,
                "source and target model names do not match");

  std::map<std::string, double> target;
  for (const auto& [name, acc] : target_accuracy) target[name] = acc;

  const auto rows = score_population(source, cfg.score);
  for (const auto& r : rows)
    if (!r.ok)
      throw Error(ErrorCode::InvalidArgument,
                  "scoring " + r.input->name + " failed: " + r.error_message);
  const auto pop = valid_metrics(rows);
  const auto clid = clid_score(pop, ClidNormalization::ZScore);

  std::vector<double> t_accs;
  for (const auto& m : pop) t_accs.push_back(target.at(m.name));

  Json rep;
  rep["report"] = "transfer";
  rep["n_models"] = pop.size();
  rep["models"] = Json::array();
  for (std::size_t i = 0; i < pop.size(); ++i) {
    Json entry;
    entry["name"] = pop[i].name;
    entry["cl"] = pop[i].cl;
    entry["id_twonn"] = pop[i].id;
    entry["clid"] = clid.values[i];
    if (pop[i].accuracy) entry["source_accuracy"] = *pop[i].accuracy;
    entry["target_accuracy"] = t_accs[i];
    rep["models"].push_back(std::move(entry));
  }

  if (const auto corr = correlate(clid.values, t_accs)) {
    rep["kendall_predictor"] = corr->first;
    rep["pearson_predictor"] = corr->second;
  }

  bool all_sourced = true;
  for (const auto& m : pop) all_sourced = all_sourced && m.accuracy.has_value();
  if (all_sourced) {
    std::vector<double> s_accs;
    for (const auto& m : pop) s_accs.push_back(*m.accuracy);
    const auto r_pred = rank_with_ties(clid.values, RankDirection::HigherIsBetter);
    const auto r_src = rank_with_ties(s_accs, RankDirection::HigherIsBetter);
    const auto joint = rank_product_joint(r_pred, r_src);

    Json jj;
    jj["ranks"] = Json::object();
    for (std::size_t i = 0; i < pop.size(); ++i) jj["ranks"][pop[i].name] = joint[i];
    std::vector<double> negated(joint.size());
    for (std::size_t i = 0; i < joint.size(); ++i) negated[i] = -joint[i];
    if (!all_equal(negated) && !all_equal(t_accs))
      jj["kendall_joint"] = kendall_tau(negated, t_accs, TauVariant::TieCorrected);
    rep["joint"] = std::move(jj);
  }
  return rep;
}

Json cmd_score(const ScoreOptions& opt) {
  const EmbeddingSet e = read_embeddings_any(opt.input, opt.csv_has_header);
  ScoreConfig cfg = config_from_knobs(opt.metric, opt.neighbors, opt.chunk_size,
                                      opt.seed, opt.discard_fraction, opt.eps_sq);
  cfg.n_clusters = opt.clusters == "auto"
                       ? 0
                       : static_cast<int>(resolve_cluster_token(opt.clusters, e.rows()));

  std::optional<PairedEmbeddings> paired;
  if (!opt.paired.empty()) {
    PairedEmbeddings p;
    p.view_a = e;
    p.view_b = read_embeddings_any(opt.paired, opt.csv_has_header);
    paired = std::move(p);
  }
  std::optional<std::vector<int>> labels;
  if (!opt.labels.empty()) labels = read_labels(opt.labels);

  const std::string name = std::filesystem::path(opt.input).stem().string();
  Json rep = score_model(name, e, cfg, paired ? &*paired : nullptr,
                         labels ? &*labels : nullptr);
  write_report(rep, opt.out);
  return rep;
}

Json cmd_rank(const RankOptions& opt) {
  auto inputs = load_manifest_models(opt.manifest, opt.csv_has_header);
  RankConfig cfg;
  cfg.score = config_from_knobs(opt.metric, opt.neighbors, opt.chunk_size, opt.seed,
                                opt.discard_fraction, opt.eps_sq);
  cfg.score.n_clusters = parse_cluster_count(opt.clusters);
  cfg.fit_wclid = opt.fit_wclid;
  cfg.loo = opt.loo;
  if (!opt.sweep.empty()) cfg.sweep = parse_sweep(opt.sweep);

  Json rep = rank_models(inputs, cfg);
  write_report(rep, opt.out);
  return rep;
}

Json cmd_transfer(const TransferOptions& opt) {
  auto source = load_manifest_models(opt.source_manifest, opt.csv_has_header);
  const Manifest target_man = read_manifest(opt.target_manifest);
  std::vector<std::pair<std::string, double>> target;
  for (const auto& entry : target_man.models) {
    if (!entry.accuracy)
      throw Error(ErrorCode::InvalidArgument,
                  "target model " + entry.name + " has no accuracy");
    target.emplace_back(entry.name, *entry.accuracy);
  }

  TransferConfig cfg;
  cfg.score = config_from_knobs(opt.metric, opt.neighbors, opt.chunk_size, opt.seed,
                                opt.discard_fraction, opt.eps_sq);
  cfg.score.n_clusters = parse_cluster_count(opt.clusters);

  Json rep = transfer_rank(source, target, cfg);
  write_report(rep, opt.out);
  return rep;
}

Json cmd_synth(const SynthOptions& opt) {
  if (opt.out.empty())
    throw Error(ErrorCode::InvalidArgument, "synth needs --out");
  SynthSpec spec;
  if (opt.kind == "hypercube")
    spec.kind = SynthKind::HypercubeManifold;
  else if (opt.kind == "blobs")
    spec.kind = SynthKind::GaussianBlobs;
  else if (opt.kind == "subspace")
    spec.kind = SynthKind::LinearSubspace;
  else
    throw Error(ErrorCode::InvalidArgument, "unknown synth kind '" + opt.kind + "'");
  spec.n = static_cast<Eigen::Index>(opt.n);
  spec.intrinsic_dim = opt.d;
  spec.ambient_dim = opt.m;
  spec.n_blobs = opt.blobs;
  spec.separation = opt.separation;
  spec.sigma = opt.sigma;
  spec.seed = opt.seed;

  if (!opt.labels_out.empty() && spec.kind != SynthKind::GaussianBlobs)
    throw Error(ErrorCode::InvalidArgument,
                "--labels-out only applies to blobs");

  EmbeddingSet points;
  std::vector<int> labels;
  switch (spec.kind) {
    case SynthKind::HypercubeManifold:
      points = gen_hypercube_manifold(spec);
      break;
    case SynthKind::GaussianBlobs: {
      BlobData data = gen_gaussian_blobs(spec);
      points = std::move(data.points);
      labels = std::move(data.labels);
      break;
    }
    case SynthKind::LinearSubspace:
      points = gen_linear_subspace(spec);
      break;
  }
  write_embeddings(opt.out, points, EmbDtype::F64);
  if (!opt.labels_out.empty()) write_labels(opt.labels_out, labels);

  Json rep;
  rep["report"] = "synth";
  rep["kind"] = opt.kind;
  rep["n"] = opt.n;
  rep["d"] = opt.d;
  rep["m"] = opt.m;
  rep["blobs"] = opt.blobs;
  rep["separation"] = opt.separation;
  rep["sigma"] = opt.sigma;
  rep["seed"] = opt.seed;
  rep["out"] = opt.out;
  if (!opt.labels_out.empty()) rep["labels_out"] = opt.labels_out;
  rep["n_rows"] = points.rows();
  rep["n_cols"] = points.cols();
  return rep;
}

bool validate_report(const Json& report, std::string* why) {
  const auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  if (!report.is_object()) return fail("report is not a JSON object");
  if (!report.contains("report") || !report["report"].is_string())
    return fail("missing \"report\" kind");
  const std::string kind = report["report"].get<std::string>();

  const auto number = [](const Json& obj, const char* key) {
    return obj.contains(key) && obj[key].is_number();
  };

  if (kind == "score") {
    if (!report.contains("model") || !report["model"].is_string())
      return fail("score report lacks a model name");
    if (!number(report, "n_rows") || !number(report, "n_cols"))
      return fail("score report lacks its shape");
    if (!report.contains("metrics") || !report["metrics"].is_object())
      return fail("score report lacks metrics");
    const auto& m = report["metrics"];
    for (const char* key :
         {"cl", "codelength", "id_twonn", "id_mle", "entropy", "clid_raw",
          "coding_rate", "coding_rate_conditional", "mcr2_delta"})
      if (!number(m, key)) return fail(std::string("metrics lack ") + key);
    if (!report.contains("provenance") || !report["provenance"].is_object())
      return fail("score report lacks provenance");
    const auto& prov = report["provenance"];
    if (!prov.contains("metric") || !prov.contains("clusters_mode") ||
        !number(prov, "clusters") || !number(prov, "n_neighbors") ||
        !number(prov, "seed"))
      return fail("provenance is incomplete");
    return true;
  }
  if (kind == "rank") {
    if (!number(report, "n_models")) return fail("rank report lacks n_models");
    if (!report.contains("models") || !report["models"].is_array() ||
        report["models"].empty())
      return fail("rank report lacks its models array");
    for (const auto& entry : report["models"]) {
      if (!entry.is_object() || !entry.contains("name") || !entry["name"].is_string())
        return fail("a model entry lacks a name");
      if (entry.contains("error")) {
        if (!entry["error"].is_object() || !entry["error"].contains("code"))
          return fail("a model error lacks its code");
      } else if (!number(entry, "cl") || !number(entry, "id_twonn")) {
        return fail("a model entry lacks cl or id_twonn");
      }
    }
    if (!report.contains("predictors") || !report["predictors"].is_object() ||
        !report["predictors"].contains("clid") ||
        !report["predictors"]["clid"].contains("values") ||
        !report["predictors"]["clid"]["values"].is_object())
      return fail("rank report lacks predictors.clid.values");
    return true;
  }
  if (kind == "transfer") {
    if (!number(report, "n_models")) return fail("transfer report lacks n_models");
    if (!report.contains("models") || !report["models"].is_array() ||
        report["models"].empty())
      return fail("transfer report lacks its models array");
    for (const auto& entry : report["models"])
      if (!entry.is_object() || !entry.contains("name") ||
          !number(entry, "target_accuracy"))
        return fail("a transfer entry lacks a name or target accuracy");
    if (report.contains("joint") &&
        (!report["joint"].is_object() || !report["joint"].contains("ranks")))
      return fail("the joint ranking lacks its ranks");
    return true;
  }
  if (kind == "synth") {
    if (!report.contains("kind") || !report["kind"].is_string())
      return fail("synth report lacks its kind");
    if (!report.contains("out") || !report["out"].is_string())
      return fail("synth report lacks its output path");
    if (!number(report, "n_rows") || !number(report, "n_cols"))
      return fail("synth report lacks its shape");
    return true;
  }
  return fail("unknown report kind '" + kind + "'");
}

int run_cli(int argc, const char* const* argv) {
  ScoreOptions sopt;
  RankOptions ropt;
  TransferOptions topt;
  SynthOptions yopt;

  CLI::App app{"representation quality without labels"};
  app.require_subcommand(1);

  auto* score = app.add_subcommand("score", "score one embedding set");
  score->add_option("--input", sopt.input, "embeddings (.emb or .csv)")->required();
  score->add_option("--metric", sopt.metric, "cosine or euclidean");
  score->add_option("--clusters", sopt.clusters, "auto, sqrt, N, or P%");
  score->add_option("--neighbors", sopt.neighbors, "prequential neighbor count");
  score->add_option("--chunk-size", sopt.chunk_size, "prequential chunk size");
  score->add_option("--seed", sopt.seed, "seed for permutation and clustering");
  score->add_option("--discard-fraction", sopt.discard_fraction,
                    "largest ratios dropped by the two-neighbor fit");
  score->add_option("--eps-sq", sopt.eps_sq, "coding rate distortion");
  score->add_option("--paired", sopt.paired, "second view for paired metrics");
  score->add_option("--labels", sopt.labels, "pretext labels, one per line");
  score->add_option("--out", sopt.out, "report path (stdout when omitted)");
  score->add_flag("--csv-header", sopt.csv_has_header, "skip the first CSV line");

  auto* rank = app.add_subcommand("rank", "rank a population of models");
  rank->add_option("--manifest", ropt.manifest, "model manifest JSON")->required();
  rank->add_option("--metric", ropt.metric, "cosine or euclidean");
  rank->add_option("--clusters", ropt.clusters, "auto or an explicit count");
  rank->add_option("--neighbors", ropt.neighbors, "prequential neighbor count");
  rank->add_option("--chunk-size", ropt.chunk_size, "prequential chunk size");
  rank->add_option("--seed", ropt.seed, "seed for permutation and clustering");
  rank->add_option("--discard-fraction", ropt.discard_fraction,
                   "largest ratios dropped by the two-neighbor fit");
  rank->add_option("--eps-sq", ropt.eps_sq, "coding rate distortion");
  rank->add_flag("--fit-wclid", ropt.fit_wclid, "fit the weighted combination");
  rank->add_flag("--loo", ropt.loo, "leave-one-out scores for the fit");
  rank->add_option("--sweep", ropt.sweep,
                   "axis=values, e.g. neighbors=1,5,10 (repeatable)");
  rank->add_option("--out", ropt.out, "report path (stdout when omitted)");
  rank->add_flag("--csv-header", ropt.csv_has_header, "skip the first CSV line");

  auto* transfer = app.add_subcommand("transfer", "evaluate rankings across tasks");
  transfer->add_option("--source-manifest", topt.source_manifest, "scored models")
      ->required();
  transfer->add_option("--target-manifest", topt.target_manifest,
                       "same names with target accuracies")
      ->required();
  transfer->add_option("--metric", topt.metric, "cosine or euclidean");
  transfer->add_option("--clusters", topt.clusters, "auto or an explicit count");
  transfer->add_option("--neighbors", topt.neighbors, "prequential neighbor count");
  transfer->add_option("--chunk-size", topt.chunk_size, "prequential chunk size");
  transfer->add_option("--seed", topt.seed, "seed for permutation and clustering");
  transfer->add_option("--discard-fraction", topt.discard_fraction,
                       "largest ratios dropped by the two-neighbor fit");
  transfer->add_option("--eps-sq", topt.eps_sq, "coding rate distortion");
  transfer->add_option("--out", topt.out, "report path (stdout when omitted)");
  transfer->add_flag("--csv-header", topt.csv_has_header, "skip the first CSV line");

  auto* synth = app.add_subcommand("synth", "generate benchmark embeddings");
  synth->add_option("--kind", yopt.kind, "hypercube, blobs, or subspace");
  synth->add_option("--n", yopt.n, "number of points");
  synth->add_option("--d", yopt.d, "intrinsic dimension");
  synth->add_option("--m", yopt.m, "ambient dimension");
  synth->add_option("--blobs", yopt.blobs, "number of blobs");
  synth->add_option("--separation", yopt.separation, "center separation");
  synth->add_option("--sigma", yopt.sigma, "within-blob spread");
  synth->add_option("--seed", yopt.seed, "generator seed");
  synth->add_option("--out", yopt.out, "output embeddings path")->required();
  synth->add_option("--labels-out", yopt.labels_out, "blob labels path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (score->parsed())
      cmd_score(sopt);
    else if (rank->parsed())
      cmd_rank(ropt);
    else if (transfer->parsed())
      cmd_transfer(topt);
    else
      cmd_synth(yopt);
    return 0;
  } catch (const Error& e) {
    Json err;
    err["error"] = Json{{"code", error_code_name(e.code())}, {"message", e.what()}};
    std::cerr << err.dump() << "\n";
    switch (e.code()) {
      case ErrorCode::FileError:
      case ErrorCode::BadMagic:
      case ErrorCode::TruncatedFile:
      case ErrorCode::NonFiniteValue:
      case ErrorCode::RaggedCsv:
      case ErrorCode::NameMismatch:
        return 2;
      default:
        return 1;
    }
  } catch (const std::exception& e) {
    Json err;
    err["error"] = Json{{"code", "Internal"}, {"message", e.what()}};
    std::cerr << err.dump() << "\n";
    return 1;
  }
}

}  // namespace repeval
