#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <numeric>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "semprosody/error.hpp"
#include "semprosody/hsf.hpp"
#include "semprosody/random.hpp"

namespace semprosody {

/// Seed of the shared probe initialisation stream.
inline constexpr std::uint64_t kProbeInitSeed = 20240501;

struct ProbeConfig {
  double train_frac = 0.8;
  double lr = 0.1;
  std::size_t epochs = 500;
  double l2 = 0.0;
  /// Seed of the train/test item split.
  std::uint64_t seed = 13;
  std::uint64_t init_seed = kProbeInitSeed;
  /// Layers trained concurrently in a sweep.
  std::size_t threads = 1;
};

/// Balanced two-class data: class means at +/-(separability/2)*u for a
/// seeded unit vector u per layer, unit spherical noise. Item i has label 1
/// when i is even, so ceil(n/2) items are positive.
inline ProbeDataset synth_hsf(std::size_t n_items, std::size_t n_enc,
                              std::size_t n_dec, std::size_t dim,
                              double separability, std::uint64_t seed,
                              std::string model_name = "synthetic") {
  if (separability < 0)
    throw ConfigError("separability must be non-negative");
  ProbeDataset d;
  d.header = {std::move(model_name), n_enc, n_dec, dim, n_items, Pooling::MEAN, {}};
  d.header.meta = {{"generator", "synth_hsf"}, {"separability", separability},
                   {"seed", seed}};
  validate_header(d.header);
  Rng rng(seed);
  const auto layers = d.header.n_layers();
  std::vector<std::vector<double>> dirs(layers, std::vector<double>(dim));
  for (auto &u : dirs) {
    double norm = 0.0;
    do {
      norm = 0.0;
      for (auto &x : u) {
        x = rng.normal();
        norm += x * x;
      }
    } while (norm == 0.0);
    norm = std::sqrt(norm);
    for (auto &x : u)
      x /= norm;
  }
  d.labels.resize(n_items);
  d.vectors.resize(d.header.payload_floats());
  std::size_t off = 0;
  for (std::size_t i = 0; i < n_items; ++i) {
    d.labels[i] = i % 2 == 0 ? 1 : 0;
    const double sign = d.labels[i] ? 1.0 : -1.0;
    for (std::size_t l = 0; l < layers; ++l)
      for (std::size_t k = 0; k < dim; ++k)
        d.vectors[off++] =
            static_cast<float>(sign * 0.5 * separability * dirs[l][k] + rng.normal());
  }
  return d;
}

struct ItemSplit {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

/// Depends only on (n_items, seed, train_frac); the train size is
/// train_frac * n rounded half-up.
inline ItemSplit split_items(std::size_t n_items, std::uint64_t seed, double train_frac) {
  if (!(train_frac > 0.0 && train_frac < 1.0))
    throw ConfigError("train_frac must lie in (0, 1)");
  std::vector<std::size_t> perm(n_items);
  std::iota(perm.begin(), perm.end(), 0);
  Rng rng(seed);
  rng.shuffle(std::span<std::size_t>(perm));
  const auto n_train = static_cast<std::size_t>(
      std::floor(train_frac * static_cast<double>(n_items) + 0.5));
  ItemSplit s;
  s.train.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n_train));
  s.test.assign(perm.begin() + static_cast<std::ptrdiff_t>(n_train), perm.end());
  std::sort(s.train.begin(), s.train.end());
  std::sort(s.test.begin(), s.test.end());
  return s;
}

/// Row-major feature matrix with 0/1 targets.
struct Design {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> x;
  std::vector<double> y;

  std::span<const double> row(std::size_t i) const { return {x.data() + i * cols, cols}; }
};

inline Design make_design(const ProbeDataset &d, LayerId layer,
                          std::span<const std::size_t> items) {
  Design out;
  out.rows = items.size();
  out.cols = d.header.hidden_dim;
  out.x.reserve(out.rows * out.cols);
  for (auto i : items) {
    const auto v = d.vector(i, layer);
    out.x.insert(out.x.end(), v.begin(), v.end());
    out.y.push_back(d.labels[i]);
  }
  return out;
}

namespace detail {

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k)
    s += a[k] * b[k];
  return s;
}

/// log(1 + e^z) without overflow.
inline double softplus(double z) {
  return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

inline double sigmoid(double z) {
  if (z >= 0)
    return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

} // namespace detail

/// Mean binary cross-entropy of sigmoid(w.x + b) plus (l2/2)|w|^2.
inline double logistic_loss(const Design &d, std::span<const double> w, double b,
                            double l2 = 0.0) {
  double loss = 0.0;
  for (std::size_t i = 0; i < d.rows; ++i) {
    const double z = detail::dot(w, d.row(i)) + b;
    loss += detail::softplus(z) - d.y[i] * z;
  }
  loss /= static_cast<double>(std::max<std::size_t>(d.rows, 1));
  return loss + 0.5 * l2 * detail::dot(w, w);
}

struct Gradient {
  std::vector<double> w;
  double b = 0.0;
};

inline Gradient logistic_gradient(const Design &d, std::span<const double> w,
                                  double b, double l2 = 0.0) {
  Gradient g{std::vector<double>(d.cols, 0.0), 0.0};
  for (std::size_t i = 0; i < d.rows; ++i) {
    const auto x = d.row(i);
    const double r = detail::sigmoid(detail::dot(w, x) + b) - d.y[i];
    for (std::size_t k = 0; k < d.cols; ++k)
      g.w[k] += r * x[k];
    g.b += r;
  }
  const double inv = 1.0 / static_cast<double>(std::max<std::size_t>(d.rows, 1));
  for (std::size_t k = 0; k < d.cols; ++k)
    g.w[k] = g.w[k] * inv + l2 * w[k];
  g.b *= inv;
  return g;
}

struct LinearProbe {
  std::vector<double> weights;
  double bias = 0.0;
  LayerId layer;
};

/// Shared initial weights: a sequential stream from the init seed, so
/// equal-width probes start identical and a wider probe extends a narrower
/// one. Bias starts at zero.
inline std::vector<double> initial_weights(std::size_t dim, std::uint64_t init_seed) {
  Rng rng(init_seed);
  std::vector<double> w(dim);
  for (auto &x : w)
    x = rng.uniform(-0.05, 0.05);
  return w;
}

/// Full-batch gradient descent from (w, b). Optionally records the loss
/// before every epoch and once after the last.
inline void fit_logistic(const Design &d, std::vector<double> &w, double &b,
                         const ProbeConfig &cfg,
                         std::vector<double> *loss_history = nullptr) {
  for (std::size_t e = 0; e < cfg.epochs; ++e) {
    if (loss_history)
      loss_history->push_back(logistic_loss(d, w, b, cfg.l2));
    const auto g = logistic_gradient(d, w, b, cfg.l2);
    for (std::size_t k = 0; k < w.size(); ++k)
      w[k] -= cfg.lr * g.w[k];
    b -= cfg.lr * g.b;
  }
  if (loss_history)
    loss_history->push_back(logistic_loss(d, w, b, cfg.l2));
}

inline LinearProbe train_probe_on(const ProbeDataset &data, LayerId layer,
                                  const ItemSplit &split, const ProbeConfig &cfg,
                                  std::vector<double> *loss_history = nullptr) {
  std::size_t pos = 0;
  for (auto i : split.train)
    pos += data.labels[i];
  const auto neg = split.train.size() - pos;
  if (pos == 0 || neg == 0)
    throw DataError("single-class training split");
  if (pos < 2 || neg < 2)
    throw DataError("training split needs at least two items per class");
  const auto design = make_design(data, layer, split.train);
  LinearProbe probe{initial_weights(data.header.hidden_dim, cfg.init_seed), 0.0, layer};
  fit_logistic(design, probe.weights, probe.bias, cfg, loss_history);
  return probe;
}

/// Logistic-regression probe for one layer on the seeded training split.
inline LinearProbe train_probe(const ProbeDataset &data, LayerId layer,
                               const ProbeConfig &cfg = {},
                               std::vector<double> *loss_history = nullptr) {
  const auto split = split_items(data.header.n_items, cfg.seed, cfg.train_frac);
  return train_probe_on(data, layer, split, cfg, loss_history);
}

/// Fraction of `items` where w.x + b > 0 agrees with label 1.
inline double eval_probe_on(const LinearProbe &probe, const ProbeDataset &data,
                            std::span<const std::size_t> items) {
  if (probe.weights.size() != data.header.hidden_dim)
    throw DataError("probe dimension " + std::to_string(probe.weights.size()) +
                    " does not match dataset hidden_dim " +
                    std::to_string(data.header.hidden_dim));
  if (items.empty())
    return 0.0;
  std::size_t correct = 0;
  for (auto i : items) {
    const auto v = data.vector(i, probe.layer);
    double z = probe.bias;
    for (std::size_t k = 0; k < v.size(); ++k)
      z += probe.weights[k] * static_cast<double>(v[k]);
    correct += static_cast<std::uint8_t>(z > 0.0) == data.labels[i];
  }
  return static_cast<double>(correct) / static_cast<double>(items.size());
}

enum class SplitPart { TRAIN, TEST };

inline double eval_probe(const LinearProbe &probe, const ProbeDataset &data,
                         const ProbeConfig &cfg = {}, SplitPart part = SplitPart::TEST) {
  const auto split = split_items(data.header.n_items, cfg.seed, cfg.train_frac);
  return eval_probe_on(probe, data, part == SplitPart::TEST ? split.test : split.train);
}

struct LayerResult {
  LayerId layer;
  double train_acc = 0.0;
  double test_acc = 0.0;
};

struct LayerSweepResult {
  std::vector<LayerResult> rows;
  double mean_enc_acc = 0.0;
  double mean_dec_acc = 0.0;
};

/// Trains and evaluates one probe per layer, encoder layers first, on a
/// single item split shared by all layers.
inline LayerSweepResult layer_sweep(const ProbeDataset &data, const ProbeConfig &cfg = {}) {
  const auto split = split_items(data.header.n_items, cfg.seed, cfg.train_frac);
  const auto layers = data.layers();
  auto run = [&](LayerId id) {
    const auto probe = train_probe_on(data, id, split, cfg);
    return LayerResult{id, eval_probe_on(probe, data, split.train),
                       eval_probe_on(probe, data, split.test)};
  };
  LayerSweepResult out;
  out.rows.resize(layers.size());
  const auto threads = std::max<std::size_t>(1, cfg.threads);
  for (std::size_t start = 0; start < layers.size(); start += threads) {
    std::vector<std::future<LayerResult>> jobs;
    const auto stop = std::min(layers.size(), start + threads);
    for (auto i = start; i < stop; ++i)
      jobs.push_back(std::async(threads > 1 ? std::launch::async : std::launch::deferred,
                                run, layers[i]));
    for (auto i = start; i < stop; ++i)
      out.rows[i] = jobs[i - start].get();
  }
  double enc = 0.0, dec = 0.0;
  std::size_t ne = 0, nd = 0;
  for (const auto &r : out.rows) {
    if (r.layer.side == LayerSide::ENC) {
      enc += r.test_acc;
      ++ne;
    } else {
      dec += r.test_acc;
      ++nd;
    }
  }
  out.mean_enc_acc = ne ? enc / static_cast<double>(ne) : 0.0;
  out.mean_dec_acc = nd ? dec / static_cast<double>(nd) : 0.0;
  return out;
}

/// CSV with columns side,layer,test_acc; per-side mean rows follow the data
/// when there is any.
inline void write_sweep_csv(std::ostream &os, const LayerSweepResult &r) {
  auto fmt = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return std::string(buf);
  };
  os << "side,layer,test_acc\n";
  bool has_enc = false, has_dec = false;
  for (const auto &row : r.rows) {
    os << to_string(row.layer.side) << ',' << row.layer.index << ',' << fmt(row.test_acc)
       << '\n';
    (row.layer.side == LayerSide::ENC ? has_enc : has_dec) = true;
  }
  if (has_enc)
    os << "enc,mean," << fmt(r.mean_enc_acc) << '\n';
  if (has_dec)
    os << "dec,mean," << fmt(r.mean_dec_acc) << '\n';
}

inline void emit_sweep(const LayerSweepResult &r, const std::string &path) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw DataError("cannot write " + path);
  write_sweep_csv(out, r);
  if (!out)
    throw DataError("write failed: " + path);
}

} // namespace semprosody
