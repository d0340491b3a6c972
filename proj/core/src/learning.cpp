#include "layoutforge/learning.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace layoutforge {

const char* to_string(LossKind kind) {
  switch (kind) {
    case LossKind::kPsl: return "PSL";
    case LossKind::kPhl: return "PHL";
    case LossKind::kPll: return "PLL";
    case LossKind::kRamp: return "R";
    case LossKind::kPcl1: return "PCL1";
    case LossKind::kPcl2: return "PCL2";
  }
  return "?";
}

namespace {

// log(1 + exp(t)) without overflow.
double softplus(double t) {
  if (t > 0) return t + std::log1p(std::exp(-t));
  return std::log1p(std::exp(t));
}

}  // namespace

double SurrogateLoss::value(double z) const {
  switch (kind) {
    case LossKind::kPsl:
      return (1.0 - z) * (1.0 - z);
    case LossKind::kPhl:
      return std::max(1.0 - z, 0.0);
    case LossKind::kPll:
      return softplus(-beta * z);
    case LossKind::kRamp:
      if (ramp_as_printed) {
        return z > gamma ? std::pow(-(z - gamma), power) : 0.0;
      }
      return z < gamma ? std::pow(gamma - z, power) : 0.0;
    case LossKind::kPcl1: {
      const double c = 1.0 + z;
      return std::max(8.0 - c * c * c, 0.0);
    }
    case LossKind::kPcl2: {
      const double c = 1.0 - z;
      return std::max(c * c * c, 0.0);
    }
  }
  return 0.0;
}

double SurrogateLoss::grad(double z) const {
  switch (kind) {
    case LossKind::kPsl:
      return -2.0 * (1.0 - z);
    case LossKind::kPhl:
      return z < 1.0 ? -1.0 : 0.0;
    case LossKind::kPll:
      return -beta / (1.0 + std::exp(beta * z));
    case LossKind::kRamp:
      if (ramp_as_printed) {
        return z > gamma ? -power * std::pow(-(z - gamma), power - 1.0) : 0.0;
      }
      return z < gamma ? -power * std::pow(gamma - z, power - 1.0) : 0.0;
    case LossKind::kPcl1: {
      const double c = 1.0 + z;
      return 8.0 - c * c * c > 0.0 ? -3.0 * c * c : 0.0;
    }
    case LossKind::kPcl2: {
      const double c = 1.0 - z;
      return c > 0.0 ? -3.0 * c * c : 0.0;
    }
  }
  return 0.0;
}

double LinearModel::score(std::span<const double> x) const {
  if (x.size() != weights.size()) {
    throw std::invalid_argument("score: feature width mismatch");
  }
  double s = bias;
  for (std::size_t i = 0; i < x.size(); ++i) s += weights[i] * x[i];
  return s;
}

double auc_bruteforce(std::span<const double> pos, std::span<const double> neg) {
  if (pos.empty() || neg.empty()) {
    throw std::invalid_argument("auc: both classes must be non-empty");
  }
  double wins = 0.0;
  for (double p : pos) {
    for (double n : neg) {
      if (p > n) wins += 1.0;
      else if (p == n) wins += 0.5;
    }
  }
  return wins / (static_cast<double>(pos.size()) * static_cast<double>(neg.size()));
}

double auc_fast(std::span<const double> pos, std::span<const double> neg) {
  if (pos.empty() || neg.empty()) {
    throw std::invalid_argument("auc: both classes must be non-empty");
  }
  struct Entry {
    double score;
    bool positive;
  };
  std::vector<Entry> all;
  all.reserve(pos.size() + neg.size());
  for (double p : pos) all.push_back({p, true});
  for (double n : neg) all.push_back({n, false});
  std::sort(all.begin(), all.end(),
            [](const Entry& a, const Entry& b) { return a.score < b.score; });

  // Rank sum with average ranks across ties.
  double pos_rank_sum = 0.0;
  std::size_t i = 0;
  while (i < all.size()) {
    std::size_t j = i;
    while (j < all.size() && all[j].score == all[i].score) ++j;
    const double avg_rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k) {
      if (all[k].positive) pos_rank_sum += avg_rank;
    }
    i = j;
  }
  const double np = static_cast<double>(pos.size());
  const double nn = static_cast<double>(neg.size());
  return (pos_rank_sum - np * (np + 1.0) / 2.0) / (np * nn);
}

namespace {

std::vector<double> model_scores(const LinearModel& model,
                                 const std::vector<std::vector<double>>& xs) {
  std::vector<double> out;
  out.reserve(xs.size());
  for (const auto& x : xs) out.push_back(model.score(x));
  return out;
}

}  // namespace

double auc(const LinearModel& model, const ScoredDataset& data) {
  return auc_fast(model_scores(model, data.positives),
                  model_scores(model, data.negatives));
}

double pairwise_loss(const LinearModel& model, const SurrogateLoss& loss,
                     const ScoredDataset& data) {
  const auto ps = model_scores(model, data.positives);
  const auto ns = model_scores(model, data.negatives);
  if (ps.empty() || ns.empty()) {
    throw std::invalid_argument("pairwise_loss: both classes must be non-empty");
  }
  double total = 0.0;
  for (double p : ps) {
    for (double n : ns) total += loss.value(p - n);
  }
  return total / (static_cast<double>(ps.size()) * static_cast<double>(ns.size()));
}

LinearModel train_pairwise(const ScoredDataset& data, const SurrogateLoss& loss,
                           const TrainConfig& cfg, std::vector<TrainLogRow>* log) {
  if (data.positives.empty() || data.negatives.empty()) {
    throw std::invalid_argument("train_pairwise: both classes must be non-empty");
  }
  if (cfg.batch < 2 || cfg.batch % 2 != 0) {
    throw std::invalid_argument("train_pairwise: batch must be even and >= 2");
  }
  if (cfg.iterations < 0 || cfg.decay_interval < 1) {
    throw std::invalid_argument("train_pairwise: bad schedule");
  }

  const std::size_t dim = data.positives.front().size();
  LinearModel model{std::vector<double>(dim, 0.0), 0.0};
  Prng rng(cfg.seed);
  double lr = cfg.learning_rate;
  const int half = cfg.batch / 2;
  std::vector<std::size_t> batch_pos(static_cast<std::size_t>(half));
  std::vector<std::size_t> batch_neg(static_cast<std::size_t>(half));

  for (int iter = 1; iter <= cfg.iterations; ++iter) {
    for (auto& idx : batch_pos) {
      idx = static_cast<std::size_t>(
          rand_int(rng, 0, static_cast<DbUnit>(data.positives.size()) - 1));
    }
    for (auto& idx : batch_neg) {
      idx = static_cast<std::size_t>(
          rand_int(rng, 0, static_cast<DbUnit>(data.negatives.size()) - 1));
    }
    const auto& xp =
        data.positives[batch_pos[static_cast<std::size_t>(rand_int(rng, 0, half - 1))]];
    const auto& xn =
        data.negatives[batch_neg[static_cast<std::size_t>(rand_int(rng, 0, half - 1))]];

    const double z = model.score(xp) - model.score(xn);
    const double g = loss.grad(z);
    if (g != 0.0) {
      for (std::size_t i = 0; i < dim; ++i) {
        model.weights[i] -= lr * g * (xp[i] - xn[i]);
      }
    }
    if (iter % cfg.decay_interval == 0) lr *= cfg.decay;

    if (log && cfg.log_every > 0 &&
        (iter % cfg.log_every == 0 || iter == cfg.iterations)) {
      log->push_back({iter, pairwise_loss(model, loss, data), auc(model, data), lr});
    }
  }
  return model;
}

std::array<double, 2> bbl_bias(double avg_loss, const BiasConfig& cfg) {
  if (avg_loss < 0) throw std::invalid_argument("bbl_bias: loss must be non-negative");
  if (cfg.eps_max <= 0.0 || cfg.eps_max >= 0.5) {
    throw std::invalid_argument("bbl_bias: eps_max must lie in (0, 0.5)");
  }
  if (cfg.loss_scale <= 0.0) {
    throw std::invalid_argument("bbl_bias: loss_scale must be positive");
  }
  const double eps = cfg.eps_max * (1.0 - std::exp(-avg_loss / cfg.loss_scale));
  return {1.0 - eps, eps};
}

namespace {

int canon_label(int label) {
  if (label == 1) return 1;
  if (label == 0 || label == -1) return -1;
  throw std::invalid_argument("labels must be 0/1 or -1/+1");
}

}  // namespace

MarginCheck weak_learner_margin(const Stump& stump, std::span<const double> weights,
                                const std::vector<std::vector<double>>& data,
                                std::span<const int> labels, double gamma) {
  if (data.size() != labels.size() || data.size() != weights.size() || data.empty()) {
    throw std::invalid_argument("weak_learner_margin: size mismatch");
  }
  double total = 0.0;
  for (double w : weights) total += w;
  if (total <= 0.0) throw std::invalid_argument("weak_learner_margin: zero weight mass");

  double lhs = 0.0;
  for (std::size_t j = 0; j < data.size(); ++j) {
    const int y = canon_label(labels[j]);
    const int h = stump.predict(data[j]);
    lhs += 0.5 * (weights[j] / total) * std::abs(static_cast<double>(h - y));
  }
  return {lhs, lhs <= 0.5 - gamma};
}

Stump fit_stump(const std::vector<std::vector<double>>& data,
                std::span<const int> labels, std::span<const double> weights) {
  if (data.empty() || data.size() != labels.size() || data.size() != weights.size()) {
    throw std::invalid_argument("fit_stump: size mismatch");
  }
  const std::size_t n = data.size();
  const std::size_t dim = data.front().size();

  double total = 0.0;
  double positive_mass = 0.0;  // weight of +1 labels
  for (std::size_t j = 0; j < n; ++j) {
    total += weights[j];
    if (canon_label(labels[j]) == 1) positive_mass += weights[j];
  }

  Stump best;
  double best_err = std::numeric_limits<double>::infinity();
  const auto consider = [&](std::size_t f, double thr, int pol, double err) {
    if (err < best_err - 1e-15) {
      best = {f, thr, pol};
      best_err = err;
    }
  };

  std::vector<std::pair<double, std::size_t>> order(n);
  for (std::size_t f = 0; f < dim; ++f) {
    for (std::size_t j = 0; j < n; ++j) order[j] = {data[j][f], j};
    std::sort(order.begin(), order.end());

    // Sweep thresholds between distinct values. For polarity +1 the error
    // starts at the positive mass (everything predicted +1 at thr = -inf)
    // and moves as samples cross below the threshold.
    double err_plus = (total - positive_mass) / total;  // thr below all: predict +1
    consider(f, order.front().first - 1.0, +1, err_plus);
    consider(f, order.front().first - 1.0, -1, 1.0 - err_plus);
    for (std::size_t j = 0; j < n; ++j) {
      const int y = canon_label(labels[order[j].second]);
      const double w = weights[order[j].second] / total;
      // sample drops to the <= side, now predicted -1 by polarity +1
      err_plus += y == 1 ? w : -w;
      const bool boundary = j + 1 == n || order[j + 1].first != order[j].first;
      if (!boundary) continue;
      const double thr = j + 1 == n ? order[j].first + 1.0
                                    : (order[j].first + order[j + 1].first) / 2.0;
      consider(f, thr, +1, err_plus);
      consider(f, thr, -1, 1.0 - err_plus);
    }
  }
  return best;
}

int StumpEnsemble::predict(std::span<const double> x) const {
  if (stumps.empty()) throw std::invalid_argument("predict: empty ensemble");
  double vote = 0.0;
  for (const Stump& s : stumps) vote += s.predict(x);
  vote /= static_cast<double>(stumps.size());
  return vote >= 0.0 ? 1 : -1;
}

double default_theta(double gamma) { return gamma / (2.0 + gamma); }

StumpEnsemble train_smoothboost(const std::vector<std::vector<double>>& data,
                                std::span<const int> labels, double gamma, int rounds,
                                double theta) {
  if (data.empty() || data.size() != labels.size()) {
    throw std::invalid_argument("train_smoothboost: size mismatch");
  }
  if (gamma <= 0.0 || gamma >= 0.5) {
    throw std::invalid_argument("train_smoothboost: gamma must lie in (0, 0.5)");
  }

  const std::size_t n = data.size();
  StumpEnsemble ens;
  ens.gamma = gamma;
  ens.theta = theta;
  ens.weights.assign(n, 1.0);
  ens.cumulative_margin.assign(n, 0.0);

  for (int t = 0; t < rounds; ++t) {
    const Stump h = fit_stump(data, labels, ens.weights);
    const MarginCheck check =
        weak_learner_margin(h, ens.weights, data, labels, gamma);
    if (!check.accepted) break;
    ens.stumps.push_back(h);

    for (std::size_t j = 0; j < n; ++j) {
      const int y = canon_label(labels[j]);
      ens.cumulative_margin[j] += y * h.predict(data[j]) - theta;
      ens.weights[j] =
          std::min(1.0, std::pow(1.0 - gamma, ens.cumulative_margin[j] / 2.0));
    }
  }
  return ens;
}

Metrics evaluate(std::span<const int> predictions, std::span<const int> labels) {
  if (predictions.size() != labels.size() || predictions.empty()) {
    throw std::invalid_argument("evaluate: size mismatch");
  }
  std::int64_t tp = 0, fp = 0, pos = 0, neg = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const int y = canon_label(labels[i]);
    const int p = canon_label(predictions[i]);
    if (y == 1) {
      ++pos;
      if (p == 1) ++tp;
    } else {
      ++neg;
      if (p == 1) ++fp;
    }
  }
  if (pos == 0 || neg == 0) {
    throw std::invalid_argument("evaluate: both classes must appear");
  }
  return {static_cast<double>(tp) / static_cast<double>(pos),
          static_cast<double>(fp) / static_cast<double>(neg)};
}

MeanVar mean_bessel_var(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("mean_bessel_var: empty input");
  const double n = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  if (values.size() == 1) return {mean, 0.0};
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, ss / (n - 1.0)};
}

VarianceReport variance_report(std::span<const Metrics> runs) {
  std::vector<double> acc, fa;
  acc.reserve(runs.size());
  fa.reserve(runs.size());
  for (const Metrics& m : runs) {
    acc.push_back(m.accuracy);
    fa.push_back(m.false_alarm);
  }
  return {mean_bessel_var(acc), mean_bessel_var(fa)};
}

}  // namespace layoutforge
