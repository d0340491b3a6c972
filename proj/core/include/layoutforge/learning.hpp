#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "layoutforge/prng.hpp"

namespace layoutforge {

// Pairwise surrogates over the score gap z = f(positive) - f(negative). All
// are non-negative and non-increasing in z; gradients are 0 exactly at kinks.
enum class LossKind { kPsl, kPhl, kPll, kRamp, kPcl1, kPcl2 };

struct SurrogateLoss {
  LossKind kind = LossKind::kPsl;
  double beta = 3.0;     // logistic sharpness
  double gamma = 0.7;    // ramp corner
  double power = 2.0;    // ramp exponent
  // The published ramp condition reads z > gamma, which rises with z and (for
  // non-integer powers) leaves the expression undefined; the corrected branch
  // penalizes z < gamma. The printed form stays available for comparison.
  bool ramp_as_printed = false;

  double value(double z) const;
  double grad(double z) const;
};

const char* to_string(LossKind kind);

struct LinearModel {
  std::vector<double> weights;
  double bias = 0.0;

  double score(std::span<const double> x) const;
};

struct ScoredDataset {
  std::vector<std::vector<double>> positives;
  std::vector<std::vector<double>> negatives;
};

// Probability that a positive outranks a negative; ties count half. The brute
// force walks all pairs; the fast path uses average ranks and matches exactly.
double auc_bruteforce(std::span<const double> pos, std::span<const double> neg);
double auc_fast(std::span<const double> pos, std::span<const double> neg);
double auc(const LinearModel& model, const ScoredDataset& data);

// Mean surrogate over every positive/negative pair.
double pairwise_loss(const LinearModel& model, const SurrogateLoss& loss,
                     const ScoredDataset& data);

struct TrainConfig {
  double learning_rate = 1e-3;
  double decay = 0.65;        // multiplies the rate every decay_interval iters
  int batch = 32;             // half positives, half negatives
  int decay_interval = 2000;
  int iterations = 10000;
  std::uint64_t seed = 0;
  int log_every = 0;          // 0 disables logging
};

struct TrainLogRow {
  int iter = 0;
  double loss = 0.0;
  double auc = 0.0;
  double lr = 0.0;
};

// SGD over one random between-class pair per iteration, drawn from a fresh
// half-and-half batch. Deterministic per seed.
LinearModel train_pairwise(const ScoredDataset& data, const SurrogateLoss& loss,
                           const TrainConfig& cfg,
                           std::vector<TrainLogRow>* log = nullptr);

struct BiasConfig {
  double eps_max = 0.3;               // in (0, 0.5)
  double loss_scale = 0.69314718055994530942;  // ln 2
};

// Label smoothing that grows with the observed loss: eps(l) =
// eps_max * (1 - exp(-l / scale)). Returns {1 - eps, eps}.
std::array<double, 2> bbl_bias(double avg_loss, const BiasConfig& cfg);

// Axis-aligned decision stump; raw output is -1 or +1.
struct Stump {
  std::size_t feature = 0;
  double threshold = 0.0;
  int polarity = 1;  // +1: x[feature] > threshold predicts +1

  int predict(std::span<const double> x) const {
    return (x[feature] > threshold ? 1 : -1) * polarity;
  }
};

struct MarginCheck {
  double lhs = 0.0;  // weighted error under the normalized weights
  bool accepted = false;
};

// Acceptance test for one weak learner: the weight-normalized error must stay
// at or below 1/2 - gamma. Labels in {0,1} or {-1,+1} are both accepted.
MarginCheck weak_learner_margin(const Stump& stump,
                                std::span<const double> weights,
                                const std::vector<std::vector<double>>& data,
                                std::span<const int> labels, double gamma);

// Minimizes weighted error over all features, thresholds and polarities.
Stump fit_stump(const std::vector<std::vector<double>>& data,
                std::span<const int> labels, std::span<const double> weights);

struct StumpEnsemble {
  std::vector<Stump> stumps;
  double gamma = 0.0;
  double theta = 0.0;
  std::vector<double> weights;            // M_t, each in (0, 1]
  std::vector<double> cumulative_margin;  // N_t

  // Sign of the average stump vote; an exact zero vote counts positive.
  int predict(std::span<const double> x) const;
};

double default_theta(double gamma);

// Smooth boosting: per-sample weights track cumulative margins and never
// exceed 1; stops early when no stump clears the margin test.
StumpEnsemble train_smoothboost(const std::vector<std::vector<double>>& data,
                                std::span<const int> labels, double gamma, int rounds,
                                double theta);

struct Metrics {
  double accuracy = 0.0;     // detected positives over all positives
  double false_alarm = 0.0;  // false positives over all negatives
};

Metrics evaluate(std::span<const int> predictions, std::span<const int> labels);

struct MeanVar {
  double mean = 0.0;
  double variance = 0.0;  // Bessel-corrected
};

MeanVar mean_bessel_var(std::span<const double> values);

struct VarianceReport {
  MeanVar accuracy;
  MeanVar false_alarm;
};

VarianceReport variance_report(std::span<const Metrics> runs);

}  // namespace layoutforge
