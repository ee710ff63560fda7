#include "foodpref/finetune.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "foodpref/error.hpp"
#include "foodpref/simd.hpp"

namespace foodpref {
namespace {

constexpr double kUnigramPower = 0.75;
constexpr double kMinLearningRateFraction = 1e-4;

// [0, 1) from the top 53 bits; independent of the standard library's
// distribution implementations.
double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

class NegativeSampler {
 public:
  explicit NegativeSampler(const std::vector<std::size_t>& counts) {
    cumulative_.reserve(counts.size());
    double total = 0.0;
    for (std::size_t c : counts) {
      total += std::pow(static_cast<double>(c), kUnigramPower);
      cumulative_.push_back(total);
    }
  }

  std::size_t draw(std::mt19937_64& rng) const {
    const double u = uniform01(rng) * cumulative_.back();
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    return std::min<std::size_t>(static_cast<std::size_t>(it - cumulative_.begin()), cumulative_.size() - 1);
  }

 private:
  std::vector<double> cumulative_;
};

}  // namespace

void FinetuneConfig::validate() const {
  if (epochs < 1) throw Error(Errc::kInvalidArgument, "epochs must be >= 1");
  if (!(learning_rate > 0.0) || learning_rate > 1.0) {
    throw Error(Errc::kInvalidArgument, "learning rate must be in (0, 1]");
  }
  if (negative_samples < 1) throw Error(Errc::kInvalidArgument, "negative samples must be >= 1");
  if (window < 0) throw Error(Errc::kInvalidArgument, "window must be >= 0 (0 = whole sentence)");
}

namespace sgns {

double log_sigmoid(double x) { return x >= 0.0 ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x)); }

double loss(std::span<const double> center, std::span<const double> context,
            const std::vector<std::span<const double>>& negatives) {
  double l = -log_sigmoid(simd::dot(context, center));
  for (const auto& n : negatives) l -= log_sigmoid(-simd::dot(n, center));
  return l;
}

Gradients gradients(std::span<const double> center, std::span<const double> context,
                    const std::vector<std::span<const double>>& negatives) {
  const std::size_t d = center.size();
  Gradients g;
  g.center.assign(d, 0.0);
  // d/ds -log σ(s) = σ(s) - 1 ; d/ds -log σ(-s) = σ(s)
  const double gp = sigmoid(simd::dot(context, center)) - 1.0;
  g.context.resize(d);
  for (std::size_t i = 0; i < d; ++i) {
    g.context[i] = gp * center[i];
    g.center[i] += gp * context[i];
  }
  for (const auto& n : negatives) {
    const double gn = sigmoid(simd::dot(n, center));
    auto& gk = g.negatives.emplace_back(d);
    for (std::size_t i = 0; i < d; ++i) {
      gk[i] = gn * center[i];
      g.center[i] += gn * n[i];
    }
  }
  return g;
}

}  // namespace sgns

EmbeddingStore finetune(const EmbeddingStore& store, const std::vector<std::vector<Token>>& sentences,
                        const FinetuneConfig& cfg, FinetuneStats* stats) {
  cfg.validate();
  if (store.empty()) throw Error(Errc::kEmptyStore, "fine-tuning needs a non-empty store");
  const std::size_t d = store.dimension();
  std::mt19937_64 rng(cfg.seed);

  EmbeddingStore out = store;
  std::vector<std::vector<std::size_t>> ids;  // sentence tokens as store rows
  std::vector<std::size_t> counts(out.size(), 0);
  std::size_t new_tokens = 0;
  std::vector<float> init(d);
  const double half_range = 0.5 / static_cast<double>(d);
  for (const auto& s : sentences) {
    auto& row_ids = ids.emplace_back();
    for (const auto& t : s) {
      auto idx = out.index_of(t);
      if (!idx) {
        for (float& v : init) v = static_cast<float>((uniform01(rng) * 2.0 - 1.0) * half_range);
        out.add(t, init);
        counts.push_back(0);
        idx = out.size() - 1;
        ++new_tokens;
      }
      row_ids.push_back(*idx);
      ++counts[*idx];
    }
  }

  // Only tokens that appear in sentences get negative-sampling mass.
  std::vector<std::size_t> vocab;
  std::vector<std::size_t> vocab_counts;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i]) {
      vocab.push_back(i);
      vocab_counts.push_back(counts[i]);
    }
  }

  std::size_t pairs_per_epoch = 0;
  for (const auto& s : ids) {
    for (std::size_t i = 0; i < s.size(); ++i) {
      const std::size_t lo = cfg.window ? (i > static_cast<std::size_t>(cfg.window) ? i - cfg.window : 0) : 0;
      const std::size_t hi = cfg.window ? std::min(s.size(), i + cfg.window + 1) : s.size();
      pairs_per_epoch += hi - lo - 1;
    }
  }
  if (stats) {
    *stats = {};
    stats->pairs_per_epoch = pairs_per_epoch;
    stats->new_tokens = new_tokens;
  }
  if (vocab.empty() || pairs_per_epoch == 0) return out;

  const NegativeSampler sampler(vocab_counts);
  std::vector<float> context_vecs(out.size() * d, 0.0f);  // output vectors
  std::vector<float> grad(d);
  std::vector<std::size_t> targets;
  const auto& k = simd::active();
  const double total_pairs = static_cast<double>(pairs_per_epoch) * cfg.epochs;
  std::size_t seen = 0;

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    double epoch_loss = 0.0;
    for (const auto& s : ids) {
      for (std::size_t i = 0; i < s.size(); ++i) {
        const std::size_t lo = cfg.window ? (i > static_cast<std::size_t>(cfg.window) ? i - cfg.window : 0) : 0;
        const std::size_t hi = cfg.window ? std::min(s.size(), i + cfg.window + 1) : s.size();
        for (std::size_t j = lo; j < hi; ++j) {
          if (j == i) continue;
          const double lr = cfg.learning_rate *
                            std::max(kMinLearningRateFraction, 1.0 - static_cast<double>(seen) / total_pairs);
          ++seen;
          float* center = out.row(s[i]).data();
          targets.clear();
          targets.push_back(s[j]);
          for (int n = 0; n < cfg.negative_samples; ++n) {
            std::size_t neg = vocab[sampler.draw(rng)];
            if (neg != s[j]) targets.push_back(neg);
          }
          std::fill(grad.begin(), grad.end(), 0.0f);
          for (std::size_t t = 0; t < targets.size(); ++t) {
            float* ctx = context_vecs.data() + targets[t] * d;
            const double score = k.dot_f32(center, ctx, d);
            const double label = t == 0 ? 1.0 : 0.0;
            epoch_loss -= sgns::log_sigmoid(t == 0 ? score : -score);
            const float g = static_cast<float>(lr * (label - sigmoid(score)));
            k.axpy_f32(g, ctx, grad.data(), d);
            k.axpy_f32(g, center, ctx, d);
          }
          k.axpy_f32(1.0f, grad.data(), center, d);
        }
      }
    }
    if (stats) stats->epoch_loss.push_back(epoch_loss / static_cast<double>(pairs_per_epoch));
  }
  return out;
}

}  // namespace foodpref
