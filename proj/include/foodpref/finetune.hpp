#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "foodpref/embed.hpp"

namespace foodpref {

struct FinetuneConfig {
  int epochs = 5;
  double learning_rate = 0.025;  // decays linearly to 1e-4 of the start value
  int negative_samples = 5;
  int window = 0;                // 0: every other token of the sentence
  std::uint64_t seed = 1;

  // Throws Error(kInvalidArgument).
  void validate() const;
};

struct FinetuneStats {
  std::vector<double> epoch_loss;  // mean negative-sampling loss per pair
  std::size_t pairs_per_epoch = 0;
  std::size_t new_tokens = 0;      // sentence tokens missing from the input store
};

// Skip-gram with negative sampling over `sentences`, starting from the
// vectors in `store`. Tokens that never occur in a sentence keep their
// vectors bit for bit. Sentence tokens missing from the store start uniform
// in [-0.5/d, 0.5/d]. Output is fully determined by the inputs and seed.
EmbeddingStore finetune(const EmbeddingStore& store, const std::vector<std::vector<Token>>& sentences,
                        const FinetuneConfig& cfg, FinetuneStats* stats = nullptr);

namespace sgns {

// Loss for one (center, context, negatives) example:
//   -log σ(u_o·v_c) - Σ_k log σ(-u_k·v_c)
// with v_c the center's input vector and u the output vectors.
double loss(std::span<const double> center, std::span<const double> context,
            const std::vector<std::span<const double>>& negatives);

struct Gradients {
  std::vector<double> center;
  std::vector<double> context;
  std::vector<std::vector<double>> negatives;
};

// Analytic gradient of loss() with respect to each argument.
Gradients gradients(std::span<const double> center, std::span<const double> context,
                    const std::vector<std::span<const double>>& negatives);

double log_sigmoid(double x);

}  // namespace sgns

}  // namespace foodpref
