// Copyright 2026 tfsyn authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef TFSYN_EMBEDDING_HPP_
#define TFSYN_EMBEDDING_HPP_

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "tfsyn/types.hpp"

namespace tfsyn {

constexpr int kMelBands = 64;
constexpr int kEmbeddingDim = 2 * kMelBands;  // per-band mean and std

struct EmbeddingStats {
  Eigen::VectorXd mean;        // kEmbeddingDim
  Eigen::MatrixXd covariance;  // unbiased, kEmbeddingDim^2
  int count = 0;
};

// Triangular mel filterbank energies -> log -> per-clip time mean and
// standard deviation per band, concatenated.
Eigen::VectorXd embed_logmel(const AudioBuffer& clip);

EmbeddingStats embed_logmel_stats(const std::vector<AudioBuffer>& clips);

// 2-Wasserstein distance between the Gaussian fits:
// ||mu_r - mu_g||^2 + tr(S_r + S_g - 2 (S_r S_g)^1/2).
double frechet_distance(const EmbeddingStats& r, const EmbeddingStats& g);

// Binary cache: little-endian u32 dim, u32 count, float64 mean then
// row-major covariance.
void save_stats(const std::string& path, const EmbeddingStats& stats);
EmbeddingStats load_stats(const std::string& path);

}  // namespace tfsyn

#endif  // TFSYN_EMBEDDING_HPP_
