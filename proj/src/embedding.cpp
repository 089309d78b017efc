// Copyright 2026 tfsyn authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "tfsyn/embedding.hpp"

#include <cmath>
#include <fstream>

#include "tfsyn/stft.hpp"

namespace tfsyn {

namespace {

// Floor relative to the clip's peak mel energy (60 dB of power range).
// An absolute floor lets inaudible silence-level differences dominate
// the population statistics; a much wider relative range does the same
// through near-floor cells.
constexpr double kEnergyRange = 1e-6;
constexpr double kEnergyFloor = 1e-30;
constexpr double kEigClip = 1e-10;

double hz_to_mel(double f) { return 2595.0 * std::log10(1.0 + f / 700.0); }

// Triangular filters, equally spaced on the mel scale over [0, sr/2].
// Returns (band, bin) weights.
Eigen::MatrixXd mel_filterbank(int bins, int fft_size, int sample_rate) {
  Eigen::MatrixXd fb = Eigen::MatrixXd::Zero(kMelBands, bins);
  const double mel_max = hz_to_mel(sample_rate / 2.0);
  std::vector<double> edges(kMelBands + 2);
  for (int i = 0; i < kMelBands + 2; ++i) {
    const double mel = mel_max * i / (kMelBands + 1);
    edges[i] = 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0);
  }
  for (int b = 0; b < kMelBands; ++b) {
    const double lo = edges[b], mid = edges[b + 1], hi = edges[b + 2];
    for (int k = 0; k < bins; ++k) {
      const double f = static_cast<double>(k) * sample_rate / fft_size;
      if (f <= lo || f >= hi) continue;
      fb(b, k) = f <= mid ? (f - lo) / (mid - lo) : (hi - f) / (hi - mid);
    }
  }
  return fb;
}

}  // namespace

Eigen::VectorXd embed_logmel(const AudioBuffer& clip) {
  TfParams params;
  params.fft_size = 512;
  params.hop = 256;
  params.window = WindowKind::kHann;
  ComplexSpectrogram spec = stft(clip, params);
  const int bins = spec.bins();
  const int frames = spec.frames();
  const Eigen::MatrixXd fb = mel_filterbank(bins, params.fft_size,
                                            clip.sample_rate);

  Eigen::MatrixXd power(bins, frames);
  for (int m = 0; m < bins; ++m)
    for (int n = 0; n < frames; ++n)
      power(m, n) = std::norm(spec.coefficients(m, n));
  const Eigen::MatrixXd mel = fb * power;
  const double floor =
      std::max(kEnergyFloor, mel.maxCoeff() * kEnergyRange);
  const Eigen::MatrixXd logmel = mel.array().max(floor).log().matrix();

  Eigen::VectorXd out(kEmbeddingDim);
  for (int b = 0; b < kMelBands; ++b) {
    const double mean = logmel.row(b).mean();
    const double var =
        (logmel.row(b).array() - mean).square().sum() / frames;
    out[b] = mean;
    out[kMelBands + b] = std::sqrt(var);
  }
  return out;
}

EmbeddingStats embed_logmel_stats(const std::vector<AudioBuffer>& clips) {
  if (clips.size() < 2)
    throw std::invalid_argument("need at least 2 clips for statistics");
  const int n = static_cast<int>(clips.size());
  Eigen::MatrixXd embeddings(kEmbeddingDim, n);
  for (int i = 0; i < n; ++i) embeddings.col(i) = embed_logmel(clips[i]);

  EmbeddingStats stats;
  stats.count = n;
  stats.mean = embeddings.rowwise().mean();
  const Eigen::MatrixXd centered = embeddings.colwise() - stats.mean;
  stats.covariance = centered * centered.transpose() / (n - 1);
  return stats;
}

double frechet_distance(const EmbeddingStats& r, const EmbeddingStats& g) {
  if (r.mean.size() != g.mean.size())
    throw std::invalid_argument("embedding dimensions differ");
  if (!r.mean.allFinite() || !g.mean.allFinite() ||
      !r.covariance.allFinite() || !g.covariance.allFinite())
    throw std::invalid_argument("non-finite statistics");

  const double mean_term = (r.mean - g.mean).squaredNorm();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es_r(r.covariance);
  Eigen::VectorXd lam = es_r.eigenvalues();
  for (int i = 0; i < lam.size(); ++i)
    lam[i] = lam[i] < kEigClip ? 0.0 : std::sqrt(lam[i]);
  const Eigen::MatrixXd sqrt_r =
      es_r.eigenvectors() * lam.asDiagonal() * es_r.eigenvectors().transpose();

  // tr((S_r S_g)^1/2) computed through the symmetric product.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es_m(sqrt_r * g.covariance *
                                                      sqrt_r);
  double trace_sqrt = 0.0;
  for (int i = 0; i < es_m.eigenvalues().size(); ++i) {
    const double v = es_m.eigenvalues()[i];
    if (v > kEigClip) trace_sqrt += std::sqrt(v);
  }
  return mean_term + r.covariance.trace() + g.covariance.trace() -
         2.0 * trace_sqrt;
}

void save_stats(const std::string& path, const EmbeddingStats& stats) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  const uint32_t dim = static_cast<uint32_t>(stats.mean.size());
  const uint32_t count = static_cast<uint32_t>(stats.count);
  f.write(reinterpret_cast<const char*>(&dim), 4);
  f.write(reinterpret_cast<const char*>(&count), 4);
  f.write(reinterpret_cast<const char*>(stats.mean.data()), 8 * dim);
  for (uint32_t i = 0; i < dim; ++i)
    for (uint32_t j = 0; j < dim; ++j) {
      const double v = stats.covariance(i, j);
      f.write(reinterpret_cast<const char*>(&v), 8);
    }
  if (!f) throw std::runtime_error("write failed: " + path);
}

EmbeddingStats load_stats(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path);
  uint32_t dim = 0, count = 0;
  f.read(reinterpret_cast<char*>(&dim), 4);
  f.read(reinterpret_cast<char*>(&count), 4);
  if (!f || dim == 0) throw std::runtime_error(path + ": bad stats header");
  EmbeddingStats stats;
  stats.count = static_cast<int>(count);
  stats.mean.resize(dim);
  f.read(reinterpret_cast<char*>(stats.mean.data()), 8 * dim);
  stats.covariance.resize(dim, dim);
  for (uint32_t i = 0; i < dim; ++i)
    for (uint32_t j = 0; j < dim; ++j) {
      double v;
      f.read(reinterpret_cast<char*>(&v), 8);
      stats.covariance(i, j) = v;
    }
  if (!f) throw std::runtime_error(path + ": truncated stats payload");
  return stats;
}

}  // namespace tfsyn
