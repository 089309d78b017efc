// Copyright 2026 tfsyn authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "tfsyn/pghi.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <random>
#include <vector>

#include "tfsyn/stft.hpp"

namespace tfsyn {

PhaseGradients phase_gradients(const LogMagSpectrogram& logmag) {
  logmag.params.validate();
  if (logmag.params.window != WindowKind::kTruncatedGaussian)
    throw std::invalid_argument(
        "phase gradients require a truncated-Gaussian analysis window");
  if (logmag.params.redundancy() < 4.0)
    throw std::invalid_argument(
        "redundancy fft_size/hop must be >= 4 for phase-gradient estimation");
  const int bins = logmag.values.bins;
  const int frames = logmag.values.frames;
  const double a = logmag.params.hop;
  const double M = logmag.params.fft_size;
  const double gamma = logmag.params.effective_gamma();
  const auto& s = logmag.values;

  PhaseGradients g;
  g.params = logmag.params;
  g.dphase_dt = RealMatrix(bins, frames);
  g.dphase_df = RealMatrix(bins, frames);

  // Centered differences inside, one-sided at the borders.
  for (int m = 0; m < bins; ++m) {
    for (int n = 0; n < frames; ++n) {
      double dsdm;
      if (m == 0)
        dsdm = s(1, n) - s(0, n);
      else if (m == bins - 1)
        dsdm = s(m, n) - s(m - 1, n);
      else
        dsdm = 0.5 * (s(m + 1, n) - s(m - 1, n));

      double dsdn;
      if (frames == 1)
        dsdn = 0.0;
      else if (n == 0)
        dsdn = s(m, 1) - s(m, 0);
      else if (n == frames - 1)
        dsdn = s(m, n) - s(m, n - 1);
      else
        dsdn = 0.5 * (s(m, n + 1) - s(m, n - 1));

      g.dphase_dt(m, n) = (a * M / gamma) * dsdm + 2.0 * kPi * a * m / M;
      g.dphase_df(m, n) = -(gamma / (a * M)) * dsdn;
    }
  }
  return g;
}

namespace {

struct HeapCell {
  double mag;
  int bin;
  int frame;
};

// Max heap on magnitude; ties resolved by (bin, frame) so runs are
// deterministic.
struct CellLess {
  bool operator()(const HeapCell& x, const HeapCell& y) const {
    if (x.mag != y.mag) return x.mag < y.mag;
    if (x.bin != y.bin) return x.bin > y.bin;
    return x.frame > y.frame;
  }
};

}  // namespace

RealMatrix heap_integrate(const LogMagSpectrogram& logmag,
                          const PhaseGradients& grads, double tol,
                          uint64_t seed) {
  if (!(tol > 0.0 && tol < 1.0)) throw std::invalid_argument("tol must be in (0,1)");
  const int bins = logmag.values.bins;
  const int frames = logmag.values.frames;
  if (!grads.dphase_dt.same_shape(bins, frames) ||
      !grads.dphase_df.same_shape(bins, frames))
    throw std::invalid_argument("gradient dimensions do not match magnitude");

  const auto& s = logmag.values;
  const auto& gt = grads.dphase_dt;
  const auto& gf = grads.dphase_df;
  double log_max = s.data[0];
  for (double v : s.data) log_max = std::max(log_max, v);
  // Cells at the representation's own floor never enter the heap, even
  // when tol reaches below it.
  const double log_thresh =
      std::max(log_max + std::log(tol), logmag.floor + 1e-12);

  RealMatrix phase(bins, frames, 0.0);
  std::vector<char> significant(s.data.size());
  std::vector<char> assigned(s.data.size(), 0);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(-kPi, kPi);
  size_t n_significant = 0;
  for (size_t i = 0; i < s.data.size(); ++i) {
    significant[i] = s.data[i] > log_thresh;
    if (significant[i])
      ++n_significant;
    else
      phase.data[i] = uniform(rng);
  }

  // Seed order: unassigned cell of largest magnitude, restarting per
  // disconnected region.
  std::vector<HeapCell> seeds;
  seeds.reserve(n_significant);
  for (int m = 0; m < bins; ++m)
    for (int n = 0; n < frames; ++n)
      if (significant[static_cast<size_t>(m) * frames + n])
        seeds.push_back({s(m, n), m, n});
  std::sort(seeds.begin(), seeds.end(), [](const HeapCell& x, const HeapCell& y) {
    return CellLess()(y, x);
  });

  std::priority_queue<HeapCell, std::vector<HeapCell>, CellLess> frontier;
  size_t seed_idx = 0;
  size_t n_assigned = 0;
  auto idx = [frames](int m, int n) { return static_cast<size_t>(m) * frames + n; };

  while (n_assigned < n_significant) {
    while (seed_idx < seeds.size() &&
           assigned[idx(seeds[seed_idx].bin, seeds[seed_idx].frame)])
      ++seed_idx;
    const HeapCell& start = seeds[seed_idx];
    phase(start.bin, start.frame) = 0.0;
    assigned[idx(start.bin, start.frame)] = 1;
    ++n_assigned;
    frontier.push(start);

    while (!frontier.empty()) {
      const HeapCell cell = frontier.top();
      frontier.pop();
      const int m = cell.bin, n = cell.frame;
      auto visit = [&](int mm, int nn, double delta) {
        if (mm < 0 || mm >= bins || nn < 0 || nn >= frames) return;
        const size_t i = idx(mm, nn);
        if (!significant[i] || assigned[i]) return;
        phase(mm, nn) = phase(m, n) + delta;
        assigned[i] = 1;
        ++n_assigned;
        frontier.push({s(mm, nn), mm, nn});
      };
      // Trapezoidal step along each axis.
      visit(m, n + 1, n + 1 < frames ? 0.5 * (gt(m, n) + gt(m, n + 1)) : 0.0);
      visit(m, n - 1, n - 1 >= 0 ? -0.5 * (gt(m, n) + gt(m, n - 1)) : 0.0);
      visit(m + 1, n, m + 1 < bins ? 0.5 * (gf(m, n) + gf(m + 1, n)) : 0.0);
      visit(m - 1, n, m - 1 >= 0 ? -0.5 * (gf(m, n) + gf(m - 1, n)) : 0.0);
    }
  }
  return phase;
}

AudioBuffer pghi_invert(const LogMagSpectrogram& logmag, double tol,
                        uint64_t seed) {
  PhaseGradients grads = phase_gradients(logmag);
  RealMatrix phase = heap_integrate(logmag, grads, tol, seed);

  ComplexSpectrogram spec;
  spec.params = logmag.params;
  spec.signal_length = logmag.signal_length;
  spec.coefficients = ComplexMatrix(logmag.values.bins, logmag.values.frames);
  for (size_t i = 0; i < spec.coefficients.data.size(); ++i)
    spec.coefficients.data[i] =
        std::polar(std::exp(logmag.values.data[i]), phase.data[i]);
  return istft(spec);
}

}  // namespace tfsyn
