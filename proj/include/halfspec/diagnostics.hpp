#pragma once

#include <complex>
#include <span>
#include <utility>
#include <vector>

#include "halfspec/frequency_grid.hpp"
#include "halfspec/params.hpp"

namespace halfspec {

/// Power at the nonnegative Fourier frequencies j/n, j = 0..floor(n/2),
/// |DFT|^2 / n.  The input segment must be gap-free.
struct Periodogram {
    std::vector<double> freq;
    std::vector<double> power;
};
Periodogram periodogram(std::span<const double> series);

/// Sine tapers v_k(t) = sqrt(2/(n+1)) sin(pi k (t+1) / (n+1)), k = 1..n_tapers,
/// pairwise orthonormal.
std::vector<std::vector<double>> sine_tapers(int n, int n_tapers);

/// Multitaper complex coherence S_ab / sqrt(S_aa S_bb) at nonnegative Fourier
/// frequencies, eigenspectra averaged over sine tapers.  `defined[j]` is false
/// where an auto-spectrum vanishes and the ratio is meaningless.
struct CoherenceEstimate {
    std::vector<double> freq;
    std::vector<std::complex<double>> coherence;
    std::vector<bool> defined;
};
CoherenceEstimate multitaper_coherence(std::span<const double> a, std::span<const double> b,
                                       int n_tapers = 5);

/// Multitaper auto-spectrum (averaged sine-taper eigenspectra).
Periodogram multitaper_spectrum(std::span<const double> series, int n_tapers = 5);

/// Gap-aware estimators: series with NaN gaps are split into complete
/// segments, per-segment estimates are interpolated onto the longest
/// segment's frequency grid and averaged with segment-length weights.
Periodogram segmented_periodogram(std::span<const double> series_with_gaps);
CoherenceEstimate segmented_coherence(std::span<const double> a, std::span<const double> b,
                                      int n_tapers = 5);

/// Model-implied curves for comparison plots: per-site marginal spectra with
/// the white-noise floor eta_st^2 + eta_t^2 added, and complex coherence
/// (including the phase factor) per requested site pair.  The lambda scale
/// field is not folded into the exported spectra.
struct ModelCurves {
    std::vector<double> freq;                          // nonnegative grid frequencies
    std::vector<double> sites;
    std::vector<std::vector<double>> spectra;          // [site][freq]
    std::vector<std::pair<double, double>> pairs;      // site altitude pairs
    std::vector<std::vector<std::complex<double>>> coherences;  // [pair][freq]
};
ModelCurves model_curves(const ModelParams& p, std::span<const double> sites,
                         std::span<const std::pair<int, int>> pair_indices,
                         const FrequencyGrid& grid);

}  // namespace halfspec
