#pragma once

#include <span>
#include <vector>

#include "halfspec/frequency_grid.hpp"
#include "halfspec/params.hpp"

namespace halfspec {

/// Parameters the cross-spectrum depends on.  Kernel-lag derivatives for all
/// other parameters (scale knots, phi's, nuggets) are identically zero; their
/// contributions enter at covariance assembly.
std::span<const Param> spectrum_params();

/// Two-sided real lag sequence K(h) for h in [-(n_lags-1), n_lags-1].
struct LagSequence {
    int n_lags = 0;
    std::vector<double> values;  // index h + n_lags - 1

    double at(long lag) const { return values[lag + n_lags - 1]; }
};

/// K(h; x, xp) at all lags by inverse FFT of the analytic cross-spectrum on
/// the signed frequency grid (trapezoidal quadrature of the spectral
/// integral).  Throws config_error when n_lags exceeds the wrap-around guard
/// n_fft / pad_factor, numeric_error on non-finite spectrum values or anomalous
/// imaginary residuals.
LagSequence kernel_sequence(double x, double xp, const ModelParams& p,
                            const FrequencyGrid& grid, int n_lags);

/// Analytic parameter derivatives dK(h)/dp via inverse FFT of the exact
/// cross-spectrum derivative grids (one sequence per requested parameter, in
/// request order).  Parameters the spectrum does not depend on yield zero
/// sequences.
std::vector<LagSequence> kernel_sequence_grad(double x, double xp, const ModelParams& p,
                                              const FrequencyGrid& grid, int n_lags,
                                              std::span<const Param> free_params);

/// Covariance-at-lag sequences for all site pairs, with optional per-parameter
/// derivative sequences.  Lookups handle orientation via the Hermitian
/// identity K(h; x, xp) = K(-h; xp, x).
class KernelTable {
public:
    KernelTable() = default;

    const std::vector<double>& sites() const { return sites_; }
    int n_sites() const { return static_cast<int>(sites_.size()); }
    int n_lags() const { return n_lags_; }
    const std::vector<Param>& grad_params() const { return grad_params_; }

    double value(int site_a, int site_b, long lag) const;
    double grad(int site_a, int site_b, long lag, int grad_index) const;

private:
    friend KernelTable build_kernel_table(std::span<const double>, const ModelParams&,
                                          const FrequencyGrid&, int, std::span<const Param>);

    std::vector<double> sites_;
    int n_lags_ = 0;
    int seq_len_ = 0;
    std::vector<Param> grad_params_;
    std::vector<double> values_;  // [pair][lag + n_lags - 1]
    std::vector<double> grads_;   // [pair][param][lag + n_lags - 1]

    std::size_t pair_index(int a, int b) const;  // requires a <= b
    void check_lookup(int a, int b, long lag) const;
};

/// Builds the table for every unordered site pair.  Site pairs are evaluated
/// independently (parallelized when OpenMP is enabled).  Pass an empty
/// grad_params span to skip derivative grids.
KernelTable build_kernel_table(std::span<const double> sites, const ModelParams& p,
                               const FrequencyGrid& grid, int n_lags,
                               std::span<const Param> grad_params = {});

}  // namespace halfspec
