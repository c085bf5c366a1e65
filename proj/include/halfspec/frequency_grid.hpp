#pragma once

#include <vector>

namespace halfspec {

/// Signed Fourier frequencies f_j = j/n_fft for 2j < n_fft and j/n_fft - 1
/// otherwise, so the grid covers [-1/2, 1/2) and is closed under f -> -f up
/// to the Nyquist point.  A signed grid keeps odd phase functions genuinely
/// odd across the grid, which is what makes kernels with nonzero phase real.
struct FrequencyGrid {
    int n_fft = 0;
    int n_time = 0;
    int pad_factor = 0;
    std::vector<double> freqs;

    /// Index of the Nyquist node (n_fft/2) or -1 when n_fft is odd.
    int nyquist_index() const { return n_fft % 2 == 0 ? n_fft / 2 : -1; }
};

/// Grid with n_fft = pad_factor * n_time.  Throws config_error for
/// pad_factor < 1 or n_time < 2.
FrequencyGrid make_frequency_grid(int n_time, int pad_factor = 7);

}  // namespace halfspec
