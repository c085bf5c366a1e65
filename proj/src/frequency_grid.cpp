#include "halfspec/frequency_grid.hpp"

#include "halfspec/errors.hpp"

namespace halfspec {

FrequencyGrid make_frequency_grid(int n_time, int pad_factor) {
    if (pad_factor < 1) throw config_error("pad_factor must be >= 1");
    if (n_time < 2) throw config_error("n_time must be >= 2");
    FrequencyGrid grid;
    grid.n_time = n_time;
    grid.pad_factor = pad_factor;
    grid.n_fft = pad_factor * n_time;
    grid.freqs.resize(grid.n_fft);
    for (int j = 0; j < grid.n_fft; ++j) {
        grid.freqs[j] = 2 * j < grid.n_fft ? static_cast<double>(j) / grid.n_fft
                                           : static_cast<double>(j) / grid.n_fft - 1.0;
    }
    return grid;
}

}  // namespace halfspec
