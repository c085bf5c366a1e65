#pragma once

#include <complex>
#include <span>

namespace halfspec {

/// Thin RAII wrapper over FFTW complex transforms of a fixed length.
///
/// Plan creation is serialized internally (FFTW planning is not re-entrant);
/// a constructed Fft instance may not be shared between threads, but distinct
/// instances can run concurrently.
class Fft {
public:
    explicit Fft(int n);
    ~Fft();

    Fft(const Fft&) = delete;
    Fft& operator=(const Fft&) = delete;

    int size() const { return n_; }

    /// out[k] = sum_j in[j] e^{-2 pi i j k / n}  (unnormalized)
    void forward(std::span<const std::complex<double>> in,
                 std::span<std::complex<double>> out);

    /// out[k] = sum_j in[j] e^{+2 pi i j k / n}  (unnormalized)
    void backward(std::span<const std::complex<double>> in,
                  std::span<std::complex<double>> out);

private:
    int n_;
    void* plan_fwd_;
    void* plan_bwd_;
    std::complex<double>* buf_;
};

}  // namespace halfspec
