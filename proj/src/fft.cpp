#include "halfspec/fft.hpp"

#include <fftw3.h>

#include <cassert>
#include <cstring>
#include <mutex>

namespace halfspec {

namespace {
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace

Fft::Fft(int n) : n_(n) {
    buf_ = reinterpret_cast<std::complex<double>*>(fftw_malloc(sizeof(fftw_complex) * n));
    auto* b = reinterpret_cast<fftw_complex*>(buf_);
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan_fwd_ = fftw_plan_dft_1d(n, b, b, FFTW_FORWARD, FFTW_ESTIMATE);
    plan_bwd_ = fftw_plan_dft_1d(n, b, b, FFTW_BACKWARD, FFTW_ESTIMATE);
}

Fft::~Fft() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
    fftw_destroy_plan(static_cast<fftw_plan>(plan_bwd_));
    fftw_free(buf_);
}

void Fft::forward(std::span<const std::complex<double>> in,
                  std::span<std::complex<double>> out) {
    assert(static_cast<int>(in.size()) == n_ && static_cast<int>(out.size()) == n_);
    std::memcpy(buf_, in.data(), sizeof(std::complex<double>) * n_);
    fftw_execute(static_cast<fftw_plan>(plan_fwd_));
    std::memcpy(out.data(), buf_, sizeof(std::complex<double>) * n_);
}

void Fft::backward(std::span<const std::complex<double>> in,
                   std::span<std::complex<double>> out) {
    assert(static_cast<int>(in.size()) == n_ && static_cast<int>(out.size()) == n_);
    std::memcpy(buf_, in.data(), sizeof(std::complex<double>) * n_);
    fftw_execute(static_cast<fftw_plan>(plan_bwd_));
    std::memcpy(out.data(), buf_, sizeof(std::complex<double>) * n_);
}

}  // namespace halfspec
