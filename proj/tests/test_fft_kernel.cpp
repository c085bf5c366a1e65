#include <doctest.h>

#include <chrono>
#include <cmath>
#include <random>

#include "halfspec/errors.hpp"
#include "halfspec/frequency_grid.hpp"
#include "halfspec/kernel_table.hpp"
#include "halfspec/spectral_model.hpp"
#include "oracles.hpp"

using namespace halfspec;
using testing::random_params;
using testing::reference_params;

TEST_SUITE("fft_kernel") {

TEST_CASE("frequency grid layout") {
    const auto g = make_frequency_grid(100, 7);
    CHECK(g.n_fft == 700);
    CHECK(g.freqs.size() == 700);
    CHECK(g.freqs[0] == 0.0);
    CHECK(g.freqs[350] == -0.5);
    CHECK(g.freqs[1] == doctest::Approx(1.0 / 700));
    CHECK(g.freqs[699] == doctest::Approx(-1.0 / 700));

    const auto tiny = make_frequency_grid(2, 1);
    CHECK(tiny.freqs == std::vector<double>{0.0, -0.5});

    const auto field_scale = make_frequency_grid(780, 7);  // a 15-minute lidar stare
    CHECK(field_scale.n_fft == 5460);

    CHECK_THROWS_AS(make_frequency_grid(100, 0), config_error);
    CHECK_THROWS_AS(make_frequency_grid(1, 7), config_error);
}

TEST_CASE("frequency grid closed under negation") {
    for (int n_time : {9, 16}) {
        const auto g = make_frequency_grid(n_time, 3);
        for (int j = 1; j < g.n_fft; ++j) {
            if (2 * j == g.n_fft) continue;  // Nyquist is its own mirror
            const double f = g.freqs[j];
            const double fm = g.freqs[g.n_fft - j];
            CHECK(fm == doctest::Approx(-f).epsilon(1e-15));
        }
    }
}

TEST_CASE("flat spectrum gives white noise") {
    // S is made constant over the band: the low-frequency multiplier is
    // flattened with a huge xi1 and the tail factor killed with rho -> -inf.
    ModelParams p = reference_params();
    p.xi00 = p.xi01 = 1e-10;
    p.xi1 = 1e8;
    p.xi2 = 1.0;
    p.rho0 = p.rho1 = -40.0;
    p.nu0 = p.nu1 = 1.0;
    p.alpha = 0.0;
    const auto grid = make_frequency_grid(64, 7);
    const auto seq = kernel_sequence(400.0, 400.0, p, grid, 32);
    CHECK(seq.at(0) == doctest::Approx(2.0).epsilon(1e-9));
    for (long h = 1; h < 32; ++h) {
        CHECK(std::abs(seq.at(h)) < 1e-12 * seq.at(0));
        CHECK(std::abs(seq.at(-h)) < 1e-12 * seq.at(0));
    }
}

TEST_CASE("diagonal K(0) is the mean of the marginal sdf") {
    const ModelParams p = reference_params();
    const auto grid = make_frequency_grid(64, 7);
    const auto seq = kernel_sequence(300.0, 300.0, p, grid, 16);
    double mean = 0.0;
    for (double f : grid.freqs) mean += marginal_sdf(f, 300.0, p);
    mean /= grid.n_fft;
    CHECK(seq.at(0) == doctest::Approx(mean).epsilon(1e-12));
    CHECK(seq.at(0) > 0.0);
}

TEST_CASE("kernel_sequence matches the direct Riemann sum") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> ux(210.0, 840.0);
    const auto grid = make_frequency_grid(64, 7);
    for (int draw = 0; draw < 5; ++draw) {
        const ModelParams p = random_params(rng);
        const double x = ux(rng), xp = ux(rng);
        const auto fast = kernel_sequence(x, xp, p, grid, 64);
        const auto direct = testing::kernel_direct(x, xp, p, grid, 64);
        const double scale = std::abs(direct.at(0)) + 1e-300;
        for (long h = -63; h <= 63; ++h) {
            CHECK(std::abs(fast.at(h) - direct.at(h)) < 1e-12 * scale);
        }
    }
}

TEST_CASE("wrap-around guard and bad inputs") {
    const ModelParams p = reference_params();
    const auto grid = make_frequency_grid(32, 7);
    CHECK_THROWS_AS(kernel_sequence(300.0, 400.0, p, grid, 33), config_error);
    CHECK_NOTHROW(kernel_sequence(300.0, 400.0, p, grid, 32));
    CHECK_THROWS_AS(build_kernel_table(std::vector<double>{300.0, 300.0}, p, grid, 8),
                    config_error);
}

TEST_CASE("Hermitian consistency between lag signs") {
    std::mt19937_64 rng(29);
    const auto grid = make_frequency_grid(48, 7);
    const ModelParams p = random_params(rng);
    const auto ab = kernel_sequence(310.0, 620.0, p, grid, 48);
    const auto ba = kernel_sequence(620.0, 310.0, p, grid, 48);
    for (long h = -47; h <= 47; ++h) {
        CHECK(ab.at(h) == doctest::Approx(ba.at(-h)).epsilon(1e-10));
    }
}

TEST_CASE("alpha = 0 makes every pair sequence even in lag") {
    std::mt19937_64 rng(31);
    ModelParams p = random_params(rng);
    p.alpha = 0.0;
    const auto grid = make_frequency_grid(48, 7);
    const auto seq = kernel_sequence(250.0, 700.0, p, grid, 48);
    for (long h = 1; h < 48; ++h) {
        CHECK(seq.at(h) == doctest::Approx(seq.at(-h)).epsilon(1e-12));
    }
}

TEST_CASE("diagonal sequences are maximal at lag zero") {
    std::mt19937_64 rng(37);
    const auto grid = make_frequency_grid(64, 7);
    for (int draw = 0; draw < 5; ++draw) {
        const ModelParams p = random_params(rng);
        const auto seq = kernel_sequence(500.0, 500.0, p, grid, 64);
        for (long h = -63; h <= 63; ++h) {
            CHECK(seq.at(0) >= std::abs(seq.at(h)) - 1e-12 * seq.at(0));
        }
    }
}

TEST_CASE("FFT-length invariance across pad factors") {
    // length-independence needs the narrow low-frequency features (widths
    // xi1/pi and zeta1/pi) resolvable by the coarsest grid; fitted-scale
    // values need a ~780-sample window, so this desk-scale check widens them
    ModelParams p = reference_params();
    p.xi1 = 0.1;
    p.zeta01 = 0.1;
    p.zeta11 = 0.1;
    p.zeta02 = 1.5;   // smoother low-frequency cusp: tails die within the window
    p.zeta12 = 1.5;
    const int n_time = 96;
    const auto base = kernel_sequence(300.0, 480.0, p, make_frequency_grid(n_time, 5), n_time);
    for (int pad : {7, 11, 21}) {
        const auto other =
            kernel_sequence(300.0, 480.0, p, make_frequency_grid(n_time, pad), n_time);
        const double scale = std::abs(base.at(0));
        for (long h = -(n_time - 1); h <= n_time - 1; ++h) {
            CHECK(std::abs(base.at(h) - other.at(h)) <= 1e-6 * scale);
        }
    }
}

TEST_CASE("separable special case factorizes") {
    // x-independent S, f-independent coherence, alpha = 0
    ModelParams p = reference_params();
    p.xi00 = p.xi01;
    p.rho0 = p.rho1 = 4.0;
    p.nu0 = p.nu1 = 1.2;
    p.zeta01 = p.zeta11 = 1e8;  // gamma(x)(f) == e^{zeta0(x)} for every f
    p.alpha = 0.0;
    const auto grid = make_frequency_grid(64, 7);
    const int n_lags = 64;
    const auto diag = kernel_sequence(300.0, 300.0, p, grid, n_lags);
    const auto cross = kernel_sequence(300.0, 600.0, p, grid, n_lags);
    const double c = cross.at(0) / diag.at(0);
    CHECK(c > 0.0);
    CHECK(c < 1.0);
    for (long h = -(n_lags - 1); h <= n_lags - 1; ++h) {
        CHECK(std::abs(cross.at(h) - c * diag.at(h)) <= 1e-10 * std::abs(cross.at(0)));
    }
}

TEST_CASE("kernel gradient: alpha at zero separation is the zero sequence") {
    const ModelParams p = reference_params();
    const auto grid = make_frequency_grid(32, 7);
    const std::array<Param, 1> params = {Param::alpha};
    const auto grads = kernel_sequence_grad(400.0, 400.0, p, grid, 16, params);
    for (long h = -15; h <= 15; ++h) CHECK(grads[0].at(h) == 0.0);
}

TEST_CASE("kernel gradient parity at zero phase") {
    // at alpha = 0 the kernel is even in lag; its alpha-derivative is odd,
    // every other derivative stays even
    std::mt19937_64 rng(43);
    ModelParams p = random_params(rng);
    p.alpha = 0.0;
    const auto grid = make_frequency_grid(32, 7);
    const int n_lags = 16;
    const auto grads = kernel_sequence_grad(280.0, 640.0, p, grid, n_lags, spectrum_params());
    for (std::size_t g = 0; g < spectrum_params().size(); ++g) {
        const bool odd = spectrum_params()[g] == Param::alpha;
        double scale = 0.0;
        for (long h = -(n_lags - 1); h <= n_lags - 1; ++h) {
            scale = std::max(scale, std::abs(grads[g].at(h)));
        }
        for (long h = 1; h < n_lags; ++h) {
            const double mirror = odd ? -grads[g].at(-h) : grads[g].at(-h);
            CHECK(std::abs(grads[g].at(h) - mirror) <= 1e-10 * (scale + 1e-300));
        }
        if (odd) CHECK(grads[g].at(0) == 0.0);
    }
}

TEST_CASE("kernel gradient: non-spectrum parameters give zero sequences") {
    const ModelParams p = reference_params();
    const auto grid = make_frequency_grid(32, 7);
    const std::array<Param, 3> params = {Param::theta0, Param::phi1, Param::eta_st};
    const auto grads = kernel_sequence_grad(300.0, 500.0, p, grid, 16, params);
    for (const auto& g : grads) {
        for (long h = -15; h <= 15; ++h) CHECK(g.at(h) == 0.0);
    }
}

TEST_CASE("kernel gradients match finite differences for every parameter") {
    std::mt19937_64 rng(41);
    const auto grid = make_frequency_grid(32, 7);
    const int n_lags = 16;
    for (int draw = 0; draw < 3; ++draw) {
        const ModelParams p = random_params(rng);
        std::uniform_real_distribution<double> ux(210.0, 840.0);
        const double x = ux(rng), xp = ux(rng);
        const auto grads = kernel_sequence_grad(x, xp, p, grid, n_lags, kAllParams);
        const auto base = kernel_sequence(x, xp, p, grid, n_lags);
        const double kscale = std::abs(base.at(0));
        for (std::size_t k = 0; k < kAllParams.size(); ++k) {
            double gscale = 1e-6 * kscale;
            for (long h = -(n_lags - 1); h <= n_lags - 1; ++h) {
                gscale = std::max(gscale, 1e-4 * std::abs(grads[k].at(h)));
            }
            for (long h : {-12L, -3L, 0L, 5L, 15L}) {
                const double fd = testing::fd_param(
                    [&](const ModelParams& q) {
                        return kernel_sequence(x, xp, q, grid, n_lags).at(h);
                    },
                    p, kAllParams[k]);
                const double diff = std::abs(grads[k].at(h) - fd);
                CHECK(diff <= std::max(1e-4 * std::abs(fd), gscale));
            }
        }
    }
}

TEST_CASE("build_kernel_table agrees with per-pair kernel_sequence") {
    const ModelParams p = reference_params();
    const auto grid = make_frequency_grid(40, 7);
    const std::vector<double> sites = {250.0, 430.0, 610.0};
    const auto table = build_kernel_table(sites, p, grid, 20);
    for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) {
            const auto seq = kernel_sequence(sites[a], sites[b], p, grid, 20);
            for (long h = -19; h <= 19; ++h) {
                CHECK(table.value(a, b, h) == doctest::Approx(seq.at(h)).epsilon(1e-13));
            }
        }
    }
    CHECK_THROWS_AS(table.value(0, 1, 20), assembly_error);
    CHECK_THROWS_AS(table.value(0, 3, 0), assembly_error);
}

TEST_CASE("kernel evaluation cost grows with pair count, well below cubic") {
    const ModelParams p = reference_params();
    auto time_build = [&](int ns, int nt) {
        std::vector<double> sites(ns);
        for (int i = 0; i < ns; ++i) sites[i] = 210.0 + 630.0 * i / std::max(1, ns - 1);
        const auto grid = make_frequency_grid(nt, 7);
        const auto t0 = std::chrono::steady_clock::now();
        build_kernel_table(sites, p, grid, nt);
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    };
    time_build(4, 256);  // warm-up
    const double t1 = std::min(time_build(4, 256), time_build(4, 256));
    const double t2 = std::min(time_build(8, 256), time_build(8, 256));
    // 10 pairs -> 36 pairs: expect ~3.6x; bands wide enough to survive a
    // loaded machine
    CHECK(t2 > 1.3 * t1);
    CHECK(t2 < 25.0 * t1);
}

}  // TEST_SUITE
