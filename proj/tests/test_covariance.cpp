#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "halfspec/covariance.hpp"
#include "halfspec/errors.hpp"
#include "halfspec/spectral_model.hpp"
#include "oracles.hpp"

using namespace halfspec;
using testing::random_params;
using testing::reference_params;

namespace {

ObservationLayout lattice(std::vector<double> sites, std::int64_t n_time) {
    return ObservationLayout::full_lattice(std::move(sites), n_time);
}

KernelTable table_for(const ObservationLayout& layout, const ModelParams& p, int pad = 7,
                      std::span<const Param> grads = {}) {
    const int n_time = std::max(static_cast<int>(layout.time_span()), 2);
    const auto grid = make_frequency_grid(n_time, pad);
    return build_kernel_table(layout.site_altitudes, p, grid,
                              static_cast<int>(layout.time_span()), grads);
}

}  // namespace

TEST_SUITE("covariance") {

TEST_CASE("single observation") {
    ModelParams p = reference_params();
    p.set_knots(0.0, 1.0);
    ObservationLayout layout;
    layout.site_altitudes = {400.0};
    layout.entries = {{0, 0}};
    const auto grid = make_frequency_grid(2, 7);
    const auto table = build_kernel_table(layout.site_altitudes, p, grid, 1);
    const auto sigma = assemble(layout, p, table);
    REQUIRE(sigma.rows() == 1);
    const double lam = scale_lambda(400.0, 0.0, p);
    const double expected =
        lam * lam * table.value(0, 0, 0) + p.eta_st * p.eta_st + p.eta_t * p.eta_t;
    CHECK(sigma(0, 0) == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("temporal nugget couples sites at equal times") {
    ModelParams p = reference_params();
    p.set_knots(0.0, 1.0);
    ObservationLayout layout;
    layout.site_altitudes = {300.0, 600.0};
    layout.entries = {{0, 0}, {1, 0}};
    const auto table = table_for(layout, p);
    const auto sigma = assemble(layout, p, table);
    const double lam0 = scale_lambda(300.0, 0.0, p);
    const double lam1 = scale_lambda(600.0, 0.0, p);
    // off-diagonal picks up eta_t^2 but not eta_st^2
    CHECK(sigma(0, 1) == doctest::Approx(lam0 * lam1 * table.value(0, 1, 0) +
                                         p.eta_t * p.eta_t)
                             .epsilon(1e-13));
    CHECK(sigma(0, 0) == doctest::Approx(lam0 * lam0 * table.value(0, 0, 0) +
                                         p.eta_st * p.eta_st + p.eta_t * p.eta_t)
                             .epsilon(1e-13));
}

TEST_CASE("assemble matches the entrywise quadrature oracle") {
    std::mt19937_64 rng(43);
    const ModelParams p = random_params(rng);
    const auto layout = lattice({260.0, 395.0, 530.0, 720.0}, 32);
    const auto grid = make_frequency_grid(32, 7);
    const auto table = build_kernel_table(layout.site_altitudes, p, grid, 32);
    const auto sigma = assemble(layout, p, table);
    const auto oracle = testing::covariance_direct(layout, p, grid);
    const double scale = oracle.cwiseAbs().maxCoeff();
    CHECK((sigma - oracle).cwiseAbs().maxCoeff() <= 1e-10 * scale);
}

TEST_CASE("missing lag raises assembly error") {
    ModelParams p = reference_params();
    p.set_knots(0.0, 7.0);
    const auto layout = lattice({300.0, 500.0}, 8);
    const auto grid = make_frequency_grid(8, 7);
    const auto short_table = build_kernel_table(layout.site_altitudes, p, grid, 4);
    CHECK_THROWS_AS(assemble(layout, p, short_table), assembly_error);
}

TEST_CASE("nugget gradients are indicator matrices") {
    ModelParams p = reference_params();
    p.set_knots(0.0, 3.0);
    ObservationLayout layout;
    layout.site_altitudes = {300.0, 600.0};
    layout.entries = {{0, 0}, {0, 2}, {1, 0}, {1, 3}};
    const auto table = table_for(layout, p);

    const auto d_st = assemble_grad_one(layout, p, table, Param::eta_st);
    CHECK((d_st - 2.0 * p.eta_st * Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() ==
          0.0);

    const auto d_t = assemble_grad_one(layout, p, table, Param::eta_t);
    Eigen::MatrixXd expected = Eigen::MatrixXd::Zero(4, 4);
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            if (layout.entries[i].time == layout.entries[j].time) {
                expected(i, j) = 2.0 * p.eta_t;
            }
        }
    }
    CHECK((d_t - expected).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("covariance gradients match finite differences for every parameter") {
    std::mt19937_64 rng(47);
    for (int draw = 0; draw < 2; ++draw) {
        ModelParams p = random_params(rng);
        p.set_knots(0.0, 11.0);
        // gappy layout
        ObservationLayout layout;
        layout.site_altitudes = {260.0, 455.0, 650.0};
        for (int s = 0; s < 3; ++s) {
            for (std::int64_t t = 0; t < 12; ++t) {
                if ((t + 3 * s) % 5 == 0) continue;  // knock holes in the lattice
                layout.entries.push_back({s, t});
            }
        }
        const auto grid = make_frequency_grid(12, 7);
        const auto table =
            build_kernel_table(layout.site_altitudes, p, grid, 12, kAllParams);

        for (Param which : kAllParams) {
            const auto analytic = assemble_grad_one(layout, p, table, which);
            const double ascale = std::max(analytic.cwiseAbs().maxCoeff(), 1e-10);
            // spot-check a handful of entries with central differences
            std::uniform_int_distribution<int> ui(0, static_cast<int>(layout.size()) - 1);
            for (int probe = 0; probe < 12; ++probe) {
                const int i = ui(rng), j = ui(rng);
                const double fd = testing::fd_param(
                    [&](const ModelParams& q) {
                        const auto tq = build_kernel_table(layout.site_altitudes, q, grid, 12);
                        return assemble(layout, q, tq)(i, j);
                    },
                    p, which);
                CHECK(std::abs(analytic(i, j) - fd) <=
                      std::max(1e-4 * std::abs(fd), 1e-4 * ascale));
            }
        }
    }
}

TEST_CASE("assemble_grad returns one matrix per requested parameter") {
    ModelParams p = reference_params();
    p.set_knots(0.0, 7.0);
    const auto layout = lattice({300.0, 480.0}, 8);
    const std::array<Param, 3> free = {Param::rho0, Param::eta_st, Param::theta1};
    const auto table = table_for(layout, p, 7, free);
    const auto grads = assemble_grad(layout, p, table, free);
    REQUIRE(grads.size() == 3);
    for (const auto& g : grads) {
        CHECK(g.rows() == 16);
        CHECK((g - g.transpose()).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("Cholesky succeeds across random draws") {
    std::mt19937_64 rng(53);
    for (int draw = 0; draw < 40; ++draw) {
        ModelParams p = random_params(rng);
        p.eta_st = std::max(p.eta_st, 1e-3);
        p.set_knots(0.0, 15.0);
        const auto layout = lattice({250.0, 390.0, 520.0, 700.0}, 16);
        const auto table = table_for(layout, p);
        const auto sigma = assemble(layout, p, table);
        Eigen::LLT<Eigen::MatrixXd> llt(sigma);
        CHECK(llt.info() == Eigen::Success);
    }
}

TEST_CASE("permutation and deletion consistency") {
    ModelParams p = reference_params();
    p.set_knots(0.0, 9.0);
    const auto layout = lattice({300.0, 540.0}, 10);
    const auto table = table_for(layout, p);
    const auto sigma = assemble(layout, p, table);

    // deleting observations leaves the principal submatrix
    ObservationLayout sub;
    sub.site_altitudes = layout.site_altitudes;
    std::vector<int> kept;
    for (std::size_t i = 0; i < layout.size(); ++i) {
        if (i % 3 != 1) {
            sub.entries.push_back(layout.entries[i]);
            kept.push_back(static_cast<int>(i));
        }
    }
    const auto sigma_sub = assemble(sub, p, table);
    for (std::size_t a = 0; a < kept.size(); ++a) {
        for (std::size_t b = 0; b < kept.size(); ++b) {
            CHECK(sigma_sub(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) ==
                  sigma(kept[a], kept[b]));
        }
    }
}

TEST_CASE("assembled matrix is symmetric with the nugget floor on the diagonal") {
    std::mt19937_64 rng(59);
    const ModelParams p = random_params(rng);
    const auto layout = lattice({250.0, 430.0, 610.0}, 12);
    const auto table = table_for(layout, p);
    const auto sigma = assemble(layout, p, table);
    CHECK((sigma - sigma.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * sigma(0, 0));
    const double floor = p.eta_st * p.eta_st + p.eta_t * p.eta_t;
    for (Eigen::Index i = 0; i < sigma.rows(); ++i) {
        CHECK(sigma(i, i) >= floor);
    }
}

}  // TEST_SUITE
