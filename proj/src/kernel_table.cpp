#include "halfspec/kernel_table.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <exception>
#include <numbers>
#include <sstream>

#include "halfspec/errors.hpp"
#include "halfspec/fft.hpp"
#include "halfspec/spectral_model.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace halfspec {

namespace {

using cplx = std::complex<double>;

constexpr std::array<Param, 17> kSpectrumParams = {
    Param::rho0,   Param::nu0,    Param::rho1,   Param::nu1,
    Param::zeta00, Param::zeta01, Param::zeta02,
    Param::zeta10, Param::zeta11, Param::zeta12,
    Param::beta,   Param::tau,
    Param::xi00,   Param::xi01,   Param::xi1,    Param::xi2,
    Param::alpha,
};

struct ParamSlots {
    int sdf = -1;    // index into SdfEval::d
    int gamma = -1;  // index into GammaEval/CoherenceEval::d
    bool is_alpha = false;
};

ParamSlots slots_for(Param p) {
    ParamSlots s;
    for (int i = 0; i < SdfGrad::count; ++i) {
        if (SdfGrad::params[i] == p) s.sdf = i;
    }
    for (int i = 0; i < GammaGrad::count; ++i) {
        if (GammaGrad::params[i] == p) s.gamma = i;
    }
    s.is_alpha = (p == Param::alpha);
    return s;
}

bool is_spectrum_param(Param p) {
    return std::find(kSpectrumParams.begin(), kSpectrumParams.end(), p) !=
           kSpectrumParams.end();
}

// Site-level quantities memoized over the half grid j = 0..n_fft/2; the
// spectrum grids are completed by exact conjugate mirroring, which keeps the
// inverse transform real up to rounding.
class SpectrumTables {
public:
    SpectrumTables(std::span<const double> sites, const ModelParams& p,
                   const FrequencyGrid& grid, bool with_grads)
        : sites_(sites.begin(), sites.end()),
          params_(p),
          n_fft_(grid.n_fft),
          half_(grid.n_fft / 2),
          with_grads_(with_grads) {
        const int hlen = half_ + 1;
        const int ns = static_cast<int>(sites_.size());
        sin_pif_.resize(hlen);
        for (int j = 0; j <= half_; ++j) {
            sin_pif_[j] = std::sin(std::numbers::pi * grid.freqs[j]);
        }
        nu_s_.resize(ns);
        variance_.assign(ns, 0.0);
        sdf_.resize(static_cast<std::size_t>(ns) * hlen);
        gamma_.resize(static_cast<std::size_t>(ns) * hlen);
        if (with_grads_) {
            sdf_g_.resize(static_cast<std::size_t>(ns) * hlen);
            gamma_g_.resize(static_cast<std::size_t>(ns) * hlen);
        }
        for (int s = 0; s < ns; ++s) {
            nu_s_[s] = coherence_smoothness(sites_[s], p);
            for (int j = 0; j <= half_; ++j) {
                const double f = grid.freqs[j];
                const std::size_t idx = static_cast<std::size_t>(s) * hlen + j;
                if (with_grads_) {
                    sdf_g_[idx] = marginal_sdf_with_grad(f, sites_[s], p);
                    gamma_g_[idx] = coherence_gamma_with_grad(f, sites_[s], p);
                    sdf_[idx] = sdf_g_[idx].value;
                    gamma_[idx] = gamma_g_[idx].value;
                } else {
                    sdf_[idx] = marginal_sdf(f, sites_[s], p);
                    gamma_[idx] = coherence_gamma(f, sites_[s], p);
                }
                // full-circle mean of S: interior nodes appear twice
                const bool self_mirrored = (j == 0) || (2 * j == n_fft_);
                variance_[s] += (self_mirrored ? 1.0 : 2.0) * sdf_[idx];
            }
            variance_[s] /= n_fft_;
        }
    }

    int n_fft() const { return n_fft_; }
    double site_variance(int s) const { return variance_[s]; }

    /// Fills phi (and one buffer per grad param) over the full grid for site
    /// pair (a, b), a <= b.  Returns the full-circle mean of |values| for phi
    /// and each gradient grid, used to scale residual checks.
    std::vector<double> fill_pair(int a, int b, std::span<const Param> grad_params,
                                  std::span<std::vector<cplx>> bufs) const {
        const int hlen = half_ + 1;
        const double xa = sites_[a];
        const double xb = sites_[b];
        const double dx = xa - xb;
        const double dist = std::abs(dx);
        const double nu_bar = 0.5 * (nu_s_[a] + nu_s_[b]);
        const int n_grad = static_cast<int>(grad_params.size());

        std::vector<ParamSlots> slots(n_grad);
        for (int g = 0; g < n_grad; ++g) slots[g] = slots_for(grad_params[g]);

        std::vector<double> abs_sums(1 + n_grad, 0.0);
        auto& phi = bufs[0];

        for (int j = 0; j <= half_; ++j) {
            const std::size_t ia = static_cast<std::size_t>(a) * hlen + j;
            const std::size_t ib = static_cast<std::size_t>(b) * hlen + j;
            const double s = sin_pif_[j];
            const bool self_mirrored = (j == 0) || (2 * j == n_fft_);
            const double weight = self_mirrored ? 1.0 : 2.0;

            const double sa = sdf_[ia];
            const double sb = sdf_[ib];
            const double amp = std::sqrt(sa * sb);

            cplx ph(1.0, 0.0);
            CoherenceEval coh{};
            coh.value = 1.0;
            if (a != b) {
                if (with_grads_) {
                    coh = coherence_from_gammas(gamma_g_[ia], gamma_g_[ib], dist, nu_bar);
                } else {
                    const double gx = gamma_[ia];
                    const double gxp = gamma_[ib];
                    const double gbar = std::sqrt(0.5 * (gx + gxp));
                    coh.value = std::pow(gx * gxp, 0.25) / gbar *
                                matern_correlation(dist / gbar, nu_bar);
                }
                const double phase = params_.alpha * s * dx;
                ph = cplx(std::cos(phase), std::sin(phase));
            }

            // endpoint averaging at the Nyquist node keeps the real part only,
            // but parameter derivatives need the full complex value underneath
            const cplx full_value = amp * coh.value * ph;
            cplx value = full_value;
            if (2 * j == n_fft_) value = cplx(value.real(), 0.0);
            if (!std::isfinite(value.real()) || !std::isfinite(value.imag())) {
                std::ostringstream msg;
                msg << "non-finite cross-spectrum at f=" << (static_cast<double>(j) / n_fft_)
                    << " for sites (" << xa << ", " << xb << ")";
                throw numeric_error(msg.str());
            }
            phi[j] = value;
            if (j > 0 && 2 * j != n_fft_) phi[n_fft_ - j] = std::conj(value);
            abs_sums[0] += weight * std::abs(value);

            for (int g = 0; g < n_grad; ++g) {
                const ParamSlots& sl = slots[g];
                double damp = 0.0;
                if (sl.sdf >= 0) {
                    const double dsa = sdf_g_[ia].d[sl.sdf];
                    const double dsb = sdf_g_[ib].d[sl.sdf];
                    damp += (dsa * sb + sa * dsb) / (2.0 * amp) * coh.value;
                }
                if (sl.gamma >= 0) damp += amp * coh.d[sl.gamma];
                cplx dvalue = damp * ph;
                if (sl.is_alpha) dvalue += full_value * cplx(0.0, s * dx);
                if (2 * j == n_fft_) dvalue = cplx(dvalue.real(), 0.0);
                if (!std::isfinite(dvalue.real()) || !std::isfinite(dvalue.imag())) {
                    std::ostringstream msg;
                    msg << "non-finite cross-spectrum derivative (" << param_name(grad_params[g])
                        << ") at f=" << (static_cast<double>(j) / n_fft_) << " for sites ("
                        << xa << ", " << xb << ")";
                    throw numeric_error(msg.str());
                }
                bufs[1 + g][j] = dvalue;
                if (j > 0 && 2 * j != n_fft_) bufs[1 + g][n_fft_ - j] = std::conj(dvalue);
                abs_sums[1 + g] += weight * std::abs(dvalue);
            }
        }
        for (double& v : abs_sums) v /= n_fft_;
        return abs_sums;
    }

private:
    std::vector<double> sites_;
    ModelParams params_;
    int n_fft_;
    int half_;
    bool with_grads_;
    std::vector<double> sin_pif_;
    std::vector<double> nu_s_;
    std::vector<double> variance_;
    std::vector<double> sdf_;
    std::vector<double> gamma_;
    std::vector<SdfEval> sdf_g_;
    std::vector<GammaEval> gamma_g_;
};

// Reads lags h = -(L-1)..L-1 out of an unnormalized inverse transform and
// enforces the imaginary-residual bound.
void extract_lags(const std::vector<cplx>& work, int n_fft, int n_lags, double tol_scale,
                  const char* what, double* out) {
    const double tol = 1e-10 * tol_scale + 1e-300;
    double max_imag = 0.0;
    for (int h = -(n_lags - 1); h <= n_lags - 1; ++h) {
        const int idx = h >= 0 ? h : n_fft + h;
        const cplx v = work[idx] / static_cast<double>(n_fft);
        max_imag = std::max(max_imag, std::abs(v.imag()));
        out[h + n_lags - 1] = v.real();
    }
    if (max_imag > tol) {
        std::ostringstream msg;
        msg << "imaginary residual " << max_imag << " exceeds tolerance " << tol << " in "
            << what;
        throw numeric_error(msg.str());
    }
}

void check_build_args(std::span<const double> sites, const FrequencyGrid& grid, int n_lags) {
    if (sites.empty()) throw config_error("site list must be non-empty");
    for (std::size_t i = 1; i < sites.size(); ++i) {
        if (!(sites[i] > sites[i - 1])) {
            throw config_error("sites must be strictly increasing");
        }
    }
    if (n_lags < 1) throw config_error("n_lags must be >= 1");
    if (n_lags > grid.n_fft / grid.pad_factor) {
        std::ostringstream msg;
        msg << "n_lags=" << n_lags << " exceeds the wrap-around guard n_fft/pad_factor="
            << grid.n_fft / grid.pad_factor;
        throw config_error(msg.str());
    }
}

}  // namespace

std::span<const Param> spectrum_params() { return kSpectrumParams; }

std::size_t KernelTable::pair_index(int a, int b) const {
    const std::size_t n = sites_.size();
    return static_cast<std::size_t>(a) * n - static_cast<std::size_t>(a) * (a - 1) / 2 +
           (b - a);
}

void KernelTable::check_lookup(int a, int b, long lag) const {
    if (a < 0 || b < 0 || a >= n_sites() || b >= n_sites()) {
        throw assembly_error("site index out of range in kernel table lookup");
    }
    if (std::labs(lag) >= n_lags_) {
        std::ostringstream msg;
        msg << "lag " << lag << " not covered by kernel table (n_lags=" << n_lags_ << ")";
        throw assembly_error(msg.str());
    }
}

double KernelTable::value(int site_a, int site_b, long lag) const {
    check_lookup(site_a, site_b, lag);
    if (site_a > site_b) {
        std::swap(site_a, site_b);
        lag = -lag;
    }
    return values_[pair_index(site_a, site_b) * seq_len_ + (lag + n_lags_ - 1)];
}

double KernelTable::grad(int site_a, int site_b, long lag, int grad_index) const {
    check_lookup(site_a, site_b, lag);
    if (grad_index < 0 || grad_index >= static_cast<int>(grad_params_.size())) {
        throw assembly_error("gradient index out of range in kernel table lookup");
    }
    if (site_a > site_b) {
        std::swap(site_a, site_b);
        lag = -lag;
    }
    const std::size_t base =
        (pair_index(site_a, site_b) * grad_params_.size() + grad_index) * seq_len_;
    return grads_[base + (lag + n_lags_ - 1)];
}

KernelTable build_kernel_table(std::span<const double> sites, const ModelParams& p,
                               const FrequencyGrid& grid, int n_lags,
                               std::span<const Param> grad_params) {
    check_build_args(sites, grid, n_lags);
    p.validate();

    KernelTable table;
    table.sites_.assign(sites.begin(), sites.end());
    table.n_lags_ = n_lags;
    table.seq_len_ = 2 * n_lags - 1;
    table.grad_params_.assign(grad_params.begin(), grad_params.end());

    const int ns = static_cast<int>(sites.size());
    const int n_pairs = ns * (ns + 1) / 2;
    const int n_grad = static_cast<int>(grad_params.size());
    table.values_.assign(static_cast<std::size_t>(n_pairs) * table.seq_len_, 0.0);
    table.grads_.assign(static_cast<std::size_t>(n_pairs) * n_grad * table.seq_len_, 0.0);

    // Derivative grids exist only for parameters the spectrum depends on;
    // the rest keep their zero fill.
    std::vector<Param> active;
    std::vector<int> active_pos;
    for (int g = 0; g < n_grad; ++g) {
        if (is_spectrum_param(grad_params[g])) {
            active.push_back(grad_params[g]);
            active_pos.push_back(g);
        }
    }

    const SpectrumTables tables(sites, p, grid, !active.empty());

    std::vector<std::pair<int, int>> pairs;
    pairs.reserve(n_pairs);
    for (int a = 0; a < ns; ++a) {
        for (int b = a; b < ns; ++b) pairs.emplace_back(a, b);
    }

    std::exception_ptr failure = nullptr;

#pragma omp parallel
    {
        Fft fft(grid.n_fft);
        std::vector<std::vector<cplx>> bufs(1 + active.size());
        for (auto& b : bufs) b.assign(grid.n_fft, cplx(0.0, 0.0));
        std::vector<cplx> work(grid.n_fft);

#pragma omp for schedule(dynamic)
        for (int pi = 0; pi < n_pairs; ++pi) {
            if (failure) continue;
            try {
                const auto [a, b] = pairs[pi];
                const auto scales = tables.fill_pair(a, b, active, bufs);
                const std::size_t vbase = static_cast<std::size_t>(pi) * table.seq_len_;
                fft.backward(bufs[0], work);
                extract_lags(work, grid.n_fft, n_lags, tables.site_variance(a),
                             "kernel sequence", &table.values_[vbase]);
                for (std::size_t ai = 0; ai < active.size(); ++ai) {
                    fft.backward(bufs[1 + ai], work);
                    const std::size_t gbase =
                        (static_cast<std::size_t>(pi) * n_grad + active_pos[ai]) *
                        table.seq_len_;
                    extract_lags(work, grid.n_fft, n_lags, scales[1 + ai],
                                 "kernel gradient sequence", &table.grads_[gbase]);
                }
            } catch (...) {
#pragma omp critical
                if (!failure) failure = std::current_exception();
            }
        }
    }
    if (failure) std::rethrow_exception(failure);
    return table;
}

LagSequence kernel_sequence(double x, double xp, const ModelParams& p,
                            const FrequencyGrid& grid, int n_lags) {
    const double lo = std::min(x, xp);
    const double hi = std::max(x, xp);
    std::vector<double> sites = (lo == hi) ? std::vector<double>{lo}
                                           : std::vector<double>{lo, hi};
    const KernelTable table = build_kernel_table(sites, p, grid, n_lags);
    const int ix = (x == lo) ? 0 : static_cast<int>(sites.size()) - 1;
    const int ixp = (xp == lo) ? 0 : static_cast<int>(sites.size()) - 1;
    LagSequence seq;
    seq.n_lags = n_lags;
    seq.values.resize(2 * n_lags - 1);
    for (long h = -(n_lags - 1); h <= n_lags - 1; ++h) {
        seq.values[h + n_lags - 1] = table.value(ix, ixp, h);
    }
    return seq;
}

std::vector<LagSequence> kernel_sequence_grad(double x, double xp, const ModelParams& p,
                                              const FrequencyGrid& grid, int n_lags,
                                              std::span<const Param> free_params) {
    const double lo = std::min(x, xp);
    const double hi = std::max(x, xp);
    std::vector<double> sites = (lo == hi) ? std::vector<double>{lo}
                                           : std::vector<double>{lo, hi};
    const KernelTable table = build_kernel_table(sites, p, grid, n_lags, free_params);
    const int ix = (x == lo) ? 0 : static_cast<int>(sites.size()) - 1;
    const int ixp = (xp == lo) ? 0 : static_cast<int>(sites.size()) - 1;
    std::vector<LagSequence> out(free_params.size());
    for (std::size_t g = 0; g < free_params.size(); ++g) {
        out[g].n_lags = n_lags;
        out[g].values.resize(2 * n_lags - 1);
        for (long h = -(n_lags - 1); h <= n_lags - 1; ++h) {
            out[g].values[h + n_lags - 1] = table.grad(ix, ixp, h, static_cast<int>(g));
        }
    }
    return out;
}

}  // namespace halfspec
