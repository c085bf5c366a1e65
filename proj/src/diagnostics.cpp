#include "halfspec/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "halfspec/errors.hpp"
#include "halfspec/fft.hpp"
#include "halfspec/spectral_model.hpp"

namespace halfspec {

namespace {

using cplx = std::complex<double>;

std::vector<cplx> dft(std::span<const double> x) {
    const int n = static_cast<int>(x.size());
    std::vector<cplx> in(n), out(n);
    for (int i = 0; i < n; ++i) in[i] = cplx(x[i], 0.0);
    Fft fft(n);
    fft.forward(in, out);
    return out;
}

void check_no_gaps(std::span<const double> series, const char* what) {
    if (series.size() < 2) throw config_error(std::string(what) + ": need length >= 2");
    for (double v : series) {
        if (std::isnan(v)) {
            throw config_error(std::string(what) +
                               ": missing values inside a segment; split on gaps first");
        }
    }
}

// complete (gap-free) runs of a series with NaN gaps
std::vector<std::pair<std::size_t, std::size_t>> segments_of(std::span<const double> x) {
    std::vector<std::pair<std::size_t, std::size_t>> segs;
    std::size_t start = 0;
    bool in_run = false;
    for (std::size_t i = 0; i <= x.size(); ++i) {
        const bool ok = i < x.size() && !std::isnan(x[i]);
        if (ok && !in_run) {
            start = i;
            in_run = true;
        } else if (!ok && in_run) {
            if (i - start >= 2) segs.emplace_back(start, i);
            in_run = false;
        }
    }
    return segs;
}

double interp_at(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
    if (x <= xs.front()) return ys.front();
    if (x >= xs.back()) return ys.back();
    const auto it = std::upper_bound(xs.begin(), xs.end(), x);
    const std::size_t hi = static_cast<std::size_t>(it - xs.begin());
    const std::size_t lo = hi - 1;
    const double t = (x - xs[lo]) / (xs[hi] - xs[lo]);
    return (1.0 - t) * ys[lo] + t * ys[hi];
}

}  // namespace

Periodogram periodogram(std::span<const double> series) {
    check_no_gaps(series, "periodogram");
    const int n = static_cast<int>(series.size());
    const auto spec = dft(series);
    Periodogram out;
    for (int j = 0; 2 * j <= n; ++j) {
        out.freq.push_back(static_cast<double>(j) / n);
        out.power.push_back(std::norm(spec[j]) / n);
    }
    return out;
}

std::vector<std::vector<double>> sine_tapers(int n, int n_tapers) {
    if (n_tapers < 1 || n_tapers >= n) {
        throw config_error("need 1 <= n_tapers < series length");
    }
    std::vector<std::vector<double>> tapers(n_tapers, std::vector<double>(n));
    const double norm = std::sqrt(2.0 / (n + 1.0));
    for (int k = 1; k <= n_tapers; ++k) {
        for (int t = 0; t < n; ++t) {
            tapers[k - 1][t] = norm * std::sin(std::numbers::pi * k * (t + 1.0) / (n + 1.0));
        }
    }
    return tapers;
}

CoherenceEstimate multitaper_coherence(std::span<const double> a, std::span<const double> b,
                                       int n_tapers) {
    if (a.size() != b.size()) throw config_error("coherence inputs must have equal length");
    check_no_gaps(a, "multitaper_coherence");
    check_no_gaps(b, "multitaper_coherence");
    const int n = static_cast<int>(a.size());
    const auto tapers = sine_tapers(n, n_tapers);

    const int n_freq = n / 2 + 1;
    std::vector<double> s_aa(n_freq, 0.0), s_bb(n_freq, 0.0);
    std::vector<cplx> s_ab(n_freq, cplx(0.0, 0.0));
    std::vector<double> ta(n), tb(n);
    for (const auto& v : tapers) {
        for (int t = 0; t < n; ++t) {
            ta[t] = v[t] * a[t];
            tb[t] = v[t] * b[t];
        }
        const auto ja = dft(ta);
        const auto jb = dft(tb);
        for (int j = 0; j < n_freq; ++j) {
            s_aa[j] += std::norm(ja[j]);
            s_bb[j] += std::norm(jb[j]);
            s_ab[j] += ja[j] * std::conj(jb[j]);
        }
    }

    CoherenceEstimate out;
    out.freq.resize(n_freq);
    out.coherence.resize(n_freq);
    out.defined.resize(n_freq);
    for (int j = 0; j < n_freq; ++j) {
        out.freq[j] = static_cast<double>(j) / n;
        const double denom = s_aa[j] * s_bb[j];
        if (denom > 0.0) {
            out.coherence[j] = s_ab[j] / std::sqrt(denom);
            out.defined[j] = true;
        } else {
            out.coherence[j] = cplx(0.0, 0.0);
            out.defined[j] = false;
        }
    }
    return out;
}

Periodogram multitaper_spectrum(std::span<const double> series, int n_tapers) {
    check_no_gaps(series, "multitaper_spectrum");
    const int n = static_cast<int>(series.size());
    const auto tapers = sine_tapers(n, n_tapers);
    const int n_freq = n / 2 + 1;
    Periodogram out;
    out.freq.resize(n_freq);
    out.power.assign(n_freq, 0.0);
    std::vector<double> tx(n);
    for (const auto& v : tapers) {
        for (int t = 0; t < n; ++t) tx[t] = v[t] * series[t];
        const auto j = dft(tx);
        for (int f = 0; f < n_freq; ++f) out.power[f] += std::norm(j[f]);
    }
    for (int f = 0; f < n_freq; ++f) {
        out.freq[f] = static_cast<double>(f) / n;
        out.power[f] /= n_tapers;
    }
    return out;
}

Periodogram segmented_periodogram(std::span<const double> series_with_gaps) {
    const auto segs = segments_of(series_with_gaps);
    if (segs.empty()) throw config_error("no complete segments in series");
    std::size_t longest = 0;
    for (const auto& s : segs) longest = std::max(longest, s.second - s.first);

    Periodogram base;
    std::vector<double> weights;
    std::vector<Periodogram> parts;
    for (const auto& [lo, hi] : segs) {
        parts.push_back(periodogram(series_with_gaps.subspan(lo, hi - lo)));
        weights.push_back(static_cast<double>(hi - lo));
        if (hi - lo == longest) base.freq = parts.back().freq;
    }
    base.power.assign(base.freq.size(), 0.0);
    double total = 0.0;
    for (double w : weights) total += w;
    for (std::size_t s = 0; s < parts.size(); ++s) {
        for (std::size_t j = 0; j < base.freq.size(); ++j) {
            base.power[j] +=
                weights[s] / total * interp_at(parts[s].freq, parts[s].power, base.freq[j]);
        }
    }
    return base;
}

CoherenceEstimate segmented_coherence(std::span<const double> a, std::span<const double> b,
                                      int n_tapers) {
    if (a.size() != b.size()) throw config_error("coherence inputs must have equal length");
    // joint segments: both series must be complete
    std::vector<double> joint(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        joint[i] = (std::isnan(a[i]) || std::isnan(b[i])) ? std::nan("") : 0.0;
    }
    const auto segs = segments_of(joint);
    if (segs.empty()) throw config_error("no complete segments in series pair");
    std::size_t longest = 0;
    for (const auto& s : segs) longest = std::max(longest, s.second - s.first);

    CoherenceEstimate out;
    std::vector<CoherenceEstimate> parts;
    std::vector<double> weights;
    for (const auto& [lo, hi] : segs) {
        if (static_cast<int>(hi - lo) <= n_tapers) continue;
        parts.push_back(
            multitaper_coherence(a.subspan(lo, hi - lo), b.subspan(lo, hi - lo), n_tapers));
        weights.push_back(static_cast<double>(hi - lo));
        if (hi - lo == longest) out.freq = parts.back().freq;
    }
    if (parts.empty()) throw config_error("all segments shorter than the taper count");

    out.coherence.assign(out.freq.size(), cplx(0.0, 0.0));
    out.defined.assign(out.freq.size(), true);
    double total = 0.0;
    for (double w : weights) total += w;
    for (std::size_t s = 0; s < parts.size(); ++s) {
        std::vector<double> re(parts[s].freq.size()), im(parts[s].freq.size());
        for (std::size_t j = 0; j < parts[s].freq.size(); ++j) {
            re[j] = parts[s].coherence[j].real();
            im[j] = parts[s].coherence[j].imag();
        }
        for (std::size_t j = 0; j < out.freq.size(); ++j) {
            out.coherence[j] += weights[s] / total *
                                cplx(interp_at(parts[s].freq, re, out.freq[j]),
                                     interp_at(parts[s].freq, im, out.freq[j]));
        }
    }
    return out;
}

ModelCurves model_curves(const ModelParams& p, std::span<const double> sites,
                         std::span<const std::pair<int, int>> pair_indices,
                         const FrequencyGrid& grid) {
    p.validate();
    ModelCurves out;
    out.sites.assign(sites.begin(), sites.end());
    for (int j = 0; 2 * j <= grid.n_fft; ++j) out.freq.push_back(grid.freqs[j]);
    if (!out.freq.empty() && out.freq.back() < 0.0) out.freq.back() = 0.5;  // Nyquist

    const double floor = p.eta_st * p.eta_st + p.eta_t * p.eta_t;
    out.spectra.resize(sites.size());
    for (std::size_t s = 0; s < sites.size(); ++s) {
        out.spectra[s].reserve(out.freq.size());
        for (double f : out.freq) {
            out.spectra[s].push_back(marginal_sdf(f, sites[s], p) + floor);
        }
    }

    for (const auto& [ia, ib] : pair_indices) {
        if (ia < 0 || ib < 0 || ia >= static_cast<int>(sites.size()) ||
            ib >= static_cast<int>(sites.size())) {
            throw config_error("pair index out of range in model_curves");
        }
        const double xa = sites[ia];
        const double xb = sites[ib];
        out.pairs.emplace_back(xa, xb);
        std::vector<cplx> curve;
        curve.reserve(out.freq.size());
        for (double f : out.freq) {
            curve.push_back(coherence(f, xa, xb, p) * phase_factor(f, xa - xb, p.alpha));
        }
        out.coherences.push_back(std::move(curve));
    }
    return out;
}

}  // namespace halfspec
