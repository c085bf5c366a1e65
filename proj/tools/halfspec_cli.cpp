// Command-line front end: fit | simulate | diagnose | kernel-dump.
//
// Exit codes: 0 success (fit: converged), 1 fit did not converge,
// 2 input/config error, 3 numerical failure.

#include <CLI11.hpp>
#include <Eigen/Dense>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <string>

#include "halfspec/config.hpp"
#include "halfspec/csv.hpp"
#include "halfspec/diagnostics.hpp"
#include "halfspec/errors.hpp"
#include "halfspec/fit.hpp"
#include "halfspec/likelihood.hpp"
#include "halfspec/simulation.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CommonArgs {
    std::string data_path;
    std::string config_path;
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed_override;
    int threads = 0;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool data_required) {
    auto* data = cmd->add_option("--data", args.data_path,
                                 "time-height CSV (header: time,<alt_1>,<alt_2>,...)");
    if (data_required) data->required();
    cmd->add_option("--config", args.config_path, "JSON configuration file")->required();
    cmd->add_option("--out-dir", args.out_dir, "output directory (default: .)");
    cmd->add_option("--seed", args.seed_override, "override the config seed");
    cmd->add_option("--threads", args.threads,
                    "worker threads for kernel evaluation (0 = library default)");
}

halfspec::ConfigFile load_config(const CommonArgs& args) {
    auto cfg = halfspec::parse_config_file(args.config_path);
    if (args.seed_override) cfg.seed = *args.seed_override;
#ifdef _OPENMP
    if (args.threads > 0) omp_set_num_threads(args.threads);
#endif
    return cfg;
}

json params_to_json(const halfspec::ModelParams& p) {
    json j;
    for (halfspec::Param prm : halfspec::kAllParams) {
        j[std::string(halfspec::param_name(prm))] = p.get(prm);
    }
    return j;
}

void write_trace_csv(const fs::path& path, const std::vector<halfspec::IterationRecord>& trace) {
    std::ofstream out(path);
    out << "# halfspec " << halfspec::kVersion << " fit trace\n";
    out << "iteration,loglik,step_norm,radius,rho,accepted\n";
    out.precision(17);
    for (const auto& r : trace) {
        out << r.iteration << "," << r.objective << "," << r.step_norm << "," << r.radius
            << "," << r.rho << "," << (r.accepted ? 1 : 0) << "\n";
    }
}

int run_fit(const CommonArgs& args) {
    const auto cfg = load_config(args);
    const auto data = halfspec::read_data_file(args.data_path, cfg.time_delta);
    auto [layout, y] = halfspec::to_observations(data, cfg.sites);

    halfspec::ModelParams init = cfg.params;
    if (cfg.heuristic_init) {
        init = halfspec::heuristic_init(y, layout);
        // explicit values in the config still win over the heuristic
        if (cfg.any_param_given) {
            std::cerr << "note: 'init: heuristic' ignores values in 'params'\n";
        }
    }
    init.set_knots(static_cast<double>(layout.min_time()),
                   static_cast<double>(layout.max_time()));

    const auto grid = halfspec::make_frequency_grid(
        static_cast<int>(layout.time_span()), cfg.pad_factor);

    halfspec::FitOptions opts;
    opts.probe_count = cfg.probes;
    opts.seed = cfg.seed;
    opts.freeze = cfg.freeze;
    opts.trust_region.tolerance = cfg.tolerance;
    opts.trust_region.max_iterations = cfg.max_iterations;
    opts.trust_region.initial_radius = cfg.initial_radius;
    opts.trust_region.max_radius = cfg.max_radius;

    const auto result = halfspec::fit(y, layout, grid, init, opts);

    fs::create_directories(args.out_dir);
    json out;
    out["generator"] = std::string("halfspec ") + std::string(halfspec::kVersion);
    out["converged"] = result.converged;
    out["n_iterations"] = result.n_iterations;
    out["seed"] = result.seed;
    out["final_loglik"] = result.final_loglik;
    out["estimates"] = params_to_json(result.estimates);
    json se, fisher_names;
    for (std::size_t k = 0; k < result.free_params.size(); ++k) {
        se[std::string(halfspec::param_name(result.free_params[k]))] =
            result.std_errors(static_cast<Eigen::Index>(k));
        fisher_names.push_back(std::string(halfspec::param_name(result.free_params[k])));
    }
    out["std_errors"] = se;
    out["fisher_params"] = fisher_names;
    json fisher = json::array();
    for (Eigen::Index i = 0; i < result.fisher.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < result.fisher.cols(); ++j) row.push_back(result.fisher(i, j));
        fisher.push_back(row);
    }
    out["fisher"] = fisher;
    out["se_conditioning_warning"] = result.se_conditioning_warning;
    out["se_notes"] = result.se_notes;

    std::ofstream json_out(fs::path(args.out_dir) / "fit_result.json");
    json_out << out.dump(2) << "\n";
    write_trace_csv(fs::path(args.out_dir) / "fit_trace.csv", result.trace);

    std::cout << (result.converged ? "converged" : "did not converge") << " after "
              << result.n_iterations << " iterations, loglik " << result.final_loglik << "\n";
    return result.converged ? 0 : 1;
}

int run_simulate(const CommonArgs& args) {
    const auto cfg = load_config(args);
    halfspec::ObservationLayout layout;
    if (!args.data_path.empty()) {
        const auto data = halfspec::read_data_file(args.data_path, cfg.time_delta);
        layout = halfspec::to_observations(data, cfg.sites).first;
    } else {
        if (!cfg.sites || !cfg.n_time) {
            throw halfspec::config_error(
                "simulate needs --data or both 'sites' and 'n_time' in the config");
        }
        layout = halfspec::ObservationLayout::full_lattice(*cfg.sites, *cfg.n_time);
    }
    halfspec::ModelParams p = cfg.params;
    p.set_knots(static_cast<double>(layout.min_time()),
                static_cast<double>(layout.max_time()));
    const auto grid = halfspec::make_frequency_grid(
        static_cast<int>(layout.time_span()), cfg.pad_factor);

    const auto reps = halfspec::sample(p, layout, grid, cfg.seed, cfg.n_reps);
    fs::create_directories(args.out_dir);
    for (std::size_t r = 0; r < reps.size(); ++r) {
        const auto df = halfspec::sample_to_data(layout, reps[r]);
        char name[64];
        std::snprintf(name, sizeof(name), "sim_%03zu.csv", r);
        halfspec::write_data_file(fs::path(args.out_dir) / name, df,
                                  "simulate seed=" + std::to_string(cfg.seed) +
                                      " rep=" + std::to_string(r));
    }
    std::cout << "wrote " << reps.size() << " replicate(s) to " << args.out_dir << "\n";
    return 0;
}

int run_diagnose(const CommonArgs& args) {
    const auto cfg = load_config(args);
    const auto data = halfspec::read_data_file(args.data_path, cfg.time_delta);
    auto [layout, y] = halfspec::to_observations(data, cfg.sites);
    halfspec::ModelParams p = cfg.params;
    p.set_knots(static_cast<double>(layout.min_time()),
                static_cast<double>(layout.max_time()));

    fs::create_directories(args.out_dir);
    const auto& sites = layout.site_altitudes;

    // per-gate series on the time lattice, NaN in gaps
    const std::int64_t t_lo = layout.min_time();
    const std::int64_t span = layout.time_span();
    std::vector<std::vector<double>> series(
        sites.size(), std::vector<double>(span, std::numeric_limits<double>::quiet_NaN()));
    for (std::size_t i = 0; i < layout.size(); ++i) {
        const auto& e = layout.entries[i];
        series[e.site][e.time - t_lo] = y(static_cast<Eigen::Index>(i));
    }

    {
        std::ofstream out(fs::path(args.out_dir) / "spectra_empirical.csv");
        out << "# halfspec " << halfspec::kVersion << " multitaper spectra\n";
        std::vector<halfspec::Periodogram> specs;
        for (std::size_t s = 0; s < sites.size(); ++s) {
            specs.push_back(halfspec::segmented_periodogram(series[s]));
        }
        out << "frequency";
        for (double a : sites) out << ",gate_" << a;
        out << "\n";
        out.precision(12);
        for (std::size_t j = 0; j < specs[0].freq.size(); ++j) {
            out << specs[0].freq[j];
            for (const auto& sp : specs) out << "," << (j < sp.power.size() ? sp.power[j] : 0.0);
            out << "\n";
        }
    }

    std::vector<std::pair<int, int>> pairs = cfg.pairs;
    if (pairs.empty() && sites.size() >= 2) pairs.push_back({0, static_cast<int>(sites.size()) - 1});

    {
        std::ofstream out(fs::path(args.out_dir) / "coherence_empirical.csv");
        out << "# halfspec " << halfspec::kVersion << " multitaper coherence ("
            << cfg.n_tapers << " sine tapers)\n";
        std::vector<halfspec::CoherenceEstimate> cohs;
        for (const auto& [a, b] : pairs) {
            cohs.push_back(halfspec::segmented_coherence(series[a], series[b], cfg.n_tapers));
        }
        out << "frequency";
        for (const auto& [a, b] : pairs) {
            out << ",re_" << sites[a] << "_" << sites[b] << ",im_" << sites[a] << "_" << sites[b];
        }
        out << "\n";
        out.precision(12);
        for (std::size_t j = 0; j < cohs[0].freq.size(); ++j) {
            out << cohs[0].freq[j];
            for (const auto& c : cohs) {
                out << "," << c.coherence[j].real() << "," << c.coherence[j].imag();
            }
            out << "\n";
        }
    }

    const auto grid =
        halfspec::make_frequency_grid(static_cast<int>(span), cfg.pad_factor);
    const auto curves = halfspec::model_curves(p, sites, pairs, grid);
    {
        std::ofstream out(fs::path(args.out_dir) / "spectra_model.csv");
        out << "# halfspec " << halfspec::kVersion
            << " model marginal spectra with nugget floor (lambda scale not applied)\n";
        out << "frequency";
        for (double a : curves.sites) out << ",gate_" << a;
        out << "\n";
        out.precision(12);
        for (std::size_t j = 0; j < curves.freq.size(); ++j) {
            out << curves.freq[j];
            for (const auto& sp : curves.spectra) out << "," << sp[j];
            out << "\n";
        }
    }
    {
        std::ofstream out(fs::path(args.out_dir) / "coherence_model.csv");
        out << "# halfspec " << halfspec::kVersion << " model complex coherence\n";
        out << "frequency";
        for (const auto& [a, b] : curves.pairs) out << ",re_" << a << "_" << b << ",im_" << a << "_" << b;
        out << "\n";
        out.precision(12);
        for (std::size_t j = 0; j < curves.freq.size(); ++j) {
            out << curves.freq[j];
            for (const auto& c : curves.coherences) {
                out << "," << c[j].real() << "," << c[j].imag();
            }
            out << "\n";
        }
    }
    std::cout << "wrote diagnostics to " << args.out_dir << "\n";
    return 0;
}

int run_kernel_dump(const CommonArgs& args) {
    const auto cfg = load_config(args);
    std::vector<double> sites;
    std::int64_t n_time = 0;
    if (!args.data_path.empty()) {
        const auto data = halfspec::read_data_file(args.data_path, cfg.time_delta);
        const auto layout = halfspec::to_observations(data, cfg.sites).first;
        sites = layout.site_altitudes;
        n_time = layout.time_span();
    } else {
        if (!cfg.sites || !cfg.n_time) {
            throw halfspec::config_error(
                "kernel-dump needs --data or both 'sites' and 'n_time' in the config");
        }
        sites = *cfg.sites;
        n_time = *cfg.n_time;
    }
    halfspec::ModelParams p = cfg.params;
    p.set_knots(0.0, static_cast<double>(n_time > 1 ? n_time - 1 : 1));
    const auto grid = halfspec::make_frequency_grid(static_cast<int>(n_time), cfg.pad_factor);
    const int n_lags = cfg.n_lags > 0 ? cfg.n_lags : static_cast<int>(n_time);

    std::vector<halfspec::Param> grad_params;
    for (const auto& name : cfg.grad_params) grad_params.push_back(halfspec::param_from_name(name));

    const auto table = halfspec::build_kernel_table(sites, p, grid, n_lags, grad_params);
    fs::create_directories(args.out_dir);
    halfspec::write_kernel_table_csv(fs::path(args.out_dir) / "kernel_table.csv", table,
                                     "kernel-dump pad_factor=" + std::to_string(cfg.pad_factor));
    std::cout << "wrote kernel table (" << sites.size() << " sites, " << n_lags
              << " lags) to " << args.out_dir << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "halfspec: nonstationary space-time Gaussian process modeling for regularly\n"
        "sampled time-height data (spectral-domain kernels, exact maximum likelihood,\n"
        "simulation, spectral diagnostics).\n\n"
        "Config file keys and defaults:\n"
        "  params          object of parameter values (see README for the full list)\n"
        "  init            \"explicit\" (default) or \"heuristic\"\n"
        "  freeze          parameter names held fixed while fitting (default: none)\n"
        "  sites           altitude subset to read from --data / lattice for simulate\n"
        "  pad_factor      FFT padding multiple (default 7)\n"
        "  time_delta      sampling interval for real-timestamp data (default: integer indices)\n"
        "  probes          stochastic estimator probe count (default 72)\n"
        "  seed            RNG seed (default 0)\n"
        "  tolerance       relative objective change tolerance (default 1e-6)\n"
        "  max_iterations  trust region iteration cap (default 200)\n"
        "  initial_radius / max_radius   trust region radii (default 1 / 100)\n"
        "  n_lags          kernel-dump lag count (default: layout time span)\n"
        "  n_reps          simulate replicate count (default 1)\n"
        "  n_tapers        sine tapers for coherence estimates (default 5)\n"
        "  n_time          lattice length when no --data is given\n"
        "  pairs           [[i,j],...] site-index pairs for diagnostics\n"
        "  grad_params     kernel-dump derivative columns (default: none)\n"
        "  knot_decay      scale knot weight decay in samples (default 50)\n"
        "  nu_s_below / nu_s_above   coherence smoothnesses (default 0.5 / 0.75)"};
    app.require_subcommand(1);

    CommonArgs fit_args, sim_args, diag_args, dump_args;
    auto* cmd_fit = app.add_subcommand("fit", "maximum likelihood estimation");
    add_common(cmd_fit, fit_args, true);
    auto* cmd_sim = app.add_subcommand("simulate", "draw exact Gaussian samples");
    add_common(cmd_sim, sim_args, false);
    auto* cmd_diag = app.add_subcommand("diagnose", "spectral diagnostics CSVs");
    add_common(cmd_diag, diag_args, true);
    auto* cmd_dump = app.add_subcommand("kernel-dump", "serialize covariance-at-lag tables");
    add_common(cmd_dump, dump_args, false);

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_fit->parsed()) return run_fit(fit_args);
        if (cmd_sim->parsed()) return run_simulate(sim_args);
        if (cmd_diag->parsed()) return run_diagnose(diag_args);
        if (cmd_dump->parsed()) return run_kernel_dump(dump_args);
    } catch (const halfspec::parse_error& e) {
        std::cerr << "input error: " << e.what();
        if (e.line > 0) std::cerr << " (line " << e.line << ", column " << e.column << ")";
        std::cerr << "\n";
        return 2;
    } catch (const halfspec::config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const halfspec::indefinite_matrix_error& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const halfspec::numeric_error& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
