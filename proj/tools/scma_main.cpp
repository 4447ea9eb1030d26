#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "scma/harness.hpp"
#include "scma/version.hpp"

namespace {

std::vector<double> parse_double_list(const std::string& s) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos < s.size()) {
        std::size_t next = s.find(',', pos);
        if (next == std::string::npos) next = s.size();
        out.push_back(std::stod(s.substr(pos, next - pos)));
        pos = next + 1;
    }
    return out;
}

std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    for (double v : parse_double_list(s)) out.push_back(static_cast<int>(v));
    return out;
}

scma::DmpaMode parse_mode(const std::string& s) {
    if (s == "auto") return scma::DmpaMode::automatic;
    if (s == "split" || s == "split-1d") return scma::DmpaMode::split_1d;
    if (s == "2d" || s == "complex-2d") return scma::DmpaMode::complex_2d;
    throw CLI::ValidationError("--mode", "expected auto, split or 2d");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"SCMA multiuser detection experiments (MPA / LLR / DMPA)"};
    app.set_version_flag("--version", std::string("scma ") + SCMA_VERSION);
    app.set_config("--config")->configurable(false);
    app.require_subcommand(1);

    // ---- bler ----
    auto* bler = app.add_subcommand("bler", "Monte Carlo block error rate sweep");
    int k = 4, m = 16, iters = 5, threads = 0;
    long blocks = 1000;
    double w = 0.05, nwid = 5.0;
    std::uint64_t seed = 1;
    std::string detector = "mpa", n0_list = "0.002,0.004,0.01,0.02,0.05,0.1,0.2";
    std::string codebook, out_path = "bler.csv", mode = "auto";
    bler->add_option("--k", k, "resource count K");
    bler->add_option("--m", m, "codebook size M");
    bler->add_option("--detector", detector, "mpa | llr | split-mpa | dmpa");
    bler->add_option("--n0", n0_list, "comma-separated N0 sweep");
    bler->add_option("--w", w, "sampling interval (dmpa)");
    bler->add_option("--nwid", nwid, "noise truncation half-width");
    bler->add_option("--iters", iters, "message passing iterations");
    bler->add_option("--blocks", blocks, "transmissions per N0 point");
    bler->add_option("--seed", seed, "master seed (also seeds the generated codebook)");
    bler->add_option("--codebook", codebook, "codebook file (default: generated)");
    bler->add_option("--mode", mode, "dmpa mode: auto | split | 2d");
    bler->add_option("--threads", threads, "worker threads (0 = hardware)");
    bler->add_option("--out", out_path, "output CSV path");

    // ---- timing ----
    auto* timing = app.add_subcommand("timing", "detection wall-clock benchmark");
    std::string df_list = "2,3,4,5", detectors_list = "split-mpa,dmpa";
    int t_m = 16, trials = 100;
    double t_w = 0.05;
    std::uint64_t t_seed = 1;
    std::string t_out = "timing.csv";
    timing->add_option("--df", df_list, "comma-separated resource degrees");
    timing->add_option("--m", t_m, "codebook size M");
    timing->add_option("--detectors", detectors_list, "comma-separated detector list");
    timing->add_option("--trials", trials, "detections per (detector, d_f)");
    timing->add_option("--w", t_w, "sampling interval (dmpa)");
    timing->add_option("--seed", t_seed, "codebook/input seed");
    timing->add_option("--out", t_out, "output CSV path");

    // ---- compare ----
    auto* compare = app.add_subcommand(
        "compare", "per-entry divergence between the grid update and the exhaustive oracle");
    int c_k = 4, c_m = 16, c_trials = 1000;
    double c_w = 0.05, c_n0 = 0.2, c_nwid = 5.0;
    std::uint64_t c_seed = 1;
    std::string c_out = "compare.csv";
    compare->add_option("--k", c_k, "resource count K");
    compare->add_option("--m", c_m, "codebook size M");
    compare->add_option("--w", c_w, "sampling interval");
    compare->add_option("--n0", c_n0, "noise power N0");
    compare->add_option("--nwid", c_nwid, "noise truncation half-width");
    compare->add_option("--trials", c_trials, "random resource updates");
    compare->add_option("--seed", c_seed, "master seed");
    compare->add_option("--out", c_out, "output CSV path");

    // ---- bounds ----
    auto* bounds = app.add_subcommand("bounds", "discretization error bound calculator");
    int b_df = 3;
    double b_w = 0.05, b_nwid = 5.0, b_sigma2 = 0.0, b_n0 = 0.0, b_target = 0.0;
    bounds->add_option("--df", b_df, "resource degree d_f");
    bounds->add_option("--w", b_w, "sampling interval");
    bounds->add_option("--nwid", b_nwid, "noise truncation half-width");
    auto* opt_sigma2 = bounds->add_option("--sigma2", b_sigma2, "real-field variance");
    auto* opt_n0 = bounds->add_option("--n0", b_n0, "complex noise power");
    auto* opt_target =
        bounds->add_option("--suggest-w", b_target, "invert the relative bound for w");
    opt_sigma2->excludes(opt_n0);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*bler) {
            scma::SimConfig cfg;
            cfg.num_resources = k;
            cfg.num_codewords = m;
            cfg.detector = scma::detector_from_name(detector);
            cfg.n0_sweep = parse_double_list(n0_list);
            cfg.step = w;
            cfg.n_wid = nwid;
            cfg.iterations = iters;
            cfg.blocks = blocks;
            cfg.seed = seed;
            cfg.codebook_path = codebook;
            cfg.dmpa_mode = parse_mode(mode);
            cfg.threads = threads;
            scma::DetectionDiagnostics diag;
            const auto records = scma::run_bler(cfg, &diag);
            scma::write_bler_csv(out_path, records, cfg);
            for (const auto& r : records)
                std::printf("%-9s N0=%-8g bler=%.6g  [%.6g, %.6g]  (%ld/%ld)\n",
                            r.detector.c_str(), r.n0, r.bler, r.ci_lo, r.ci_hi,
                            r.block_errors, r.blocks);
            if (diag.underflow_replacements || diag.off_grid_evaluations)
                std::printf("diagnostics: %ld underflow replacements, %ld off-grid lookups\n",
                            diag.underflow_replacements, diag.off_grid_evaluations);
            std::printf("wrote %s\n", out_path.c_str());
        } else if (*timing) {
            scma::SimConfig cfg;
            cfg.num_codewords = t_m;
            cfg.step = t_w;
            cfg.seed = t_seed;
            std::vector<scma::Detector> dets;
            std::size_t pos = 0;
            while (pos < detectors_list.size()) {
                std::size_t next = detectors_list.find(',', pos);
                if (next == std::string::npos) next = detectors_list.size();
                dets.push_back(
                    scma::detector_from_name(detectors_list.substr(pos, next - pos)));
                pos = next + 1;
            }
            const auto records =
                scma::run_timing(cfg, parse_int_list(df_list), dets, trials);
            scma::write_timing_csv(t_out, records, cfg);
            for (const auto& r : records)
                std::printf("%-9s d_f=%d  %.6f s  (sd %.6f, %d trials)\n", r.detector.c_str(),
                            r.resource_degree, r.mean_seconds, r.stddev_seconds, r.trials);
            std::printf("wrote %s\n", t_out.c_str());
        } else if (*compare) {
            scma::SimConfig cfg;
            cfg.num_resources = c_k;
            cfg.num_codewords = c_m;
            cfg.step = c_w;
            cfg.n_wid = c_nwid;
            cfg.n0_sweep = {c_n0};
            cfg.blocks = c_trials;
            cfg.seed = c_seed;
            const auto rec = scma::run_divergence(cfg);
            scma::write_divergence_csv(c_out, rec, cfg);
            std::printf("entries=%ld excluded=%ld\n", rec.entries, rec.excluded);
            std::printf("abs divergence: max=%.6g mean=%.6g  bound=%.6g\n", rec.max_abs,
                        rec.mean_abs, rec.abs_bound);
            std::printf("rel divergence: max=%.6g mean=%.6g  bound=%.6g\n", rec.max_rel,
                        rec.mean_rel, rec.rel_bound);
            std::printf("wrote %s\n", c_out.c_str());
        } else if (*bounds) {
            if (opt_sigma2->count() == 0 && opt_n0->count() == 0)
                throw std::invalid_argument("bounds: pass --sigma2 or --n0");
            scma::BoundInputs in;
            in.resource_degree = b_df;
            in.step = b_w;
            in.n_wid = b_nwid;
            if (opt_sigma2->count()) {
                in.sigma2 = b_sigma2;
                std::printf("abs_error_bound:  %.10g\n", scma::abs_error_bound(in));
                std::printf("rel_error_bound:  %.10g\n", scma::rel_error_bound(in));
                if (opt_target->count())
                    std::printf("suggested w:      %.10g\n",
                                scma::suggest_w(b_target, in, scma::Field::real));
            } else {
                in.n0 = b_n0;
                std::printf("abs_error_bound_complex:  %.10g\n",
                            scma::abs_error_bound_complex(in));
                std::printf("rel_error_bound_complex:  %.10g\n",
                            scma::rel_error_bound_complex(in));
                if (opt_target->count())
                    std::printf("suggested w:              %.10g\n",
                                scma::suggest_w(b_target, in, scma::Field::complex_field));
            }
        }
    } catch (const std::exception& ex) {
        std::fprintf(stderr, "error: %s\n", ex.what());
        return 1;
    }
    return 0;
}
