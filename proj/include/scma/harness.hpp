#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "scma/bounds.hpp"
#include "scma/channel.hpp"
#include "scma/codebook.hpp"
#include "scma/dmpa.hpp"
#include "scma/factor_graph.hpp"
#include "scma/mpa.hpp"

namespace scma {

enum class Detector { mpa, llr, split_mpa, dmpa };

std::string detector_name(Detector d);
Detector detector_from_name(const std::string& name);

/// One Monte Carlo experiment. `blocks` counts transmissions; each
/// transmission contributes one block (one codeword decision) per layer.
struct SimConfig {
    int num_resources = 4;  // K
    int num_codewords = 16;  // M
    Detector detector = Detector::mpa;
    std::vector<double> n0_sweep = {0.002, 0.004, 0.01, 0.02, 0.05, 0.1, 0.2};
    double step = 0.05;   // w
    double n_wid = 5.0;
    int iterations = 5;
    long blocks = 1000;   // transmissions per N0 point
    std::uint64_t seed = 1;
    std::string codebook_path;  // empty: generate from `seed`
    DmpaMode dmpa_mode = DmpaMode::automatic;
    int threads = 0;  // 0: hardware concurrency
    bool grid_aligned = false;  // snap codebook components to the grid

    void validate() const;
};

struct BlerRecord {
    std::string detector;
    double n0 = 0.0;
    double step = 0.0;
    long blocks = 0;        // layer-codeword decisions scored
    long block_errors = 0;
    double bler = 0.0;
    double ci_lo = 0.0;  // Wilson 95%
    double ci_hi = 0.0;
};

struct TimingRecord {
    std::string detector;
    int resource_degree = 0;
    int trials = 0;
    double mean_seconds = 0.0;
    double stddev_seconds = 0.0;
};

struct DivergenceRecord {
    double n0 = 0.0;
    double step = 0.0;
    int resource_degree = 0;
    int trials = 0;
    long entries = 0;
    long excluded = 0;  // oracle entries below the relative-check floor
    double max_abs = 0.0;
    double mean_abs = 0.0;
    double abs_bound = 0.0;
    double max_rel = 0.0;
    double mean_rel = 0.0;
    double rel_bound = 0.0;
};

// Wilson 95% score interval for `errors` failures in `total` Bernoulli
// trials; valid at low counts where the Wald interval degenerates.
std::pair<double, double> wilson_interval(long errors, long total);

// The codebook an experiment runs on: loaded from cfg.codebook_path or
// generated from cfg.seed; components snapped to multiples of cfg.step
// when cfg.grid_aligned is set.
Codebook experiment_codebook(const SimConfig& cfg);

// Monte Carlo BLER sweep. Trials use per-trial substreams of cfg.seed, so
// results are byte-identical for any thread count. When `totals` is given
// it receives the detector diagnostics accumulated over every trial
// (underflow replacements, off-grid lookups).
std::vector<BlerRecord> run_bler(const SimConfig& cfg,
                                 DetectionDiagnostics* totals = nullptr);

// Times full detections (single-threaded, after warm-up) on K = d_f + 1
// regular graphs; cfg.blocks is ignored, `trials` detections are measured.
std::vector<TimingRecord> run_timing(const SimConfig& cfg, const std::vector<int>& degrees,
                                     const std::vector<Detector>& detectors, int trials);

// Paired single-iteration resource updates (1-D real path) of the grid
// pipeline against the exhaustive oracle on identical random (y, V)
// instances; reports per-entry divergence stats next to the bound values.
// With cfg.grid_aligned the received samples are snapped to the grid too,
// which makes the two routes agree to floating round-off.
DivergenceRecord run_divergence(const SimConfig& cfg);

// CSV emission: a '#'-prefixed reproducibility stanza (version, seed,
// config echo), a fixed header row, then records in sorted order.
void write_bler_csv(const std::string& path, const std::vector<BlerRecord>& records,
                    const SimConfig& cfg);
void write_timing_csv(const std::string& path, const std::vector<TimingRecord>& records,
                      const SimConfig& cfg);
void write_divergence_csv(const std::string& path, const DivergenceRecord& record,
                          const SimConfig& cfg);

std::string config_echo(const SimConfig& cfg);

}  // namespace scma
