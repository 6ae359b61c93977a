#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "edgebench/canny.hpp"
#include "edgebench/metrics.hpp"
#include "edgebench/raster.hpp"

namespace edgebench {

/// What to evaluate at every sweep cell.
struct SweepConfig {
    std::vector<ThresholdPair> thresholds = default_threshold_chain();
    double sigma = 1.0;
    FomParams fom;
    SsimParams ssim;
    /// Band labels to evaluate ("B08", ..., or "single"); empty means
    /// every band present in the dataset.
    std::vector<std::string> bands;
};

/// One (image, band) input with its ground-truth mask. Band is a spectral
/// band name ("B08", ...) or "single" for single-band datasets.
struct DatasetEntry {
    std::string image;
    std::string band;
    GrayImage pixels;
    BinaryMap mask;
};

/// One sweep cell: every metric of one (image, band, threshold pair)
/// evaluation. psnr is +infinity for a perfect match.
struct MetricRecord {
    std::string image;
    std::string band;
    double low = 0.0;
    double high = 0.0;
    double rmse = 0.0;
    double psnr = 0.0;
    double ssim = 0.0;
    double fom = 0.0;
    std::uint64_t tp = 0;
    std::uint64_t tn = 0;
    std::uint64_t fp = 0;
    std::uint64_t fn = 0;
};

struct SweepReport {
    std::vector<MetricRecord> records;
    SweepConfig config;
    std::vector<std::string> manifest; // image ids in dataset order
};

/// Number of workers used for sweep cells: EDGEBENCH_THREADS when set to
/// a positive integer, otherwise the available parallelism.
int sweep_worker_count();

/// Runs the full grid. For each entry the ground truth is
/// mask_to_edges(mask) and every cell evaluates
/// canny(normalize_to_255(band), pair, sigma) against it. Records appear
/// in deterministic (entry, pair) order regardless of worker scheduling.
SweepReport run_sweep(const std::vector<DatasetEntry>& dataset,
                      const SweepConfig& config);

enum class MetricId { rmse, psnr, ssim, fom };

std::optional<MetricId> parse_metric(std::string_view name);
std::string_view metric_name(MetricId id);

struct PairCount {
    double low = 0.0;
    double high = 0.0;
    int count = 0;
};

/// Per image, finds the (band, pair) cell optimizing the metric (min for
/// rmse, max otherwise; perfect psnr ranks top) and tallies the winning
/// pair. Ties resolve toward the earlier pair in config order. band_filter
/// restricts the candidate cells to one band.
std::vector<PairCount> best_threshold_counts(
    const SweepReport& report, MetricId metric,
    const std::optional<std::string>& band_filter = std::nullopt);

struct CellStats {
    std::string band;
    double low = 0.0;
    double high = 0.0;
    std::string metric;
    double mean = 0.0;
    double stddev = 0.0;
    int excluded = 0; // perfect-psnr values left out of the psnr mean
};

/// Sample mean and standard deviation (N-1; zero for a single record) of
/// each metric per (band, pair). Perfect psnr values are excluded from
/// the psnr mean and counted; an all-perfect cell reports an infinite mean.
std::vector<CellStats> aggregate(const SweepReport& report);

struct FpFnCell {
    std::string band;
    double low = 0.0;
    double high = 0.0;
    double mean_fp_plus_fn = 0.0;
};

std::vector<FpFnCell> fp_fn_sums(const SweepReport& report);

struct AgreementRow {
    std::string metric;
    double percent_best = 0.0;
    double percent_same_or_better = 0.0;
};

/// Compares each metric's per-image selected pair against an oracle
/// labeling. percent_best counts exact pair matches;
/// percent_same_or_better counts images where the selected cell's fom
/// against ground truth is at least the oracle pair's fom (fom standing
/// in for "visually at least as good").
std::vector<AgreementRow> agreement(
    const SweepReport& report,
    const std::map<std::string, ThresholdPair>& oracle,
    const std::optional<std::string>& band_filter = std::nullopt);

// CSV surfaces. All writers emit byte-identical output for identical
// inputs; infinities serialize as the literal "inf".
void write_sweep_csv(const SweepReport& report, const std::filesystem::path& path);
SweepReport read_sweep_csv(const std::filesystem::path& path);
std::map<std::string, ThresholdPair> read_oracle_csv(const std::filesystem::path& path);
void write_table2_csv(const SweepReport& report, const std::filesystem::path& path,
                      const std::optional<std::string>& band_filter = std::nullopt);
void write_fig2_csv(const SweepReport& report, const std::filesystem::path& path);
void write_fig6_csv(const SweepReport& report, const std::filesystem::path& path);
void write_agreement_csv(const SweepReport& report,
                         const std::map<std::string, ThresholdPair>& oracle,
                         const std::filesystem::path& path,
                         const std::optional<std::string>& band_filter = std::nullopt);

} // namespace edgebench
