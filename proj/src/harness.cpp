#include "edgebench/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace edgebench {

namespace {

std::string number(double v) {
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

double parse_number(const std::string& field) {
    if (field == "inf")
        return std::numeric_limits<double>::infinity();
    if (field == "-inf")
        return -std::numeric_limits<double>::infinity();
    if (field == "nan")
        return std::numeric_limits<double>::quiet_NaN();
    return std::stod(field);
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ','))
        fields.push_back(field);
    return fields;
}

void validate_config(const SweepConfig& config) {
    if (config.thresholds.empty())
        throw DomainError("threshold list must be non-empty");
    for (std::size_t i = 1; i < config.thresholds.size(); ++i) {
        const ThresholdPair& a = config.thresholds[i - 1];
        const ThresholdPair& b = config.thresholds[i];
        const bool nondecreasing = b.low >= a.low && b.high >= a.high;
        const bool advances = b.low > a.low || b.high > a.high;
        if (!nondecreasing || !advances)
            throw DomainError("threshold pairs must increase along the list");
    }
    if (!(config.sigma > 0.0))
        throw DomainError("sigma must be positive");
}

double metric_value(const MetricRecord& rec, MetricId id) {
    switch (id) {
    case MetricId::rmse:
        return rec.rmse;
    case MetricId::psnr:
        return rec.psnr;
    case MetricId::ssim:
        return rec.ssim;
    default:
        return rec.fom;
    }
}

constexpr MetricId kAllMetrics[] = {MetricId::rmse, MetricId::psnr,
                                    MetricId::ssim, MetricId::fom};

// Index of a record's pair within the config chain.
int pair_index(const SweepConfig& config, double low, double high) {
    for (std::size_t i = 0; i < config.thresholds.size(); ++i)
        if (config.thresholds[i].low == low && config.thresholds[i].high == high)
            return static_cast<int>(i);
    return -1;
}

struct ImageCells {
    std::string image;
    std::vector<std::size_t> record_indices;
};

std::vector<ImageCells> group_by_image(const SweepReport& report) {
    std::vector<ImageCells> groups;
    std::map<std::string, std::size_t> where;
    for (std::size_t i = 0; i < report.records.size(); ++i) {
        const std::string& id = report.records[i].image;
        auto it = where.find(id);
        if (it == where.end()) {
            where.emplace(id, groups.size());
            groups.push_back({id, {i}});
        } else {
            groups[it->second].record_indices.push_back(i);
        }
    }
    return groups;
}

// Per-image winning cell for one metric: min for rmse, max otherwise,
// ties resolved toward the earlier pair in config order.
std::optional<std::size_t> select_best_cell(
    const SweepReport& report, const ImageCells& group, MetricId metric,
    const std::optional<std::string>& band_filter) {
    // Scan pairs in config order so that "strictly better" comparisons
    // leave earlier pairs in place on ties.
    std::vector<std::size_t> ordered = group.record_indices;
    std::stable_sort(ordered.begin(), ordered.end(),
                     [&](std::size_t a, std::size_t b) {
                         return pair_index(report.config, report.records[a].low,
                                           report.records[a].high) <
                                pair_index(report.config, report.records[b].low,
                                           report.records[b].high);
                     });

    const bool minimize = metric == MetricId::rmse;
    double best = minimize ? std::numeric_limits<double>::infinity()
                           : -std::numeric_limits<double>::infinity();
    std::optional<std::size_t> best_idx;
    for (std::size_t idx : ordered) {
        const MetricRecord& rec = report.records[idx];
        if (band_filter && rec.band != *band_filter)
            continue;
        const double v = metric_value(rec, metric);
        const bool better = minimize ? v < best : v > best;
        if (better) {
            best = v;
            best_idx = idx;
        }
    }
    return best_idx;
}

} // namespace

int sweep_worker_count() {
    if (const char* env = std::getenv("EDGEBENCH_THREADS")) {
        char* end = nullptr;
        const long n = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && n > 0)
            return static_cast<int>(n);
    }
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

SweepReport run_sweep(const std::vector<DatasetEntry>& dataset,
                      const SweepConfig& config) {
    validate_config(config);

    SweepReport report;
    report.config = config;

    std::vector<const DatasetEntry*> entries;
    for (const DatasetEntry& entry : dataset) {
        if (!entry.pixels.same_shape(entry.mask))
            throw DimensionError("image and mask of " + entry.image + "/" +
                                 entry.band + " disagree in shape");
        if (!config.bands.empty() &&
            std::find(config.bands.begin(), config.bands.end(), entry.band) ==
                config.bands.end())
            continue;
        entries.push_back(&entry);
        if (report.manifest.empty() || report.manifest.back() != entry.image)
            report.manifest.push_back(entry.image);
    }
    if (entries.empty())
        return report;

    // Shared per-entry precomputation: normalized band and ground truth.
    std::vector<GrayImage> normalized(entries.size());
    std::vector<BinaryMap> truths(entries.size());
    std::string first_error;
#pragma omp parallel for schedule(dynamic) num_threads(sweep_worker_count())
    for (std::size_t e = 0; e < entries.size(); ++e) {
        try {
            normalized[e] = normalize_to_255(entries[e]->pixels);
            truths[e] = mask_to_edges(entries[e]->mask);
        } catch (const std::exception& ex) {
#pragma omp critical
            if (first_error.empty())
                first_error = entries[e]->image + "/" + entries[e]->band + ": " +
                              ex.what();
        }
    }
    if (!first_error.empty())
        throw Error("sweep aborted at " + first_error);

    const std::size_t pairs = config.thresholds.size();
    report.records.resize(entries.size() * pairs);

#pragma omp parallel for schedule(dynamic) num_threads(sweep_worker_count())
    for (std::size_t cell = 0; cell < report.records.size(); ++cell) {
        const std::size_t e = cell / pairs;
        const std::size_t p = cell % pairs;
        try {
            const ThresholdPair& t = config.thresholds[p];
            const BinaryMap edges = canny(normalized[e], t, config.sigma);
            const ConfusionCounts cc = confusion(edges, truths[e]);

            MetricRecord rec;
            rec.image = entries[e]->image;
            rec.band = entries[e]->band;
            rec.low = t.low;
            rec.high = t.high;
            rec.rmse = rmse(edges, truths[e]);
            rec.psnr = psnr(edges, truths[e]);
            rec.ssim = ssim(edges, truths[e], config.ssim);
            rec.fom = fom(edges, truths[e], config.fom);
            rec.tp = cc.tp;
            rec.tn = cc.tn;
            rec.fp = cc.fp;
            rec.fn = cc.fn;
            report.records[cell] = std::move(rec);
        } catch (const std::exception& ex) {
#pragma omp critical
            if (first_error.empty())
                first_error = entries[e]->image + "/" + entries[e]->band +
                              " at pair " + std::to_string(p) + ": " + ex.what();
        }
    }
    if (!first_error.empty())
        throw Error("sweep aborted at " + first_error);
    return report;
}

std::optional<MetricId> parse_metric(std::string_view name) {
    if (name == "rmse")
        return MetricId::rmse;
    if (name == "psnr")
        return MetricId::psnr;
    if (name == "ssim")
        return MetricId::ssim;
    if (name == "fom")
        return MetricId::fom;
    return std::nullopt;
}

std::string_view metric_name(MetricId id) {
    switch (id) {
    case MetricId::rmse:
        return "rmse";
    case MetricId::psnr:
        return "psnr";
    case MetricId::ssim:
        return "ssim";
    default:
        return "fom";
    }
}

std::vector<PairCount> best_threshold_counts(
    const SweepReport& report, MetricId metric,
    const std::optional<std::string>& band_filter) {
    if (report.records.empty())
        throw DomainError("best_threshold_counts needs a non-empty report");

    std::vector<PairCount> counts;
    for (const ThresholdPair& t : report.config.thresholds)
        counts.push_back({t.low, t.high, 0});

    for (const ImageCells& group : group_by_image(report)) {
        const auto best = select_best_cell(report, group, metric, band_filter);
        if (!best)
            continue;
        const MetricRecord& rec = report.records[*best];
        const int idx = pair_index(report.config, rec.low, rec.high);
        if (idx >= 0)
            ++counts[idx].count;
    }
    return counts;
}

std::vector<CellStats> aggregate(const SweepReport& report) {
    struct Key {
        std::string band;
        double low, high;
        bool operator<(const Key& o) const {
            return std::tie(band, low, high) < std::tie(o.band, o.low, o.high);
        }
    };
    std::vector<Key> order;
    std::map<Key, std::vector<const MetricRecord*>> cells;
    for (const MetricRecord& rec : report.records) {
        Key key{rec.band, rec.low, rec.high};
        auto [it, inserted] = cells.try_emplace(key);
        if (inserted)
            order.push_back(key);
        it->second.push_back(&rec);
    }

    std::vector<CellStats> out;
    for (const Key& key : order) {
        const auto& recs = cells[key];
        for (MetricId id : kAllMetrics) {
            CellStats stats;
            stats.band = key.band;
            stats.low = key.low;
            stats.high = key.high;
            stats.metric = std::string(metric_name(id));

            std::vector<double> values;
            for (const MetricRecord* rec : recs) {
                const double v = metric_value(*rec, id);
                if (id == MetricId::psnr && is_perfect_psnr(v)) {
                    ++stats.excluded;
                    continue;
                }
                values.push_back(v);
            }
            if (values.empty()) {
                stats.mean = std::numeric_limits<double>::infinity();
                stats.stddev = 0.0;
            } else {
                double sum = 0.0;
                for (double v : values)
                    sum += v;
                stats.mean = sum / static_cast<double>(values.size());
                if (values.size() >= 2) {
                    double ss = 0.0;
                    for (double v : values)
                        ss += (v - stats.mean) * (v - stats.mean);
                    stats.stddev =
                        std::sqrt(ss / static_cast<double>(values.size() - 1));
                }
            }
            out.push_back(std::move(stats));
        }
    }
    return out;
}

std::vector<FpFnCell> fp_fn_sums(const SweepReport& report) {
    struct Key {
        std::string band;
        double low, high;
        bool operator<(const Key& o) const {
            return std::tie(band, low, high) < std::tie(o.band, o.low, o.high);
        }
    };
    std::vector<Key> order;
    std::map<Key, std::pair<double, int>> sums;
    for (const MetricRecord& rec : report.records) {
        Key key{rec.band, rec.low, rec.high};
        auto [it, inserted] = sums.try_emplace(key, std::pair<double, int>{0.0, 0});
        if (inserted)
            order.push_back(key);
        it->second.first += static_cast<double>(rec.fp + rec.fn);
        it->second.second += 1;
    }
    std::vector<FpFnCell> out;
    for (const Key& key : order) {
        const auto& [total, n] = sums[key];
        out.push_back({key.band, key.low, key.high, total / n});
    }
    return out;
}

std::vector<AgreementRow> agreement(
    const SweepReport& report,
    const std::map<std::string, ThresholdPair>& oracle,
    const std::optional<std::string>& band_filter) {
    const auto groups = group_by_image(report);
    if (groups.empty())
        throw DomainError("agreement needs a non-empty report");

    // fom lookup per (record's band, oracle pair) within each image.
    auto find_fom = [&](const ImageCells& group, const std::string& band,
                        const ThresholdPair& pair) -> double {
        for (std::size_t idx : group.record_indices) {
            const MetricRecord& rec = report.records[idx];
            if (rec.band == band && rec.low == pair.low && rec.high == pair.high)
                return rec.fom;
        }
        throw DomainError("report lacks the oracle pair cell for " + group.image);
    };

    std::vector<AgreementRow> rows;
    for (MetricId id : kAllMetrics) {
        int best_hits = 0;
        int same_or_better = 0;
        int total = 0;
        for (const ImageCells& group : groups) {
            const auto it = oracle.find(group.image);
            if (it == oracle.end())
                throw DomainError("oracle has no entry for image " + group.image);
            const ThresholdPair& want = it->second;

            const auto best = select_best_cell(report, group, id, band_filter);
            if (!best)
                throw DomainError("no candidate cells for image " + group.image);
            const MetricRecord& rec = report.records[*best];
            ++total;
            if (rec.low == want.low && rec.high == want.high)
                ++best_hits;
            if (rec.fom >= find_fom(group, rec.band, want))
                ++same_or_better;
        }
        rows.push_back({std::string(metric_name(id)),
                        100.0 * best_hits / total, 100.0 * same_or_better / total});
    }
    return rows;
}

void write_sweep_csv(const SweepReport& report,
                     const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot open " + path.string() + " for writing");
    out << "image,band,low,high,rmse,psnr,ssim,fom,tp,tn,fp,fn\n";
    for (const MetricRecord& r : report.records) {
        out << r.image << ',' << r.band << ',' << number(r.low) << ','
            << number(r.high) << ',' << number(r.rmse) << ',' << number(r.psnr)
            << ',' << number(r.ssim) << ',' << number(r.fom) << ',' << r.tp
            << ',' << r.tn << ',' << r.fp << ',' << r.fn << '\n';
    }
    out.flush();
    if (!out)
        throw IoError("failed writing " + path.string());
}

SweepReport read_sweep_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line) ||
        line != "image,band,low,high,rmse,psnr,ssim,fom,tp,tn,fp,fn")
        throw Error("unexpected sweep csv header in " + path.string());

    SweepReport report;
    report.config.thresholds.clear();
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != 12)
            throw Error("malformed sweep csv row: " + line);
        MetricRecord rec;
        rec.image = fields[0];
        rec.band = fields[1];
        rec.low = parse_number(fields[2]);
        rec.high = parse_number(fields[3]);
        rec.rmse = parse_number(fields[4]);
        rec.psnr = parse_number(fields[5]);
        rec.ssim = parse_number(fields[6]);
        rec.fom = parse_number(fields[7]);
        rec.tp = std::stoull(fields[8]);
        rec.tn = std::stoull(fields[9]);
        rec.fp = std::stoull(fields[10]);
        rec.fn = std::stoull(fields[11]);

        if (pair_index(report.config, rec.low, rec.high) < 0)
            report.config.thresholds.emplace_back(rec.low, rec.high);
        if (report.manifest.empty() || report.manifest.back() != rec.image)
            report.manifest.push_back(rec.image);
        report.records.push_back(std::move(rec));
    }
    return report;
}

std::map<std::string, ThresholdPair> read_oracle_csv(
    const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line) || line != "scene,designed_low,designed_high,seed")
        throw Error("unexpected corpus csv header in " + path.string());

    std::map<std::string, ThresholdPair> oracle;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != 4)
            throw Error("malformed corpus csv row: " + line);
        oracle.emplace(fields[0], ThresholdPair(parse_number(fields[1]),
                                                parse_number(fields[2])));
    }
    return oracle;
}

void write_table2_csv(const SweepReport& report,
                      const std::filesystem::path& path,
                      const std::optional<std::string>& band_filter) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot open " + path.string() + " for writing");
    out << "metric,low,high,count\n";
    for (MetricId id : kAllMetrics)
        for (const PairCount& pc : best_threshold_counts(report, id, band_filter))
            out << metric_name(id) << ',' << number(pc.low) << ','
                << number(pc.high) << ',' << pc.count << '\n';
    out.flush();
    if (!out)
        throw IoError("failed writing " + path.string());
}

void write_fig2_csv(const SweepReport& report,
                    const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot open " + path.string() + " for writing");
    out << "band,low,high,metric,mean,std,excluded\n";
    for (const CellStats& s : aggregate(report))
        out << s.band << ',' << number(s.low) << ',' << number(s.high) << ','
            << s.metric << ',' << number(s.mean) << ',' << number(s.stddev)
            << ',' << s.excluded << '\n';
    out.flush();
    if (!out)
        throw IoError("failed writing " + path.string());
}

void write_fig6_csv(const SweepReport& report,
                    const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot open " + path.string() + " for writing");
    out << "band,low,high,mean_fp_plus_fn\n";
    for (const FpFnCell& c : fp_fn_sums(report))
        out << c.band << ',' << number(c.low) << ',' << number(c.high) << ','
            << number(c.mean_fp_plus_fn) << '\n';
    out.flush();
    if (!out)
        throw IoError("failed writing " + path.string());
}

void write_agreement_csv(const SweepReport& report,
                         const std::map<std::string, ThresholdPair>& oracle,
                         const std::filesystem::path& path,
                         const std::optional<std::string>& band_filter) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot open " + path.string() + " for writing");
    out << "metric,percent_best,percent_same_or_better\n";
    for (const AgreementRow& row : agreement(report, oracle, band_filter))
        out << row.metric << ',' << number(row.percent_best) << ','
            << number(row.percent_same_or_better) << '\n';
    out.flush();
    if (!out)
        throw IoError("failed writing " + path.string());
}

} // namespace edgebench
