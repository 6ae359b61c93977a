// Command-line front end: synthetic corpus generation, single-image edge
// detection, metric evaluation, threshold sweeps, and report generation.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "edgebench/cmreform.hpp"
#include "edgebench/harness.hpp"
#include "edgebench/synth.hpp"

namespace fs = std::filesystem;
using namespace edgebench;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<ThresholdPair> parse_thresholds(const std::string& text) {
    std::vector<ThresholdPair> pairs;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t comma = text.find(',', start);
        const std::string item =
            text.substr(start, comma == std::string::npos ? comma : comma - start);
        const std::size_t colon = item.find(':');
        if (colon == std::string::npos)
            throw UsageError("threshold item '" + item + "' is not low:high");
        try {
            pairs.emplace_back(std::stod(item.substr(0, colon)),
                               std::stod(item.substr(colon + 1)));
        } catch (const Error& e) {
            throw UsageError(e.what());
        } catch (const std::exception&) {
            throw UsageError("cannot parse threshold item '" + item + "'");
        }
        if (comma == std::string::npos)
            break;
        start = comma + 1;
    }
    if (pairs.empty())
        throw UsageError("empty threshold list");
    return pairs;
}

std::string scene_id(int index) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "scene_%04d", index);
    return buf;
}

std::string format_number(double v) {
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

int cmd_synth(const fs::path& out_dir, int count, int width, int height,
              std::uint64_t seed, double noise_sigma) {
    SceneSpec base;
    base.width = width;
    base.height = height;
    base.seed = seed;
    base.noise_sigma = noise_sigma;

    fs::create_directories(out_dir);
    const std::vector<Scene> corpus = gen_corpus(count, base);

    std::ofstream manifest(out_dir / "corpus.csv", std::ios::binary);
    if (!manifest)
        throw IoError("cannot write " + (out_dir / "corpus.csv").string());
    manifest << "scene,designed_low,designed_high,seed\n";
    for (int i = 0; i < count; ++i) {
        const Scene& scene = corpus[i];
        const std::string id = scene_id(i);
        save_pgm(scene.band, out_dir / (id + "_band.pgm"));
        save_pgm(to_gray(scene.mask, 255), out_dir / (id + "_mask.pgm"));
        manifest << id << ',' << format_number(scene.designed_best.low) << ','
                 << format_number(scene.designed_best.high) << ',' << scene.seed
                 << '\n';
    }
    manifest.flush();
    if (!manifest)
        throw IoError("failed writing corpus.csv");
    std::cout << "wrote " << count << " scenes to " << out_dir.string() << "\n";
    return 0;
}

int cmd_canny(const fs::path& input, const fs::path& output, double low,
              double high, double sigma) {
    const GrayImage image = load_pgm(input);
    const BinaryMap edges = canny(normalize_to_255(image),
                                  ThresholdPair(low, high), sigma);
    save_pgm(to_gray(edges, 255), output);
    return 0;
}

int cmd_eval(const fs::path& detected_path, const fs::path& truth_path,
             double fom_alpha) {
    const BinaryMap detected = load_mask(detected_path);
    const BinaryMap truth = load_mask(truth_path);

    std::cout << "rmse " << format_number(rmse(detected, truth)) << "\n";
    std::cout << "psnr " << format_number(psnr(detected, truth)) << "\n";
    std::cout << "ssim " << format_number(ssim(detected, truth)) << "\n";
    std::cout << "fom " << format_number(fom(detected, truth, {fom_alpha}))
              << "\n";
    const ConfusionCounts cc = confusion(detected, truth);
    std::cout << "tp " << cc.tp << "\ntn " << cc.tn << "\nfp " << cc.fp
              << "\nfn " << cc.fn << "\n";
    std::cout << verify_reformulations(detected, truth).to_csv();
    return 0;
}

std::vector<DatasetEntry> discover_dataset(const fs::path& dir) {
    std::vector<std::string> stems;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file())
            continue;
        const std::string name = entry.path().filename().string();
        const std::string suffix = "_mask.pgm";
        if (name.size() > suffix.size() &&
            name.compare(name.size() - suffix.size(), suffix.size(), suffix) == 0)
            stems.push_back(name.substr(0, name.size() - suffix.size()));
    }
    std::sort(stems.begin(), stems.end());

    std::vector<DatasetEntry> dataset;
    for (const std::string& stem : stems) {
        const BinaryMap mask = load_mask(dir / (stem + "_mask.pgm"));
        const fs::path single = dir / (stem + "_band.pgm");
        if (fs::exists(single))
            dataset.push_back({stem, "single", load_pgm(single), mask});
        for (Band band : all_bands()) {
            const fs::path banded =
                dir / (stem + "_" + std::string(band_name(band)) + ".pgm");
            if (fs::exists(banded))
                dataset.push_back({stem, std::string(band_name(band)),
                                   load_pgm(banded), mask});
        }
    }
    return dataset;
}

int cmd_sweep(const fs::path& data_dir, const fs::path& out_path, double sigma,
              const std::string& thresholds, double fom_alpha,
              const std::string& bands) {
    SweepConfig config;
    if (!thresholds.empty())
        config.thresholds = parse_thresholds(thresholds);
    config.sigma = sigma;
    config.fom.alpha = fom_alpha;
    if (!bands.empty()) {
        std::size_t start = 0;
        while (start <= bands.size()) {
            const std::size_t comma = bands.find(',', start);
            const std::string item = bands.substr(
                start, comma == std::string::npos ? comma : comma - start);
            if (item != "single" && !parse_band(item))
                throw UsageError("unknown band '" + item + "'");
            config.bands.push_back(item);
            if (comma == std::string::npos)
                break;
            start = comma + 1;
        }
    }

    const std::vector<DatasetEntry> dataset = discover_dataset(data_dir);
    const SweepReport report = run_sweep(dataset, config);
    write_sweep_csv(report, out_path);
    std::cout << "wrote " << report.records.size() << " records to "
              << out_path.string() << "\n";
    return 0;
}

int cmd_report(const fs::path& sweep_path, const fs::path& out_dir,
               const std::string& oracle_path, bool nir_only) {
    const SweepReport report = read_sweep_csv(sweep_path);
    fs::create_directories(out_dir);

    const std::optional<std::string> filter =
        nir_only ? std::optional<std::string>(std::string(band_name(kNirBand)))
                 : std::nullopt;

    if (report.records.empty()) {
        // Header-only outputs for an empty sweep.
        for (const char* name : {"table2.csv", "fig2.csv", "fig6.csv"}) {
            std::ofstream out(out_dir / name, std::ios::binary);
            if (name == std::string("table2.csv"))
                out << "metric,low,high,count\n";
            else if (name == std::string("fig2.csv"))
                out << "band,low,high,metric,mean,std,excluded\n";
            else
                out << "band,low,high,mean_fp_plus_fn\n";
        }
        return 0;
    }

    write_table2_csv(report, out_dir / "table2.csv", filter);
    write_fig2_csv(report, out_dir / "fig2.csv");
    write_fig6_csv(report, out_dir / "fig6.csv");
    if (!oracle_path.empty()) {
        const auto oracle = read_oracle_csv(oracle_path);
        write_agreement_csv(report, oracle, out_dir / "agreement.csv", filter);
    }
    std::cout << "wrote report tables to " << out_dir.string() << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Coastline edge-detection evaluation toolkit"};
    app.require_subcommand(1);

    // synth
    auto* synth = app.add_subcommand("synth", "generate a synthetic corpus");
    std::string synth_out;
    int synth_count = 40, synth_w = 128, synth_h = 128;
    std::uint64_t synth_seed = 42;
    double synth_noise = 2.0;
    synth->add_option("--out-dir", synth_out, "output directory")->required();
    synth->add_option("--count", synth_count, "number of scenes");
    synth->add_option("--width", synth_w, "scene width");
    synth->add_option("--height", synth_h, "scene height");
    synth->add_option("--seed", synth_seed, "corpus seed");
    synth->add_option("--noise-sigma", synth_noise, "additive noise sigma");

    // canny
    auto* canny_cmd = app.add_subcommand("canny", "detect edges in one image");
    std::string canny_in, canny_out;
    double canny_low = 50, canny_high = 100, canny_sigma = 1.0;
    canny_cmd->add_option("input", canny_in, "input PGM")->required();
    canny_cmd->add_option("output", canny_out, "output edge PGM")->required();
    canny_cmd->add_option("--low", canny_low, "low hysteresis threshold");
    canny_cmd->add_option("--high", canny_high, "high hysteresis threshold");
    canny_cmd->add_option("--sigma", canny_sigma, "Gaussian smoothing sigma");

    // eval
    auto* eval_cmd = app.add_subcommand("eval", "evaluate one edge map");
    std::string eval_e, eval_g;
    double eval_alpha = 1.0 / 9.0;
    eval_cmd->add_option("detected", eval_e, "detected edge map PGM")->required();
    eval_cmd->add_option("truth", eval_g, "ground-truth edge map PGM")->required();
    eval_cmd->add_option("--fom-alpha", eval_alpha, "fom distance penalty");

    // sweep
    auto* sweep_cmd = app.add_subcommand("sweep", "run the threshold sweep");
    std::string sweep_dir, sweep_out, sweep_thresholds, sweep_bands;
    double sweep_sigma = 1.0, sweep_alpha = 1.0 / 9.0;
    sweep_cmd->add_option("--data-dir", sweep_dir, "dataset directory")->required();
    sweep_cmd->add_option("--out", sweep_out, "output csv (default <data-dir>/sweep.csv)");
    sweep_cmd->add_option("--sigma", sweep_sigma, "Gaussian smoothing sigma");
    sweep_cmd->add_option("--thresholds", sweep_thresholds,
                          "pairs as low:high,low:high,...");
    sweep_cmd->add_option("--fom-alpha", sweep_alpha, "fom distance penalty");
    sweep_cmd->add_option("--bands", sweep_bands,
                          "band labels to evaluate, e.g. B08,B04 or single");

    // report
    auto* report_cmd = app.add_subcommand("report", "summarize a sweep csv");
    std::string report_sweep, report_out, report_oracle;
    bool report_nir = false;
    report_cmd->add_option("--sweep", report_sweep, "sweep csv path")->required();
    report_cmd->add_option("--out-dir", report_out, "output directory")->required();
    report_cmd->add_option("--oracle", report_oracle,
                           "corpus.csv with designed-best labels");
    report_cmd->add_flag("--nir-only", report_nir,
                         "restrict best-threshold selection to the NIR band");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (synth->parsed())
            return cmd_synth(synth_out, synth_count, synth_w, synth_h, synth_seed,
                             synth_noise);
        if (canny_cmd->parsed()) {
            if (!(canny_low > 0) || !(canny_high > canny_low)) {
                std::cerr << "error: thresholds must satisfy 0 < low < high\n";
                return 2;
            }
            return cmd_canny(canny_in, canny_out, canny_low, canny_high,
                             canny_sigma);
        }
        if (eval_cmd->parsed())
            return cmd_eval(eval_e, eval_g, eval_alpha);
        if (sweep_cmd->parsed()) {
            const fs::path out = sweep_out.empty()
                                     ? fs::path(sweep_dir) / "sweep.csv"
                                     : fs::path(sweep_out);
            return cmd_sweep(sweep_dir, out, sweep_sigma, sweep_thresholds,
                             sweep_alpha, sweep_bands);
        }
        if (report_cmd->parsed())
            return cmd_report(report_sweep, report_out, report_oracle, report_nir);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
