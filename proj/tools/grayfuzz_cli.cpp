// grayfuzz: single-image extraction and the method x sigma PSNR benchmark.
//
// Exit codes: 0 success, 1 usage error, 2 I/O error, 3 degenerate input
// with --strict.

#include "grayfuzz/benchmark.hpp"
#include "grayfuzz/metrics.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace grayfuzz;

namespace {

enum Exit { kOk = 0, kUsage = 1, kIo = 2, kDegenerate = 3 };

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << text;
    if (!out) throw IoError("write failed for " + path.string());
}

GrayImage read_image(const std::string& path) {
    try {
        return read_pgm_file(path);
    } catch (const std::exception& e) {
        throw IoError(path + ": " + e.what());
    }
}

std::vector<BenchmarkRow> parse_rows(const std::vector<std::string>& names) {
    std::vector<BenchmarkRow> rows;
    for (const auto& n : names) {
        auto row = BenchmarkRow::parse(n);
        if (!row) throw UsageError("unknown method: " + n);
        rows.push_back(*row);
    }
    return rows;
}

TrainingFusion parse_training(const std::string& text) {
    auto f = parse_training_fusion(text);
    if (!f) throw UsageError("--training-fusion must be 'context-majority' or 'pixel-majority'");
    return *f;
}

CompareMode parse_compare(const std::string& text) {
    auto mode = parse_compare_mode(text);
    if (!mode) throw UsageError("--compare must be 'restored' or 'binarized-means'");
    return *mode;
}

struct Flags {
    std::vector<std::string> inputs;
    std::vector<double> sigmas;
    std::vector<std::uint64_t> seeds;
    std::vector<std::string> methods;
    int regions = PipelineConfig{}.min_regions;
    int stride = PipelineConfig{}.training_stride;
    std::string training = "context-majority";
    std::string compare = "restored";
    std::string out_dir = ".";
    std::string csv;
    std::string config;
    bool strict = false;
};

/// Benchmark spec from the optional JSON config, overridden by flags.
BenchmarkSpec build_spec(const Flags& f, const CLI::App& cmd) {
    BenchmarkSpec spec;
    if (!f.config.empty()) {
        std::ifstream in(f.config);
        if (!in) throw IoError("cannot open config " + f.config);
        nlohmann::json doc;
        try {
            in >> doc;
            if (doc.contains("images")) spec.images = doc["images"].get<std::vector<std::string>>();
            if (doc.contains("sigmas")) spec.sigmas = doc["sigmas"].get<std::vector<double>>();
            if (doc.contains("seeds")) spec.seeds = doc["seeds"].get<std::vector<std::uint64_t>>();
            if (doc.contains("methods")) spec.rows = parse_rows(doc["methods"].get<std::vector<std::string>>());
            if (doc.contains("compare")) spec.compare = parse_compare(doc["compare"].get<std::string>());
            if (doc.contains("regions")) spec.pipeline.min_regions = doc["regions"].get<int>();
            if (doc.contains("stride")) spec.pipeline.training_stride = doc["stride"].get<int>();
            if (doc.contains("training_fusion")) {
                spec.pipeline.training_fusion = parse_training(doc["training_fusion"].get<std::string>());
            }
        } catch (const nlohmann::json::exception& e) {
            throw UsageError(std::string("bad config: ") + e.what());
        }
    }
    if (cmd.count("--input")) spec.images = f.inputs;
    if (cmd.count("--sigma")) spec.sigmas = f.sigmas;
    if (cmd.count("--seed")) spec.seeds = f.seeds;
    if (cmd.count("--methods")) spec.rows = parse_rows(f.methods);
    if (cmd.count("--compare")) spec.compare = parse_compare(f.compare);
    if (cmd.count("--regions")) spec.pipeline.min_regions = f.regions;
    if (cmd.count("--stride")) spec.pipeline.training_stride = f.stride;
    if (cmd.count("--training-fusion")) spec.pipeline.training_fusion = parse_training(f.training);
    try {
        spec.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    return spec;
}

int run_bench(const Flags& f, const CLI::App& cmd) {
    const auto spec = build_spec(f, cmd);
    std::vector<GrayImage> images;
    for (const auto& path : spec.images) images.push_back(read_image(path));
    const auto table = run_benchmark(images, spec);
    const auto csv = table.to_csv();
    if (f.csv.empty()) {
        std::cout << csv;
    } else {
        write_text(f.csv, csv);
    }
    if (f.strict && table.degenerate_runs > 0) {
        std::cerr << "grayfuzz: " << table.degenerate_runs << " degenerate extraction(s)\n";
        return kDegenerate;
    }
    return kOk;
}

int run_single(const Flags& f) {
    if (f.inputs.size() != 1) throw UsageError("run takes exactly one --input");
    const double sigma = f.sigmas.empty() ? 0.0 : f.sigmas.front();
    const std::uint64_t seed = f.seeds.empty() ? 1 : f.seeds.front();
    if (!(sigma >= 0.0)) throw UsageError("--sigma must be non-negative");

    PipelineConfig cfg;
    cfg.min_regions = f.regions;
    cfg.training_stride = f.stride;
    cfg.training_fusion = parse_training(f.training);
    try {
        cfg.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    const auto mode = parse_compare(f.compare);

    const auto clean = read_image(f.inputs.front());
    const auto noisy = add_gaussian_noise(clean, NoiseSpec{sigma, seed});
    const auto result = extract(noisy, cfg);
    const auto scored = mode == CompareMode::Restored ? result.extracted : class_mean_image(noisy, result.mask);

    const fs::path dir(f.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
    try {
        write_pgm_file((dir / "noisy.pgm").string(), noisy);
        write_pgm_file((dir / "extracted.pgm").string(), result.extracted);
    } catch (const std::runtime_error& e) {
        throw IoError(e.what());
    }
    write_text(dir / "report.csv", result.report.to_csv());
    write_text(dir / "rulebase.json", result.rulebase ? result.rulebase->to_json() : "null\n");
    write_text(dir / "metrics.json", compare(scored, clean).to_json() + "\n");

    if (result.degenerate) {
        std::cerr << "grayfuzz: degenerate (single-intensity) input returned unchanged\n";
        if (f.strict) return kDegenerate;
    }
    return kOk;
}

void add_common(CLI::App& cmd, Flags& f) {
    cmd.add_option("--input", f.inputs, "Clean input image(s), binary PGM");
    cmd.add_option("--sigma", f.sigmas, "Gaussian noise standard deviation(s)");
    cmd.add_option("--seed", f.seeds, "Noise seed(s)");
    cmd.add_option("--regions", f.regions, "Minimum number of fuzzy regions");
    cmd.add_option("--stride", f.stride, "Training pair stride in pixels");
    cmd.add_option("--training-fusion", f.training, "context-majority | pixel-majority");
    cmd.add_option("--compare", f.compare, "restored | binarized-means");
    cmd.add_flag("--strict", f.strict, "Exit with status 3 on degenerate input");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Threshold fusion and fuzzy rule restoration of 8-bit gray images"};
    app.require_subcommand(1);

    Flags run_flags;
    auto* run = app.add_subcommand("run", "Corrupt one image, extract it, write all artifacts");
    add_common(*run, run_flags);
    run->add_option("--out-dir", run_flags.out_dir, "Directory for the output files");

    Flags bench_flags;
    auto* bench = app.add_subcommand("bench", "Method x sigma PSNR matrix as CSV");
    add_common(*bench, bench_flags);
    bench->add_option("--methods", bench_flags.methods, "Rows: method names and/or 'proposed'");
    bench->add_option("--csv", bench_flags.csv, "Write the CSV here instead of stdout");
    bench->add_option("--config", bench_flags.config, "JSON benchmark spec; flags override it");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (*run) return run_single(run_flags);
        return run_bench(bench_flags, *bench);
    } catch (const UsageError& e) {
        std::cerr << "grayfuzz: " << e.what() << '\n';
        return kUsage;
    } catch (const IoError& e) {
        std::cerr << "grayfuzz: " << e.what() << '\n';
        return kIo;
    } catch (const std::exception& e) {
        std::cerr << "grayfuzz: " << e.what() << '\n';
        return kIo;
    }
}
