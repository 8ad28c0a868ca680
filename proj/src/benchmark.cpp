#include "grayfuzz/benchmark.hpp"

#include "grayfuzz/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace grayfuzz {

namespace {
constexpr std::string_view kProposedLabel = "Proposed method";
}

std::optional<CompareMode> parse_compare_mode(std::string_view text) {
    if (text == "restored") return CompareMode::Restored;
    if (text == "binarized-means") return CompareMode::BinarizedMeans;
    return std::nullopt;
}

std::string_view compare_mode_name(CompareMode mode) {
    return mode == CompareMode::Restored ? "restored" : "binarized-means";
}

std::string BenchmarkRow::label() const {
    return method ? std::string(method_name(*method)) : std::string(kProposedLabel);
}

std::optional<BenchmarkRow> BenchmarkRow::parse(std::string_view name) {
    if (name == "proposed" || name == kProposedLabel) return BenchmarkRow{};
    if (auto m = parse_method(name)) return BenchmarkRow{m};
    return std::nullopt;
}

std::vector<BenchmarkRow> default_rows() {
    std::vector<BenchmarkRow> rows;
    for (auto m : kAllMethods) rows.push_back(BenchmarkRow{m});
    rows.push_back(BenchmarkRow{});
    return rows;
}

void BenchmarkSpec::validate(bool require_images) const {
    if (require_images && images.empty()) throw std::invalid_argument("benchmark: no images");
    if (sigmas.empty()) throw std::invalid_argument("benchmark: no sigmas");
    if (seeds.empty()) throw std::invalid_argument("benchmark: no seeds");
    if (rows.empty()) throw std::invalid_argument("benchmark: no methods");
    for (double s : sigmas) {
        if (!(s >= 0.0)) throw std::invalid_argument("benchmark: sigma must be non-negative");
    }
    pipeline.validate();
}

std::string format_sigma(double sigma) {
    char buf[64];
    if (sigma == std::floor(sigma) && std::abs(sigma) < 1e15) {
        std::snprintf(buf, sizeof buf, "%.0f", sigma);
    } else {
        std::snprintf(buf, sizeof buf, "%g", sigma);
    }
    return buf;
}

std::string BenchmarkTable::to_csv() const {
    std::ostringstream out;
    out << "method";
    for (double s : sigmas) out << ',' << format_sigma(s);
    out << '\n';
    for (std::size_t r = 0; r < rows.size(); ++r) {
        out << rows[r].label();
        for (const auto& cell : cells[r]) {
            out << ',' << (cell ? format_decibels(*cell) : "n/a");
        }
        out << '\n';
    }
    return out.str();
}

BenchmarkTable run_benchmark(const std::vector<GrayImage>& images, const BenchmarkSpec& spec) {
    spec.validate(false);
    if (images.empty()) throw std::invalid_argument("benchmark: no images");

    BenchmarkTable table;
    table.rows = spec.rows;
    table.sigmas = spec.sigmas;

    bool wants_proposed = false;
    for (const auto& row : spec.rows) wants_proposed |= !row.method.has_value();

    // [row][sigma] running sums over the converged runs
    std::vector<std::vector<double>> sum(spec.rows.size(), std::vector<double>(spec.sigmas.size(), 0.0));
    std::vector<std::vector<std::size_t>> runs(spec.rows.size(), std::vector<std::size_t>(spec.sigmas.size(), 0));

    for (const auto& clean : images) {
        for (std::size_t c = 0; c < spec.sigmas.size(); ++c) {
            for (auto seed : spec.seeds) {
                const auto noisy = add_gaussian_noise(clean, NoiseSpec{spec.sigmas[c], seed});
                const auto report = threshold_report(histogram(noisy), spec.pipeline.thresholds);

                std::optional<ExtractionResult> extraction;
                if (wants_proposed) {
                    extraction = extract(noisy, spec.pipeline);
                    if (extraction->degenerate) ++table.degenerate_runs;
                }

                for (std::size_t r = 0; r < spec.rows.size(); ++r) {
                    const auto& row = spec.rows[r];
                    std::optional<GrayImage> candidate;
                    if (row.method) {
                        if (const auto level = report[*row.method].level) {
                            candidate = class_mean_image(noisy, binarize(noisy, *level));
                        }
                    } else if (spec.compare == CompareMode::Restored) {
                        candidate = extraction->extracted;
                    } else {
                        candidate = class_mean_image(noisy, extraction->mask);
                    }
                    if (!candidate) continue;
                    sum[r][c] += compare(*candidate, clean).psnr_db;
                    ++runs[r][c];
                }
            }
        }
    }

    table.cells.assign(spec.rows.size(), std::vector<std::optional<double>>(spec.sigmas.size()));
    for (std::size_t r = 0; r < spec.rows.size(); ++r) {
        for (std::size_t c = 0; c < spec.sigmas.size(); ++c) {
            if (runs[r][c] != 0) table.cells[r][c] = sum[r][c] / static_cast<double>(runs[r][c]);
        }
    }
    return table;
}

BenchmarkTable run_benchmark(const BenchmarkSpec& spec) {
    spec.validate();
    std::vector<GrayImage> images;
    images.reserve(spec.images.size());
    for (const auto& path : spec.images) images.push_back(read_pgm_file(path));
    return run_benchmark(images, spec);
}

} // namespace grayfuzz
