#pragma once

#include "grayfuzz/pipeline.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace grayfuzz {

enum class CompareMode {
    Restored,        ///< extracted image vs clean reference
    BinarizedMeans,  ///< two-level class-mean image of the majority mask vs clean
};

std::optional<CompareMode> parse_compare_mode(std::string_view text);
std::string_view compare_mode_name(CompareMode mode);

/// A benchmark row: a single thresholding method, or the fuzzy extraction
/// when method is empty.
struct BenchmarkRow {
    std::optional<ThresholdMethod> method;

    std::string label() const;
    static std::optional<BenchmarkRow> parse(std::string_view name);
    friend bool operator==(const BenchmarkRow&, const BenchmarkRow&) = default;
};

/// The 15 methods followed by the proposed extraction.
std::vector<BenchmarkRow> default_rows();

struct BenchmarkSpec {
    std::vector<std::string> images;
    std::vector<double> sigmas{15, 30, 45, 60, 75};
    std::vector<std::uint64_t> seeds{1};
    std::vector<BenchmarkRow> rows = default_rows();
    CompareMode compare = CompareMode::Restored;
    PipelineConfig pipeline{};

    /// Throws std::invalid_argument when images, sigmas, seeds or rows are
    /// empty, or a sigma is negative.
    void validate(bool require_images = true) const;
};

/// Mean PSNR per (row, sigma); empty cells had no converged run.
struct BenchmarkTable {
    std::vector<BenchmarkRow> rows;
    std::vector<double> sigmas;
    std::vector<std::vector<std::optional<double>>> cells;  // [row][sigma]
    /// Extractions that hit the single-intensity path.
    std::size_t degenerate_runs = 0;

    std::string to_csv() const;
};

/// Scores every row on each clean image corrupted at every (sigma, seed).
/// Single methods are scored through the two-level class-mean image at
/// their own threshold; the proposed row per spec.compare.
BenchmarkTable run_benchmark(const std::vector<GrayImage>& images, const BenchmarkSpec& spec);

/// Loads spec.images from disk and runs the benchmark.
BenchmarkTable run_benchmark(const BenchmarkSpec& spec);

/// Column header text for a sigma: integers without decimals.
std::string format_sigma(double sigma);

} // namespace grayfuzz
