#pragma once

#include "grayfuzz/fuzzy.hpp"
#include "grayfuzz/image.hpp"
#include "grayfuzz/thresholding.hpp"

#include <optional>
#include <string_view>
#include <vector>

namespace grayfuzz {

/// How a training pixel is assigned to a class.
enum class TrainingFusion {
    /// Majority vote of the converged levels on the pixel value alone.
    PixelMajority,
    /// Majority over the votes on the pixel value and on its neighbourhood
    /// mean (2n votes); ties go to background.
    ContextMajority,
};

std::string_view training_fusion_name(TrainingFusion f);
std::optional<TrainingFusion> parse_training_fusion(std::string_view text);

struct PipelineConfig {
    int min_regions = 9;
    double cluster_gap = kDefaultClusterGap;
    /// Side of the square neighbourhood whose mean is the second rule input.
    int window = 3;
    /// Every k-th pixel (row-major) becomes a training pair.
    int training_stride = 4;
    TrainingFusion training_fusion = TrainingFusion::ContextMajority;
    /// Output of every pixel when the rule base comes out empty.
    int defuzz_fallback = 0;
    /// Half-width of the symmetric output envelope around each class mean.
    double consequent_half_width = 16.0;
    ThresholdOptions thresholds{};

    /// Throws std::invalid_argument describing the first bad field.
    void validate() const;
};

struct ExtractionResult {
    GrayImage extracted;
    ThresholdReport report;
    std::optional<RuleBase> rulebase;
    BinaryMask mask;
    std::size_t no_rule_pixels = 0;
    /// Single-intensity input, returned unchanged.
    bool degenerate = false;
};

/// Runs the full extraction on a noisy image:
///  1. threshold report over the histogram;
///  2. input partition anchored on the converged levels;
///  3. majority-fusion mask and its two class means;
///  4. training pairs (pixel, neighbourhood mean) -> class mean, the class
///     picked by cfg.training_fusion;
///  5. Wang-Mendel rules, conflict-resolved into one rule base;
///  6. Mamdani inference and centroid defuzzification per pixel.
///
/// A pixel where no rule fires falls back to its class mean (or to
/// defuzz_fallback if the rule base is empty) and is counted in
/// no_rule_pixels.
ExtractionResult extract(const GrayImage& noisy, const PipelineConfig& cfg = {});

/// Per-region membership maps; at every pixel the maps sum to 1.
std::vector<std::vector<double>> fuzzify_image(const GrayImage& image, const FuzzyPartition& partition);

/// Mean over a window x window neighbourhood with clamp-to-edge borders.
std::vector<double> neighbourhood_mean(const GrayImage& image, int window);

/// Class of every pixel under `fusion`, using the converged levels of
/// `report` and the window x window neighbourhood mean.
BinaryMask training_mask(const GrayImage& image, const ThresholdReport& report, TrainingFusion fusion, int window);

/// Two-level reconstruction of a mask: every pixel takes the rounded mean of
/// the image pixels in its class.
GrayImage class_mean_image(const GrayImage& image, const BinaryMask& mask);

/// Output partition with a symmetric envelope around every target level.
/// Targets are rounded half up first. A target at 0 or 255 gets a single
/// inner flank at most one level away.
FuzzyPartition consequent_partition(std::span<const double> targets, double half_width);

} // namespace grayfuzz
