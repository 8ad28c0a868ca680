#include "grayfuzz/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace grayfuzz {

namespace {

int round_half_up(double v) {
    return static_cast<int>(std::clamp(std::floor(v + 0.5), 0.0, 255.0));
}

/// Integer window sums with clamp-to-edge borders (separable box filter).
std::vector<std::uint32_t> window_sums(const GrayImage& image, int window) {
    const auto w = static_cast<std::ptrdiff_t>(image.width());
    const auto h = static_cast<std::ptrdiff_t>(image.height());
    const std::ptrdiff_t r = window / 2;
    auto clampi = [](std::ptrdiff_t v, std::ptrdiff_t hi) { return std::clamp<std::ptrdiff_t>(v, 0, hi - 1); };

    std::vector<std::uint32_t> rows(image.size());
    for (std::ptrdiff_t y = 0; y < h; ++y) {
        for (std::ptrdiff_t x = 0; x < w; ++x) {
            std::uint32_t s = 0;
            for (std::ptrdiff_t d = -r; d <= r; ++d) s += image[static_cast<std::size_t>(y * w + clampi(x + d, w))];
            rows[static_cast<std::size_t>(y * w + x)] = s;
        }
    }
    std::vector<std::uint32_t> sums(image.size());
    for (std::ptrdiff_t y = 0; y < h; ++y) {
        for (std::ptrdiff_t x = 0; x < w; ++x) {
            std::uint32_t s = 0;
            for (std::ptrdiff_t d = -r; d <= r; ++d) s += rows[static_cast<std::size_t>(clampi(y + d, h) * w + x)];
            sums[static_cast<std::size_t>(y * w + x)] = s;
        }
    }
    return sums;
}

struct ClassMeans {
    std::array<double, 2> mean{};
    std::array<std::size_t, 2> count{};
};

ClassMeans class_means(const GrayImage& image, const BinaryMask& mask) {
    std::array<std::uint64_t, 2> sum{};
    ClassMeans m;
    for (std::size_t i = 0; i < image.size(); ++i) {
        sum[mask.bits[i]] += image[i];
        ++m.count[mask.bits[i]];
    }
    for (int k = 0; k < 2; ++k) {
        if (m.count[k] != 0) m.mean[k] = static_cast<double>(sum[k]) / static_cast<double>(m.count[k]);
    }
    return m;
}

} // namespace

std::string_view training_fusion_name(TrainingFusion f) {
    return f == TrainingFusion::PixelMajority ? "pixel-majority" : "context-majority";
}

std::optional<TrainingFusion> parse_training_fusion(std::string_view text) {
    if (text == "pixel-majority") return TrainingFusion::PixelMajority;
    if (text == "context-majority") return TrainingFusion::ContextMajority;
    return std::nullopt;
}

void PipelineConfig::validate() const {
    if (min_regions < 3) throw std::invalid_argument("PipelineConfig: min_regions must be >= 3");
    if (!(cluster_gap > 0.0)) throw std::invalid_argument("PipelineConfig: cluster_gap must be positive");
    if (window < 1 || window % 2 == 0) throw std::invalid_argument("PipelineConfig: window must be odd and >= 1");
    if (training_stride < 1) throw std::invalid_argument("PipelineConfig: training_stride must be >= 1");
    if (defuzz_fallback < 0 || defuzz_fallback > 255) {
        throw std::invalid_argument("PipelineConfig: defuzz_fallback outside [0,255]");
    }
    if (!(consequent_half_width > 0.0)) {
        throw std::invalid_argument("PipelineConfig: consequent_half_width must be positive");
    }
}

std::vector<double> neighbourhood_mean(const GrayImage& image, int window) {
    if (window < 1 || window % 2 == 0) {
        throw std::invalid_argument("neighbourhood_mean: window must be odd and >= 1");
    }
    const auto sums = window_sums(image, window);
    const double area = static_cast<double>(window) * window;
    std::vector<double> out(sums.size());
    std::transform(sums.begin(), sums.end(), out.begin(), [area](auto s) { return s / area; });
    return out;
}

std::vector<std::vector<double>> fuzzify_image(const GrayImage& image, const FuzzyPartition& partition) {
    std::vector<std::vector<double>> maps(partition.size(), std::vector<double>(image.size()));
    std::array<FuzzyPartition::Active, 256> lut{};
    for (int v = 0; v < 256; ++v) lut[v] = partition.active(v);
    for (std::size_t i = 0; i < image.size(); ++i) {
        const auto& a = lut[image[i]];
        for (std::size_t k = 0; k < a.count; ++k) maps[a.index[k]][i] = a.degree[k];
    }
    return maps;
}

BinaryMask training_mask(const GrayImage& image, const ThresholdReport& report, TrainingFusion fusion, int window) {
    BinaryMask mask = fuse_decision_level(image, report);
    if (fusion == TrainingFusion::PixelMajority) return mask;
    if (window < 1 || window % 2 == 0) {
        throw std::invalid_argument("training_mask: window must be odd and >= 1");
    }

    const auto levels = report.converged_levels();
    const std::uint64_t n = levels.size();
    const std::uint64_t area = static_cast<std::uint64_t>(window) * static_cast<std::uint64_t>(window);
    const auto sums = window_sums(image, window);
    for (std::size_t i = 0; i < image.size(); ++i) {
        // mean > l  <=>  sum > l * area, kept in integers
        std::uint64_t votes = 0;
        for (int l : levels) {
            votes += image[i] > l;
            votes += sums[i] > static_cast<std::uint64_t>(l) * area;
        }
        mask.bits[i] = votes > n ? 1 : 0;
    }
    return mask;
}

GrayImage class_mean_image(const GrayImage& image, const BinaryMask& mask) {
    if (mask.bits.size() != image.size()) {
        throw std::invalid_argument("class_mean_image: mask does not match image");
    }
    const auto means = class_means(image, mask);
    const std::array<std::uint8_t, 2> level = {static_cast<std::uint8_t>(round_half_up(means.mean[0])),
                                               static_cast<std::uint8_t>(round_half_up(means.mean[1]))};
    GrayImage out = image;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = level[mask.bits[i]];
    return out;
}

FuzzyPartition consequent_partition(std::span<const double> targets, double half_width) {
    std::vector<double> t;
    for (double v : targets) t.push_back(std::clamp(round_half_up(v), 0, 255));
    std::sort(t.begin(), t.end());
    t.erase(std::unique(t.begin(), t.end()), t.end());

    std::vector<double> peaks{0.0, 255.0};
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double m = t[i];
        double gap = half_width;
        if (i > 0) gap = std::min(gap, 0.5 * (m - t[i - 1]));
        if (i + 1 < t.size()) gap = std::min(gap, 0.5 * (t[i + 1] - m));
        peaks.push_back(m);
        if (m == 0.0 || m == 255.0) {
            // A shoulder set only has its centroid on the edge when nothing
            // but the edge sample is covered.
            const double w = std::min(gap, 1.0);
            peaks.push_back(m == 0.0 ? w : 255.0 - w);
            continue;
        }
        const double w = std::min({gap, m, 255.0 - m});
        peaks.push_back(m - w);
        peaks.push_back(m + w);
    }
    std::sort(peaks.begin(), peaks.end());
    peaks.erase(std::unique(peaks.begin(), peaks.end()), peaks.end());
    return FuzzyPartition(std::move(peaks));
}

ExtractionResult extract(const GrayImage& noisy, const PipelineConfig& cfg) {
    cfg.validate();
    if (noisy.empty()) {
        throw std::invalid_argument("extract: empty image");
    }

    ExtractionResult result;
    const auto hist = histogram(noisy);
    result.report = threshold_report(hist, cfg.thresholds);
    result.mask = fuse_decision_level(noisy, result.report);

    if (hist.occupied_bins() == 1) {
        result.extracted = noisy;
        result.degenerate = true;
        return result;
    }

    std::vector<double> anchors;
    for (int l : result.report.converged_levels()) anchors.push_back(l);
    const auto input_partition = build_partition(anchors, cfg.min_regions, cfg.cluster_gap);

    const auto means = class_means(noisy, result.mask);
    const auto target_class = training_mask(noisy, result.report, cfg.training_fusion, cfg.window);
    std::vector<double> targets;
    for (int k = 0; k < 2; ++k) {
        if (means.count[k] != 0) targets.push_back(means.mean[k]);
    }
    auto output_partition = consequent_partition(targets, cfg.consequent_half_width);

    const auto sums = window_sums(noisy, cfg.window);
    const double area = static_cast<double>(cfg.window) * cfg.window;

    std::vector<TrainingPair> pairs;
    pairs.reserve(noisy.size() / static_cast<std::size_t>(cfg.training_stride) + 1);
    for (std::size_t i = 0; i < noisy.size(); i += static_cast<std::size_t>(cfg.training_stride)) {
        pairs.push_back({{static_cast<double>(noisy[i]), sums[i] / area}, means.mean[target_class.bits[i]]});
    }

    const std::vector<FuzzyPartition> inputs{input_partition, input_partition};
    const auto rules = generate_rules(pairs, inputs, output_partition);
    RuleBase base = combine(rules, inputs, std::move(output_partition));

    std::array<std::uint8_t, 2> class_level = {static_cast<std::uint8_t>(round_half_up(means.mean[0])),
                                               static_cast<std::uint8_t>(round_half_up(means.mean[1]))};

    GrayImage out = noisy;
    if (base.empty()) {
        for (auto& p : out.pixels()) p = static_cast<std::uint8_t>(cfg.defuzz_fallback);
        result.no_rule_pixels = out.size();
    } else {
        // The crisp output depends only on (pixel, window sum), so each
        // distinct combination is inferred once.
        std::unordered_map<std::uint64_t, CrispOutput> memo;
        memo.reserve(1 << 16);
        for (std::size_t i = 0; i < noisy.size(); ++i) {
            const std::uint64_t key = (static_cast<std::uint64_t>(sums[i]) << 8) | noisy[i];
            auto it = memo.find(key);
            if (it == memo.end()) {
                const std::array<double, 2> in = {static_cast<double>(noisy[i]), sums[i] / area};
                it = memo.emplace(key, defuzzify(infer(base, in))).first;
            }
            if (it->second.no_rule_fired) {
                out[i] = class_level[result.mask.bits[i]];
                ++result.no_rule_pixels;
            } else {
                out[i] = static_cast<std::uint8_t>(it->second.level);
            }
        }
    }
    result.extracted = std::move(out);
    result.rulebase = std::move(base);
    return result;
}

} // namespace grayfuzz
