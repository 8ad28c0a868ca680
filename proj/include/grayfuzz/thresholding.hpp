#pragma once

#include "grayfuzz/image.hpp"

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace grayfuzz {

enum class ThresholdMethod {
    Default,
    Huang,
    IsoData,
    Li,
    MaxEntropy,
    Mean,
    MinError,
    Minimum,
    Moments,
    Otsu,
    Percentile,
    RenyiEntropy,
    Shanbhag,
    Triangle,
    Yen,
};

inline constexpr std::size_t kMethodCount = 15;

inline constexpr std::array<ThresholdMethod, kMethodCount> kAllMethods = {
    ThresholdMethod::Default,    ThresholdMethod::Huang,        ThresholdMethod::IsoData,
    ThresholdMethod::Li,         ThresholdMethod::MaxEntropy,   ThresholdMethod::Mean,
    ThresholdMethod::MinError,   ThresholdMethod::Minimum,      ThresholdMethod::Moments,
    ThresholdMethod::Otsu,       ThresholdMethod::Percentile,   ThresholdMethod::RenyiEntropy,
    ThresholdMethod::Shanbhag,   ThresholdMethod::Triangle,     ThresholdMethod::Yen,
};

std::string_view method_name(ThresholdMethod method);
std::optional<ThresholdMethod> parse_method(std::string_view name);

struct ThresholdOptions {
    double percentile = 0.5;
    int max_iterations = 10000;
};

/// Outcome of one method. An empty level means the method failed.
struct ThresholdResult {
    std::optional<int> level;

    bool converged() const { return level.has_value(); }
    friend bool operator==(const ThresholdResult&, const ThresholdResult&) = default;
};

/// Computes a global threshold. Pixels with value <= level are background,
/// value > level foreground. Among equally optimal candidates the lowest
/// level wins. Throws std::invalid_argument on an empty histogram.
ThresholdResult compute_threshold(ThresholdMethod method, const Histogram& hist,
                                  const ThresholdOptions& options = {});

class ThresholdReport {
public:
    ThresholdReport() = default;

    const ThresholdResult& operator[](ThresholdMethod m) const { return results_[static_cast<std::size_t>(m)]; }
    ThresholdResult& operator[](ThresholdMethod m) { return results_[static_cast<std::size_t>(m)]; }

    std::size_t size() const { return results_.size(); }
    std::size_t converged_count() const;

    /// Converged levels in method order.
    std::vector<int> converged_levels() const;

    std::string to_csv() const;
    std::string to_json() const;

    friend bool operator==(const ThresholdReport&, const ThresholdReport&) = default;

private:
    std::array<ThresholdResult, kMethodCount> results_{};
};

ThresholdReport threshold_report(const Histogram& hist, const ThresholdOptions& options = {});

/// Foreground/background flags; 1 = foreground.
struct BinaryMask {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<std::uint8_t> bits;

    std::size_t foreground_count() const;
    friend bool operator==(const BinaryMask&, const BinaryMask&) = default;
};

BinaryMask binarize(const GrayImage& image, int level);

/// Round-half-up mean of the converged levels.
/// Throws std::invalid_argument when no method converged.
int fuse_feature_level(const ThresholdReport& report);

/// Per-pixel majority vote: foreground iff strictly more than half of the
/// converged methods put the pixel above their level; ties go to background.
/// Throws std::invalid_argument when no method converged.
BinaryMask fuse_decision_level(const GrayImage& image, const ThresholdReport& report);

} // namespace grayfuzz
