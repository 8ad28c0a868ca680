#include "grayfuzz/thresholding.hpp"

#include <json.hpp>

#include <algorithm>
#include <sstream>

namespace grayfuzz {

namespace {

constexpr std::array<std::string_view, kMethodCount> kNames = {
    "Default", "Huang",   "IsoData",    "Li",           "MaxEntropy",
    "Mean",    "MinError", "Minimum",   "Moments",      "Otsu",
    "Percentile", "RenyiEntropy", "Shanbhag", "Triangle", "Yen",
};

void require_converged(const ThresholdReport& report, const char* who) {
    if (report.converged_count() == 0) {
        throw std::invalid_argument(std::string(who) + ": no converged threshold");
    }
}

} // namespace

std::string_view method_name(ThresholdMethod method) {
    return kNames[static_cast<std::size_t>(method)];
}

std::optional<ThresholdMethod> parse_method(std::string_view name) {
    for (auto m : kAllMethods) {
        if (method_name(m) == name) return m;
    }
    return std::nullopt;
}

std::size_t ThresholdReport::converged_count() const {
    return static_cast<std::size_t>(
        std::count_if(results_.begin(), results_.end(), [](const auto& r) { return r.converged(); }));
}

std::vector<int> ThresholdReport::converged_levels() const {
    std::vector<int> levels;
    for (const auto& r : results_) {
        if (r.level) levels.push_back(*r.level);
    }
    return levels;
}

std::string ThresholdReport::to_csv() const {
    std::ostringstream out;
    out << "method,level,status\n";
    for (auto m : kAllMethods) {
        const auto& r = (*this)[m];
        out << method_name(m) << ',';
        if (r.level) {
            out << *r.level << ",converged\n";
        } else {
            out << "n/a,failed\n";
        }
    }
    return out.str();
}

std::string ThresholdReport::to_json() const {
    nlohmann::ordered_json methods = nlohmann::ordered_json::array();
    for (auto m : kAllMethods) {
        const auto& r = (*this)[m];
        nlohmann::ordered_json entry;
        entry["method"] = method_name(m);
        entry["level"] = r.level ? nlohmann::ordered_json(*r.level) : nlohmann::ordered_json(nullptr);
        entry["status"] = r.level ? "converged" : "failed";
        methods.push_back(entry);
    }
    nlohmann::ordered_json doc;
    doc["schema"] = "grayfuzz.threshold_report/1";
    doc["methods"] = methods;
    return doc.dump(2);
}

ThresholdReport threshold_report(const Histogram& hist, const ThresholdOptions& options) {
    ThresholdReport report;
    for (auto m : kAllMethods) {
        report[m] = compute_threshold(m, hist, options);
    }
    return report;
}

std::size_t BinaryMask::foreground_count() const {
    return static_cast<std::size_t>(std::count(bits.begin(), bits.end(), std::uint8_t{1}));
}

BinaryMask binarize(const GrayImage& image, int level) {
    if (level < 0 || level > 255) {
        throw std::invalid_argument("binarize: level outside [0,255]");
    }
    BinaryMask mask{image.width(), image.height(), std::vector<std::uint8_t>(image.size())};
    for (std::size_t i = 0; i < image.size(); ++i) {
        mask.bits[i] = image[i] > level ? 1 : 0;
    }
    return mask;
}

int fuse_feature_level(const ThresholdReport& report) {
    require_converged(report, "fuse_feature_level");
    const auto levels = report.converged_levels();
    long long sum = 0;
    for (int l : levels) sum += l;
    const long long n = static_cast<long long>(levels.size());
    return static_cast<int>((2 * sum + n) / (2 * n));
}

BinaryMask fuse_decision_level(const GrayImage& image, const ThresholdReport& report) {
    require_converged(report, "fuse_decision_level");
    const auto levels = report.converged_levels();
    // votes[v]: methods that put intensity v in the foreground
    std::array<std::size_t, 256> votes{};
    for (int v = 0; v < 256; ++v) {
        votes[v] = static_cast<std::size_t>(
            std::count_if(levels.begin(), levels.end(), [v](int l) { return v > l; }));
    }
    BinaryMask mask{image.width(), image.height(), std::vector<std::uint8_t>(image.size())};
    for (std::size_t i = 0; i < image.size(); ++i) {
        mask.bits[i] = 2 * votes[image[i]] > levels.size() ? 1 : 0;
    }
    return mask;
}

} // namespace grayfuzz
