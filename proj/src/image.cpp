#include "grayfuzz/image.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace grayfuzz {

GrayImage::GrayImage(std::size_t width, std::size_t height, std::uint8_t fill)
    : width_(width), height_(height), pixels_(width * height, fill) {
    if (width == 0 || height == 0) {
        throw std::invalid_argument("GrayImage: dimensions must be positive");
    }
}

GrayImage::GrayImage(std::size_t width, std::size_t height, std::vector<std::uint8_t> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
    if (width == 0 || height == 0) {
        throw std::invalid_argument("GrayImage: dimensions must be positive");
    }
    if (pixels_.size() != width * height) {
        throw std::invalid_argument("GrayImage: pixel count does not match width*height");
    }
}

Histogram Histogram::from_counts(std::span<const std::uint64_t, 256> counts) {
    Histogram h;
    std::copy(counts.begin(), counts.end(), h.counts.begin());
    for (auto c : counts) {
        h.total += c;
    }
    return h;
}

int Histogram::first_occupied() const {
    for (int i = 0; i < 256; ++i) {
        if (counts[i] != 0) return i;
    }
    return 0;
}

int Histogram::last_occupied() const {
    for (int i = 255; i >= 0; --i) {
        if (counts[i] != 0) return i;
    }
    return 255;
}

int Histogram::occupied_bins() const {
    return static_cast<int>(std::count_if(counts.begin(), counts.end(), [](auto c) { return c != 0; }));
}

Histogram histogram(const GrayImage& image) {
    Histogram h;
    for (auto v : image.pixels()) {
        ++h.counts[v];
    }
    h.total = image.size();
    return h;
}

GrayImage add_gaussian_noise(const GrayImage& image, const NoiseSpec& spec) {
    if (!(spec.sigma >= 0.0)) {
        throw std::invalid_argument("add_gaussian_noise: sigma must be non-negative");
    }
    if (spec.sigma == 0.0) {
        return image;
    }

    std::mt19937_64 engine(spec.seed);
    auto uniform = [&engine] {
        // 53-bit uniform in [0,1), mapped to [-1,1).
        const double u = static_cast<double>(engine() >> 11) * 0x1.0p-53;
        return 2.0 * u - 1.0;
    };

    bool have_spare = false;
    double spare = 0.0;
    auto normal = [&] {
        if (have_spare) {
            have_spare = false;
            return spare;
        }
        double u = 0.0;
        double v = 0.0;
        double s = 0.0;
        do {
            u = uniform();
            v = uniform();
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double factor = std::sqrt(-2.0 * std::log(s) / s);
        spare = v * factor;
        have_spare = true;
        return u * factor;
    };

    GrayImage out = image;
    for (auto& p : out.pixels()) {
        const double value = std::floor(static_cast<double>(p) + spec.sigma * normal() + 0.5);
        p = static_cast<std::uint8_t>(std::clamp(value, 0.0, 255.0));
    }
    return out;
}

HomogeneityPredicate range_predicate(int tolerance) {
    return [tolerance](std::span<const std::uint8_t> values) {
        if (values.empty()) return true;
        const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
        return static_cast<int>(*hi) - static_cast<int>(*lo) <= tolerance;
    };
}

PartitionVerdict validate_partition(const GrayImage& image, const RegionLabeling& labeling,
                                    const HomogeneityPredicate& predicate) {
    if (labeling.labels.size() != image.size()) {
        throw std::invalid_argument("validate_partition: labeling length does not match image");
    }
    if (labeling.region_count == 0) {
        throw std::invalid_argument("validate_partition: region_count must be at least 1");
    }

    const std::size_t regions = labeling.region_count;
    std::vector<std::vector<std::uint8_t>> members(regions);
    for (std::size_t i = 0; i < image.size(); ++i) {
        const auto label = labeling.labels[i];
        if (label >= regions) {
            throw std::invalid_argument("validate_partition: label out of range");
        }
        members[label].push_back(image[i]);
    }
    for (const auto& m : members) {
        if (m.empty()) {
            throw std::invalid_argument("validate_partition: unused region id");
        }
    }

    PartitionVerdict verdict;
    // Every pixel carries exactly one in-range label, so the regions cover
    // the image and are pairwise disjoint by construction.
    verdict.union_ok = true;
    verdict.disjoint_ok = true;

    verdict.homogeneous_ok = std::all_of(members.begin(), members.end(),
                                         [&](const auto& m) { return predicate(m); });

    std::vector<std::pair<std::uint32_t, std::uint32_t>> adjacent;
    auto note = [&](std::uint32_t a, std::uint32_t b) {
        if (a == b) return;
        adjacent.emplace_back(std::min(a, b), std::max(a, b));
    };
    const auto w = image.width();
    const auto h = image.height();
    for (std::size_t y = 0; y < h; ++y) {
        for (std::size_t x = 0; x < w; ++x) {
            const auto here = labeling.labels[y * w + x];
            if (x + 1 < w) note(here, labeling.labels[y * w + x + 1]);
            if (y + 1 < h) note(here, labeling.labels[(y + 1) * w + x]);
        }
    }
    std::sort(adjacent.begin(), adjacent.end());
    adjacent.erase(std::unique(adjacent.begin(), adjacent.end()), adjacent.end());

    verdict.adjacent_merge_fails = true;
    for (const auto& [a, b] : adjacent) {
        std::vector<std::uint8_t> merged = members[a];
        merged.insert(merged.end(), members[b].begin(), members[b].end());
        if (predicate(merged)) {
            verdict.adjacent_merge_fails = false;
            break;
        }
    }
    return verdict;
}

} // namespace grayfuzz
