#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace grayfuzz {

/// 8-bit single-channel raster, row-major.
class GrayImage {
public:
    GrayImage() = default;
    GrayImage(std::size_t width, std::size_t height, std::uint8_t fill = 0);
    GrayImage(std::size_t width, std::size_t height, std::vector<std::uint8_t> pixels);

    std::size_t width() const { return width_; }
    std::size_t height() const { return height_; }
    std::size_t size() const { return pixels_.size(); }
    bool empty() const { return pixels_.empty(); }

    std::uint8_t operator()(std::size_t x, std::size_t y) const { return pixels_[y * width_ + x]; }
    std::uint8_t& operator()(std::size_t x, std::size_t y) { return pixels_[y * width_ + x]; }
    std::uint8_t operator[](std::size_t i) const { return pixels_[i]; }
    std::uint8_t& operator[](std::size_t i) { return pixels_[i]; }

    std::span<const std::uint8_t> pixels() const { return pixels_; }
    std::span<std::uint8_t> pixels() { return pixels_; }

    friend bool operator==(const GrayImage&, const GrayImage&) = default;

private:
    std::size_t width_ = 0;
    std::size_t height_ = 0;
    std::vector<std::uint8_t> pixels_;
};

/// 256-bin intensity census.
struct Histogram {
    std::array<std::uint64_t, 256> counts{};
    std::uint64_t total = 0;

    /// Builds a histogram from raw counts; total is their sum.
    static Histogram from_counts(std::span<const std::uint64_t, 256> counts);

    /// Lowest and highest occupied bins. Undefined when total == 0.
    int first_occupied() const;
    int last_occupied() const;
    int occupied_bins() const;

    friend bool operator==(const Histogram&, const Histogram&) = default;
};

Histogram histogram(const GrayImage& image);

// ---------------------------------------------------------------------------
// PGM (P5) I/O

class PgmError : public std::runtime_error {
public:
    enum class Kind { MalformedHeader, UnsupportedMaxval, TruncatedRaster };

    PgmError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

GrayImage load_pgm(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> save_pgm(const GrayImage& image);

/// File helpers; throw std::runtime_error on I/O failure, PgmError on bad content.
GrayImage read_pgm_file(const std::string& path);
void write_pgm_file(const std::string& path, const GrayImage& image);

// ---------------------------------------------------------------------------
// Noise

struct NoiseSpec {
    double sigma = 0.0;
    std::uint64_t seed = 0;
};

/// Adds N(0, sigma^2) noise per pixel, round-half-up, clamp to [0,255].
///
/// Deviates are drawn from std::mt19937_64 seeded with spec.seed, converted
/// to uniforms in (-1,1) with 53-bit resolution and passed through the
/// Marsaglia polar transform. Pixels consume deviates sequentially in
/// row-major order (both deviates of each polar pair are used). The engine
/// output is fixed by the standard; std::log and std::sqrt may differ in the
/// last bit between C libraries, which can move a pixel that lands exactly
/// on a rounding boundary.
GrayImage add_gaussian_noise(const GrayImage& image, const NoiseSpec& spec);

// ---------------------------------------------------------------------------
// Segmentation partition check

struct RegionLabeling {
    std::vector<std::uint32_t> labels;
    std::uint32_t region_count = 0;
};

/// Homogeneity predicate over the intensities of a pixel set.
using HomogeneityPredicate = std::function<bool(std::span<const std::uint8_t>)>;

/// Predicate: max - min <= tolerance. Empty sets are homogeneous.
HomogeneityPredicate range_predicate(int tolerance);

struct PartitionVerdict {
    bool union_ok = false;
    bool disjoint_ok = false;
    bool homogeneous_ok = false;
    bool adjacent_merge_fails = false;

    bool valid() const { return union_ok && disjoint_ok && homogeneous_ok && adjacent_merge_fails; }
};

/// Checks a labeling against the classical segmentation conditions:
/// regions cover the image, are disjoint, each satisfies the predicate,
/// and the union of any two 4-adjacent regions does not.
///
/// Throws std::invalid_argument when the labeling length differs from the
/// image size, a label is >= region_count, or a region id is unused.
PartitionVerdict validate_partition(const GrayImage& image, const RegionLabeling& labeling,
                                    const HomogeneityPredicate& predicate);

} // namespace grayfuzz
