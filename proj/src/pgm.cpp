#include "grayfuzz/image.hpp"

#include <cctype>
#include <fstream>
#include <iterator>
#include <limits>
#include <string_view>

namespace grayfuzz {

namespace {

class HeaderReader {
public:
    explicit HeaderReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    void skip_space_and_comments() {
        while (pos_ < bytes_.size()) {
            const auto c = bytes_[pos_];
            if (c == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n' && bytes_[pos_] != '\r') ++pos_;
            } else if (std::isspace(c)) {
                ++pos_;
            } else {
                break;
            }
        }
    }

    std::size_t read_number(std::string_view field) {
        skip_space_and_comments();
        if (pos_ >= bytes_.size() || !std::isdigit(bytes_[pos_])) {
            throw PgmError(PgmError::Kind::MalformedHeader,
                           "PGM header: expected " + std::string(field));
        }
        std::size_t value = 0;
        while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
            if (value > std::numeric_limits<std::size_t>::max() / 10 - 10) {
                throw PgmError(PgmError::Kind::MalformedHeader,
                               "PGM header: " + std::string(field) + " too large");
            }
            value = value * 10 + (bytes_[pos_] - '0');
            ++pos_;
        }
        return value;
    }

    // Exactly one whitespace byte separates maxval from the raster.
    void expect_single_space() {
        if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) {
            throw PgmError(PgmError::Kind::MalformedHeader, "PGM header: missing whitespace after maxval");
        }
        ++pos_;
    }

    std::size_t pos() const { return pos_; }
    void advance(std::size_t n) { pos_ += n; }

private:
    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
};

} // namespace

GrayImage load_pgm(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5') {
        throw PgmError(PgmError::Kind::MalformedHeader, "PGM header: missing P5 magic");
    }
    HeaderReader reader(bytes);
    reader.advance(2);
    if (reader.pos() >= bytes.size() || !(std::isspace(bytes[2]) || bytes[2] == '#')) {
        throw PgmError(PgmError::Kind::MalformedHeader, "PGM header: missing P5 magic");
    }
    const auto width = reader.read_number("width");
    const auto height = reader.read_number("height");
    const auto maxval = reader.read_number("maxval");
    if (width == 0 || height == 0) {
        throw PgmError(PgmError::Kind::MalformedHeader, "PGM header: zero dimension");
    }
    if (maxval == 0) {
        throw PgmError(PgmError::Kind::MalformedHeader, "PGM header: maxval must be positive");
    }
    if (maxval > 255) {
        throw PgmError(PgmError::Kind::UnsupportedMaxval,
                       "PGM header: maxval " + std::to_string(maxval) + " exceeds 255");
    }
    reader.expect_single_space();

    if (width > std::numeric_limits<std::size_t>::max() / height) {
        throw PgmError(PgmError::Kind::MalformedHeader, "PGM header: dimensions overflow");
    }
    const auto start = reader.pos();
    if (bytes.size() - start < width * height) {
        throw PgmError(PgmError::Kind::TruncatedRaster, "PGM raster: fewer bytes than width*height");
    }
    std::vector<std::uint8_t> pixels(bytes.begin() + static_cast<std::ptrdiff_t>(start),
                                     bytes.begin() + static_cast<std::ptrdiff_t>(start + width * height));
    return GrayImage(width, height, std::move(pixels));
}

std::vector<std::uint8_t> save_pgm(const GrayImage& image) {
    const std::string header = "P5\n" + std::to_string(image.width()) + " " +
                               std::to_string(image.height()) + "\n255\n";
    std::vector<std::uint8_t> out(header.begin(), header.end());
    out.insert(out.end(), image.pixels().begin(), image.pixels().end());
    return out;
}

GrayImage read_pgm_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open " + path);
    }
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return load_pgm(bytes);
}

void write_pgm_file(const std::string& path, const GrayImage& image) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + path);
    }
    const auto bytes = save_pgm(image);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw std::runtime_error("write failed for " + path);
    }
}

} // namespace grayfuzz
