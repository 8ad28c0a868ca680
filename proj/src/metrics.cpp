#include "grayfuzz/metrics.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <limits>

namespace grayfuzz {

double psnr_from_mse(double mse) {
    if (mse == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(255.0 * 255.0 / mse);
}

std::string format_decibels(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4f", value);
    return buf;
}

MetricsRecord compare(const GrayImage& test, const GrayImage& reference) {
    if (test.width() != reference.width() || test.height() != reference.height()) {
        throw std::invalid_argument("compare: image dimensions differ");
    }
    if (test.empty()) {
        throw std::invalid_argument("compare: empty images");
    }
    // Exact integer accumulation; only the final ratios are floating point.
    std::uint64_t abs_sum = 0;
    std::uint64_t sq_sum = 0;
    std::uint64_t signal = 0;
    for (std::size_t i = 0; i < test.size(); ++i) {
        const int d = static_cast<int>(test[i]) - static_cast<int>(reference[i]);
        abs_sum += static_cast<std::uint64_t>(d < 0 ? -d : d);
        sq_sum += static_cast<std::uint64_t>(d * d);
        signal += static_cast<std::uint64_t>(reference[i]) * reference[i];
    }
    const double n = static_cast<double>(test.size());
    MetricsRecord r;
    r.mae = static_cast<double>(abs_sum) / n;
    r.mse = static_cast<double>(sq_sum) / n;
    r.psnr_db = psnr_from_mse(r.mse);
    if (sq_sum == 0) {
        r.snr_db = std::numeric_limits<double>::infinity();
    } else {
        r.snr_db = 10.0 * std::log10(static_cast<double>(signal) / static_cast<double>(sq_sum));
    }
    return r;
}

std::string MetricsRecord::to_csv_row() const {
    return format_decibels(mae) + "," + format_decibels(mse) + "," + format_decibels(snr_db) + "," +
           format_decibels(psnr_db);
}

std::string MetricsRecord::to_json() const {
    // Infinite values have no JSON number form; they are written as "inf".
    auto value = [](double v) {
        return std::isfinite(v) ? nlohmann::ordered_json(std::stod(format_decibels(v)))
                                : nlohmann::ordered_json(format_decibels(v));
    };
    nlohmann::ordered_json doc;
    doc["mae"] = value(mae);
    doc["mse"] = value(mse);
    doc["snr_db"] = value(snr_db);
    doc["psnr_db"] = value(psnr_db);
    return doc.dump(2);
}

} // namespace grayfuzz
