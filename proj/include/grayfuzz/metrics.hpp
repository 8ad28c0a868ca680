#pragma once

#include "grayfuzz/image.hpp"

#include <string>

namespace grayfuzz {

/// Objective quality of a test image against a reference. snr_db and
/// psnr_db are +infinity when the images are identical.
struct MetricsRecord {
    double mae = 0.0;
    double mse = 0.0;
    double snr_db = 0.0;
    double psnr_db = 0.0;

    std::string csv_header() const { return "mae,mse,snr_db,psnr_db"; }
    std::string to_csv_row() const;
    std::string to_json() const;
};

/// Throws std::invalid_argument when the dimensions differ.
MetricsRecord compare(const GrayImage& test, const GrayImage& reference);

/// 10 log10(255^2 / mse); +infinity for mse == 0.
double psnr_from_mse(double mse);

/// Fixed 4-decimal rendering; "inf" for +infinity, "-inf", "nan".
std::string format_decibels(double value);

} // namespace grayfuzz
