#pragma once

#include <string>
#include <string_view>

#include "glvr/image.hpp"
#include "glvr/render.hpp"

namespace glvr {

// 10 log10(1 / MSE) over all channels with peak 1. Identical images give
// +infinity. Throws UsageError on a size mismatch.
double psnr(const ImageBuffer& a, const ImageBuffer& b);

struct SsimParams {
    int window = 8;
    double c1 = 0.01 * 0.01;
    double c2 = 0.03 * 0.03;
};

// Mean SSIM over non-overlapping window x window tiles of the Rec. 709
// luminance (0.2126 R + 0.7152 G + 0.0722 B), population statistics per tile.
// Partial tiles at the right and bottom edges are ignored.
double ssim(const ImageBuffer& a, const ImageBuffer& b, SsimParams params = {});

double luminance(const Rgb& c);

struct CompareReport {
    double psnr_db = 0.0;
    double ssim = 0.0;
    std::uint64_t color_calls_ref = 0;
    std::uint64_t color_calls_test = 0;
    std::uint64_t density_calls_ref = 0;
    std::uint64_t density_calls_test = 0;
    double color_call_ratio = 0.0;  // test / ref
    double wall_ms_ref = 0.0;
    double wall_ms_test = 0.0;
};

CompareReport compare_report(const ImageBuffer& ref, const ImageBuffer& test, const RenderStats& stats_ref,
                             const RenderStats& stats_test);

// One row of the comparison CSV.
struct CsvRow {
    std::string scene;
    std::string mode;
    int n = 0;
    std::string delta_t;  // fixed step, or "auto" for span / divisions
    double psnr_db = 0.0;
    double ssim = 0.0;
    std::uint64_t color_calls = 0;
    std::uint64_t density_calls = 0;
    double wall_ms = 0.0;
};

inline constexpr std::string_view kCsvHeader = "scene,mode,n,delta_t,psnr_db,ssim,color_calls,density_calls,wall_ms";

// Infinite PSNR is written as "inf". No trailing newline.
std::string format_csv_row(const CsvRow& row);
std::string format_number(double v);

}  // namespace glvr
