#include "glvr/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <vector>

#include "glvr/error.hpp"
#include "glvr/kernels.hpp"

namespace glvr {

namespace {

void check_same_size(const ImageBuffer& a, const ImageBuffer& b) {
    if (a.width() != b.width() || a.height() != b.height())
        throw UsageError("image size mismatch: " + std::to_string(a.width()) + "x" + std::to_string(a.height()) +
                         " vs " + std::to_string(b.width()) + "x" + std::to_string(b.height()));
}

}  // namespace

double psnr(const ImageBuffer& a, const ImageBuffer& b) {
    check_same_size(a, b);
    if (a.data().empty()) throw UsageError("psnr of an empty image");
    const double mse = kernels::sum_squared_diff(a.data(), b.data()) / static_cast<double>(a.data().size());
    if (mse == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(1.0 / mse);
}

double luminance(const Rgb& c) { return 0.2126 * c.r + 0.7152 * c.g + 0.0722 * c.b; }

double ssim(const ImageBuffer& a, const ImageBuffer& b, SsimParams params) {
    check_same_size(a, b);
    const int w = params.window;
    if (w < 1 || a.width() < w || a.height() < w)
        throw UsageError("ssim needs images of at least " + std::to_string(w) + "x" + std::to_string(w));
    const int tiles_x = a.width() / w;
    const int tiles_y = a.height() / w;
    const double count = static_cast<double>(w) * w;

    double total = 0.0;
    for (int ty = 0; ty < tiles_y; ++ty) {
        for (int tx = 0; tx < tiles_x; ++tx) {
            double sa = 0.0, sb = 0.0;
            for (int y = ty * w; y < (ty + 1) * w; ++y)
                for (int x = tx * w; x < (tx + 1) * w; ++x) {
                    sa += luminance(a.at(x, y));
                    sb += luminance(b.at(x, y));
                }
            const double mu_a = sa / count, mu_b = sb / count;
            double var_a = 0.0, var_b = 0.0, cov = 0.0;
            for (int y = ty * w; y < (ty + 1) * w; ++y)
                for (int x = tx * w; x < (tx + 1) * w; ++x) {
                    const double da = luminance(a.at(x, y)) - mu_a;
                    const double db = luminance(b.at(x, y)) - mu_b;
                    var_a += da * da;
                    var_b += db * db;
                    cov += da * db;
                }
            var_a /= count;
            var_b /= count;
            cov /= count;
            total += ((2.0 * mu_a * mu_b + params.c1) * (2.0 * cov + params.c2)) /
                     ((mu_a * mu_a + mu_b * mu_b + params.c1) * (var_a + var_b + params.c2));
        }
    }
    return total / (static_cast<double>(tiles_x) * tiles_y);
}

CompareReport compare_report(const ImageBuffer& ref, const ImageBuffer& test, const RenderStats& stats_ref,
                             const RenderStats& stats_test) {
    CompareReport r;
    r.psnr_db = psnr(ref, test);
    r.ssim = ssim(ref, test);
    r.color_calls_ref = stats_ref.color_calls;
    r.color_calls_test = stats_test.color_calls;
    r.density_calls_ref = stats_ref.density_calls;
    r.density_calls_test = stats_test.density_calls;
    if (stats_ref.color_calls > 0)
        r.color_call_ratio = static_cast<double>(stats_test.color_calls) / static_cast<double>(stats_ref.color_calls);
    else
        r.color_call_ratio = stats_test.color_calls == 0 ? 1.0 : std::numeric_limits<double>::infinity();
    r.wall_ms_ref = stats_ref.wall_ms();
    r.wall_ms_test = stats_test.wall_ms();
    return r;
}

std::string format_number(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return "nan";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

std::string format_csv_row(const CsvRow& row) {
    std::string out;
    out += row.scene + ',' + row.mode + ',' + std::to_string(row.n) + ',' + row.delta_t + ',';
    out += format_number(row.psnr_db) + ',' + format_number(row.ssim) + ',';
    out += std::to_string(row.color_calls) + ',' + std::to_string(row.density_calls) + ',';
    out += format_number(row.wall_ms);
    return out;
}

}  // namespace glvr
