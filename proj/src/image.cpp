#include "glvr/image.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include "glvr/error.hpp"

#if defined(GLVR_HAVE_PNG)
#include <png.h>
#endif

namespace glvr {

ImageBuffer::ImageBuffer(int width, int height, Rgb fill) : width_(width), height_(height) {
    if (width < 0 || height < 0) throw UsageError("image dimensions must be non-negative");
    data_.resize(pixel_count() * 3);
    for (std::size_t i = 0; i < pixel_count(); ++i) {
        data_[3 * i] = fill.r;
        data_[3 * i + 1] = fill.g;
        data_[3 * i + 2] = fill.b;
    }
}

Rgb ImageBuffer::at(int x, int y) const {
    const std::size_t i = 3 * (static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x));
    return {data_[i], data_[i + 1], data_[i + 2]};
}

void ImageBuffer::set(int x, int y, const Rgb& c) {
    const std::size_t i = 3 * (static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x));
    data_[i] = c.r;
    data_[i + 1] = c.g;
    data_[i + 2] = c.b;
}

std::uint8_t to_byte(double v) { return static_cast<std::uint8_t>(std::lround(255.0 * clamp01(v))); }

std::vector<std::uint8_t> encode_ppm(const ImageBuffer& image) {
    const std::string header =
        "P6\n" + std::to_string(image.width()) + " " + std::to_string(image.height()) + "\n255\n";
    std::vector<std::uint8_t> out(header.begin(), header.end());
    out.reserve(header.size() + image.data().size());
    for (double v : image.data()) out.push_back(to_byte(v));
    return out;
}

ImageBuffer decode_ppm(std::span<const std::uint8_t> bytes) {
    std::size_t pos = 0;
    auto token = [&]() {
        while (pos < bytes.size()) {
            if (bytes[pos] == '#') {
                while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
            } else if (std::isspace(bytes[pos])) {
                ++pos;
            } else {
                break;
            }
        }
        std::string t;
        while (pos < bytes.size() && !std::isspace(bytes[pos])) t.push_back(static_cast<char>(bytes[pos++]));
        return t;
    };
    if (token() != "P6") throw ConfigError("not a binary PPM (P6) image");
    int w = 0, h = 0, maxval = 0;
    try {
        w = std::stoi(token());
        h = std::stoi(token());
        maxval = std::stoi(token());
    } catch (const std::exception&) {
        throw ConfigError("malformed PPM header");
    }
    if (maxval != 255 || w < 0 || h < 0) throw ConfigError("only 8-bit PPM images are supported");
    ++pos;  // single whitespace after maxval
    ImageBuffer img(w, h);
    auto data = img.data();
    if (bytes.size() - pos < data.size()) throw ConfigError("truncated PPM pixel data");
    for (std::size_t i = 0; i < data.size(); ++i) data[i] = bytes[pos + i] / 255.0;
    return img;
}

void write_ppm(const std::filesystem::path& path, const ImageBuffer& image) {
    const auto bytes = encode_ppm(image);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("failed writing '" + path.string() + "'");
}

bool png_supported() {
#if defined(GLVR_HAVE_PNG)
    return true;
#else
    return false;
#endif
}

void write_png(const std::filesystem::path& path, const ImageBuffer& image) {
#if defined(GLVR_HAVE_PNG)
    png_image png{};
    png.version = PNG_IMAGE_VERSION;
    png.width = static_cast<png_uint_32>(image.width());
    png.height = static_cast<png_uint_32>(image.height());
    png.format = PNG_FORMAT_RGB;
    std::vector<std::uint8_t> bytes;
    bytes.reserve(image.data().size());
    for (double v : image.data()) bytes.push_back(to_byte(v));
    if (!png_image_write_to_file(&png, path.string().c_str(), 0, bytes.data(), 0, nullptr))
        throw IoError("failed writing '" + path.string() + "': " + png.message);
#else
    throw UsageError("PNG output is not available in this build; use .ppm ('" + path.string() + "')");
#endif
}

void write_image(const std::filesystem::path& path, const ImageBuffer& image) {
    const std::string ext = path.extension().string();
    if (ext == ".ppm") return write_ppm(path, image);
    if (ext == ".png") return write_png(path, image);
    throw UsageError("unsupported output extension '" + ext + "' (use .ppm or .png)");
}

}  // namespace glvr
