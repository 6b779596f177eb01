#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "glvr/vec.hpp"

namespace glvr {

// Row-major linear RGB image, top row first, channels in [0, 1].
class ImageBuffer {
public:
    ImageBuffer() = default;
    ImageBuffer(int width, int height, Rgb fill = {});

    int width() const { return width_; }
    int height() const { return height_; }
    std::size_t pixel_count() const { return static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_); }

    Rgb at(int x, int y) const;
    void set(int x, int y, const Rgb& c);
    std::span<const double> data() const { return data_; }
    std::span<double> data() { return data_; }

    bool operator==(const ImageBuffer&) const = default;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<double> data_;
};

// round(255 * clamp(v)); no gamma is applied.
std::uint8_t to_byte(double v);

// Binary P6 PPM, 8 bits per channel.
std::vector<std::uint8_t> encode_ppm(const ImageBuffer& image);
ImageBuffer decode_ppm(std::span<const std::uint8_t> bytes);
void write_ppm(const std::filesystem::path& path, const ImageBuffer& image);

bool png_supported();
void write_png(const std::filesystem::path& path, const ImageBuffer& image);

// Picks the encoder from the extension (.ppm, or .png when available).
void write_image(const std::filesystem::path& path, const ImageBuffer& image);

}  // namespace glvr
