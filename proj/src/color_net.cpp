#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <string>

#include "binary_io.hpp"
#include "glvr/error.hpp"
#include "glvr/field.hpp"
#include "glvr/kernels.hpp"

namespace glvr {

namespace {

constexpr std::uint32_t kNetVersion = 1;

// [v, sin(2^k pi v), cos(2^k pi v)] for k < kEncodingBands, per component.
std::size_t encode(const Vec3& v, bool bands, float* out) {
    std::size_t n = 0;
    for (int a = 0; a < 3; ++a) out[n++] = static_cast<float>(v[a]);
    if (!bands) return n;
    for (int k = 0; k < ColorNet::kEncodingBands; ++k) {
        const double freq = std::ldexp(std::numbers::pi, k);
        for (int a = 0; a < 3; ++a) {
            out[n++] = static_cast<float>(std::sin(freq * v[a]));
            out[n++] = static_cast<float>(std::cos(freq * v[a]));
        }
    }
    return n;
}

float sigmoid(float x) { return 1.0f / (1.0f + std::exp(-x)); }

}  // namespace

ColorNet::ColorNet(std::vector<DenseLayer> layers) : layers_(std::move(layers)) {
    if (layers_.empty()) throw ConfigError("color net needs at least one layer");
    const std::uint32_t in = layers_.front().cols;
    if (in != kRawInputs && in != kEncodedInputs)
        throw ConfigError("color net input width must be " + std::to_string(kRawInputs) + " or " +
                          std::to_string(kEncodedInputs) + ", got " + std::to_string(in));
    for (std::size_t i = 0; i < layers_.size(); ++i) {
        const DenseLayer& l = layers_[i];
        const std::string where = "color net layer " + std::to_string(i);
        if (l.rows == 0 || l.cols == 0) throw ConfigError(where + " has a zero dimension");
        if (l.weights.size() != static_cast<std::size_t>(l.rows) * l.cols)
            throw ConfigError(where + " weight count does not match rows x cols");
        if (l.bias.size() != l.rows) throw ConfigError(where + " bias count does not match rows");
        if (i > 0 && l.cols != layers_[i - 1].rows)
            throw ConfigError(where + " expects " + std::to_string(l.cols) + " inputs but previous layer has " +
                              std::to_string(layers_[i - 1].rows) + " outputs");
        widest_ = std::max({widest_, l.rows, l.cols});
    }
    if (layers_.back().rows != 3) throw ConfigError("color net output dimension must be 3");
}

Rgb ColorNet::forward(const Vec3& p, const Vec3& dir) const {
    thread_local std::vector<float> a, b;
    const std::size_t width = std::max<std::size_t>(widest_, kEncodedInputs);
    if (a.size() < width) {
        a.resize(width);
        b.resize(width);
    }
    const bool bands = positional_encoding();
    std::size_t n = encode(p, bands, a.data());
    n += encode(dir, bands, a.data() + n);

    float* in = a.data();
    float* out = b.data();
    for (std::size_t i = 0; i < layers_.size(); ++i) {
        const DenseLayer& l = layers_[i];
        kernels::dense_forward(l.weights, l.bias, std::span<const float>(in, n), std::span<float>(out, l.rows));
        n = l.rows;
        if (i + 1 < layers_.size())
            for (std::size_t j = 0; j < n; ++j) out[j] = std::max(out[j], 0.0f);
        std::swap(in, out);
    }
    return {sigmoid(in[0]), sigmoid(in[1]), sigmoid(in[2])};
}

ColorNet ColorNet::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open color net file '" + path.string() + "'");
    const std::string name = path.string();
    detail::expect_magic(in, "GLNN", name);
    const auto version = detail::read_le<std::uint32_t>(in, name + " version");
    if (version != kNetVersion) throw ConfigError(name + ": unsupported color net version " + std::to_string(version));
    const auto count = detail::read_le<std::uint32_t>(in, name + " layer count");
    if (count == 0 || count > 256) throw ConfigError(name + ": implausible layer count " + std::to_string(count));
    std::vector<DenseLayer> layers(count);
    for (DenseLayer& l : layers) {
        l.rows = detail::read_le<std::uint32_t>(in, name + " layer rows");
        l.cols = detail::read_le<std::uint32_t>(in, name + " layer cols");
        if (l.rows == 0 || l.cols == 0 || l.rows > 65536 || l.cols > 65536)
            throw ConfigError(name + ": implausible layer shape");
        l.weights.resize(static_cast<std::size_t>(l.rows) * l.cols);
        for (float& w : l.weights) w = detail::read_le<float>(in, name + " weights");
        l.bias.resize(l.rows);
        for (float& v : l.bias) v = detail::read_le<float>(in, name + " biases");
    }
    if (in.peek() != std::char_traits<char>::eof()) throw ConfigError(name + ": trailing bytes after last layer");
    try {
        return ColorNet(std::move(layers));
    } catch (const ConfigError& e) {
        throw ConfigError(name + ": " + e.what());
    }
}

void ColorNet::save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write color net file '" + path.string() + "'");
    out.write("GLNN", 4);
    detail::write_le<std::uint32_t>(out, kNetVersion);
    detail::write_le<std::uint32_t>(out, static_cast<std::uint32_t>(layers_.size()));
    for (const DenseLayer& l : layers_) {
        detail::write_le<std::uint32_t>(out, l.rows);
        detail::write_le<std::uint32_t>(out, l.cols);
        for (float w : l.weights) detail::write_le<float>(out, w);
        for (float v : l.bias) detail::write_le<float>(out, v);
    }
    if (!out) throw IoError("failed writing color net file '" + path.string() + "'");
}

ColorNet ColorNet::random(std::uint64_t seed, std::span<const std::uint32_t> hidden, bool encoding) {
    std::mt19937_64 rng(seed);
    // Uniform in [-1, 1) from the top 53 bits; std distributions are not
    // portable across standard libraries.
    const auto uniform = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-52 - 1.0; };
    std::vector<DenseLayer> layers;
    std::uint32_t in = encoding ? kEncodedInputs : kRawInputs;
    std::vector<std::uint32_t> widths(hidden.begin(), hidden.end());
    widths.push_back(3);
    for (std::uint32_t out : widths) {
        DenseLayer l;
        l.rows = out;
        l.cols = in;
        const double bound = std::sqrt(6.0 / in);
        l.weights.resize(static_cast<std::size_t>(out) * in);
        for (float& w : l.weights) w = static_cast<float>(bound * uniform());
        l.bias.resize(out);
        for (float& b : l.bias) b = static_cast<float>(0.1 * uniform());
        layers.push_back(std::move(l));
        in = out;
    }
    return ColorNet(std::move(layers));
}

}  // namespace glvr
