#pragma once
// 8-bit raster images with bit-exact binary PGM (P5) / PPM (P6) io.

#include <cctype>
#include <cstdint>
#include <fstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qprep/errors.hpp"

namespace qprep {

class Image {
public:
    static constexpr int kDepth = 8;  // bits per sample

    Image(std::size_t width, std::size_t height, std::size_t channels,
          std::vector<std::uint8_t> samples)
        : width_(width), height_(height), channels_(channels), samples_(std::move(samples)) {
        if (width_ == 0 || height_ == 0)
            throw ArgumentError("image dimensions must be positive");
        if (channels_ != 1 && channels_ != 3)
            throw ArgumentError("image must have 1 (gray) or 3 (RGB) channels");
        if (samples_.size() != width_ * height_ * channels_)
            throw ArgumentError("sample count does not match width*height*channels");
    }

    std::size_t width() const { return width_; }
    std::size_t height() const { return height_; }
    std::size_t channels() const { return channels_; }

    // Samples are interleaved row-major: index = (y*width + x)*channels + c.
    std::uint8_t sample(std::size_t channel, std::size_t y, std::size_t x) const {
        return samples_[(y * width_ + x) * channels_ + channel];
    }
    const std::vector<std::uint8_t>& samples() const { return samples_; }

    bool operator==(const Image&) const = default;

private:
    std::size_t width_;
    std::size_t height_;
    std::size_t channels_;
    std::vector<std::uint8_t> samples_;
};

// Decodes a binary PGM (P5) or PPM (P6) buffer with maxval 255. Header
// whitespace may include '#' comments; exactly one whitespace byte separates
// the maxval from the pixel payload.
inline Image decode_netpbm(std::string_view bytes) {
    std::size_t pos = 0;
    auto fail = [](const std::string& msg, std::size_t at) {
        throw ParseError("netpbm: " + msg + " at byte " + std::to_string(at));
    };

    if (bytes.size() < 2 || bytes[0] != 'P') fail("missing P5/P6 magic", 0);
    std::size_t channels = 0;
    if (bytes[1] == '5')
        channels = 1;
    else if (bytes[1] == '6')
        channels = 3;
    else
        fail("magic must be P5 or P6", 1);
    pos = 2;

    auto skip_separators = [&]() {
        const std::size_t start = pos;
        while (pos < bytes.size()) {
            const unsigned char c = static_cast<unsigned char>(bytes[pos]);
            if (std::isspace(c)) {
                ++pos;
            } else if (c == '#') {
                while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
            } else {
                break;
            }
        }
        return pos > start;
    };
    auto read_header_uint = [&](const char* what) {
        if (!skip_separators()) fail(std::string("expected whitespace before ") + what, pos);
        const std::size_t start = pos;
        if (pos >= bytes.size() || !std::isdigit(static_cast<unsigned char>(bytes[pos])))
            fail(std::string("expected ") + what, pos);
        unsigned long long v = 0;
        while (pos < bytes.size() && std::isdigit(static_cast<unsigned char>(bytes[pos]))) {
            v = v * 10 + static_cast<unsigned long long>(bytes[pos] - '0');
            if (v > (1ull << 32)) fail(std::string(what) + " out of range", start);
            ++pos;
        }
        return v;
    };

    const unsigned long long width = read_header_uint("width");
    const unsigned long long height = read_header_uint("height");
    const std::size_t maxval_at = pos;
    const unsigned long long maxval = read_header_uint("maxval");
    if (width == 0 || height == 0) fail("image dimensions must be positive", 2);
    if (maxval != 255)
        throw UnsupportedError("netpbm: only 8-bit depth (maxval 255) is supported, got maxval " +
                               std::to_string(maxval) + " at byte " + std::to_string(maxval_at));

    if (pos >= bytes.size() || !std::isspace(static_cast<unsigned char>(bytes[pos])))
        fail("expected single whitespace after maxval", pos);
    ++pos;

    const std::size_t need = static_cast<std::size_t>(width * height * channels);
    if (bytes.size() - pos < need)
        throw ParseError("netpbm: truncated pixel payload at byte " + std::to_string(bytes.size()) +
                         ": need " + std::to_string(need) + " bytes, found " +
                         std::to_string(bytes.size() - pos));
    std::vector<std::uint8_t> samples(bytes.begin() + static_cast<std::ptrdiff_t>(pos),
                                      bytes.begin() + static_cast<std::ptrdiff_t>(pos + need));
    return Image(static_cast<std::size_t>(width), static_cast<std::size_t>(height), channels,
                 std::move(samples));
}

// Canonical encoding: "P5\n<w> <h>\n255\n" (or P6) followed by the raw payload.
inline std::string encode_netpbm(const Image& img) {
    std::string out = img.channels() == 1 ? "P5\n" : "P6\n";
    out += std::to_string(img.width());
    out += ' ';
    out += std::to_string(img.height());
    out += "\n255\n";
    out.append(reinterpret_cast<const char*>(img.samples().data()), img.samples().size());
    return out;
}

inline Image load_image(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open image file: " + path);
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return decode_netpbm(bytes);
}

inline void save_image(const Image& img, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open file for writing: " + path);
    const std::string bytes = encode_netpbm(img);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error("failed writing image file: " + path);
}

inline Image split_channel(const Image& img, std::size_t channel) {
    if (channel >= img.channels())
        throw ArgumentError("channel index " + std::to_string(channel) + " out of range for " +
                            std::to_string(img.channels()) + "-channel image");
    if (img.channels() == 1) return img;
    std::vector<std::uint8_t> plane(img.width() * img.height());
    for (std::size_t y = 0; y < img.height(); ++y)
        for (std::size_t x = 0; x < img.width(); ++x)
            plane[y * img.width() + x] = img.sample(channel, y, x);
    return Image(img.width(), img.height(), 1, std::move(plane));
}

inline Image merge_channels(const Image& r, const Image& g, const Image& b) {
    if (r.channels() != 1 || g.channels() != 1 || b.channels() != 1)
        throw ArgumentError("merge_channels expects single-channel planes");
    if (r.width() != g.width() || r.width() != b.width() || r.height() != g.height() ||
        r.height() != b.height())
        throw ArgumentError("merge_channels expects equal plane dimensions");
    std::vector<std::uint8_t> samples(r.width() * r.height() * 3);
    for (std::size_t y = 0; y < r.height(); ++y) {
        for (std::size_t x = 0; x < r.width(); ++x) {
            const std::size_t at = (y * r.width() + x) * 3;
            samples[at + 0] = r.sample(0, y, x);
            samples[at + 1] = g.sample(0, y, x);
            samples[at + 2] = b.sample(0, y, x);
        }
    }
    return Image(r.width(), r.height(), 3, std::move(samples));
}

}  // namespace qprep
