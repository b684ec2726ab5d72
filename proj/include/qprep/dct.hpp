#pragma once
// Orthonormal 8x8 block DCT-II with uniform scalar quantization.

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <vector>

#include "qprep/errors.hpp"

namespace qprep {

inline constexpr std::size_t kDctBlock = 8;

// Row-major 8x8 tile of samples or coefficients.
using DctBlock = std::array<double, kDctBlock * kDctBlock>;

namespace detail {

// basis[u][x] = c(u) * cos((2x+1) u pi / 16); rows form an orthonormal set.
inline const std::array<std::array<double, kDctBlock>, kDctBlock>& dct_basis() {
    static const auto table = [] {
        std::array<std::array<double, kDctBlock>, kDctBlock> b{};
        const double pi = std::acos(-1.0);
        const double n = static_cast<double>(kDctBlock);
        for (std::size_t u = 0; u < kDctBlock; ++u) {
            const double scale = u == 0 ? std::sqrt(1.0 / n) : std::sqrt(2.0 / n);
            for (std::size_t x = 0; x < kDctBlock; ++x)
                b[u][x] = scale * std::cos((2.0 * static_cast<double>(x) + 1.0) *
                                           static_cast<double>(u) * pi / (2.0 * n));
        }
        return b;
    }();
    return table;
}

}  // namespace detail

// F[u][v] = sum_y sum_x f[y][x] basis[u][y] basis[v][x], accumulated in
// extended precision so the two separable passes stay well below 1e-12 of
// the exact transform.
inline DctBlock forward_dct_block(const DctBlock& spatial) {
    const auto& basis = detail::dct_basis();
    std::array<long double, kDctBlock * kDctBlock> rows{};
    for (std::size_t u = 0; u < kDctBlock; ++u) {
        for (std::size_t x = 0; x < kDctBlock; ++x) {
            long double acc = 0.0L;
            for (std::size_t y = 0; y < kDctBlock; ++y)
                acc += static_cast<long double>(basis[u][y]) * spatial[y * kDctBlock + x];
            rows[u * kDctBlock + x] = acc;
        }
    }
    DctBlock out{};
    for (std::size_t u = 0; u < kDctBlock; ++u) {
        for (std::size_t v = 0; v < kDctBlock; ++v) {
            long double acc = 0.0L;
            for (std::size_t x = 0; x < kDctBlock; ++x)
                acc += static_cast<long double>(basis[v][x]) * rows[u * kDctBlock + x];
            out[u * kDctBlock + v] = static_cast<double>(acc);
        }
    }
    return out;
}

// f[y][x] = sum_u sum_v F[u][v] basis[u][y] basis[v][x].
inline DctBlock inverse_dct_block(const DctBlock& coeffs) {
    const auto& basis = detail::dct_basis();
    std::array<long double, kDctBlock * kDctBlock> cols{};
    for (std::size_t u = 0; u < kDctBlock; ++u) {
        for (std::size_t x = 0; x < kDctBlock; ++x) {
            long double acc = 0.0L;
            for (std::size_t v = 0; v < kDctBlock; ++v)
                acc += static_cast<long double>(basis[v][x]) * coeffs[u * kDctBlock + v];
            cols[u * kDctBlock + x] = acc;
        }
    }
    DctBlock out{};
    for (std::size_t y = 0; y < kDctBlock; ++y) {
        for (std::size_t x = 0; x < kDctBlock; ++x) {
            long double acc = 0.0L;
            for (std::size_t u = 0; u < kDctBlock; ++u)
                acc += static_cast<long double>(basis[u][y]) * cols[u * kDctBlock + x];
            out[y * kDctBlock + x] = static_cast<double>(acc);
        }
    }
    return out;
}

struct RealGrid {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<double> values;

    double at(std::size_t y, std::size_t x) const { return values[y * width + x]; }
    double& at(std::size_t y, std::size_t x) { return values[y * width + x]; }
};

// Quantized coefficients tiled in 8x8 blocks; dimensions are multiples of 8.
struct CoefficientGrid {
    std::size_t width = 0;
    std::size_t height = 0;
    std::int32_t q_factor = 1;
    std::vector<std::int32_t> coeffs;

    std::int32_t at(std::size_t y, std::size_t x) const { return coeffs[y * width + x]; }
    bool operator==(const CoefficientGrid&) const = default;
};

// Pads to the next multiple of 8 in each dimension by repeating the last
// row/column.
inline RealGrid pad_to_block_multiple(const RealGrid& g) {
    if (g.width == 0 || g.height == 0) throw ArgumentError("grid dimensions must be positive");
    const std::size_t pw = (g.width + kDctBlock - 1) / kDctBlock * kDctBlock;
    const std::size_t ph = (g.height + kDctBlock - 1) / kDctBlock * kDctBlock;
    if (pw == g.width && ph == g.height) return g;
    RealGrid out{pw, ph, std::vector<double>(pw * ph)};
    for (std::size_t y = 0; y < ph; ++y) {
        const std::size_t sy = y < g.height ? y : g.height - 1;
        for (std::size_t x = 0; x < pw; ++x) {
            const std::size_t sx = x < g.width ? x : g.width - 1;
            out.at(y, x) = g.at(sy, sx);
        }
    }
    return out;
}

inline RealGrid forward_dct_grid(const RealGrid& grid) {
    const RealGrid src = pad_to_block_multiple(grid);
    RealGrid out{src.width, src.height, std::vector<double>(src.width * src.height)};
    DctBlock tile{};
    for (std::size_t by = 0; by < src.height; by += kDctBlock) {
        for (std::size_t bx = 0; bx < src.width; bx += kDctBlock) {
            for (std::size_t y = 0; y < kDctBlock; ++y)
                for (std::size_t x = 0; x < kDctBlock; ++x)
                    tile[y * kDctBlock + x] = src.at(by + y, bx + x);
            const DctBlock spectrum = forward_dct_block(tile);
            for (std::size_t y = 0; y < kDctBlock; ++y)
                for (std::size_t x = 0; x < kDctBlock; ++x)
                    out.at(by + y, bx + x) = spectrum[y * kDctBlock + x];
        }
    }
    return out;
}

inline RealGrid inverse_dct_grid(const RealGrid& grid) {
    if (grid.width == 0 || grid.height == 0 || grid.width % kDctBlock != 0 ||
        grid.height % kDctBlock != 0)
        throw ArgumentError("inverse_dct_grid expects dimensions that are multiples of 8");
    RealGrid out{grid.width, grid.height, std::vector<double>(grid.width * grid.height)};
    DctBlock tile{};
    for (std::size_t by = 0; by < grid.height; by += kDctBlock) {
        for (std::size_t bx = 0; bx < grid.width; bx += kDctBlock) {
            for (std::size_t y = 0; y < kDctBlock; ++y)
                for (std::size_t x = 0; x < kDctBlock; ++x)
                    tile[y * kDctBlock + x] = grid.at(by + y, bx + x);
            const DctBlock spatial = inverse_dct_block(tile);
            for (std::size_t y = 0; y < kDctBlock; ++y)
                for (std::size_t x = 0; x < kDctBlock; ++x)
                    out.at(by + y, bx + x) = spatial[y * kDctBlock + x];
        }
    }
    return out;
}

// Uniform scalar quantization, rounding halves away from zero.
inline CoefficientGrid quantize(const RealGrid& grid, std::int32_t q_factor) {
    if (q_factor < 1) throw ArgumentError("quantization factor must be >= 1");
    if (grid.width % kDctBlock != 0 || grid.height % kDctBlock != 0)
        throw ArgumentError("quantize expects dimensions that are multiples of 8");
    CoefficientGrid out{grid.width, grid.height, q_factor, {}};
    out.coeffs.reserve(grid.values.size());
    for (const double v : grid.values)
        out.coeffs.push_back(
            static_cast<std::int32_t>(std::llround(v / static_cast<double>(q_factor))));
    return out;
}

inline RealGrid dequantize(const CoefficientGrid& grid) {
    RealGrid out{grid.width, grid.height, {}};
    out.values.reserve(grid.coeffs.size());
    for (const std::int32_t c : grid.coeffs)
        out.values.push_back(static_cast<double>(c) * static_cast<double>(grid.q_factor));
    return out;
}

}  // namespace qprep
