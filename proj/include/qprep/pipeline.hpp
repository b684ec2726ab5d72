#pragma once
// End-to-end runs: per channel (and per quantization factor in DCT mode)
// build the block value maps, account bits for each scheme, reconstruct, and
// measure PSNR. Small blocks can additionally be pushed through the
// simulator to check that the prepared state really encodes them.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qprep/circuit.hpp"
#include "qprep/dct.hpp"
#include "qprep/encoders.hpp"
#include "qprep/errors.hpp"
#include "qprep/image.hpp"
#include "qprep/metrics.hpp"
#include "qprep/simulator.hpp"

namespace qprep {

enum class RunMode { Direct, Dct };

struct RunConfig {
    RunMode mode = RunMode::Direct;
    std::vector<Scheme> schemes = {Scheme::Scmfrqi, Scheme::Efrqi};
    std::vector<std::int32_t> q_factors;  // DCT mode only
    std::size_t block_size = 4;           // S
    bool simulate = false;                // run block-level simulation checks
    std::size_t verify_blocks = 8;        // sampled blocks per channel run
    std::string image_label = "image";
    std::string csv_path;
    std::string dump_circuit_path;
    std::string dump_coeffs_path;
};

inline std::string channel_label(std::size_t index, std::size_t channels) {
    if (channels == 1) return "gray";
    static constexpr const char* rgb[] = {"R", "G", "B"};
    return rgb[index];
}

inline constexpr double kLevelShift = 128.0;

struct BlockDecomposition {
    std::size_t grid_blocks_x = 0;
    std::size_t grid_blocks_y = 0;
    std::size_t padded_width = 0;
    std::size_t padded_height = 0;
    std::vector<PlacedValueMap> maps;  // blocks with >= 1 nonzero, row-major block order
};

// Splits a padded integer grid into S x S value maps, skipping zero samples
// and all-zero blocks.
inline BlockDecomposition decompose_grid(const std::vector<std::int32_t>& values,
                                         std::size_t width, std::size_t height,
                                         std::size_t block_size, std::size_t magnitude_bits) {
    if (block_size < 2 || !std::has_single_bit(block_size))
        throw ArgumentError("block size must be a power of two >= 2");
    if (width == 0 || height == 0 || width % block_size != 0 || height % block_size != 0)
        throw ArgumentError("grid dimensions must be positive multiples of the block size");
    if (values.size() != width * height)
        throw ArgumentError("value count does not match grid dimensions");

    BlockDecomposition out;
    out.padded_width = width;
    out.padded_height = height;
    out.grid_blocks_x = width / block_size;
    out.grid_blocks_y = height / block_size;
    for (std::size_t by = 0; by < out.grid_blocks_y; ++by) {
        for (std::size_t bx = 0; bx < out.grid_blocks_x; ++bx) {
            ValueMap vm{block_size, magnitude_bits, {}};
            for (std::size_t y = 0; y < block_size; ++y) {
                for (std::size_t x = 0; x < block_size; ++x) {
                    const std::int32_t v =
                        values[(by * block_size + y) * width + bx * block_size + x];
                    if (v != 0) vm.entries.push_back({y, x, v});
                }
            }
            if (!vm.entries.empty()) out.maps.push_back({by, bx, std::move(vm)});
        }
    }
    return out;
}

namespace detail {

inline std::size_t pow2_at_least(std::size_t v, std::size_t floor_value) {
    return std::bit_ceil(std::max(v, floor_value));
}

inline void check_config(const RunConfig& cfg) {
    if (cfg.schemes.empty()) throw ArgumentError("run config selects no scheme");
    if (cfg.block_size < 2 || !std::has_single_bit(cfg.block_size))
        throw ArgumentError("block size must be a power of two >= 2");
}

// Zero-pads a gray channel to power-of-two dimensions (at least `floor_dim`)
// and level-shifts samples by -128.
inline RealGrid padded_shifted_grid(const Image& gray, std::size_t floor_dim) {
    const std::size_t pw = pow2_at_least(gray.width(), floor_dim);
    const std::size_t ph = pow2_at_least(gray.height(), floor_dim);
    RealGrid grid{pw, ph, std::vector<double>(pw * ph, -kLevelShift)};
    for (std::size_t y = 0; y < gray.height(); ++y)
        for (std::size_t x = 0; x < gray.width(); ++x)
            grid.at(y, x) = static_cast<double>(gray.sample(0, y, x)) - kLevelShift;
    return grid;
}

inline std::size_t minimal_magnitude_bits(const CoefficientGrid& grid) {
    std::uint64_t max_abs = 0;
    for (const std::int32_t c : grid.coeffs)
        max_abs = std::max(max_abs,
                           static_cast<std::uint64_t>(std::llabs(static_cast<std::int64_t>(c))));
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::bit_width(max_abs)));
}

}  // namespace detail

// Forward path of the DCT mode for one gray channel at one step size.
inline CoefficientGrid compute_quantized_coefficients(const Image& gray, std::int32_t q_factor,
                                                      std::size_t block_size) {
    const RealGrid shifted =
        detail::padded_shifted_grid(gray, std::max<std::size_t>(block_size, kDctBlock));
    return quantize(forward_dct_grid(shifted), q_factor);
}

// Inverse path: dequantize, inverse transform, undo the level shift, clamp
// to [0, 255], and crop the zero-padding back off.
inline Image reconstruct_channel(const CoefficientGrid& grid, std::size_t width,
                                 std::size_t height) {
    if (width > grid.width || height > grid.height)
        throw ArgumentError("reconstruction target exceeds the coefficient grid");
    const RealGrid spatial = inverse_dct_grid(dequantize(grid));
    std::vector<std::uint8_t> samples(width * height);
    for (std::size_t y = 0; y < height; ++y) {
        for (std::size_t x = 0; x < width; ++x) {
            const long v = std::lround(spatial.at(y, x) + kLevelShift);
            samples[y * width + x] = static_cast<std::uint8_t>(std::clamp(v, 0L, 255L));
        }
    }
    return Image(width, height, 1, std::move(samples));
}

inline std::vector<RatePoint> run_direct(const Image& img, const RunConfig& cfg) {
    detail::check_config(cfg);
    const std::size_t S = cfg.block_size;
    std::vector<RatePoint> points;
    for (std::size_t ch = 0; ch < img.channels(); ++ch) {
        const Image gray = split_channel(img, ch);
        const std::size_t pw = detail::pow2_at_least(gray.width(), S);
        const std::size_t ph = detail::pow2_at_least(gray.height(), S);
        std::vector<std::int32_t> grid(pw * ph, 0);
        for (std::size_t y = 0; y < gray.height(); ++y)
            for (std::size_t x = 0; x < gray.width(); ++x)
                grid[y * pw + x] = gray.sample(0, y, x);
        const BlockDecomposition dec = decompose_grid(grid, pw, ph, S, Image::kDepth);
        for (const Scheme scheme : cfg.schemes) {
            RatePoint p;
            p.image = cfg.image_label;
            p.channel = channel_label(ch, img.channels());
            p.scheme = scheme;
            p.q_factor = 0;
            p.psnr_db = std::numeric_limits<double>::infinity();
            p.value_bits = Image::kDepth;
            p.cost = bit_rate(dec.maps, scheme, dec.grid_blocks_x, dec.grid_blocks_y);
            points.push_back(std::move(p));
        }
    }
    return points;
}

inline std::vector<RatePoint> run_dct(const Image& img, const RunConfig& cfg) {
    detail::check_config(cfg);
    if (cfg.q_factors.empty()) throw ArgumentError("DCT mode requires at least one q factor");
    const std::size_t S = cfg.block_size;
    std::vector<RatePoint> points;
    for (std::size_t ch = 0; ch < img.channels(); ++ch) {
        const Image gray = split_channel(img, ch);
        const RealGrid spectrum = forward_dct_grid(
            detail::padded_shifted_grid(gray, std::max<std::size_t>(S, kDctBlock)));
        for (const std::int32_t q_factor : cfg.q_factors) {
            const CoefficientGrid quantized = quantize(spectrum, q_factor);
            const std::size_t q_bits = detail::minimal_magnitude_bits(quantized);
            const BlockDecomposition dec =
                decompose_grid(quantized.coeffs, quantized.width, quantized.height, S, q_bits);
            const Image recon = reconstruct_channel(quantized, gray.width(), gray.height());
            const double quality = psnr(gray, recon);
            for (const Scheme scheme : cfg.schemes) {
                RatePoint p;
                p.image = cfg.image_label;
                p.channel = channel_label(ch, img.channels());
                p.scheme = scheme;
                p.q_factor = q_factor;
                p.psnr_db = quality;
                p.value_bits = q_bits;
                p.cost = bit_rate(dec.maps, scheme, dec.grid_blocks_x, dec.grid_blocks_y);
                points.push_back(std::move(p));
            }
        }
    }
    return points;
}

struct VerifyResult {
    bool pass = false;
    double fidelity = 0.0;       // physical-reset state vs the idealized one
    std::size_t branches = 0;    // branch count of the physical-reset run
    std::string message;
};

namespace detail {

inline bool same_entries(std::vector<MapEntry> a, std::vector<MapEntry> b) {
    auto order = [](const MapEntry& l, const MapEntry& r) {
        return l.y != r.y ? l.y < r.y : l.x < r.x;
    };
    std::sort(a.begin(), a.end(), order);
    std::sort(b.begin(), b.end(), order);
    return a == b;
}

}  // namespace detail

// Builds the preparation circuit for one value map, runs it with the
// idealized reset, and checks the extracted map; the cost report is also
// cross-checked against the circuit's gate tallies. A physical-reset run
// reports the fidelity penalty of measuring the auxiliary instead.
inline VerifyResult verify_map(const ValueMap& vm, Scheme scheme) {
    VerifyResult result;
    try {
        const Circuit circuit = build_circuit(vm, scheme);
        const EnsembleState ideal = run_circuit(circuit, ResetMode::Idealized);
        const ExtractedMap extracted = extract_map(ideal);
        if (!detail::same_entries(extracted.entries, vm.entries)) {
            result.message = "extracted map differs from the encoded one";
            return result;
        }

        const GateTally tally = count_gates(circuit);
        const CostReport cost = bit_rate({{0, 0, vm}}, scheme, 1, 1);
        const std::size_t n2 = 2 * vm.position_bits();
        std::uint64_t position_mcx = 0;
        if (auto it = tally.mcx_by_controls.find(n2); it != tally.mcx_by_controls.end())
            position_mcx = it->second;
        std::uint64_t magnitude_mcx = 0;
        for (const Gate& g : circuit.gates())
            if (g.kind == GateKind::Mcx && g.controls.size() == 1 &&
                g.target < vm.magnitude_bits)
                ++magnitude_mcx;
        if (cost.t_bit != (n2 + 2) * position_mcx || cost.a_bit != tally.reset ||
            cost.q_ones != magnitude_mcx) {
            result.message = "cost report disagrees with the circuit gate counts";
            return result;
        }

        const EnsembleState physical = run_circuit(circuit, ResetMode::Physical);
        result.fidelity = fidelity_report(ideal, physical);
        result.branches = physical.branches.size();
        result.pass = true;
        result.message = "ok";
    } catch (const Error& e) {
        result.message = e.what();
    }
    return result;
}

// `region` holds S x S row-major sample or coefficient values. A magnitude
// width of 0 selects the minimal width covering the largest |value|.
inline VerifyResult verify_by_simulation(const std::vector<std::int32_t>& region,
                                         std::size_t block_size, Scheme scheme,
                                         std::size_t magnitude_bits = 0) {
    if (region.size() != block_size * block_size)
        throw ArgumentError("region size does not match the block size");
    std::uint64_t max_abs = 0;
    ValueMap vm{block_size, 1, {}};
    for (std::size_t y = 0; y < block_size; ++y) {
        for (std::size_t x = 0; x < block_size; ++x) {
            const std::int32_t v = region[y * block_size + x];
            if (v == 0) continue;
            vm.entries.push_back({y, x, v});
            max_abs = std::max(
                max_abs, static_cast<std::uint64_t>(std::llabs(static_cast<std::int64_t>(v))));
        }
    }
    vm.magnitude_bits =
        magnitude_bits != 0
            ? magnitude_bits
            : std::max<std::size_t>(1, static_cast<std::size_t>(std::bit_width(max_abs)));
    return verify_map(vm, scheme);
}

struct VerifyRecord {
    std::string channel;
    Scheme scheme = Scheme::Scmfrqi;
    std::int32_t q_factor = 0;
    std::size_t block_y = 0;
    std::size_t block_x = 0;
    VerifyResult result;
};

namespace detail {

inline void verify_sampled(const BlockDecomposition& dec, const RunConfig& cfg,
                           const std::string& channel, std::int32_t q_factor,
                           std::size_t magnitude_bits, std::vector<VerifyRecord>& records) {
    if (dec.maps.empty()) {
        // Nothing nonzero anywhere: one trivially-passing empty block.
        const ValueMap empty{cfg.block_size, magnitude_bits, {}};
        for (const Scheme scheme : cfg.schemes)
            records.push_back({channel, scheme, q_factor, 0, 0, verify_map(empty, scheme)});
        return;
    }
    const std::size_t count = std::min(cfg.verify_blocks, dec.maps.size());
    for (std::size_t i = 0; i < count; ++i) {
        const PlacedValueMap& placed = dec.maps[i * dec.maps.size() / count];
        for (const Scheme scheme : cfg.schemes)
            records.push_back({channel, scheme, q_factor, placed.block_y, placed.block_x,
                               verify_map(placed.map, scheme)});
    }
}

}  // namespace detail

// Simulation verification over a sample of blocks (cfg.verify_blocks per
// channel run); accounting itself always covers all blocks.
inline std::vector<VerifyRecord> verify_run(const Image& img, const RunConfig& cfg) {
    detail::check_config(cfg);
    std::vector<VerifyRecord> records;
    const std::size_t S = cfg.block_size;
    for (std::size_t ch = 0; ch < img.channels(); ++ch) {
        const Image gray = split_channel(img, ch);
        const std::string label = channel_label(ch, img.channels());
        if (cfg.mode == RunMode::Direct) {
            const std::size_t pw = detail::pow2_at_least(gray.width(), S);
            const std::size_t ph = detail::pow2_at_least(gray.height(), S);
            std::vector<std::int32_t> grid(pw * ph, 0);
            for (std::size_t y = 0; y < gray.height(); ++y)
                for (std::size_t x = 0; x < gray.width(); ++x)
                    grid[y * pw + x] = gray.sample(0, y, x);
            detail::verify_sampled(decompose_grid(grid, pw, ph, S, Image::kDepth), cfg, label, 0,
                                   Image::kDepth, records);
        } else {
            if (cfg.q_factors.empty())
                throw ArgumentError("DCT mode requires at least one q factor");
            for (const std::int32_t q_factor : cfg.q_factors) {
                const CoefficientGrid quantized =
                    compute_quantized_coefficients(gray, q_factor, S);
                const std::size_t q_bits = detail::minimal_magnitude_bits(quantized);
                detail::verify_sampled(
                    decompose_grid(quantized.coeffs, quantized.width, quantized.height, S,
                                   q_bits),
                    cfg, label, q_factor, q_bits, records);
            }
        }
    }
    return records;
}

// First nonzero block of the first channel (and first q factor in DCT mode),
// encoded with the first selected scheme; used by the circuit-dump output.
inline std::optional<Circuit> representative_circuit(const Image& img, const RunConfig& cfg) {
    detail::check_config(cfg);
    const Image gray = split_channel(img, 0);
    const std::size_t S = cfg.block_size;
    BlockDecomposition dec;
    std::size_t q_bits = Image::kDepth;
    if (cfg.mode == RunMode::Direct) {
        const std::size_t pw = detail::pow2_at_least(gray.width(), S);
        const std::size_t ph = detail::pow2_at_least(gray.height(), S);
        std::vector<std::int32_t> grid(pw * ph, 0);
        for (std::size_t y = 0; y < gray.height(); ++y)
            for (std::size_t x = 0; x < gray.width(); ++x)
                grid[y * pw + x] = gray.sample(0, y, x);
        dec = decompose_grid(grid, pw, ph, S, q_bits);
    } else {
        if (cfg.q_factors.empty())
            throw ArgumentError("DCT mode requires at least one q factor");
        const CoefficientGrid quantized =
            compute_quantized_coefficients(gray, cfg.q_factors.front(), S);
        q_bits = detail::minimal_magnitude_bits(quantized);
        dec = decompose_grid(quantized.coeffs, quantized.width, quantized.height, S, q_bits);
    }
    if (dec.maps.empty()) return std::nullopt;
    return build_circuit(dec.maps.front().map, cfg.schemes.front());
}

inline std::string coefficients_to_json(const CoefficientGrid& grid) {
    nlohmann::json j;
    j["width"] = grid.width;
    j["height"] = grid.height;
    j["q_factor"] = grid.q_factor;
    j["coeffs"] = grid.coeffs;
    return j.dump(2) + "\n";
}

inline CoefficientGrid coefficients_from_json(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    CoefficientGrid grid;
    grid.width = j.at("width").get<std::size_t>();
    grid.height = j.at("height").get<std::size_t>();
    grid.q_factor = j.at("q_factor").get<std::int32_t>();
    grid.coeffs = j.at("coeffs").get<std::vector<std::int32_t>>();
    if (grid.coeffs.size() != grid.width * grid.height)
        throw ParseError("coefficient dump: coeffs length does not match width*height");
    return grid;
}

}  // namespace qprep
