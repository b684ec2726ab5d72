#pragma once
// Shared test fixtures: deterministic synthetic corpus images, random map
// generators, and independent oracles (brute-force DCT, target-state
// construction, gate-count based cost accounting).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <random>
#include <vector>

#include "qprep/circuit.hpp"
#include "qprep/dct.hpp"
#include "qprep/encoders.hpp"
#include "qprep/image.hpp"
#include "qprep/pipeline.hpp"
#include "qprep/simulator.hpp"

namespace testsupport {

// --- synthetic corpus -------------------------------------------------------

inline std::uint8_t clamp_u8(double v) {
    return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
}

// Smooth gradient plus sinusoidal texture plus mild seeded jitter.
inline qprep::Image gradient_texture(std::size_t w, std::size_t h, std::uint32_t seed) {
    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> jitter(-6, 6);
    std::vector<std::uint8_t> samples(w * h);
    for (std::size_t y = 0; y < h; ++y) {
        for (std::size_t x = 0; x < w; ++x) {
            const double grad =
                40.0 + 160.0 * (static_cast<double>(x + y) / static_cast<double>(w + h));
            const double wave = 24.0 * std::sin(2.0 * std::numbers::pi * static_cast<double>(x) / 37.0) *
                                std::cos(2.0 * std::numbers::pi * static_cast<double>(y) / 29.0);
            samples[y * w + x] = clamp_u8(grad + wave + jitter(rng));
        }
    }
    return qprep::Image(w, h, 1, std::move(samples));
}

// Broadband color texture: smooth fields, incommensurate mid-frequency
// detail, and enough jitter that every coarser quantization step kills a
// fresh population of coefficients.
inline qprep::Image rgb_texture(std::size_t w, std::size_t h, std::uint32_t seed) {
    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> jitter(-35, 35);
    std::vector<std::uint8_t> samples(w * h * 3);
    for (std::size_t y = 0; y < h; ++y) {
        for (std::size_t x = 0; x < w; ++x) {
            const double fx = static_cast<double>(x) / static_cast<double>(w);
            const double fy = static_cast<double>(y) / static_cast<double>(h);
            const double xd = static_cast<double>(x);
            const double yd = static_cast<double>(y);
            const double two_pi = 2.0 * std::numbers::pi;
            const double base[3] = {
                96.0 + 80.0 * std::sin(two_pi * (fx + 0.15 * fy)) +
                    22.0 * std::sin(two_pi * xd / 9.7) * std::cos(two_pi * yd / 7.3),
                128.0 + 64.0 * std::cos(two_pi * (fy + 0.2 * fx)) +
                    18.0 * std::sin(two_pi * xd / 6.1 + 1.3) * std::sin(two_pi * yd / 11.4),
                80.0 + 110.0 * fx * fy +
                    20.0 * std::cos(two_pi * xd / 8.3) * std::sin(two_pi * yd / 5.9),
            };
            for (std::size_t c = 0; c < 3; ++c)
                samples[(y * w + x) * 3 + c] = clamp_u8(base[c] + jitter(rng));
        }
    }
    return qprep::Image(w, h, 3, std::move(samples));
}

// Mostly-zero image with scattered bright pixels.
inline qprep::Image sparse_dots(std::size_t w, std::size_t h, std::uint32_t seed,
                                double density = 0.03) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::uniform_int_distribution<int> bright(30, 255);
    std::vector<std::uint8_t> samples(w * h, 0);
    for (auto& s : samples)
        if (coin(rng) < density) s = static_cast<std::uint8_t>(bright(rng));
    return qprep::Image(w, h, 1, std::move(samples));
}

// The 16x16 worked example: a single pixel of value 5 at (0,0).
inline qprep::Image single_pixel_16x16() {
    std::vector<std::uint8_t> samples(16 * 16, 0);
    samples[0] = 5;
    return qprep::Image(16, 16, 1, std::move(samples));
}

// --- random generators ------------------------------------------------------

inline qprep::ValueMap random_value_map(std::mt19937& rng, std::size_t block_size,
                                        std::size_t magnitude_bits, std::size_t min_entries,
                                        std::size_t max_entries, bool signed_values) {
    std::vector<std::size_t> positions(block_size * block_size);
    std::iota(positions.begin(), positions.end(), 0);
    std::shuffle(positions.begin(), positions.end(), rng);
    std::uniform_int_distribution<std::size_t> count(min_entries, max_entries);
    std::uniform_int_distribution<std::int32_t> magnitude(
        1, (std::int32_t{1} << magnitude_bits) - 1);
    std::bernoulli_distribution flip(0.5);

    qprep::ValueMap vm{block_size, magnitude_bits, {}};
    const std::size_t k = std::min(count(rng), positions.size());
    for (std::size_t i = 0; i < k; ++i) {
        std::int32_t v = magnitude(rng);
        if (signed_values && flip(rng)) v = -v;
        vm.entries.push_back({positions[i] / block_size, positions[i] % block_size, v});
    }
    return vm;
}

// Sparse signed sample grid, for block decomposition into placed value maps.
inline std::vector<std::int32_t> random_sparse_grid(std::mt19937& rng, std::size_t w,
                                                    std::size_t h, std::size_t magnitude_bits,
                                                    double density) {
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::uniform_int_distribution<std::int32_t> magnitude(
        1, (std::int32_t{1} << magnitude_bits) - 1);
    std::bernoulli_distribution flip(0.5);
    std::vector<std::int32_t> grid(w * h, 0);
    for (auto& v : grid)
        if (coin(rng) < density) v = flip(rng) ? -magnitude(rng) : magnitude(rng);
    return grid;
}

inline qprep::Circuit random_circuit(std::mt19937& rng) {
    std::uniform_int_distribution<std::size_t> vq(1, 4), pq(0, 3);
    const qprep::RegisterLayout layout{vq(rng), pq(rng)};
    qprep::Circuit c(layout);
    std::uniform_int_distribution<std::size_t> gate_count(0, 40);
    std::uniform_int_distribution<int> kind(0, 3);
    std::uniform_int_distribution<std::size_t> qubit(0, layout.total() - 1);
    std::bernoulli_distribution coin(0.5);
    const std::size_t gates = gate_count(rng);
    for (std::size_t i = 0; i < gates; ++i) {
        const std::size_t target = qubit(rng);
        switch (kind(rng)) {
            case 0: c.append(qprep::Gate::hadamard(target)); break;
            case 1: c.append(qprep::Gate::pauli_x(target)); break;
            case 2: c.append(qprep::Gate::reset(target)); break;
            default: {
                std::vector<std::size_t> others;
                for (std::size_t q = 0; q < layout.total(); ++q)
                    if (q != target) others.push_back(q);
                std::shuffle(others.begin(), others.end(), rng);
                std::uniform_int_distribution<std::size_t> arity(1, others.size());
                std::vector<qprep::Control> controls;
                const std::size_t n = arity(rng);
                for (std::size_t j = 0; j < n; ++j)
                    controls.push_back({others[j], coin(rng) ? qprep::Polarity::Positive
                                                             : qprep::Polarity::Negative});
                c.append(qprep::Gate::mcx(target, std::move(controls)));
                break;
            }
        }
    }
    return c;
}

// --- independent oracles ----------------------------------------------------

// Direct O(N^4) double sum for the orthonormal 2-D DCT-II, evaluated in
// extended precision with its own cosine calls.
inline qprep::DctBlock dct_double_sum_oracle(const qprep::DctBlock& spatial) {
    constexpr std::size_t n = qprep::kDctBlock;
    const long double pi = std::acos(-1.0L);
    qprep::DctBlock out{};
    for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t v = 0; v < n; ++v) {
            const long double cu = u == 0 ? std::sqrt(1.0L / n) : std::sqrt(2.0L / n);
            const long double cv = v == 0 ? std::sqrt(1.0L / n) : std::sqrt(2.0L / n);
            long double acc = 0.0L;
            for (std::size_t y = 0; y < n; ++y)
                for (std::size_t x = 0; x < n; ++x)
                    acc += static_cast<long double>(spatial[y * n + x]) *
                           std::cos((2.0L * y + 1.0L) * u * pi / (2.0L * n)) *
                           std::cos((2.0L * x + 1.0L) * v * pi / (2.0L * n));
            out[u * n + v] = static_cast<double>(cu * cv * acc);
        }
    }
    return out;
}

// Builds the target prepared state directly: uniform superposition over all
// positions, each carrying its sign-magnitude value code with aux = 0.
inline qprep::EnsembleState expected_prepared_state(const qprep::ValueMap& vm) {
    const qprep::RegisterLayout layout = qprep::layout_for(vm);
    const std::size_t n = vm.position_bits();
    qprep::EnsembleState state{layout, {}};
    state.branches.push_back(
        {1.0, std::vector<qprep::Amplitude>(std::size_t{1} << layout.total())});
    auto& amps = state.branches.front().amplitudes;
    const double amp = 1.0 / static_cast<double>(std::size_t{1} << n);
    for (std::size_t y = 0; y < vm.block_size; ++y) {
        for (std::size_t x = 0; x < vm.block_size; ++x) {
            std::size_t code = 0;
            for (const qprep::MapEntry& e : vm.entries) {
                if (e.y != y || e.x != x) continue;
                code = static_cast<std::size_t>(std::llabs(static_cast<std::int64_t>(e.value)));
                if (e.value < 0) code |= std::size_t{1} << vm.magnitude_bits;
                break;
            }
            const std::size_t index =
                code | (y << layout.pos_y(0)) | (x << layout.pos_x(0));
            amps[index] = amp;
        }
    }
    return state;
}

inline double max_component_diff(const qprep::EnsembleState& a, const qprep::EnsembleState& b) {
    const auto& va = a.branches.front().amplitudes;
    const auto& vb = b.branches.front().amplitudes;
    double worst = 0.0;
    for (std::size_t i = 0; i < va.size(); ++i)
        worst = std::max(worst, std::abs(va[i] - vb[i]));
    return worst;
}

// Rebuilds every cost-report field from the constructed circuits and the
// block set alone: t_bit from position-MCX counts, a_bit from resets, q_ones
// from single-control MCX gates that target a magnitude qubit, s_bit from
// entry counts, b_e from the nonzero-block count.
inline qprep::CostReport cost_from_gate_counts(const std::vector<qprep::PlacedValueMap>& blocks,
                                               qprep::Scheme scheme, std::size_t grid_blocks_x,
                                               std::size_t grid_blocks_y) {
    qprep::CostReport report;
    report.scheme = scheme;
    const std::uint64_t address_bits =
        static_cast<std::uint64_t>(std::bit_width(grid_blocks_x) - 1) +
        static_cast<std::uint64_t>(std::bit_width(grid_blocks_y) - 1);
    for (const qprep::PlacedValueMap& block : blocks) {
        const qprep::Circuit circuit = qprep::build_circuit(block.map, scheme);
        const qprep::GateTally tally = qprep::count_gates(circuit);
        const std::size_t position_controls = 2 * block.map.position_bits();
        std::uint64_t position_mcx = 0;
        if (auto it = tally.mcx_by_controls.find(position_controls);
            it != tally.mcx_by_controls.end())
            position_mcx = it->second;
        report.t_bit += (position_controls + 2) * position_mcx;
        report.a_bit += tally.reset;
        for (const qprep::Gate& g : circuit.gates())
            if (g.kind == qprep::GateKind::Mcx && g.controls.size() == 1 &&
                g.target < block.map.magnitude_bits)
                ++report.q_ones;
        report.s_bit += block.map.entries.size();
        report.n_tcn += block.map.entries.size();
        if (!block.map.entries.empty()) report.b_e += address_bits;
    }
    report.br = report.q_ones + report.s_bit + report.t_bit + report.a_bit + report.b_e;
    return report;
}

}  // namespace testsupport
