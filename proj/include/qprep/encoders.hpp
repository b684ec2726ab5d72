#pragma once
// EFRQI and SCMFRQI preparation-circuit builders plus the bit-rate cost
// model. Both schemes spread the position register with Hadamards, then per
// nonzero entry drive the single auxiliary qubit with one position-controlled
// MCX and copy the entry's sign-magnitude code onto the value register
// through aux-controlled MCX gates. EFRQI uncomputes the auxiliary with a
// second identical position MCX; SCMFRQI replaces it with one reset.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstdlib>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "qprep/circuit.hpp"
#include "qprep/errors.hpp"

namespace qprep {

enum class Scheme { Scmfrqi, Efrqi };

inline std::string_view scheme_name(Scheme s) {
    return s == Scheme::Scmfrqi ? "SCMFRQI" : "EFRQI";
}

struct MapEntry {
    std::size_t y = 0;
    std::size_t x = 0;
    std::int32_t value = 0;  // nonzero, sign-magnitude coded on the circuit side

    bool operator==(const MapEntry&) const = default;
};

// Nonzero samples of one S x S block. `magnitude_bits` is the width of the
// magnitude code; the built circuits add one dedicated sign qubit on top.
struct ValueMap {
    std::size_t block_size = 4;     // S, power of two >= 2
    std::size_t magnitude_bits = 8; // q
    std::vector<MapEntry> entries;

    std::size_t position_bits() const {
        return static_cast<std::size_t>(std::bit_width(block_size) - 1);  // log2(S)
    }

    void validate() const {
        if (block_size < 2 || !std::has_single_bit(block_size))
            throw ArgumentError("block size must be a power of two >= 2");
        if (magnitude_bits < 1 || magnitude_bits > 30)
            throw ArgumentError("magnitude bit count must be in [1, 30]");
        const std::int64_t limit = (std::int64_t{1} << magnitude_bits) - 1;
        std::set<std::pair<std::size_t, std::size_t>> seen;
        for (const MapEntry& e : entries) {
            if (e.y >= block_size || e.x >= block_size)
                throw ArgumentError("entry position (" + std::to_string(e.y) + "," +
                                    std::to_string(e.x) + ") outside " +
                                    std::to_string(block_size) + "x" +
                                    std::to_string(block_size) + " block");
            if (e.value == 0) throw ArgumentError("value map entries must be nonzero");
            if (!seen.insert({e.y, e.x}).second)
                throw ArgumentError("duplicate entry position (" + std::to_string(e.y) + "," +
                                    std::to_string(e.x) + ")");
            if (std::llabs(static_cast<std::int64_t>(e.value)) > limit)
                throw CapacityError("value " + std::to_string(e.value) + " exceeds " +
                                    std::to_string(magnitude_bits) + "-bit magnitude capacity");
        }
    }

    bool operator==(const ValueMap&) const = default;
};

inline RegisterLayout layout_for(const ValueMap& vm) {
    return RegisterLayout{vm.magnitude_bits + 1, vm.position_bits()};
}

namespace detail {

inline std::vector<Control> position_controls(const RegisterLayout& layout, std::size_t y,
                                              std::size_t x) {
    std::vector<Control> controls;
    controls.reserve(2 * layout.position_bits);
    for (std::size_t j = 0; j < layout.position_bits; ++j)
        controls.push_back(
            {layout.pos_y(j), ((y >> j) & 1) ? Polarity::Positive : Polarity::Negative});
    for (std::size_t j = 0; j < layout.position_bits; ++j)
        controls.push_back(
            {layout.pos_x(j), ((x >> j) & 1) ? Polarity::Positive : Polarity::Negative});
    return controls;
}

inline std::vector<MapEntry> row_major_entries(const ValueMap& vm) {
    std::vector<MapEntry> order = vm.entries;
    std::sort(order.begin(), order.end(), [](const MapEntry& a, const MapEntry& b) {
        return a.y != b.y ? a.y < b.y : a.x < b.x;
    });
    return order;
}

}  // namespace detail

inline Circuit build_circuit(const ValueMap& vm, Scheme scheme) {
    vm.validate();
    const RegisterLayout layout = layout_for(vm);
    Circuit circuit(layout);

    for (std::size_t j = 0; j < layout.position_bits; ++j)
        circuit.append(Gate::hadamard(layout.pos_y(j)));
    for (std::size_t j = 0; j < layout.position_bits; ++j)
        circuit.append(Gate::hadamard(layout.pos_x(j)));

    const Control aux_high{layout.aux(), Polarity::Positive};
    for (const MapEntry& e : detail::row_major_entries(vm)) {
        const std::vector<Control> controls = detail::position_controls(layout, e.y, e.x);
        circuit.append(Gate::mcx(layout.aux(), controls));
        const std::uint64_t magnitude =
            static_cast<std::uint64_t>(std::llabs(static_cast<std::int64_t>(e.value)));
        for (std::size_t i = 0; i < vm.magnitude_bits; ++i)
            if ((magnitude >> i) & 1) circuit.append(Gate::mcx(layout.value(i), {aux_high}));
        if (e.value < 0)
            circuit.append(Gate::mcx(layout.value(vm.magnitude_bits), {aux_high}));
        if (scheme == Scheme::Scmfrqi)
            circuit.append(Gate::reset(layout.aux()));
        else
            circuit.append(Gate::mcx(layout.aux(), controls));
    }
    return circuit;
}

inline Circuit build_scmfrqi_circuit(const ValueMap& vm) {
    return build_circuit(vm, Scheme::Scmfrqi);
}

inline Circuit build_efrqi_circuit(const ValueMap& vm) {
    return build_circuit(vm, Scheme::Efrqi);
}

// Bits charged per position-to-aux Toffoli connection: 2*log2(S) position
// controls plus the aux line plus one connection-overhead bit, times the
// entry count, times connections per entry (1 for SCMFRQI, 2 for EFRQI).
inline std::uint64_t toffoli_bits(const ValueMap& vm, int connections_per_entry) {
    vm.validate();
    if (connections_per_entry != 1 && connections_per_entry != 2)
        throw ArgumentError("connections per entry must be 1 or 2");
    const std::uint64_t per_connection = 2 * vm.position_bits() + 2;
    return per_connection * vm.entries.size() * static_cast<std::uint64_t>(connections_per_entry);
}

struct PlacedValueMap {
    std::size_t block_y = 0;
    std::size_t block_x = 0;
    ValueMap map;
};

// Bit-rate decomposition: br = q_ones + s_bit + t_bit + a_bit + b_e.
struct CostReport {
    Scheme scheme = Scheme::Scmfrqi;
    std::uint64_t n_tcn = 0;    // nonzero entries
    std::uint64_t q_ones = 0;   // 1-bits over all magnitude codes
    std::uint64_t s_bit = 0;    // one sign bit per entry
    std::uint64_t t_bit = 0;    // Toffoli connection bits
    std::uint64_t a_bit = 0;    // auxiliary reset bits (SCMFRQI only)
    std::uint64_t b_e = 0;      // block-address bits for nonzero blocks
    std::uint64_t br = 0;

    bool operator==(const CostReport&) const = default;
};

inline CostReport bit_rate(const std::vector<PlacedValueMap>& blocks, Scheme scheme,
                           std::size_t grid_blocks_x, std::size_t grid_blocks_y) {
    if (grid_blocks_x == 0 || !std::has_single_bit(grid_blocks_x) || grid_blocks_y == 0 ||
        !std::has_single_bit(grid_blocks_y))
        throw ArgumentError("block-grid dimensions must be powers of two");
    const std::uint64_t address_bits =
        static_cast<std::uint64_t>(std::bit_width(grid_blocks_x) - 1) +
        static_cast<std::uint64_t>(std::bit_width(grid_blocks_y) - 1);
    const int connections = scheme == Scheme::Scmfrqi ? 1 : 2;

    CostReport report;
    report.scheme = scheme;
    std::set<std::pair<std::size_t, std::size_t>> coords;
    for (const PlacedValueMap& block : blocks) {
        if (block.block_x >= grid_blocks_x || block.block_y >= grid_blocks_y)
            throw ArgumentError("block coordinate outside the block grid");
        if (!coords.insert({block.block_y, block.block_x}).second)
            throw ArgumentError("duplicate block coordinate in bit_rate input");
        if (block.map.block_size != blocks.front().map.block_size ||
            block.map.magnitude_bits != blocks.front().map.magnitude_bits)
            throw ArgumentError("all blocks must share block size and magnitude bits");
        block.map.validate();

        report.n_tcn += block.map.entries.size();
        for (const MapEntry& e : block.map.entries)
            report.q_ones += static_cast<std::uint64_t>(std::popcount(
                static_cast<std::uint64_t>(std::llabs(static_cast<std::int64_t>(e.value)))));
        report.s_bit += block.map.entries.size();
        report.t_bit += toffoli_bits(block.map, connections);
        if (scheme == Scheme::Scmfrqi) report.a_bit += block.map.entries.size();
        if (!block.map.entries.empty()) report.b_e += address_bits;
    }
    report.br = report.q_ones + report.s_bit + report.t_bit + report.a_bit + report.b_e;
    return report;
}

}  // namespace qprep
