#pragma once
// Dense statevector simulation of preparation circuits. Non-unitary resets
// are supported in two semantics: an idealized coherent relabeling (valid
// only while the reset qubit's |0> partner amplitudes are empty) and a
// physical measure-and-flip channel that splits the state into an ensemble
// of weighted pure branches.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <iomanip>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qprep/circuit.hpp"
#include "qprep/encoders.hpp"
#include "qprep/errors.hpp"

namespace qprep {

using Amplitude = std::complex<double>;

inline constexpr std::size_t kMaxQubits = 26;          // 1 GiB of amplitudes
inline constexpr double kBranchWeightFloor = 1e-24;    // drop threshold for reset branches
inline constexpr double kResetPartnerTol = 1e-12;

enum class ResetMode { Idealized, Physical };

struct Branch {
    double weight = 1.0;
    std::vector<Amplitude> amplitudes;
};

struct EnsembleState {
    RegisterLayout layout;
    std::vector<Branch> branches;
};

inline EnsembleState init_state(const RegisterLayout& layout) {
    if (layout.total() > kMaxQubits)
        throw CapacityError("state of " + std::to_string(layout.total()) +
                            " qubits exceeds the " + std::to_string(kMaxQubits) +
                            "-qubit guard");
    EnsembleState state{layout, {}};
    state.branches.push_back({1.0, std::vector<Amplitude>(std::size_t{1} << layout.total())});
    state.branches.front().amplitudes[0] = 1.0;
    return state;
}

namespace detail {

// Visits every (target=0, target=1) index pair exactly once.
template <typename Fn>
inline void for_each_pair(std::size_t total_qubits, std::size_t qubit, Fn&& fn) {
    const std::size_t mask = std::size_t{1} << qubit;
    const std::size_t lo = mask - 1;
    const std::size_t hi = ~lo;
    const std::size_t half = std::size_t{1} << (total_qubits - 1);
    for (std::size_t i = 0; i < half; ++i) {
        const std::size_t i0 = ((i & hi) << 1) | (i & lo);
        fn(i0, i0 | mask);
    }
}

inline bool controls_match(std::size_t index, const std::vector<Control>& controls) {
    for (const Control& c : controls) {
        const bool set = (index >> c.qubit) & 1;
        if (set != (c.polarity == Polarity::Positive)) return false;
    }
    return true;
}

inline void apply_hadamard(Branch& branch, std::size_t total, std::size_t target) {
    const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
    for_each_pair(total, target, [&](std::size_t i0, std::size_t i1) {
        const Amplitude a0 = branch.amplitudes[i0];
        const Amplitude a1 = branch.amplitudes[i1];
        branch.amplitudes[i0] = (a0 + a1) * inv_sqrt2;
        branch.amplitudes[i1] = (a0 - a1) * inv_sqrt2;
    });
}

inline void apply_mcx(Branch& branch, std::size_t total, const Gate& gate) {
    for_each_pair(total, gate.target, [&](std::size_t i0, std::size_t i1) {
        if (controls_match(i0, gate.controls))
            std::swap(branch.amplitudes[i0], branch.amplitudes[i1]);
    });
}

inline void apply_idealized_reset(Branch& branch, std::size_t total, std::size_t target) {
    for_each_pair(total, target, [&](std::size_t i0, std::size_t i1) {
        const Amplitude moving = branch.amplitudes[i1];
        if (moving == Amplitude{}) return;
        if (std::abs(branch.amplitudes[i0]) >= kResetPartnerTol)
            throw CoherenceError(
                "idealized reset on qubit " + std::to_string(target) +
                ": |0> partner of basis state " + std::to_string(i1) +
                " already carries amplitude; the scheme would lose information");
        branch.amplitudes[i0] += moving;
        branch.amplitudes[i1] = 0.0;
    });
}

inline void apply_physical_reset(EnsembleState& state, std::size_t target) {
    const std::size_t total = state.layout.total();
    std::vector<Branch> next;
    next.reserve(state.branches.size() + 1);
    for (Branch& branch : state.branches) {
        double w0 = 0.0;
        double w1 = 0.0;
        for_each_pair(total, target, [&](std::size_t i0, std::size_t i1) {
            w0 += std::norm(branch.amplitudes[i0]);
            w1 += std::norm(branch.amplitudes[i1]);
        });
        if (branch.weight * w1 > kBranchWeightFloor) {
            Branch flipped{branch.weight * w1,
                           std::vector<Amplitude>(branch.amplitudes.size())};
            const double scale = 1.0 / std::sqrt(w1);
            for_each_pair(total, target, [&](std::size_t i0, std::size_t i1) {
                flipped.amplitudes[i0] = branch.amplitudes[i1] * scale;
            });
            next.push_back(std::move(flipped));
        }
        if (branch.weight * w0 > kBranchWeightFloor) {
            const double scale = 1.0 / std::sqrt(w0);
            branch.weight *= w0;
            for_each_pair(total, target, [&](std::size_t i0, std::size_t i1) {
                branch.amplitudes[i0] *= scale;
                branch.amplitudes[i1] = 0.0;
            });
            next.push_back(std::move(branch));
        }
    }
    if (next.empty()) throw Error("physical reset dropped all branches");
    state.branches = std::move(next);
}

}  // namespace detail

inline void apply_gate(EnsembleState& state, const Gate& gate, ResetMode reset_mode) {
    const std::size_t total = state.layout.total();
    if (gate.target >= total)
        throw ArgumentError("gate target out of range for the state's layout");
    for (const Control& c : gate.controls)
        if (c.qubit >= total)
            throw ArgumentError("gate control out of range for the state's layout");

    switch (gate.kind) {
        case GateKind::Identity:
            return;
        case GateKind::Hadamard:
            for (Branch& b : state.branches) detail::apply_hadamard(b, total, gate.target);
            return;
        case GateKind::PauliX: {
            for (Branch& b : state.branches)
                detail::for_each_pair(total, gate.target, [&](std::size_t i0, std::size_t i1) {
                    std::swap(b.amplitudes[i0], b.amplitudes[i1]);
                });
            return;
        }
        case GateKind::Mcx:
            for (Branch& b : state.branches) detail::apply_mcx(b, total, gate);
            return;
        case GateKind::Reset:
            if (reset_mode == ResetMode::Idealized) {
                for (Branch& b : state.branches)
                    detail::apply_idealized_reset(b, total, gate.target);
            } else {
                detail::apply_physical_reset(state, gate.target);
            }
            return;
    }
}

inline EnsembleState run_circuit(const Circuit& circuit, ResetMode reset_mode) {
    EnsembleState state = init_state(circuit.layout());
    for (const Gate& g : circuit.gates()) apply_gate(state, g, reset_mode);
    return state;
}

inline double branch_norm(const Branch& branch) {
    long double acc = 0.0L;
    for (const Amplitude& a : branch.amplitudes) acc += std::norm(a);
    return static_cast<double>(std::sqrt(acc));
}

inline double total_weight(const EnsembleState& state) {
    long double acc = 0.0L;
    for (const Branch& b : state.branches) acc += b.weight;
    return static_cast<double>(acc);
}

struct ExtractedMap {
    std::vector<MapEntry> entries;       // row-major, zero values omitted
    double amplitude_per_position = 0.0; // 1 / 2^n
};

// Reads the basis-encoded value map back out of a prepared state. Expects a
// single branch whose every component has aux = 0 and amplitude 1/2^n; the
// top value qubit is the sign, the rest the magnitude code.
inline ExtractedMap extract_map(const EnsembleState& state) {
    if (state.branches.size() != 1)
        throw ArgumentError("extract_map requires a single-branch state");
    const RegisterLayout& layout = state.layout;
    if (layout.value_count < 1)
        throw ArgumentError("extract_map requires at least one value qubit");
    const std::vector<Amplitude>& amps = state.branches.front().amplitudes;

    const std::size_t n = layout.position_bits;
    const std::size_t positions = std::size_t{1} << (2 * n);
    const std::size_t pos_mask = (std::size_t{1} << n) - 1;
    const std::size_t value_mask = (std::size_t{1} << layout.value_count) - 1;
    const double uniform = 1.0 / static_cast<double>(std::size_t{1} << n);
    const double tol = 1e-9;

    std::vector<std::optional<std::size_t>> pattern(positions);
    for (std::size_t i = 0; i < amps.size(); ++i) {
        if (std::abs(amps[i]) <= tol) continue;
        if ((i >> layout.aux()) & 1)
            throw ResidualEntanglementError("auxiliary qubit is not |0> in basis state " +
                                            std::to_string(i));
        const std::size_t y = (i >> layout.pos_y(0)) & pos_mask;
        const std::size_t x = (i >> layout.pos_x(0)) & pos_mask;
        const std::size_t value_pattern = i & value_mask;
        const std::size_t pos = (y << n) | x;
        if (pattern[pos].has_value())
            throw NonBasisEncodingError("position (" + std::to_string(y) + "," +
                                        std::to_string(x) +
                                        ") carries a superposition of value patterns");
        if (std::abs(amps[i] - Amplitude{uniform, 0.0}) > tol)
            throw NonBasisEncodingError("amplitude of basis state " + std::to_string(i) +
                                        " deviates from the uniform 1/2^n value");
        pattern[pos] = value_pattern;
    }

    ExtractedMap out;
    out.amplitude_per_position = uniform;
    const std::size_t magnitude_bits = layout.value_count - 1;
    const std::size_t magnitude_mask = (std::size_t{1} << magnitude_bits) - 1;
    for (std::size_t pos = 0; pos < positions; ++pos) {
        if (!pattern[pos].has_value())
            throw NonBasisEncodingError("position " + std::to_string(pos >> n) + "," +
                                        std::to_string(pos & pos_mask) +
                                        " has no component; amplitudes are not uniform");
        const std::size_t bits = *pattern[pos];
        const auto magnitude = static_cast<std::int32_t>(bits & magnitude_mask);
        const bool negative = (bits >> magnitude_bits) & 1;
        const std::int32_t value = negative ? -magnitude : magnitude;
        if (value != 0) out.entries.push_back({pos >> n, pos & pos_mask, value});
    }
    std::sort(out.entries.begin(), out.entries.end(),
              [](const MapEntry& a, const MapEntry& b) {
                  return a.y != b.y ? a.y < b.y : a.x < b.x;
              });
    return out;
}

// Overlap of a mixed state with a pure reference: sum_b w_b |<ideal|b>|^2.
inline double fidelity_report(const EnsembleState& ideal, const EnsembleState& actual) {
    if (ideal.branches.size() != 1)
        throw ArgumentError("fidelity_report expects a single-branch ideal state");
    if (!(ideal.layout == actual.layout))
        throw ArgumentError("fidelity_report expects matching register layouts");
    const std::vector<Amplitude>& ref = ideal.branches.front().amplitudes;
    long double fidelity = 0.0L;
    for (const Branch& b : actual.branches) {
        std::complex<long double> overlap = 0.0L;
        for (std::size_t i = 0; i < ref.size(); ++i)
            overlap += std::conj(std::complex<long double>(ref[i])) *
                       std::complex<long double>(b.amplitudes[i]);
        fidelity += b.weight * std::norm(overlap);
    }
    return static_cast<double>(fidelity);
}

// One line per nonzero component, "index re im", sorted by index. Multi-
// branch states get a "BRANCH w=<weight>" header before each branch.
inline std::string dump_state(const EnsembleState& state) {
    std::ostringstream os;
    os << std::setprecision(17);
    for (const Branch& b : state.branches) {
        if (state.branches.size() > 1) os << "BRANCH w=" << b.weight << '\n';
        for (std::size_t i = 0; i < b.amplitudes.size(); ++i) {
            if (std::abs(b.amplitudes[i]) <= 1e-12) continue;
            os << i << ' ' << b.amplitudes[i].real() << ' ' << b.amplitudes[i].imag() << '\n';
        }
    }
    return os.str();
}

}  // namespace qprep
