#pragma once
// Gate-level IR for the preparation circuits: a register layout plus an
// ordered list of H / X / multi-controlled-X / reset gates.

#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qprep/errors.hpp"

namespace qprep {

// Qubit index map, lowest bits first: value[0..q), aux, posY[0..n), posX[0..n).
// `value_count` includes the sign qubit when the layout comes from the
// encoders. Basis-state bit k of a statevector index is qubit k.
struct RegisterLayout {
    std::size_t value_count = 0;    // q
    std::size_t position_bits = 0;  // n, per axis

    std::size_t total() const { return value_count + 2 * position_bits + 1; }
    std::size_t value(std::size_t i) const { return i; }
    std::size_t aux() const { return value_count; }
    std::size_t pos_y(std::size_t j) const { return value_count + 1 + j; }
    std::size_t pos_x(std::size_t j) const { return value_count + 1 + position_bits + j; }

    bool operator==(const RegisterLayout&) const = default;
};

enum class GateKind { Identity, Hadamard, PauliX, Mcx, Reset };

enum class Polarity { Negative, Positive };

struct Control {
    std::size_t qubit = 0;
    Polarity polarity = Polarity::Positive;

    bool operator==(const Control&) const = default;
};

struct Gate {
    GateKind kind = GateKind::Identity;
    std::size_t target = 0;
    std::vector<Control> controls;  // nonempty only for Mcx

    static Gate identity(std::size_t target) { return {GateKind::Identity, target, {}}; }
    static Gate hadamard(std::size_t target) { return {GateKind::Hadamard, target, {}}; }
    static Gate pauli_x(std::size_t target) { return {GateKind::PauliX, target, {}}; }
    static Gate reset(std::size_t target) { return {GateKind::Reset, target, {}}; }

    static Gate mcx(std::size_t target, std::vector<Control> controls) {
        if (controls.empty()) throw ArgumentError("MCX requires at least one control");
        for (std::size_t i = 0; i < controls.size(); ++i) {
            if (controls[i].qubit == target)
                throw ArgumentError("MCX target must not appear among its controls");
            for (std::size_t j = i + 1; j < controls.size(); ++j)
                if (controls[i].qubit == controls[j].qubit)
                    throw ArgumentError("MCX control indices must be distinct");
        }
        return {GateKind::Mcx, target, std::move(controls)};
    }

    bool operator==(const Gate&) const = default;
};

class Circuit {
public:
    explicit Circuit(RegisterLayout layout) : layout_(layout) {}

    // Validates qubit indices against the layout. Identity gates are
    // represented implicitly: they change neither state nor cost and are
    // not stored.
    void append(const Gate& gate) {
        if (gate.kind == GateKind::Identity) return;
        if (gate.target >= layout_.total())
            throw ArgumentError("gate target " + std::to_string(gate.target) +
                                " out of range for " + std::to_string(layout_.total()) +
                                "-qubit layout");
        if (gate.kind != GateKind::Mcx && !gate.controls.empty())
            throw ArgumentError("only MCX gates carry controls");
        for (const Control& c : gate.controls)
            if (c.qubit >= layout_.total())
                throw ArgumentError("control qubit " + std::to_string(c.qubit) +
                                    " out of range for " + std::to_string(layout_.total()) +
                                    "-qubit layout");
        gates_.push_back(gate);
    }

    const RegisterLayout& layout() const { return layout_; }
    const std::vector<Gate>& gates() const { return gates_; }

    bool operator==(const Circuit&) const = default;

private:
    RegisterLayout layout_;
    std::vector<Gate> gates_;
};

struct GateTally {
    std::size_t identity = 0;
    std::size_t hadamard = 0;
    std::size_t pauli_x = 0;
    std::size_t mcx = 0;
    std::size_t reset = 0;
    std::map<std::size_t, std::size_t> mcx_by_controls;  // control arity -> count

    bool operator==(const GateTally&) const = default;
};

inline GateTally count_gates(const Circuit& circuit) {
    GateTally tally;
    for (const Gate& g : circuit.gates()) {
        switch (g.kind) {
            case GateKind::Identity: ++tally.identity; break;
            case GateKind::Hadamard: ++tally.hadamard; break;
            case GateKind::PauliX: ++tally.pauli_x; break;
            case GateKind::Mcx:
                ++tally.mcx;
                ++tally.mcx_by_controls[g.controls.size()];
                break;
            case GateKind::Reset: ++tally.reset; break;
        }
    }
    return tally;
}

// One gate per line: "H k" | "X k" | "MCX t=k c=+a,-b,..." | "RESET k",
// preceded by a "LAYOUT q=<q> n=<n>" header. parse_circuit inverts this.
inline std::string dump_circuit(const Circuit& circuit) {
    std::ostringstream os;
    os << "LAYOUT q=" << circuit.layout().value_count << " n=" << circuit.layout().position_bits
       << '\n';
    for (const Gate& g : circuit.gates()) {
        switch (g.kind) {
            case GateKind::Identity: break;
            case GateKind::Hadamard: os << "H " << g.target << '\n'; break;
            case GateKind::PauliX: os << "X " << g.target << '\n'; break;
            case GateKind::Reset: os << "RESET " << g.target << '\n'; break;
            case GateKind::Mcx: {
                os << "MCX t=" << g.target << " c=";
                for (std::size_t i = 0; i < g.controls.size(); ++i) {
                    if (i > 0) os << ',';
                    os << (g.controls[i].polarity == Polarity::Positive ? '+' : '-')
                       << g.controls[i].qubit;
                }
                os << '\n';
                break;
            }
        }
    }
    return os.str();
}

namespace detail {

inline std::size_t parse_index(std::string_view token, std::size_t lineno, const char* what) {
    if (token.empty())
        throw ParseError("circuit line " + std::to_string(lineno) + ": missing " + what);
    std::size_t v = 0;
    for (const char c : token) {
        if (c < '0' || c > '9')
            throw ParseError("circuit line " + std::to_string(lineno) + ": invalid " + what +
                             " '" + std::string(token) + "'");
        v = v * 10 + static_cast<std::size_t>(c - '0');
    }
    return v;
}

}  // namespace detail

inline Circuit parse_circuit(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t lineno = 0;
    std::optional<Circuit> circuit;
    auto fail = [&](const std::string& msg) -> void {
        throw ParseError("circuit line " + std::to_string(lineno) + ": " + msg);
    };

    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;

        std::istringstream ls(line);
        std::string op;
        ls >> op;

        if (!circuit) {
            if (op != "LAYOUT") fail("expected LAYOUT header, got '" + op + "'");
            std::string qtok, ntok, extra;
            ls >> qtok >> ntok;
            if (qtok.rfind("q=", 0) != 0 || ntok.rfind("n=", 0) != 0 || (ls >> extra))
                fail("header must be 'LAYOUT q=<q> n=<n>'");
            const std::size_t q = detail::parse_index(qtok.substr(2), lineno, "value count");
            const std::size_t n = detail::parse_index(ntok.substr(2), lineno, "position bits");
            circuit.emplace(RegisterLayout{q, n});
            continue;
        }

        try {
            if (op == "H" || op == "X" || op == "RESET") {
                std::string ttok, extra;
                ls >> ttok;
                if (ttok.empty() || (ls >> extra)) fail("expected '" + op + " <qubit>'");
                const std::size_t t = detail::parse_index(ttok, lineno, "target");
                if (op == "H")
                    circuit->append(Gate::hadamard(t));
                else if (op == "X")
                    circuit->append(Gate::pauli_x(t));
                else
                    circuit->append(Gate::reset(t));
            } else if (op == "MCX") {
                std::string ttok, ctok, extra;
                ls >> ttok >> ctok;
                if (ttok.rfind("t=", 0) != 0 || ctok.rfind("c=", 0) != 0 || (ls >> extra))
                    fail("expected 'MCX t=<qubit> c=<±q,...>'");
                const std::size_t t = detail::parse_index(ttok.substr(2), lineno, "target");
                std::vector<Control> controls;
                std::string_view list = std::string_view(ctok).substr(2);
                while (!list.empty()) {
                    const std::size_t comma = list.find(',');
                    const std::string_view item = list.substr(0, comma);
                    list = comma == std::string_view::npos ? std::string_view{}
                                                           : list.substr(comma + 1);
                    if (item.size() < 2 || (item[0] != '+' && item[0] != '-'))
                        fail("control '" + std::string(item) + "' must start with + or -");
                    controls.push_back(
                        {detail::parse_index(item.substr(1), lineno, "control"),
                         item[0] == '+' ? Polarity::Positive : Polarity::Negative});
                }
                circuit->append(Gate::mcx(t, std::move(controls)));
            } else {
                fail("unknown gate '" + op + "'");
            }
        } catch (const ArgumentError& e) {
            fail(e.what());
        }
    }
    if (!circuit) throw ParseError("circuit text has no LAYOUT header");
    return *circuit;
}

}  // namespace qprep
