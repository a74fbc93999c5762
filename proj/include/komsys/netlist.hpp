#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace komsys {

using WireId = std::uint32_t;

enum class GateKind : std::uint8_t { AND, OR, XOR, NOT, NAND, XNOR };

inline constexpr GateKind kAllGateKinds[] = {GateKind::AND, GateKind::OR,   GateKind::XOR,
                                             GateKind::NOT, GateKind::NAND, GateKind::XNOR};

std::string_view to_string(GateKind kind);
std::optional<GateKind> parse_gate_kind(std::string_view text);
inline constexpr int arity(GateKind kind) { return kind == GateKind::NOT ? 1 : 2; }

struct Gate {
    std::string id;
    GateKind kind = GateKind::AND;
    std::vector<WireId> inputs;
    WireId output = 0;
};

/// Pipeline register. `stage` is the rank it belongs to: it captures a value
/// computed in stage `stage - 1` and presents it to stage `stage`.
struct Register {
    WireId input = 0;
    WireId output = 0;
    int stage = 1;
};

/// Bus bit i is the wire named "<name>[i]".
struct Bus {
    std::string name;
    std::vector<WireId> wires;

    int width() const { return static_cast<int>(wires.size()); }
};

/// Plain netlist value. Any content is representable, including malformed
/// circuits; `validate` reports what is wrong with one.
struct Netlist {
    std::string name;
    std::vector<std::string> wire_names;
    std::vector<Bus> inputs;
    std::vector<Bus> outputs;
    std::vector<Gate> gates;
    std::vector<Register> registers;
    int stage_count = 0;

    /// Optional per-gate target stage emitted by generators (not part of the
    /// interchange format). Empty, or one entry per gate.
    std::vector<int> stage_marks;

    std::size_t wire_count() const { return wire_names.size(); }
    const Bus* find_input(std::string_view bus) const;
    const Bus* find_output(std::string_view bus) const;
    bool is_combinational() const { return stage_count == 0 && registers.empty(); }
};

std::string bus_bit_name(std::string_view bus, int bit);

struct Defect {
    enum class Kind {
        BadArity,
        BadWireRef,
        DuplicateGateId,
        MultiplyDriven,
        Undriven,
        Cycle,
        StageMismatch,
        BadRegister,
        BadStageCount,
        BadBus,
    };
    Kind kind;
    std::string message;
};

struct ValidationResult {
    std::vector<Defect> defects;

    bool ok() const { return defects.empty(); }
    std::string summary() const;
};

ValidationResult validate(const Netlist& netlist);

class NetlistError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Throws NetlistError listing every defect when the netlist is malformed.
void require_valid(const Netlist& netlist);

/// Stage of every wire and every gate, as implied by register boundaries.
/// Only meaningful on a netlist that validates.
struct StageMap {
    std::vector<int> wire_stage;
    std::vector<int> gate_stage;
};
StageMap compute_stages(const Netlist& netlist);

/// Topological order of gate indices with registers cut. Throws NetlistError
/// on a combinational cycle.
std::vector<std::size_t> topological_gate_order(const Netlist& netlist);

/// Drops gates and registers that no output depends on, and their wires.
Netlist remove_dead_logic(const Netlist& netlist);

} // namespace komsys
