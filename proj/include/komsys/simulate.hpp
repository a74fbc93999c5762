#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "komsys/bitvec.hpp"
#include "komsys/netlist.hpp"

namespace komsys {

using Assignment = std::map<std::string, BitVec>;

/// Bit-parallel bus value: one 64-bit word per bus bit, lane j of every word
/// belongs to pattern j.
using PackedBus = std::vector<std::uint64_t>;
using PackedAssignment = std::map<std::string, PackedBus>;

/// Compiled form of a validated netlist. Evaluates 64 patterns per pass.
///
/// The flattened view treats registers as plain wires; the clocked view keeps
/// register state between `step` calls.
class Simulator {
public:
    enum class View { Flattened, Clocked };

    explicit Simulator(const Netlist& netlist, View view = View::Flattened);

    /// Stateless evaluation. In the clocked view registers read their current
    /// state and are not advanced.
    PackedAssignment evaluate(const PackedAssignment& inputs) const;

    /// One clock cycle: outputs seen during the cycle, then the register edge.
    PackedAssignment step(const PackedAssignment& inputs);
    void reset();

    int latency() const { return view_ == View::Clocked ? stage_count_ : 0; }
    const std::vector<Bus>& input_buses() const { return inputs_; }
    const std::vector<Bus>& output_buses() const { return outputs_; }

private:
    struct Op {
        GateKind kind;
        bool is_buffer;
        WireId a;
        WireId b;
        WireId out;
    };

    void load_inputs(const PackedAssignment& inputs, std::vector<std::uint64_t>& values) const;
    void run_ops(std::vector<std::uint64_t>& values) const;
    PackedAssignment collect(const std::vector<std::uint64_t>& values) const;

    View view_;
    int stage_count_ = 0;
    std::size_t wire_count_ = 0;
    std::vector<Bus> inputs_;
    std::vector<Bus> outputs_;
    std::vector<Op> ops_;
    std::vector<Register> registers_;
    std::vector<std::uint64_t> state_;
};

PackedBus pack_lane0(const BitVec& value);
BitVec unpack_lane(const PackedBus& bus, int lane);

/// Single-pattern evaluation. Requires a combinational netlist.
Assignment evaluate(const Netlist& netlist, const Assignment& inputs);

struct PipelineTrace {
    int latency = 0;
    /// One entry per simulated cycle: the stream followed by `latency`
    /// flush cycles with all-zero inputs.
    std::vector<Assignment> cycles;

    /// Outputs aligned with the input stream (cycle t + latency for input t).
    std::vector<Assignment> aligned() const;
};

PipelineTrace simulate_pipelined(const Netlist& netlist, const std::vector<Assignment>& stream);

/// Registers become wires; output buses keep their names.
Netlist flatten(const Netlist& netlist);

} // namespace komsys
