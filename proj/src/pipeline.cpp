#include "komsys/pipeline.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "komsys/builder.hpp"

namespace komsys {

Netlist assign_stages(const Netlist& n, const std::vector<int>& gate_stage)
{
    require_valid(n);
    if (!n.is_combinational())
        throw NetlistError("pipelining requires a combinational netlist");
    if (gate_stage.size() != n.gates.size())
        throw std::invalid_argument("stage assignment must cover every gate");

    CircuitBuilder b(n.name);
    std::vector<int> home(n.wire_count(), 0);
    std::vector<Signal> sig(n.wire_count(), Signal::zero());
    std::map<std::pair<WireId, int>, Signal> delayed;

    for (const auto& bus : n.inputs) {
        const auto bits = b.add_input(bus.name, bus.width());
        for (std::size_t i = 0; i < bits.size(); ++i)
            sig[bus.wires[i]] = bits[i];
    }

    auto at_stage = [&](WireId w, int stage) {
        Signal s = sig[w];
        for (int t = home[w] + 1; t <= stage; ++t) {
            auto [it, fresh] = delayed.try_emplace({w, t}, s);
            if (fresh)
                it->second = b.add_register(s, t);
            s = it->second;
        }
        return s;
    };

    int last = -1;
    for (auto gi : topological_gate_order(n)) {
        const auto& g = n.gates[gi];
        const int stage = gate_stage[gi];
        if (stage < 0)
            throw std::invalid_argument("gate " + g.id + " has a negative stage");
        std::vector<Signal> in;
        for (WireId w : g.inputs) {
            if (home[w] > stage)
                throw std::invalid_argument("gate " + g.id + " is placed in stage " + std::to_string(stage) +
                                            " before its input from stage " + std::to_string(home[w]));
            in.push_back(at_stage(w, stage));
        }
        sig[g.output] = b.copy_gate(g, in);
        home[g.output] = stage;
        last = std::max(last, stage);
    }

    const int out_stage = last + 1;
    for (const auto& bus : n.outputs) {
        SignalVec bits;
        for (WireId w : bus.wires)
            bits.push_back(at_stage(w, out_stage));
        b.add_output(bus.name, bits);
    }
    return std::move(b).build();
}

Netlist insert_pipeline(const Netlist& n, const PipelinePolicy& policy)
{
    require_valid(n);
    if (!n.is_combinational())
        throw NetlistError("pipelining requires a combinational netlist");

    std::vector<int> stage(n.gates.size(), 0);
    if (policy.kind == PipelinePolicy::Kind::CutAtDepth) {
        if (policy.max_depth < 1)
            throw std::invalid_argument("cut depth " + std::to_string(policy.max_depth) +
                                        " is smaller than the largest single-gate delay (1)");
        std::vector<int> level(n.wire_count(), 0);
        for (auto gi : topological_gate_order(n)) {
            int l = 0;
            for (WireId w : n.gates[gi].inputs)
                l = std::max(l, level[w]);
            level[n.gates[gi].output] = l + 1;
            stage[gi] = l / policy.max_depth;
        }
    } else {
        if (n.stage_marks.size() != n.gates.size())
            throw std::invalid_argument("netlist '" + n.name + "' carries no stage markers");
        stage = n.stage_marks;
    }
    return assign_stages(n, stage);
}

} // namespace komsys
