#include "komsys/simulate.hpp"

#include <queue>

#include "komsys/builder.hpp"

namespace komsys {

namespace {

// Topological order over gates and registers; registers are nodes only when
// `registers_as_buffers` is set, otherwise their outputs are sources.
std::vector<std::pair<bool, std::size_t>> node_order(const Netlist& n, bool registers_as_buffers)
{
    const std::size_t gate_nodes = n.gates.size();
    const std::size_t total = gate_nodes + (registers_as_buffers ? n.registers.size() : 0);
    constexpr std::size_t kNone = ~std::size_t{0};
    std::vector<std::size_t> driver(n.wire_count(), kNone);
    for (std::size_t g = 0; g < gate_nodes; ++g)
        driver[n.gates[g].output] = g;
    if (registers_as_buffers)
        for (std::size_t r = 0; r < n.registers.size(); ++r)
            driver[n.registers[r].output] = gate_nodes + r;

    std::vector<int> pending(total, 0);
    std::vector<std::vector<std::size_t>> fanout(total);
    auto connect = [&](WireId w, std::size_t node) {
        if (driver[w] != kNone) {
            fanout[driver[w]].push_back(node);
            ++pending[node];
        }
    };
    for (std::size_t g = 0; g < gate_nodes; ++g)
        for (WireId w : n.gates[g].inputs)
            connect(w, g);
    if (registers_as_buffers)
        for (std::size_t r = 0; r < n.registers.size(); ++r)
            connect(n.registers[r].input, gate_nodes + r);

    std::queue<std::size_t> ready;
    for (std::size_t i = 0; i < total; ++i)
        if (pending[i] == 0)
            ready.push(i);
    std::vector<std::pair<bool, std::size_t>> order;
    while (!ready.empty()) {
        const auto i = ready.front();
        ready.pop();
        order.emplace_back(i >= gate_nodes, i >= gate_nodes ? i - gate_nodes : i);
        for (auto s : fanout[i])
            if (--pending[s] == 0)
                ready.push(s);
    }
    if (order.size() != total)
        throw NetlistError("combinational cycle in netlist '" + n.name + "'");
    return order;
}

} // namespace

Simulator::Simulator(const Netlist& n, View view)
    : view_(view), stage_count_(n.stage_count), wire_count_(n.wire_count()), inputs_(n.inputs),
      outputs_(n.outputs), registers_(n.registers)
{
    require_valid(n);
    for (auto [is_reg, idx] : node_order(n, view == View::Flattened)) {
        if (is_reg) {
            const auto& r = n.registers[idx];
            ops_.push_back({GateKind::AND, true, r.input, r.input, r.output});
        } else {
            const auto& g = n.gates[idx];
            const WireId a = g.inputs[0];
            const WireId b = g.inputs.size() > 1 ? g.inputs[1] : a;
            ops_.push_back({g.kind, false, a, b, g.output});
        }
    }
    state_.assign(registers_.size(), 0);
}

void Simulator::reset()
{
    std::fill(state_.begin(), state_.end(), 0);
}

void Simulator::load_inputs(const PackedAssignment& inputs, std::vector<std::uint64_t>& values) const
{
    for (const auto& [name, bus] : inputs) {
        bool known = false;
        for (const auto& b : inputs_)
            known = known || b.name == name;
        if (!known)
            throw NetlistError("unknown input bus '" + name + "'");
    }
    for (const auto& b : inputs_) {
        const auto it = inputs.find(b.name);
        if (it == inputs.end())
            throw NetlistError("missing input bus '" + b.name + "'");
        if (static_cast<int>(it->second.size()) != b.width())
            throw NetlistError("input bus '" + b.name + "' expects width " + std::to_string(b.width()) +
                               ", got " + std::to_string(it->second.size()));
        for (int i = 0; i < b.width(); ++i)
            values[b.wires[static_cast<std::size_t>(i)]] = it->second[static_cast<std::size_t>(i)];
    }
}

void Simulator::run_ops(std::vector<std::uint64_t>& v) const
{
    for (const Op& op : ops_) {
        const std::uint64_t a = v[op.a];
        const std::uint64_t b = v[op.b];
        std::uint64_t r = 0;
        if (op.is_buffer) {
            r = a;
        } else {
            switch (op.kind) {
            case GateKind::AND: r = a & b; break;
            case GateKind::OR: r = a | b; break;
            case GateKind::XOR: r = a ^ b; break;
            case GateKind::NOT: r = ~a; break;
            case GateKind::NAND: r = ~(a & b); break;
            case GateKind::XNOR: r = ~(a ^ b); break;
            }
        }
        v[op.out] = r;
    }
}

PackedAssignment Simulator::collect(const std::vector<std::uint64_t>& values) const
{
    PackedAssignment out;
    for (const auto& b : outputs_) {
        PackedBus bus;
        bus.reserve(b.wires.size());
        for (WireId w : b.wires)
            bus.push_back(values[w]);
        out.emplace(b.name, std::move(bus));
    }
    return out;
}

PackedAssignment Simulator::evaluate(const PackedAssignment& inputs) const
{
    std::vector<std::uint64_t> values(wire_count_, 0);
    load_inputs(inputs, values);
    if (view_ == View::Clocked)
        for (std::size_t r = 0; r < registers_.size(); ++r)
            values[registers_[r].output] = state_[r];
    run_ops(values);
    return collect(values);
}

PackedAssignment Simulator::step(const PackedAssignment& inputs)
{
    std::vector<std::uint64_t> values(wire_count_, 0);
    load_inputs(inputs, values);
    if (view_ == View::Clocked)
        for (std::size_t r = 0; r < registers_.size(); ++r)
            values[registers_[r].output] = state_[r];
    run_ops(values);
    auto out = collect(values);
    if (view_ == View::Clocked)
        for (std::size_t r = 0; r < registers_.size(); ++r)
            state_[r] = values[registers_[r].input];
    return out;
}

PackedBus pack_lane0(const BitVec& value)
{
    PackedBus bus(static_cast<std::size_t>(value.width()), 0);
    for (int i = 0; i < value.width(); ++i)
        bus[static_cast<std::size_t>(i)] = value.bit(i) ? 1 : 0;
    return bus;
}

BitVec unpack_lane(const PackedBus& bus, int lane)
{
    BitVec v(static_cast<int>(bus.size()));
    for (std::size_t i = 0; i < bus.size(); ++i)
        v.set_bit(static_cast<int>(i), ((bus[i] >> lane) & 1) != 0);
    return v;
}

namespace {

PackedAssignment pack(const Assignment& a)
{
    PackedAssignment p;
    for (const auto& [name, value] : a)
        p.emplace(name, pack_lane0(value));
    return p;
}

Assignment unpack(const PackedAssignment& p)
{
    Assignment a;
    for (const auto& [name, bus] : p)
        a.emplace(name, unpack_lane(bus, 0));
    return a;
}

} // namespace

Assignment evaluate(const Netlist& netlist, const Assignment& inputs)
{
    if (!netlist.is_combinational())
        throw NetlistError("evaluate requires a combinational netlist; '" + netlist.name + "' has " +
                           std::to_string(netlist.stage_count) + " stages");
    const Simulator sim(netlist);
    return unpack(sim.evaluate(pack(inputs)));
}

std::vector<Assignment> PipelineTrace::aligned() const
{
    return {cycles.begin() + latency, cycles.end()};
}

PipelineTrace simulate_pipelined(const Netlist& netlist, const std::vector<Assignment>& stream)
{
    Simulator sim(netlist, Simulator::View::Clocked);
    PipelineTrace trace;
    trace.latency = sim.latency();
    for (const auto& entry : stream)
        trace.cycles.push_back(unpack(sim.step(pack(entry))));
    PackedAssignment idle;
    for (const auto& b : sim.input_buses())
        idle.emplace(b.name, PackedBus(b.wires.size(), 0));
    for (int i = 0; i < trace.latency; ++i)
        trace.cycles.push_back(unpack(sim.step(idle)));
    return trace;
}

Netlist flatten(const Netlist& n)
{
    require_valid(n);
    CircuitBuilder b(n.name);
    std::vector<Signal> sig(n.wire_count(), Signal::zero());
    for (const auto& bus : n.inputs) {
        const auto bits = b.add_input(bus.name, bus.width());
        for (std::size_t i = 0; i < bits.size(); ++i)
            sig[bus.wires[i]] = bits[i];
    }
    for (auto [is_reg, idx] : node_order(n, true)) {
        if (is_reg) {
            sig[n.registers[idx].output] = sig[n.registers[idx].input];
            continue;
        }
        const auto& g = n.gates[idx];
        std::vector<Signal> in;
        for (WireId w : g.inputs)
            in.push_back(sig[w]);
        sig[g.output] = b.copy_gate(g, in);
    }
    for (const auto& bus : n.outputs) {
        SignalVec bits;
        for (WireId w : bus.wires)
            bits.push_back(sig[w]);
        b.add_output(bus.name, bits);
    }
    return std::move(b).build();
}

} // namespace komsys
