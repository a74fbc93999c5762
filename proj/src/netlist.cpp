#include "komsys/netlist.hpp"

#include <algorithm>
#include <queue>
#include <sstream>
#include <unordered_set>

namespace komsys {

std::string_view to_string(GateKind kind)
{
    switch (kind) {
    case GateKind::AND: return "AND";
    case GateKind::OR: return "OR";
    case GateKind::XOR: return "XOR";
    case GateKind::NOT: return "NOT";
    case GateKind::NAND: return "NAND";
    case GateKind::XNOR: return "XNOR";
    }
    return "?";
}

std::optional<GateKind> parse_gate_kind(std::string_view text)
{
    for (GateKind k : kAllGateKinds)
        if (to_string(k) == text)
            return k;
    return std::nullopt;
}

std::string bus_bit_name(std::string_view bus, int bit)
{
    std::string out(bus);
    out += '[';
    out += std::to_string(bit);
    out += ']';
    return out;
}

const Bus* Netlist::find_input(std::string_view bus) const
{
    for (const auto& b : inputs)
        if (b.name == bus)
            return &b;
    return nullptr;
}

const Bus* Netlist::find_output(std::string_view bus) const
{
    for (const auto& b : outputs)
        if (b.name == bus)
            return &b;
    return nullptr;
}

std::string ValidationResult::summary() const
{
    std::ostringstream os;
    for (std::size_t i = 0; i < defects.size(); ++i) {
        if (i)
            os << "; ";
        os << defects[i].message;
    }
    return os.str();
}

namespace {

constexpr WireId kNoDriver = ~WireId{0};

// Gate index driving each wire, or kNoDriver.
std::vector<WireId> gate_drivers(const Netlist& n)
{
    std::vector<WireId> driver(n.wire_count(), kNoDriver);
    for (std::size_t g = 0; g < n.gates.size(); ++g)
        if (n.gates[g].output < n.wire_count())
            driver[n.gates[g].output] = static_cast<WireId>(g);
    return driver;
}

// Kahn over gates with registers cut. Returns the order; gates missing from
// it sit on (or downstream of) a cycle.
std::vector<std::size_t> kahn_order(const Netlist& n)
{
    const auto driver = gate_drivers(n);
    std::vector<int> pending(n.gates.size(), 0);
    std::vector<std::vector<std::size_t>> fanout(n.gates.size());
    for (std::size_t g = 0; g < n.gates.size(); ++g) {
        for (WireId w : n.gates[g].inputs) {
            if (w >= n.wire_count() || driver[w] == kNoDriver)
                continue;
            fanout[driver[w]].push_back(g);
            ++pending[g];
        }
    }
    std::queue<std::size_t> ready;
    for (std::size_t g = 0; g < n.gates.size(); ++g)
        if (pending[g] == 0)
            ready.push(g);
    std::vector<std::size_t> order;
    order.reserve(n.gates.size());
    while (!ready.empty()) {
        const auto g = ready.front();
        ready.pop();
        order.push_back(g);
        for (auto succ : fanout[g])
            if (--pending[succ] == 0)
                ready.push(succ);
    }
    return order;
}

} // namespace

ValidationResult validate(const Netlist& n)
{
    ValidationResult result;
    auto defect = [&](Defect::Kind kind, std::string msg) {
        result.defects.push_back({kind, std::move(msg)});
    };
    const auto wire_ok = [&](WireId w) { return w < n.wire_count(); };
    const auto wname = [&](WireId w) { return n.wire_names[w]; };

    // References first; nothing below is meaningful with dangling ids.
    for (const auto& g : n.gates) {
        for (WireId w : g.inputs)
            if (!wire_ok(w))
                defect(Defect::Kind::BadWireRef, "gate " + g.id + " references unknown wire");
        if (!wire_ok(g.output))
            defect(Defect::Kind::BadWireRef, "gate " + g.id + " drives unknown wire");
    }
    for (const auto& r : n.registers)
        if (!wire_ok(r.input) || !wire_ok(r.output))
            defect(Defect::Kind::BadWireRef, "register references unknown wire");
    for (const auto* buses : {&n.inputs, &n.outputs})
        for (const auto& b : *buses)
            for (WireId w : b.wires)
                if (!wire_ok(w))
                    defect(Defect::Kind::BadWireRef, "bus " + b.name + " references unknown wire");
    if (!result.ok())
        return result;

    std::unordered_set<std::string> ids;
    for (const auto& g : n.gates) {
        if (static_cast<int>(g.inputs.size()) != arity(g.kind))
            defect(Defect::Kind::BadArity, "gate " + g.id + " (" + std::string(to_string(g.kind)) +
                                               ") has " + std::to_string(g.inputs.size()) +
                                               " inputs");
        if (!ids.insert(g.id).second)
            defect(Defect::Kind::DuplicateGateId, "duplicate gate id " + g.id);
    }

    std::unordered_set<std::string> bus_names;
    for (const auto* buses : {&n.inputs, &n.outputs}) {
        for (const auto& b : *buses) {
            if (b.wires.empty())
                defect(Defect::Kind::BadBus, "bus " + b.name + " has zero width");
            if (!bus_names.insert(b.name).second)
                defect(Defect::Kind::BadBus, "duplicate bus name " + b.name);
            for (int i = 0; i < b.width(); ++i)
                if (wname(b.wires[static_cast<std::size_t>(i)]) != bus_bit_name(b.name, i))
                    defect(Defect::Kind::BadBus, "bus " + b.name + " bit " + std::to_string(i) +
                                                     " is bound to wire " +
                                                     wname(b.wires[static_cast<std::size_t>(i)]));
        }
    }

    std::vector<int> drivers(n.wire_count(), 0);
    for (const auto& b : n.inputs)
        for (WireId w : b.wires)
            ++drivers[w];
    for (const auto& g : n.gates)
        ++drivers[g.output];
    for (const auto& r : n.registers)
        ++drivers[r.output];
    for (WireId w = 0; w < n.wire_count(); ++w)
        if (drivers[w] > 1)
            defect(Defect::Kind::MultiplyDriven, "multiply-driven wire " + wname(w));

    std::vector<char> reported(n.wire_count(), 0);
    auto need_driver = [&](WireId w) {
        if (drivers[w] == 0 && !reported[w]) {
            reported[w] = 1;
            defect(Defect::Kind::Undriven, "undriven wire " + wname(w));
        }
    };
    for (const auto& g : n.gates)
        for (WireId w : g.inputs)
            need_driver(w);
    for (const auto& r : n.registers)
        need_driver(r.input);
    for (const auto& b : n.outputs)
        for (WireId w : b.wires)
            need_driver(w);

    // Stage inference along the clocked topological order.
    constexpr int kUnknown = -1;
    std::vector<int> stage(n.wire_count(), kUnknown);
    for (const auto& b : n.inputs)
        for (WireId w : b.wires)
            stage[w] = 0;
    int max_reg_stage = 0;
    for (const auto& r : n.registers) {
        if (r.stage < 1)
            defect(Defect::Kind::BadRegister, "register driving " + wname(r.output) +
                                                  " has stage " + std::to_string(r.stage));
        stage[r.output] = r.stage;
        max_reg_stage = std::max(max_reg_stage, r.stage);
    }

    const auto order = kahn_order(n);
    for (auto gi : order) {
        const auto& g = n.gates[gi];
        int s = kUnknown;
        bool mixed = false;
        for (WireId w : g.inputs) {
            if (stage[w] == kUnknown)
                continue;
            if (s != kUnknown && s != stage[w])
                mixed = true;
            s = std::max(s, stage[w]);
        }
        if (mixed)
            defect(Defect::Kind::StageMismatch, "gate " + g.id + " mixes inputs from different stages");
        stage[g.output] = s;
    }

    if (order.size() != n.gates.size()) {
        std::vector<char> done(n.gates.size(), 0);
        for (auto gi : order)
            done[gi] = 1;
        int cycle_stage = kUnknown;
        std::string first;
        for (std::size_t gi = 0; gi < n.gates.size(); ++gi) {
            if (done[gi])
                continue;
            if (first.empty())
                first = n.gates[gi].id;
            for (WireId w : n.gates[gi].inputs)
                if (stage[w] != kUnknown)
                    cycle_stage = cycle_stage == kUnknown ? stage[w] : std::min(cycle_stage, stage[w]);
        }
        defect(Defect::Kind::Cycle, "cycle in stage " + std::to_string(std::max(cycle_stage, 0)) +
                                        " (through gate " + first + ")");
    }

    for (const auto& r : n.registers)
        if (r.stage >= 1 && stage[r.input] != kUnknown && stage[r.input] != r.stage - 1)
            defect(Defect::Kind::StageMismatch,
                   "register driving " + wname(r.output) + " (stage " + std::to_string(r.stage) +
                       ") captures a stage " + std::to_string(stage[r.input]) + " value");

    if (n.stage_count != max_reg_stage || n.stage_count < 0)
        defect(Defect::Kind::BadStageCount, "stage_count " + std::to_string(n.stage_count) +
                                                " does not match register ranks (" +
                                                std::to_string(max_reg_stage) + ")");
    for (const auto& b : n.outputs)
        for (WireId w : b.wires)
            if (stage[w] != kUnknown && stage[w] != n.stage_count)
                defect(Defect::Kind::StageMismatch, "output wire " + wname(w) + " is produced in stage " +
                                                        std::to_string(stage[w]) + ", expected " +
                                                        std::to_string(n.stage_count));
    return result;
}

void require_valid(const Netlist& netlist)
{
    const auto v = validate(netlist);
    if (!v.ok())
        throw NetlistError("invalid netlist '" + netlist.name + "': " + v.summary());
}

StageMap compute_stages(const Netlist& n)
{
    StageMap map;
    map.wire_stage.assign(n.wire_count(), 0);
    map.gate_stage.assign(n.gates.size(), 0);
    for (const auto& r : n.registers)
        map.wire_stage[r.output] = r.stage;
    for (auto gi : topological_gate_order(n)) {
        int s = 0;
        for (WireId w : n.gates[gi].inputs)
            s = std::max(s, map.wire_stage[w]);
        map.gate_stage[gi] = s;
        map.wire_stage[n.gates[gi].output] = s;
    }
    return map;
}

std::vector<std::size_t> topological_gate_order(const Netlist& n)
{
    auto order = kahn_order(n);
    if (order.size() != n.gates.size())
        throw NetlistError("combinational cycle in netlist '" + n.name + "'");
    return order;
}

Netlist remove_dead_logic(const Netlist& n)
{
    constexpr std::size_t none = static_cast<std::size_t>(-1);
    std::vector<std::size_t> gate_of(n.wire_count(), none), reg_of(n.wire_count(), none);
    for (std::size_t i = 0; i < n.gates.size(); ++i)
        gate_of[n.gates[i].output] = i;
    for (std::size_t i = 0; i < n.registers.size(); ++i)
        reg_of[n.registers[i].output] = i;

    std::vector<char> live(n.wire_count(), 0);
    std::vector<WireId> work;
    auto mark = [&](WireId w) {
        if (w < live.size() && !live[w]) {
            live[w] = 1;
            work.push_back(w);
        }
    };
    for (const auto& b : n.outputs)
        for (WireId w : b.wires)
            mark(w);
    while (!work.empty()) {
        const WireId w = work.back();
        work.pop_back();
        if (gate_of[w] != none)
            for (WireId in : n.gates[gate_of[w]].inputs)
                mark(in);
        else if (reg_of[w] != none)
            mark(n.registers[reg_of[w]].input);
    }
    for (const auto& b : n.inputs)
        for (WireId w : b.wires)
            live[w] = 1;

    Netlist out;
    out.name = n.name;
    out.stage_count = n.stage_count;
    std::vector<WireId> remap(n.wire_count(), 0);
    for (std::size_t w = 0; w < n.wire_count(); ++w)
        if (live[w]) {
            remap[w] = static_cast<WireId>(out.wire_names.size());
            out.wire_names.push_back(n.wire_names[w]);
        }
    auto move_bus = [&](const Bus& b) {
        Bus r{b.name, {}};
        for (WireId w : b.wires)
            r.wires.push_back(remap[w]);
        return r;
    };
    for (const auto& b : n.inputs)
        out.inputs.push_back(move_bus(b));
    for (const auto& b : n.outputs)
        out.outputs.push_back(move_bus(b));
    const bool marks = n.stage_marks.size() == n.gates.size();
    for (std::size_t i = 0; i < n.gates.size(); ++i) {
        if (!live[n.gates[i].output])
            continue;
        Gate g = n.gates[i];
        for (auto& in : g.inputs)
            in = remap[in];
        g.output = remap[g.output];
        out.gates.push_back(std::move(g));
        if (marks)
            out.stage_marks.push_back(n.stage_marks[i]);
    }
    for (const auto& r : n.registers)
        if (live[r.output])
            out.registers.push_back({remap[r.input], remap[r.output], r.stage});
    return out;
}

} // namespace komsys
