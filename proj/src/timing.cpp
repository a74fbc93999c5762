#include "komsys/timing.hpp"

#include <algorithm>

#include "komsys/simulate.hpp"

namespace komsys {

DelayTable DelayTable::unit()
{
    DelayTable t;
    for (GateKind k : kAllGateKinds)
        t.delay[k] = 1.0;
    return t;
}

namespace {

struct Arrival {
    std::vector<double> at;          // per wire
    std::vector<std::size_t> pred;   // per gate: predecessor gate, or npos
    std::vector<double> gate_at;     // per gate output
};

constexpr std::size_t npos = ~std::size_t{0};

Arrival arrivals(const Netlist& n, const DelayTable& delays)
{
    Arrival a;
    a.at.assign(n.wire_count(), 0.0);
    a.pred.assign(n.gates.size(), npos);
    a.gate_at.assign(n.gates.size(), 0.0);
    std::vector<std::size_t> driver(n.wire_count(), npos);
    for (std::size_t g = 0; g < n.gates.size(); ++g)
        driver[n.gates[g].output] = g;

    for (auto gi : topological_gate_order(n)) {
        const auto& g = n.gates[gi];
        const auto it = delays.delay.find(g.kind);
        if (it == delays.delay.end())
            throw NetlistError("delay table has no entry for gate kind " + std::string(to_string(g.kind)));
        double worst = -1.0;
        for (WireId w : g.inputs) {
            if (a.at[w] > worst) {
                worst = a.at[w];
                a.pred[gi] = driver[w];
            }
        }
        a.gate_at[gi] = worst + it->second;
        a.at[g.output] = a.gate_at[gi];
    }
    return a;
}

} // namespace

TimingReport critical_path(const Netlist& n, const DelayTable& delays)
{
    require_valid(n);
    TimingReport report;
    const auto stages = compute_stages(n);
    const auto arr = arrivals(n, delays);

    int max_gate_stage = 0;
    for (int s : stages.gate_stage)
        max_gate_stage = std::max(max_gate_stage, s);
    const int stage_slots = std::max({1, n.stage_count, n.gates.empty() ? 0 : max_gate_stage + 1});
    report.per_stage_delay.assign(static_cast<std::size_t>(stage_slots), 0.0);

    std::size_t worst_gate = npos;
    for (std::size_t g = 0; g < n.gates.size(); ++g) {
        auto& slot = report.per_stage_delay[static_cast<std::size_t>(stages.gate_stage[g])];
        slot = std::max(slot, arr.gate_at[g]);
        if (worst_gate == npos || arr.gate_at[g] > arr.gate_at[worst_gate])
            worst_gate = g;
    }
    report.max_stage_delay = *std::max_element(report.per_stage_delay.begin(), report.per_stage_delay.end());
    if (worst_gate != npos) {
        report.worst_stage = stages.gate_stage[worst_gate];
        for (auto g = worst_gate; g != npos; g = arr.pred[g])
            report.witness_path.push_back(n.gates[g].id);
        std::reverse(report.witness_path.begin(), report.witness_path.end());
    }

    if (n.registers.empty()) {
        report.total_unpipelined_delay = report.max_stage_delay;
    } else {
        const auto flat = flatten(n);
        const auto flat_arr = arrivals(flat, delays);
        for (double t : flat_arr.gate_at)
            report.total_unpipelined_delay = std::max(report.total_unpipelined_delay, t);
    }
    return report;
}

} // namespace komsys
