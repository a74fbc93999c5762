#include "komsys/cost.hpp"

#include <algorithm>
#include <stdexcept>

#include "komsys/timing.hpp"

namespace komsys {

std::string_view to_string(MultiplierKind kind)
{
    switch (kind) {
    case MultiplierKind::KOM16: return "KOM16";
    case MultiplierKind::KOM32: return "KOM32";
    case MultiplierKind::BW32: return "BW32";
    case MultiplierKind::DADDA32: return "DADDA32";
    }
    return "?";
}

std::optional<MultiplierKind> parse_multiplier_kind(std::string_view text)
{
    std::string upper(text);
    for (auto& c : upper)
        if (c >= 'a' && c <= 'z')
            c = static_cast<char>(c - 'a' + 'A');
    for (auto k : kAllMultiplierKinds)
        if (to_string(k) == upper)
            return k;
    return std::nullopt;
}

CostReport& CostReport::operator+=(const CostReport& o)
{
    slice_registers += o.slice_registers;
    slice_luts += o.slice_luts;
    lut_ff_pairs += o.lut_ff_pairs;
    bonded_iobs += o.bonded_iobs;
    gate_count += o.gate_count;
    register_count += o.register_count;
    depth = std::max(depth, o.depth);
    return *this;
}

CostReport cost_report(const Netlist& n, CostModel model, const std::optional<UnitCost>& unit)
{
    if (model == CostModel::Calibrated && !unit)
        throw std::invalid_argument("calibrated cost model requested without a unit cost");
    require_valid(n);

    CostReport r;
    r.gate_count = n.gates.size();
    r.register_count = n.registers.size();
    r.depth = static_cast<std::uint64_t>(critical_path(n, DelayTable::unit()).max_stage_delay);

    if (model == CostModel::Calibrated) {
        r.slice_registers = unit->slice_registers;
        r.slice_luts = unit->slice_luts;
        r.lut_ff_pairs = unit->lut_ff_pairs;
        r.bonded_iobs = unit->bonded_iobs;
        return r;
    }

    std::vector<char> gate_driven(n.wire_count(), 0);
    for (const auto& g : n.gates)
        gate_driven[g.output] = 1;
    r.slice_luts = r.gate_count;
    r.slice_registers = r.register_count;
    for (const auto& reg : n.registers)
        r.lut_ff_pairs += gate_driven[reg.input] ? 1 : 0;
    for (const auto* buses : {&n.inputs, &n.outputs})
        for (const auto& b : *buses)
            r.bonded_iobs += static_cast<std::uint64_t>(b.width());
    if (n.stage_count > 0)
        r.bonded_iobs += 1;
    return r;
}

} // namespace komsys
