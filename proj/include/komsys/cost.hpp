#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "komsys/netlist.hpp"

namespace komsys {

/// Multiplier configurations with calibrated FPGA costs.
enum class MultiplierKind { KOM16, KOM32, BW32, DADDA32 };

inline constexpr MultiplierKind kAllMultiplierKinds[] = {MultiplierKind::KOM16, MultiplierKind::KOM32,
                                                         MultiplierKind::BW32, MultiplierKind::DADDA32};

std::string_view to_string(MultiplierKind kind);
std::optional<MultiplierKind> parse_multiplier_kind(std::string_view text);

/// Per-multiplier FPGA resource cost.
struct UnitCost {
    MultiplierKind kind = MultiplierKind::KOM16;
    std::uint64_t slice_registers = 0;
    std::uint64_t slice_luts = 0;
    std::uint64_t lut_ff_pairs = 0;
    std::uint64_t bonded_iobs = 0;

    bool operator==(const UnitCost&) const = default;
};

struct CostReport {
    std::uint64_t slice_registers = 0;
    std::uint64_t slice_luts = 0;
    std::uint64_t lut_ff_pairs = 0;
    std::uint64_t bonded_iobs = 0;
    std::uint64_t gate_count = 0;
    std::uint64_t register_count = 0;
    std::uint64_t depth = 0;

    bool operator==(const CostReport&) const = default;
    CostReport& operator+=(const CostReport& other);
};

enum class CostModel { Structural, Calibrated };

/// Structural fields always come from the netlist: gate and register counts,
/// and depth as the largest unit-delay gate level in any stage.
///
/// Structural FPGA mapping: one primitive gate per LUT, one register per
/// slice register, a LUT-FF pair for every register fed directly by a gate,
/// and one IOB per bus bit plus a clock pin when the netlist is pipelined.
///
/// The calibrated model replaces the four FPGA fields with `unit` and throws
/// std::invalid_argument when no unit cost is supplied.
CostReport cost_report(const Netlist& netlist, CostModel model,
                       const std::optional<UnitCost>& unit = std::nullopt);

} // namespace komsys
