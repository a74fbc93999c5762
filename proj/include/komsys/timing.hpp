#pragma once

#include <map>
#include <string>
#include <vector>

#include "komsys/netlist.hpp"

namespace komsys {

/// Abstract per-gate-kind delays. Registers are ideal (zero setup and
/// clock-to-q).
struct DelayTable {
    std::map<GateKind, double> delay;

    /// One unit per gate for every primitive kind.
    static DelayTable unit();
};

struct TimingReport {
    std::vector<double> per_stage_delay;
    double max_stage_delay = 0.0;
    double total_unpipelined_delay = 0.0;
    /// Gate ids along the longest path of the worst stage, source to sink.
    std::vector<std::string> witness_path;
    int worst_stage = 0;
};

/// Longest delay-weighted path per stage, plus the longest path with all
/// registers made transparent. Throws NetlistError when a gate kind present
/// in the netlist has no delay entry.
TimingReport critical_path(const Netlist& netlist, const DelayTable& delays);

} // namespace komsys
