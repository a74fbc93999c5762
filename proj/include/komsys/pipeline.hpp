#pragma once

#include <vector>

#include "komsys/netlist.hpp"

namespace komsys {

struct PipelinePolicy {
    enum class Kind { CutAtDepth, CutAtMarkers };
    Kind kind = Kind::CutAtMarkers;
    int max_depth = 0;

    static PipelinePolicy cut_at_depth(int d) { return {Kind::CutAtDepth, d}; }
    static PipelinePolicy cut_at_markers() { return {Kind::CutAtMarkers, 0}; }
};

/// Splits a combinational netlist into register-separated stages. Every stage
/// is followed by a register rank, so the result has one rank per gate stage
/// and the outputs are registered. Values crossing several stages are carried
/// through one register per rank.
///
/// cut-at-depth(d) places each gate by its unit-delay level: stage (level-1)/d.
/// cut-at-markers uses the netlist's generator-emitted stage marks.
Netlist insert_pipeline(const Netlist& netlist, const PipelinePolicy& policy);

/// Rebuilds `netlist` with gate i in stage `gate_stage[i]`. Stages must not
/// decrease along any edge.
Netlist assign_stages(const Netlist& netlist, const std::vector<int>& gate_stage);

} // namespace komsys
