#pragma once

// Column-oriented adder macros shared by the multiplier generators.

#include <span>
#include <vector>

#include "komsys/builder.hpp"

namespace komsys::detail {

/// Column i holds bits of weight 2^i.
using Columns = std::vector<SignalVec>;

void add_row(Columns& cols, std::span<const Signal> bits, int shift);

/// Replaces the constant bits of every column by their modular sum, at most
/// one constant-one bit per column.
void fold_constants(Columns& cols);

/// Dadda reduction down to height 2. Each stage gets its own "reduce<k>"
/// scope. Returns the number of stages.
int dadda_reduce(CircuitBuilder& b, Columns& cols);

/// Ripple-carry merge of columns of height <= 2; the final carry is dropped.
SignalVec ripple_columns(CircuitBuilder& b, const Columns& cols);

/// fold_constants + dadda_reduce + ripple_columns.
SignalVec sum_columns(CircuitBuilder& b, Columns cols);

struct RippleSum {
    SignalVec sum;
    Signal carry;
};

RippleSum ripple_add(CircuitBuilder& b, std::span<const Signal> x, std::span<const Signal> y, Signal carry_in);

} // namespace komsys::detail
