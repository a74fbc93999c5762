#pragma once

#include <cstdint>
#include <string>

#include "komsys/netlist.hpp"

namespace komsys {

/// Outcome of checking a multiplier netlist (buses A, B -> P) against native
/// integer multiplication.
struct SweepResult {
    std::uint64_t checked = 0;
    std::uint64_t passed = 0;
    std::string first_failure;

    bool ok() const { return checked == passed; }
};

/// Every operand pair; practical up to 8-bit operands (65536 pairs).
SweepResult sweep_exhaustive(const Netlist& multiplier, bool is_signed);

/// `count` uniformly random operand pairs drawn from a seeded mt19937_64.
SweepResult sweep_random(const Netlist& multiplier, std::uint64_t count, std::uint64_t seed, bool is_signed);

} // namespace komsys
