#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace komsys {

using u128 = unsigned __int128;
using i128 = __int128;

/// Fixed-width bit vector, bit 0 is the least significant bit.
/// Signed views use two's complement over the declared width.
class BitVec {
public:
    BitVec() = default;
    explicit BitVec(int width);

    static BitVec from_unsigned(int width, u128 value);
    static BitVec from_signed(int width, i128 value);

    int width() const { return static_cast<int>(bits_.size()); }
    bool bit(int i) const { return bits_.at(static_cast<std::size_t>(i)) != 0; }
    void set_bit(int i, bool v) { bits_.at(static_cast<std::size_t>(i)) = v ? 1 : 0; }

    /// Requires width <= 128.
    u128 to_unsigned() const;
    i128 to_signed() const;

    bool operator==(const BitVec&) const = default;

private:
    std::vector<std::uint8_t> bits_;
};

/// Parses a decimal or 0x-prefixed hex literal, with optional leading '-'.
/// Throws std::invalid_argument on malformed text or values beyond 128 bits.
i128 parse_integer(std::string_view text);

std::string to_decimal(u128 value);
std::string to_decimal(i128 value);

} // namespace komsys
