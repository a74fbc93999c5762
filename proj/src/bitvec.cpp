#include "komsys/bitvec.hpp"

#include <algorithm>
#include <stdexcept>

namespace komsys {

BitVec::BitVec(int width)
{
    if (width < 1)
        throw std::invalid_argument("BitVec width must be positive");
    bits_.assign(static_cast<std::size_t>(width), 0);
}

BitVec BitVec::from_unsigned(int width, u128 value)
{
    BitVec v(width);
    for (int i = 0; i < width && i < 128; ++i)
        v.set_bit(i, ((value >> i) & 1) != 0);
    return v;
}

BitVec BitVec::from_signed(int width, i128 value)
{
    BitVec v(width);
    const auto raw = static_cast<u128>(value);
    for (int i = 0; i < width; ++i)
        v.set_bit(i, ((raw >> std::min(i, 127)) & 1) != 0);
    return v;
}

u128 BitVec::to_unsigned() const
{
    if (width() > 128)
        throw std::out_of_range("BitVec wider than 128 bits");
    u128 out = 0;
    for (int i = 0; i < width(); ++i)
        if (bit(i))
            out |= u128{1} << i;
    return out;
}

i128 BitVec::to_signed() const
{
    u128 raw = to_unsigned();
    const int w = width();
    if (w < 128 && bit(w - 1))
        raw |= ~u128{0} << w;
    return static_cast<i128>(raw);
}

i128 parse_integer(std::string_view text)
{
    bool negative = false;
    if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
        negative = text.front() == '-';
        text.remove_prefix(1);
    }
    unsigned base = 10;
    if (text.size() > 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X')) {
        base = 16;
        text.remove_prefix(2);
    }
    if (text.empty())
        throw std::invalid_argument("empty integer literal");

    u128 value = 0;
    const u128 limit = ~u128{0};
    for (char ch : text) {
        unsigned digit = 0;
        if (ch >= '0' && ch <= '9')
            digit = static_cast<unsigned>(ch - '0');
        else if (base == 16 && ch >= 'a' && ch <= 'f')
            digit = static_cast<unsigned>(ch - 'a' + 10);
        else if (base == 16 && ch >= 'A' && ch <= 'F')
            digit = static_cast<unsigned>(ch - 'A' + 10);
        else
            throw std::invalid_argument("malformed integer literal");
        if (value > (limit - digit) / base)
            throw std::invalid_argument("integer literal out of range");
        value = value * base + digit;
    }
    if (value >> 127 && !(negative && value == (u128{1} << 127)))
        throw std::invalid_argument("integer literal out of range");
    if (negative)
        return static_cast<i128>(u128{0} - value);
    return static_cast<i128>(value);
}

std::string to_decimal(u128 value)
{
    if (value == 0)
        return "0";
    std::string out;
    while (value != 0) {
        out.push_back(static_cast<char>('0' + static_cast<int>(value % 10)));
        value /= 10;
    }
    std::reverse(out.begin(), out.end());
    return out;
}

std::string to_decimal(i128 value)
{
    if (value < 0)
        return "-" + to_decimal(static_cast<u128>(0) - static_cast<u128>(value));
    return to_decimal(static_cast<u128>(value));
}

} // namespace komsys
