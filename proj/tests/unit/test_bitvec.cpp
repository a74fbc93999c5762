#include <doctest.h>

#include <stdexcept>

#include "komsys/bitvec.hpp"

using namespace komsys;

TEST_CASE("unsigned and signed views share the bit pattern")
{
    const auto v = BitVec::from_unsigned(4, 13);
    CHECK(v.width() == 4);
    CHECK(v.bit(0));
    CHECK_FALSE(v.bit(1));
    CHECK(v.to_unsigned() == 13);
    CHECK(v.to_signed() == -3);
    CHECK(BitVec::from_signed(4, -8).to_unsigned() == 8);
    CHECK(BitVec::from_signed(8, -1).to_unsigned() == 255);
}

TEST_CASE("values wider than the vector are truncated to its width")
{
    CHECK(BitVec::from_unsigned(3, 0xff).to_unsigned() == 7);
}

TEST_CASE("128-bit values survive the round trip")
{
    const u128 big = ~u128{0} - 5;
    CHECK(BitVec::from_unsigned(128, big).to_unsigned() == big);
    CHECK(to_decimal(big) == "340282366920938463463374607431768211450");
}

TEST_CASE("integer literals in decimal and hex")
{
    CHECK(parse_integer("123456789") == 123456789);
    CHECK(parse_integer("0x1F") == 31);
    CHECK(parse_integer("-0x10") == -16);
    CHECK(parse_integer("-42") == -42);
    CHECK(to_decimal(parse_integer("121932631112635269")) == "121932631112635269");
    CHECK_THROWS_AS(parse_integer(""), std::invalid_argument);
    CHECK_THROWS_AS(parse_integer("12a"), std::invalid_argument);
    CHECK_THROWS_AS(parse_integer("0x"), std::invalid_argument);
}
