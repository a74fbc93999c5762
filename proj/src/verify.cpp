#include "komsys/verify.hpp"

#include <random>
#include <stdexcept>
#include <vector>

#include "komsys/bitvec.hpp"
#include "komsys/simulate.hpp"

namespace komsys {

namespace {

class MultiplierChecker {
public:
    MultiplierChecker(const Netlist& net, bool is_signed) : sim_(net), signed_(is_signed)
    {
        const Bus* a = net.find_input("A");
        const Bus* b = net.find_input("B");
        const Bus* p = net.find_output("P");
        if (!a || !b || !p || a->width() != b->width() || p->width() != 2 * a->width() || a->width() > 64)
            throw std::invalid_argument("netlist '" + net.name + "' is not an n x n -> 2n multiplier");
        width_ = a->width();
    }

    int width() const { return width_; }

    void check(const std::vector<std::uint64_t>& as, const std::vector<std::uint64_t>& bs, SweepResult& result)
    {
        const auto lanes = as.size();
        PackedAssignment in{{"A", PackedBus(static_cast<std::size_t>(width_), 0)},
                            {"B", PackedBus(static_cast<std::size_t>(width_), 0)}};
        for (std::size_t lane = 0; lane < lanes; ++lane)
            for (int i = 0; i < width_; ++i) {
                in["A"][static_cast<std::size_t>(i)] |= ((as[lane] >> i) & 1) << lane;
                in["B"][static_cast<std::size_t>(i)] |= ((bs[lane] >> i) & 1) << lane;
            }
        const auto out = sim_.evaluate(in);
        const auto& p = out.at("P");
        for (std::size_t lane = 0; lane < lanes; ++lane) {
            u128 got = 0;
            for (std::size_t i = 0; i < p.size(); ++i)
                got |= static_cast<u128>((p[i] >> lane) & 1) << i;
            const u128 want = expected(as[lane], bs[lane]);
            ++result.checked;
            if (got == want) {
                ++result.passed;
            } else if (result.first_failure.empty()) {
                result.first_failure = describe(as[lane], bs[lane], got, want);
            }
        }
    }

private:
    i128 as_signed(std::uint64_t v) const { return BitVec::from_unsigned(width_, v).to_signed(); }

    u128 expected(std::uint64_t a, std::uint64_t b) const
    {
        const int pw = 2 * width_;
        const u128 mask = pw >= 128 ? ~u128{0} : (u128{1} << pw) - 1;
        if (signed_)
            return static_cast<u128>(as_signed(a) * as_signed(b)) & mask;
        return static_cast<u128>(a) * static_cast<u128>(b) & mask;
    }

    std::string describe(std::uint64_t a, std::uint64_t b, u128 got, u128 want) const
    {
        const int pw = 2 * width_;
        if (signed_)
            return "A=" + to_decimal(as_signed(a)) + " B=" + to_decimal(as_signed(b)) +
                   ": got " + to_decimal(BitVec::from_unsigned(pw, got).to_signed()) + ", expected " +
                   to_decimal(BitVec::from_unsigned(pw, want).to_signed());
        return "A=" + to_decimal(u128{a}) + " B=" + to_decimal(u128{b}) + ": got " + to_decimal(got) +
               ", expected " + to_decimal(want);
    }

    Simulator sim_;
    bool signed_;
    int width_ = 0;
};

} // namespace

SweepResult sweep_exhaustive(const Netlist& multiplier, bool is_signed)
{
    MultiplierChecker checker(multiplier, is_signed);
    const int w = checker.width();
    if (w > 12)
        throw std::invalid_argument("exhaustive sweep limited to 12-bit operands");
    const std::uint64_t span = std::uint64_t{1} << w;
    SweepResult result;
    std::vector<std::uint64_t> as, bs;
    for (std::uint64_t a = 0; a < span; ++a) {
        for (std::uint64_t b = 0; b < span; ++b) {
            as.push_back(a);
            bs.push_back(b);
            if (as.size() == 64) {
                checker.check(as, bs, result);
                as.clear();
                bs.clear();
            }
        }
    }
    if (!as.empty())
        checker.check(as, bs, result);
    return result;
}

SweepResult sweep_random(const Netlist& multiplier, std::uint64_t count, std::uint64_t seed, bool is_signed)
{
    MultiplierChecker checker(multiplier, is_signed);
    const int w = checker.width();
    const std::uint64_t mask = w >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << w) - 1;
    std::mt19937_64 rng(seed);
    SweepResult result;
    std::vector<std::uint64_t> as, bs;
    for (std::uint64_t i = 0; i < count; ++i) {
        as.push_back(rng() & mask);
        bs.push_back(rng() & mask);
        if (as.size() == 64 || i + 1 == count) {
            checker.check(as, bs, result);
            as.clear();
            bs.clear();
        }
    }
    return result;
}

} // namespace komsys
