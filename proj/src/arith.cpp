#include "arith.hpp"

#include <algorithm>
#include <stdexcept>

#include "komsys/multipliers.hpp"

namespace komsys::detail {

void add_row(Columns& cols, std::span<const Signal> bits, int shift)
{
    for (std::size_t i = 0; i < bits.size(); ++i) {
        const std::size_t col = static_cast<std::size_t>(shift) + i;
        if (col >= cols.size())
            break;
        if (bits[i] == Signal::zero())
            continue;
        cols[col].push_back(bits[i]);
    }
}

void fold_constants(Columns& cols)
{
    std::size_t carry = 0;
    for (auto& col : cols) {
        std::size_t ones = carry;
        SignalVec kept;
        for (const Signal& s : col) {
            if (s.is_const())
                ones += s.const_value() ? 1 : 0;
            else
                kept.push_back(s);
        }
        if (ones & 1)
            kept.push_back(Signal::one());
        carry = ones >> 1;
        col = std::move(kept);
    }
}

int dadda_reduce(CircuitBuilder& b, Columns& cols)
{
    std::size_t max_height = 0;
    for (const auto& c : cols)
        max_height = std::max(max_height, c.size());
    const auto targets = dadda_stage_heights(static_cast<int>(max_height));

    int stage = 0;
    for (int target : targets) {
        ScopeGuard scope(b, "reduce" + std::to_string(++stage));
        const auto d = static_cast<std::size_t>(target);
        Columns next(cols.size());
        Columns carries(cols.size() + 1);
        for (std::size_t i = 0; i < cols.size(); ++i) {
            // Original bits first, then this stage's incoming carries.
            SignalVec pool = cols[i];
            pool.insert(pool.end(), carries[i].begin(), carries[i].end());
            std::size_t used = 0;
            std::size_t height = pool.size();
            SignalVec out;
            while (height > d) {
                AdderBits r;
                if (height == d + 1) {
                    r = b.half_add(pool[used], pool[used + 1]);
                    used += 2;
                    height -= 1;
                } else {
                    r = b.full_add(pool[used], pool[used + 1], pool[used + 2]);
                    used += 3;
                    height -= 2;
                }
                out.push_back(r.sum);
                if (r.carry != Signal::zero())
                    carries[i + 1].push_back(r.carry);
            }
            out.insert(out.end(), pool.begin() + static_cast<std::ptrdiff_t>(used), pool.end());
            next[i] = std::move(out);
        }
        cols = std::move(next);
    }
    return stage;
}

SignalVec ripple_columns(CircuitBuilder& b, const Columns& cols)
{
    SignalVec out;
    Signal carry = Signal::zero();
    for (const auto& col : cols) {
        if (col.size() > 2)
            throw std::logic_error("ripple merge needs columns of height <= 2");
        const Signal x = col.size() > 0 ? col[0] : Signal::zero();
        const Signal y = col.size() > 1 ? col[1] : Signal::zero();
        const auto r = b.full_add(x, y, carry);
        out.push_back(r.sum);
        carry = r.carry;
    }
    return out;
}

SignalVec sum_columns(CircuitBuilder& b, Columns cols)
{
    fold_constants(cols);
    dadda_reduce(b, cols);
    ScopeGuard scope(b, "final");
    return ripple_columns(b, cols);
}

RippleSum ripple_add(CircuitBuilder& b, std::span<const Signal> x, std::span<const Signal> y, Signal carry_in)
{
    if (x.size() != y.size())
        throw std::logic_error("ripple_add operands differ in width");
    RippleSum r{{}, carry_in};
    for (std::size_t i = 0; i < x.size(); ++i) {
        const auto fa = b.full_add(x[i], y[i], r.carry);
        r.sum.push_back(fa.sum);
        r.carry = fa.carry;
    }
    return r;
}

} // namespace komsys::detail
