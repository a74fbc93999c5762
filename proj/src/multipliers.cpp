#include "komsys/multipliers.hpp"

#include <bit>
#include <set>

#include "arith.hpp"
#include "komsys/builder.hpp"
#include "komsys/pipeline.hpp"

namespace komsys {

using detail::Columns;

std::string_view to_string(MultiplierFamily family)
{
    switch (family) {
    case MultiplierFamily::KOM: return "kom";
    case MultiplierFamily::BAUGH_WOOLEY: return "bw";
    case MultiplierFamily::DADDA: return "dadda";
    case MultiplierFamily::ARRAY: return "array";
    }
    return "?";
}

std::string_view to_string(KomVariant variant)
{
    return variant == KomVariant::ThreeProduct ? "three-product" : "four-product";
}

std::optional<MultiplierFamily> parse_family(std::string_view text)
{
    if (text == "kom")
        return MultiplierFamily::KOM;
    if (text == "bw" || text == "baugh-wooley")
        return MultiplierFamily::BAUGH_WOOLEY;
    if (text == "dadda")
        return MultiplierFamily::DADDA;
    if (text == "array")
        return MultiplierFamily::ARRAY;
    return std::nullopt;
}

std::optional<KomVariant> parse_kom_variant(std::string_view text)
{
    if (text == "three-product")
        return KomVariant::ThreeProduct;
    if (text == "four-product")
        return KomVariant::FourProduct;
    return std::nullopt;
}

std::string multiplier_name(const MultiplierSpec& spec)
{
    std::string name(to_string(spec.family));
    name += std::to_string(spec.width);
    if (spec.family == MultiplierFamily::KOM)
        name += spec.kom_variant == KomVariant::ThreeProduct ? "_3p" : "_4p";
    if (spec.pipelined)
        name += "_pipe";
    return name;
}

bool is_signed_multiplier_name(std::string_view name)
{
    return name.size() > 2 && name.substr(0, 2) == "bw" && name[2] >= '0' && name[2] <= '9';
}

namespace {

void check_width(const MultiplierSpec& spec, MultiplierFamily expected)
{
    if (spec.family != expected)
        throw GeneratorError("generator for " + std::string(to_string(expected)) + " called with a " +
                             std::string(to_string(spec.family)) + " spec");
    const int w = spec.width;
    if (w < 2 || w > 64 || !std::has_single_bit(static_cast<unsigned>(w)))
        throw GeneratorError("unsupported multiplier width " + std::to_string(w) +
                             " (expected a power of two in [2, 64])");
    if (spec.pipelined && expected != MultiplierFamily::KOM)
        throw GeneratorError("only KOM multipliers are generated pipelined");
}

SignalVec base_multiply(CircuitBuilder& b, std::span<const Signal> x, std::span<const Signal> y)
{
    ScopeGuard scope(b, "base2");
    const Signal p0 = b.and_(x[0], y[0]);
    const auto low = b.half_add(b.and_(x[1], y[0]), b.and_(x[0], y[1]));
    const auto high = b.half_add(b.and_(x[1], y[1]), low.carry);
    return {p0, low.sum, high.sum, high.carry};
}

class KomGenerator {
public:
    KomGenerator(CircuitBuilder& b, KomVariant variant) : b_(b), variant_(variant) {}

    SignalVec multiply(std::span<const Signal> x, std::span<const Signal> y)
    {
        const auto w = x.size();
        if (w == 2) {
            b_.set_stage_mark(0);
            return base_multiply(b_, x, y);
        }
        const auto h = w / 2;
        const auto x_r = x.first(h), x_l = x.subspan(h);
        const auto y_r = y.first(h), y_l = y.subspan(h);
        const int combine_stage = std::bit_width(w) - 3;

        Columns cols(2 * w);
        const auto ww = static_cast<int>(w), hh = static_cast<int>(h);
        if (variant_ == KomVariant::FourProduct) {
            const auto ll = sub("ll", x_l, y_l);
            const auto rl = sub("rl", x_r, y_l);
            const auto lr = sub("lr", x_l, y_r);
            const auto rr = sub("rr", x_r, y_r);
            ScopeGuard scope(b_, "combine");
            b_.set_stage_mark(combine_stage);
            detail::add_row(cols, rr, 0);
            detail::add_row(cols, ll, ww);
            detail::add_row(cols, rl, hh);
            detail::add_row(cols, lr, hh);
            return detail::sum_columns(b_, std::move(cols));
        }

        const auto ll = sub("ll", x_l, y_l);
        const auto rr = sub("rr", x_r, y_r);
        detail::RippleSum sx, sy;
        {
            ScopeGuard scope(b_, "presum");
            b_.set_stage_mark(0);
            sx = detail::ripple_add(b_, x_r, x_l, Signal::zero());
            sy = detail::ripple_add(b_, y_r, y_l, Signal::zero());
        }
        const auto mid = sub("mid", sx.sum, sy.sum);

        ScopeGuard scope(b_, "combine");
        b_.set_stage_mark(combine_stage);
        // (x_l + x_r)(y_l + y_r) = mid + cx*sy*2^h + cy*sx*2^h + cx*cy*2^w,
        // then the middle term drops x_l*y_l and x_r*y_r, all shifted by h.
        detail::add_row(cols, rr, 0);
        detail::add_row(cols, ll, ww);
        detail::add_row(cols, mid, hh);
        SignalVec gated_y, gated_x;
        for (std::size_t i = 0; i < h; ++i) {
            gated_y.push_back(b_.and_(sx.carry, sy.sum[i]));
            gated_x.push_back(b_.and_(sy.carry, sx.sum[i]));
        }
        detail::add_row(cols, gated_y, ww);
        detail::add_row(cols, gated_x, ww);
        const Signal both = b_.and_(sx.carry, sy.carry);
        detail::add_row(cols, std::span(&both, 1), ww + hh);
        subtract_shifted(cols, ll, hh);
        subtract_shifted(cols, rr, hh);
        return detail::sum_columns(b_, std::move(cols));
    }

private:
    SignalVec sub(const char* name, std::span<const Signal> x, std::span<const Signal> y)
    {
        ScopeGuard scope(b_, name);
        return multiply(x, y);
    }

    // cols -= value * 2^shift, modulo 2^cols.size(): add the one's complement
    // over the remaining field plus one.
    void subtract_shifted(Columns& cols, std::span<const Signal> value, int shift)
    {
        const auto field = cols.size() - static_cast<std::size_t>(shift);
        SignalVec inverted;
        for (std::size_t i = 0; i < field; ++i)
            inverted.push_back(i < value.size() ? b_.not_(value[i]) : Signal::one());
        detail::add_row(cols, inverted, shift);
        const Signal one = Signal::one();
        detail::add_row(cols, std::span(&one, 1), shift);
    }

    CircuitBuilder& b_;
    KomVariant variant_;
};

} // namespace

Netlist gen_base_multiplier()
{
    CircuitBuilder b("base2");
    const auto x = b.add_input("A", 2);
    const auto y = b.add_input("B", 2);
    const auto p = base_multiply(b, x, y);
    b.add_output("P", p);
    return remove_dead_logic(std::move(b).build());
}

Netlist gen_kom(const MultiplierSpec& spec)
{
    check_width(spec, MultiplierFamily::KOM);
    CircuitBuilder b(multiplier_name(spec));
    b.enable_stage_marks();
    const auto x = b.add_input("A", spec.width);
    const auto y = b.add_input("B", spec.width);
    KomGenerator gen(b, spec.kom_variant);
    const auto p = gen.multiply(x, y);
    b.add_output("P", p);
    auto net = remove_dead_logic(std::move(b).build());
    if (!spec.pipelined || spec.width == 2)
        return net;
    auto piped = insert_pipeline(net, PipelinePolicy::cut_at_markers());
    piped.name = net.name;
    return piped;
}

Netlist gen_baugh_wooley(const MultiplierSpec& spec)
{
    check_width(spec, MultiplierFamily::BAUGH_WOOLEY);
    const auto n = static_cast<std::size_t>(spec.width);
    CircuitBuilder b(multiplier_name(spec));
    const auto x = b.add_input("A", spec.width);
    const auto y = b.add_input("B", spec.width);

    // Partial products with exactly one sign bit are inverted.
    auto pp = [&](std::size_t i, std::size_t j) {
        const bool invert = (i == n - 1) != (j == n - 1);
        return invert ? b.nand_(x[i], y[j]) : b.and_(x[i], y[j]);
    };

    SignalVec sum(2 * n, Signal::zero());
    SignalVec carry(2 * n, Signal::zero());
    {
        ScopeGuard scope(b, "row0");
        for (std::size_t i = 0; i < n; ++i)
            sum[i] = pp(i, 0);
    }
    // Correction constants 2^n and 2^(2n-1).
    sum[n] = Signal::one();
    sum[2 * n - 1] = Signal::one();

    // Carry-save rows; the carries stay unresolved until the final adder.
    for (std::size_t j = 1; j < n; ++j) {
        ScopeGuard scope(b, "row" + std::to_string(j));
        SignalVec next_carry = carry;
        for (std::size_t k = j; k < j + n; ++k)
            next_carry[k] = Signal::zero();
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t k = i + j;
            const auto fa = b.full_add(sum[k], pp(i, j), carry[k]);
            sum[k] = fa.sum;
            if (k + 1 < 2 * n)
                next_carry[k + 1] = fa.carry;
        }
        carry = std::move(next_carry);
    }

    SignalVec p;
    {
        ScopeGuard scope(b, "final");
        p = detail::ripple_add(b, sum, carry, Signal::zero()).sum;
    }
    b.add_output("P", p);
    return remove_dead_logic(std::move(b).build());
}

Netlist gen_dadda(const MultiplierSpec& spec)
{
    check_width(spec, MultiplierFamily::DADDA);
    const auto n = static_cast<std::size_t>(spec.width);
    CircuitBuilder b(multiplier_name(spec));
    const auto x = b.add_input("A", spec.width);
    const auto y = b.add_input("B", spec.width);

    Columns cols(2 * n);
    {
        ScopeGuard scope(b, "pp");
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t i = 0; i < n; ++i)
                cols[i + j].push_back(b.and_(x[i], y[j]));
    }
    detail::dadda_reduce(b, cols);
    SignalVec p;
    {
        ScopeGuard scope(b, "final");
        p = detail::ripple_columns(b, cols);
    }
    b.add_output("P", p);
    return remove_dead_logic(std::move(b).build());
}

Netlist gen_array(const MultiplierSpec& spec)
{
    check_width(spec, MultiplierFamily::ARRAY);
    const auto n = static_cast<std::size_t>(spec.width);
    CircuitBuilder b(multiplier_name(spec));
    const auto x = b.add_input("A", spec.width);
    const auto y = b.add_input("B", spec.width);

    SignalVec p;
    SignalVec acc;
    {
        ScopeGuard scope(b, "row0");
        for (std::size_t i = 0; i < n; ++i)
            acc.push_back(b.and_(x[i], y[0]));
        acc.push_back(Signal::zero());
    }
    for (std::size_t j = 1; j < n; ++j) {
        ScopeGuard scope(b, "row" + std::to_string(j));
        p.push_back(acc[0]);
        const SignalVec upper(acc.begin() + 1, acc.end());
        SignalVec row;
        for (std::size_t i = 0; i < n; ++i)
            row.push_back(b.and_(x[i], y[j]));
        const auto r = detail::ripple_add(b, upper, row, Signal::zero());
        acc = r.sum;
        acc.push_back(r.carry);
    }
    p.insert(p.end(), acc.begin(), acc.end());
    b.add_output("P", p);
    return remove_dead_logic(std::move(b).build());
}

Netlist generate(const MultiplierSpec& spec)
{
    switch (spec.family) {
    case MultiplierFamily::KOM: return gen_kom(spec);
    case MultiplierFamily::BAUGH_WOOLEY: return gen_baugh_wooley(spec);
    case MultiplierFamily::DADDA: return gen_dadda(spec);
    case MultiplierFamily::ARRAY: return gen_array(spec);
    }
    throw GeneratorError("unknown multiplier family");
}

std::uint64_t count_instances(const Netlist& netlist, std::string_view cell)
{
    std::set<std::string_view> seen;
    for (const auto& g : netlist.gates) {
        const std::string_view id = g.id;
        std::size_t start = 0;
        while (start < id.size()) {
            const auto slash = id.find('/', start);
            if (slash == std::string_view::npos)
                break;
            if (id.substr(start, slash - start) == cell) {
                seen.insert(id.substr(0, slash));
                break;
            }
            start = slash + 1;
        }
    }
    return seen.size();
}

std::uint64_t count_base_multipliers(const MultiplierSpec& spec)
{
    if (spec.family != MultiplierFamily::KOM)
        throw GeneratorError("base multiplier count is defined for KOM specs only");
    MultiplierSpec flat = spec;
    flat.pipelined = false;
    return count_instances(gen_kom(flat), "base2");
}

std::vector<int> dadda_stage_heights(int max_height)
{
    std::vector<int> seq{2};
    while (seq.back() * 3 / 2 < max_height)
        seq.push_back(seq.back() * 3 / 2);
    std::vector<int> out;
    for (auto it = seq.rbegin(); it != seq.rend(); ++it)
        if (*it < max_height)
            out.push_back(*it);
    return out;
}

int dadda_reduction_stages(const Netlist& netlist)
{
    int stages = 0;
    while (count_instances(netlist, "reduce" + std::to_string(stages + 1)) > 0)
        ++stages;
    return stages;
}

KomDecomposition decompose(u128 a, u128 b, int width)
{
    if (width < 2 || width > 64 || width % 2 != 0)
        throw GeneratorError("decompose expects an even width in [2, 64]");
    const int h = width / 2;
    const u128 mask = (u128{1} << h) - 1;
    return {a >> h & mask, a & mask, b >> h & mask, b & mask, width, h};
}

} // namespace komsys
