#include "komsys/builder.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace komsys {

CircuitBuilder::CircuitBuilder(std::string name)
{
    net_.name = std::move(name);
}

WireId CircuitBuilder::new_wire(std::string name)
{
    net_.wire_names.push_back(std::move(name));
    renamable_.push_back(1);
    return static_cast<WireId>(net_.wire_names.size() - 1);
}

SignalVec CircuitBuilder::add_input(const std::string& bus, int width)
{
    if (width < 1)
        throw std::invalid_argument("input bus width must be positive");
    Bus b{bus, {}};
    SignalVec bits;
    for (int i = 0; i < width; ++i) {
        const WireId w = new_wire(bus_bit_name(bus, i));
        renamable_[w] = 0;
        b.wires.push_back(w);
        bits.push_back(Signal::wire(w));
    }
    net_.inputs.push_back(std::move(b));
    return bits;
}

Signal CircuitBuilder::materialize(Signal s, const std::string& wanted)
{
    if (s.is_const()) {
        if (net_.inputs.empty())
            throw std::logic_error("cannot materialize a constant without an input bus");
        const Signal x = Signal::wire(net_.inputs.front().wires.front());
        const Signal pair[2] = {x, x};
        const Signal out = emit(s.const_value() ? GateKind::XNOR : GateKind::XOR, pair, {});
        net_.wire_names[out.wire_id()] = wanted;
        renamable_[out.wire_id()] = 0;
        return out;
    }
    if (renamable_[s.wire_id()]) {
        net_.wire_names[s.wire_id()] = wanted;
        renamable_[s.wire_id()] = 0;
        return s;
    }
    const Signal pair[2] = {s, s};
    const Signal out = emit(GateKind::AND, pair, {});
    net_.wire_names[out.wire_id()] = wanted;
    renamable_[out.wire_id()] = 0;
    return out;
}

void CircuitBuilder::add_output(const std::string& bus, std::span<const Signal> bits)
{
    Bus b{bus, {}};
    ScopeGuard scope(*this, "out");
    for (std::size_t i = 0; i < bits.size(); ++i)
        b.wires.push_back(materialize(bits[i], bus_bit_name(bus, static_cast<int>(i))).wire_id());
    net_.outputs.push_back(std::move(b));
}

Signal CircuitBuilder::emit(GateKind kind, std::span<const Signal> inputs, std::string id)
{
    Gate g;
    g.kind = kind;
    for (const Signal& s : inputs) {
        if (s.is_const())
            throw std::logic_error("constant reached a gate input");
        g.inputs.push_back(s.wire_id());
    }
    if (id.empty()) {
        std::string base(to_string(kind));
        std::transform(base.begin(), base.end(), base.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        base = prefix_ + base;
        int& counter = counters_[base];
        do {
            id = base + std::to_string(counter++);
        } while (ids_.count(id) != 0);
    } else if (ids_.count(id) != 0) {
        throw std::logic_error("duplicate gate id " + id);
    }
    ids_.insert(id);
    g.id = std::move(id);
    g.output = new_wire("n" + std::to_string(anon_++));
    net_.gates.push_back(std::move(g));
    net_.stage_marks.push_back(mark_);
    return Signal::wire(net_.gates.back().output);
}

Signal CircuitBuilder::gate(GateKind kind, Signal a, Signal b)
{
    if (kind == GateKind::NOT) {
        if (a.is_const())
            return Signal::constant(!a.const_value());
        const Signal in[1] = {a};
        return emit(kind, in, {});
    }
    if (a.is_const() && b.is_const()) {
        const bool x = a.const_value(), y = b.const_value();
        switch (kind) {
        case GateKind::AND: return Signal::constant(x && y);
        case GateKind::OR: return Signal::constant(x || y);
        case GateKind::XOR: return Signal::constant(x != y);
        case GateKind::NAND: return Signal::constant(!(x && y));
        case GateKind::XNOR: return Signal::constant(x == y);
        case GateKind::NOT: break;
        }
    }
    if (a.is_const())
        std::swap(a, b);
    if (b.is_const()) {
        const bool c = b.const_value();
        switch (kind) {
        case GateKind::AND: return c ? a : Signal::zero();
        case GateKind::OR: return c ? Signal::one() : a;
        case GateKind::XOR: return c ? not_(a) : a;
        case GateKind::NAND: return c ? not_(a) : Signal::one();
        case GateKind::XNOR: return c ? a : not_(a);
        case GateKind::NOT: break;
        }
    }
    const Signal in[2] = {a, b};
    return emit(kind, in, {});
}

AdderBits CircuitBuilder::half_add(Signal a, Signal b)
{
    return {xor_(a, b), and_(a, b)};
}

AdderBits CircuitBuilder::full_add(Signal a, Signal b, Signal c)
{
    // With a constant operand the cell degenerates; a one turns it into
    // sum = xnor, carry = or, which is a level shallower than xor then not.
    if (a.is_const() || b.is_const() || c.is_const()) {
        Signal k = a, x = b, y = c;
        if (b.is_const())
            std::swap(k, x);
        else if (c.is_const())
            std::swap(k, y);
        if (!k.const_value())
            return half_add(x, y);
        if (x.is_const() || y.is_const()) {
            const auto h = half_add(x, y);
            return {not_(h.sum), or_(x, y)};
        }
        return {xnor_(x, y), or_(x, y)};
    }
    const Signal t = xor_(a, b);
    const Signal sum = xor_(t, c);
    const Signal carry = or_(and_(a, b), and_(c, t));
    return {sum, carry};
}

Signal CircuitBuilder::add_register(Signal in, int stage)
{
    if (in.is_const())
        throw std::logic_error("register input must be a wire");
    if (stage < 1)
        throw std::invalid_argument("register stage must be >= 1");
    const WireId out = new_wire("r" + std::to_string(net_.registers.size()));
    net_.registers.push_back({in.wire_id(), out, stage});
    net_.stage_count = std::max(net_.stage_count, stage);
    return Signal::wire(out);
}

Signal CircuitBuilder::copy_gate(const Gate& g, std::span<const Signal> inputs)
{
    return emit(g.kind, inputs, g.id);
}

void CircuitBuilder::push_scope(const std::string& scope)
{
    scopes_.push_back(scope);
    prefix_.clear();
    for (const auto& s : scopes_)
        prefix_ += s + "/";
}

void CircuitBuilder::pop_scope()
{
    scopes_.pop_back();
    prefix_.clear();
    for (const auto& s : scopes_)
        prefix_ += s + "/";
}

Netlist CircuitBuilder::build() &&
{
    if (!marks_enabled_)
        net_.stage_marks.clear();
    return std::move(net_);
}

} // namespace komsys
