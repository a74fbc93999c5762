#pragma once

#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "komsys/netlist.hpp"

namespace komsys {

/// A wire or a folded constant. Constants never reach the finished netlist:
/// gate helpers fold them away and outputs materialize them from an input bit.
class Signal {
public:
    constexpr Signal() : tag_(Tag::Zero), wire_(0) {}

    static constexpr Signal zero() { return Signal(Tag::Zero, 0); }
    static constexpr Signal one() { return Signal(Tag::One, 0); }
    static constexpr Signal constant(bool v) { return v ? one() : zero(); }
    static constexpr Signal wire(WireId w) { return Signal(Tag::Wire, w); }

    constexpr bool is_const() const { return tag_ != Tag::Wire; }
    constexpr bool const_value() const { return tag_ == Tag::One; }
    constexpr WireId wire_id() const { return wire_; }

    constexpr bool operator==(const Signal&) const = default;

private:
    enum class Tag : std::uint8_t { Zero, One, Wire };
    constexpr Signal(Tag t, WireId w) : tag_(t), wire_(w) {}
    Tag tag_;
    WireId wire_;
};

using SignalVec = std::vector<Signal>;

struct AdderBits {
    Signal sum;
    Signal carry;
};

/// Incremental netlist construction with constant folding, hierarchical gate
/// ids ("scope/scope/kind<n>") and optional per-gate stage marks.
class CircuitBuilder {
public:
    explicit CircuitBuilder(std::string name);

    SignalVec add_input(const std::string& bus, int width);
    void add_output(const std::string& bus, std::span<const Signal> bits);

    Signal gate(GateKind kind, Signal a, Signal b = Signal::zero());
    Signal and_(Signal a, Signal b) { return gate(GateKind::AND, a, b); }
    Signal or_(Signal a, Signal b) { return gate(GateKind::OR, a, b); }
    Signal xor_(Signal a, Signal b) { return gate(GateKind::XOR, a, b); }
    Signal nand_(Signal a, Signal b) { return gate(GateKind::NAND, a, b); }
    Signal xnor_(Signal a, Signal b) { return gate(GateKind::XNOR, a, b); }
    Signal not_(Signal a) { return gate(GateKind::NOT, a); }

    /// Half adder: XOR + AND.
    AdderBits half_add(Signal a, Signal b);
    /// Full adder: 2 XOR + 2 AND + 1 OR.
    AdderBits full_add(Signal a, Signal b, Signal c);

    /// Register of rank `stage`; the input must be a wire.
    Signal add_register(Signal in, int stage);

    /// Adds a gate verbatim (no folding), keeping its id. Used when rebuilding.
    Signal copy_gate(const Gate& g, std::span<const Signal> inputs);

    void push_scope(const std::string& scope);
    void pop_scope();
    void set_stage_mark(int stage) { mark_ = stage; }
    int stage_mark() const { return mark_; }
    void enable_stage_marks() { marks_enabled_ = true; }

    Netlist build() &&;

private:
    WireId new_wire(std::string name);
    Signal emit(GateKind kind, std::span<const Signal> inputs, std::string id);
    Signal materialize(Signal s, const std::string& wanted_name);

    Netlist net_;
    std::vector<std::string> scopes_;
    std::string prefix_;
    std::unordered_map<std::string, int> counters_;
    std::unordered_set<std::string> ids_;
    std::vector<char> renamable_;
    int mark_ = 0;
    bool marks_enabled_ = false;
    int anon_ = 0;
};

class ScopeGuard {
public:
    ScopeGuard(CircuitBuilder& b, const std::string& scope) : b_(b) { b_.push_scope(scope); }
    ~ScopeGuard() { b_.pop_scope(); }
    ScopeGuard(const ScopeGuard&) = delete;
    ScopeGuard& operator=(const ScopeGuard&) = delete;

private:
    CircuitBuilder& b_;
};

} // namespace komsys
