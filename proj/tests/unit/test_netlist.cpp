#include <doctest.h>

#include "komsys/builder.hpp"
#include "komsys/netlist.hpp"

using namespace komsys;

namespace {

Netlist xor_netlist()
{
    CircuitBuilder b("xor");
    const auto a = b.add_input("a", 1);
    const auto c = b.add_input("b", 1);
    const Signal y = b.xor_(a[0], c[0]);
    b.add_output("y", std::span(&y, 1));
    return std::move(b).build();
}

bool has_defect(const ValidationResult& r, Defect::Kind kind, const std::string& text)
{
    for (const auto& d : r.defects)
        if (d.kind == kind && d.message.find(text) != std::string::npos)
            return true;
    return false;
}

} // namespace

TEST_CASE("single XOR netlist validates")
{
    const auto n = xor_netlist();
    CHECK(validate(n).ok());
    CHECK(n.is_combinational());
    CHECK(n.gates.size() == 1);
}

TEST_CASE("a wire driven by two gates is reported")
{
    auto n = xor_netlist();
    Gate extra = n.gates[0];
    extra.id = "dup";
    extra.kind = GateKind::AND;
    n.gates.push_back(extra);
    const auto r = validate(n);
    CHECK_FALSE(r.ok());
    CHECK(has_defect(r, Defect::Kind::MultiplyDriven, "multiply-driven wire"));
}

TEST_CASE("a combinational loop is reported with its stage")
{
    Netlist n;
    n.name = "loop";
    n.wire_names = {"a[0]", "x[0]"};
    n.inputs.push_back({"a", {0}});
    n.outputs.push_back({"x", {1}});
    n.gates.push_back({"g", GateKind::AND, {1, 0}, 1});
    const auto r = validate(n);
    CHECK(has_defect(r, Defect::Kind::Cycle, "cycle in stage 0"));
}

TEST_CASE("arity, dangling references and undriven outputs")
{
    auto n = xor_netlist();
    n.gates[0].inputs.pop_back();
    CHECK(has_defect(validate(n), Defect::Kind::BadArity, ""));

    n = xor_netlist();
    n.gates[0].inputs[1] = 99;
    CHECK(has_defect(validate(n), Defect::Kind::BadWireRef, ""));

    n = xor_netlist();
    n.gates.clear();
    CHECK(has_defect(validate(n), Defect::Kind::Undriven, "undriven wire"));
}

TEST_CASE("register stages must be consistent")
{
    CircuitBuilder b("reg");
    const auto a = b.add_input("a", 1);
    const Signal r1 = b.add_register(a[0], 1);
    const Signal r2 = b.add_register(r1, 2);
    b.add_output("y", std::span(&r2, 1));
    auto n = std::move(b).build();
    CHECK(validate(n).ok());
    CHECK(n.stage_count == 2);

    auto wrong = n;
    wrong.registers[1].stage = 1;
    CHECK_FALSE(validate(wrong).ok());

    auto bad_count = n;
    bad_count.stage_count = 5;
    CHECK(has_defect(validate(bad_count), Defect::Kind::BadStageCount, ""));

    auto no_regs = n;
    no_regs.stage_count = 0;
    CHECK_FALSE(validate(no_regs).ok());
}

TEST_CASE("require_valid throws with every defect listed")
{
    auto n = xor_netlist();
    n.gates.push_back(n.gates[0]);
    CHECK_THROWS_AS(require_valid(n), NetlistError);
    CHECK_NOTHROW(require_valid(xor_netlist()));
}

TEST_CASE("builder folds constants and keeps ids unique")
{
    CircuitBuilder b("fold");
    const auto a = b.add_input("a", 2);
    CHECK(b.and_(a[0], Signal::zero()) == Signal::zero());
    CHECK(b.or_(a[0], Signal::zero()) == a[0]);
    CHECK(b.xor_(Signal::one(), Signal::one()) == Signal::zero());
    const auto fa = b.full_add(a[0], a[1], Signal::zero());
    const SignalVec outs{fa.sum, fa.carry, Signal::one()};
    b.add_output("y", outs);
    const auto n = std::move(b).build();
    CHECK(validate(n).ok());
    // Half adder (2 gates) plus a gate materializing the constant.
    CHECK(n.gates.size() == 3);
}

TEST_CASE("dead logic is dropped with its wires")
{
    CircuitBuilder b("dead");
    const auto a = b.add_input("a", 2);
    b.and_(a[0], a[1]);
    const Signal y = b.xor_(a[0], a[1]);
    b.add_output("y", std::span(&y, 1));
    const auto full = std::move(b).build();
    CHECK(full.gates.size() == 2);
    const auto pruned = remove_dead_logic(full);
    CHECK(pruned.gates.size() == 1);
    CHECK(validate(pruned).ok());
    CHECK(pruned.wire_count() == 3);
}

TEST_CASE("topological order respects dependencies")
{
    CircuitBuilder b("chain");
    const auto a = b.add_input("a", 2);
    Signal s = a[0];
    for (int i = 0; i < 3; ++i)
        s = b.xor_(s, a[1]);
    b.add_output("y", std::span(&s, 1));
    const auto n = std::move(b).build();
    const auto order = topological_gate_order(n);
    REQUIRE(order.size() == 3);
    CHECK(order[0] == 0);
    CHECK(order[2] == 2);
}
