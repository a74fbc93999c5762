#include <doctest.h>

#include <random>

#include "arith.hpp"
#include "komsys/builder.hpp"
#include "komsys/multipliers.hpp"
#include "komsys/simulate.hpp"

using namespace komsys;

namespace {

Netlist ripple_adder4()
{
    CircuitBuilder b("add4");
    const auto x = b.add_input("x", 4);
    const auto y = b.add_input("y", 4);
    auto r = detail::ripple_add(b, x, y, Signal::zero());
    r.sum.push_back(r.carry);
    b.add_output("s", r.sum);
    return std::move(b).build();
}

Netlist identity_pipeline()
{
    CircuitBuilder b("delay2");
    const auto a = b.add_input("a", 4);
    SignalVec out;
    for (const auto& bit : a)
        out.push_back(b.add_register(b.add_register(bit, 1), 2));
    b.add_output("y", out);
    return std::move(b).build();
}

} // namespace

TEST_CASE("XOR truth table")
{
    CircuitBuilder b("xor");
    const auto a = b.add_input("a", 1);
    const auto c = b.add_input("b", 1);
    const Signal y = b.xor_(a[0], c[0]);
    b.add_output("y", std::span(&y, 1));
    const auto n = std::move(b).build();
    for (int i = 0; i < 4; ++i) {
        const auto out = evaluate(n, {{"a", BitVec::from_unsigned(1, i & 1)}, {"b", BitVec::from_unsigned(1, i >> 1)}});
        CHECK(out.at("y").to_unsigned() == static_cast<unsigned>((i & 1) ^ (i >> 1)));
    }
}

TEST_CASE("4-bit ripple adder: 7 + 8 = 15 with no carry out")
{
    const auto n = ripple_adder4();
    const auto out = evaluate(n, {{"x", BitVec::from_unsigned(4, 7)}, {"y", BitVec::from_unsigned(4, 8)}});
    CHECK(out.at("s").to_unsigned() == 15);
    CHECK_FALSE(out.at("s").bit(4));
    for (unsigned x = 0; x < 16; ++x)
        for (unsigned y = 0; y < 16; ++y)
            CHECK(evaluate(n, {{"x", BitVec::from_unsigned(4, x)}, {"y", BitVec::from_unsigned(4, y)}})
                      .at("s")
                      .to_unsigned() == x + y);
}

TEST_CASE("2-bit base multiplier covers its 16 cases")
{
    const auto n = gen_base_multiplier();
    CHECK(n.gates.size() == static_cast<std::size_t>(kBaseMultiplierGates));
    const auto p = evaluate(n, {{"A", BitVec::from_unsigned(2, 3)}, {"B", BitVec::from_unsigned(2, 2)}});
    CHECK(p.at("P").to_unsigned() == 6);
    for (unsigned a = 0; a < 4; ++a)
        for (unsigned b = 0; b < 4; ++b)
            CHECK(evaluate(n, {{"A", BitVec::from_unsigned(2, a)}, {"B", BitVec::from_unsigned(2, b)}})
                      .at("P")
                      .to_unsigned() == a * b);
}

TEST_CASE("input errors")
{
    const auto n = ripple_adder4();
    CHECK_THROWS(evaluate(n, {{"x", BitVec::from_unsigned(4, 1)}}));
    CHECK_THROWS(evaluate(n, {{"x", BitVec::from_unsigned(3, 1)}, {"y", BitVec::from_unsigned(4, 1)}}));
    CHECK_THROWS(evaluate(n, {{"x", BitVec::from_unsigned(4, 1)}, {"y", BitVec::from_unsigned(4, 1)},
                              {"z", BitVec::from_unsigned(1, 0)}}));
    CHECK_THROWS(evaluate(identity_pipeline(), {{"a", BitVec::from_unsigned(4, 1)}}));
}

TEST_CASE("two-register identity delays a stream by two cycles")
{
    const auto n = identity_pipeline();
    const auto trace = simulate_pipelined(n, {{{"a", BitVec::from_unsigned(4, 5)}}, {{"a", BitVec::from_unsigned(4, 9)}}});
    CHECK(trace.latency == 2);
    REQUIRE(trace.cycles.size() == 4);
    CHECK(trace.cycles[2].at("y").to_unsigned() == 5);
    CHECK(trace.cycles[3].at("y").to_unsigned() == 9);
    const auto aligned = trace.aligned();
    REQUIRE(aligned.size() == 2);
    CHECK(aligned[0].at("y").to_unsigned() == 5);
    CHECK(aligned[1].at("y").to_unsigned() == 9);
}

TEST_CASE("pipelined KOM-16 matches its flattened form modulo latency")
{
    const auto piped = generate({MultiplierFamily::KOM, 16, KomVariant::ThreeProduct, true});
    const auto flat = flatten(piped);
    CHECK(flat.is_combinational());
    std::mt19937_64 rng(7);
    std::vector<Assignment> stream;
    for (int i = 0; i < 1000; ++i)
        stream.push_back({{"A", BitVec::from_unsigned(16, rng() & 0xffff)}, {"B", BitVec::from_unsigned(16, rng() & 0xffff)}});
    const auto aligned = simulate_pipelined(piped, stream).aligned();
    for (std::size_t i = 0; i < stream.size(); ++i)
        CHECK(aligned[i].at("P") == evaluate(flat, stream[i]).at("P"));
}

TEST_CASE("pipelined KOM-32 products appear stage_count cycles later")
{
    const auto n = generate({MultiplierFamily::KOM, 32, KomVariant::ThreeProduct, true});
    std::mt19937_64 rng(13);
    std::vector<Assignment> stream;
    std::vector<u128> want;
    for (int i = 0; i < 100; ++i) {
        const u128 a = rng() & 0xffffffffu, b = rng() & 0xffffffffu;
        stream.push_back({{"A", BitVec::from_unsigned(32, a)}, {"B", BitVec::from_unsigned(32, b)}});
        want.push_back(a * b);
    }
    const auto trace = simulate_pipelined(n, stream);
    CHECK(trace.latency == n.stage_count);
    for (std::size_t i = 0; i < stream.size(); ++i)
        CHECK(trace.cycles[i + static_cast<std::size_t>(n.stage_count)].at("P").to_unsigned() == want[i]);
}

TEST_CASE("evaluation is deterministic across calls and lanes")
{
    const auto n = generate({MultiplierFamily::DADDA, 8});
    Simulator sim(n);
    PackedAssignment in{{"A", PackedBus(8, 0)}, {"B", PackedBus(8, 0)}};
    std::mt19937_64 rng(3);
    for (auto& w : in["A"])
        w = rng();
    for (auto& w : in["B"])
        w = rng();
    const auto first = sim.evaluate(in);
    CHECK(first == sim.evaluate(in));
    for (int lane = 0; lane < 64; ++lane) {
        const auto a = unpack_lane(in["A"], lane).to_unsigned();
        const auto b = unpack_lane(in["B"], lane).to_unsigned();
        CHECK(unpack_lane(first.at("P"), lane).to_unsigned() == a * b);
    }
}

TEST_CASE("clocked simulator reset clears register state")
{
    const auto n = identity_pipeline();
    Simulator sim(n, Simulator::View::Clocked);
    CHECK(sim.latency() == 2);
    PackedAssignment in{{"a", pack_lane0(BitVec::from_unsigned(4, 11))}};
    sim.step(in);
    sim.step(in);
    CHECK(unpack_lane(sim.step(in).at("y"), 0).to_unsigned() == 11);
    sim.reset();
    CHECK(unpack_lane(sim.step(in).at("y"), 0).to_unsigned() == 0);
}
