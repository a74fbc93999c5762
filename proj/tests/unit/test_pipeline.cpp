#include <doctest.h>

#include <random>

#include "komsys/builder.hpp"
#include "komsys/multipliers.hpp"
#include "komsys/pipeline.hpp"
#include "komsys/simulate.hpp"
#include "komsys/timing.hpp"

using namespace komsys;

namespace {

// y = ((a ^ b) & c) | a, three gates deep.
Netlist chain3()
{
    CircuitBuilder b("chain3");
    const auto in = b.add_input("x", 3);
    const Signal y = b.or_(b.and_(b.xor_(in[0], in[1]), in[2]), in[0]);
    b.add_output("y", std::span(&y, 1));
    return std::move(b).build();
}

} // namespace

TEST_CASE("cut-at-depth(1) on a three-gate chain gives three unit stages")
{
    const auto piped = insert_pipeline(chain3(), PipelinePolicy::cut_at_depth(1));
    CHECK(validate(piped).ok());
    CHECK(piped.stage_count == 3);
    const auto t = critical_path(piped, DelayTable::unit());
    CHECK(t.max_stage_delay == 1);
    CHECK(t.total_unpipelined_delay == 3);

    std::vector<Assignment> stream;
    for (unsigned v = 0; v < 8; ++v)
        stream.push_back({{"x", BitVec::from_unsigned(3, v)}});
    const auto trace = simulate_pipelined(piped, stream);
    CHECK(trace.latency == 3);
    const auto aligned = trace.aligned();
    for (unsigned v = 0; v < 8; ++v) {
        const bool a = v & 1, b = (v >> 1) & 1, c = (v >> 2) & 1;
        CHECK(aligned[v].at("y").bit(0) == (((a != b) && c) || a));
    }
}

TEST_CASE("cut-at-depth bounds every stage")
{
    const auto flat = generate({MultiplierFamily::DADDA, 16});
    const auto depth = critical_path(flat, DelayTable::unit()).total_unpipelined_delay;
    for (int d : {1, 4, 10, 25}) {
        const auto piped = insert_pipeline(flat, PipelinePolicy::cut_at_depth(d));
        CHECK(validate(piped).ok());
        const auto t = critical_path(piped, DelayTable::unit());
        CHECK(t.max_stage_delay <= d);
        CHECK(piped.stage_count == static_cast<int>((depth + d - 1) / d));
    }
    CHECK_THROWS_AS(insert_pipeline(flat, PipelinePolicy::cut_at_depth(0)), std::invalid_argument);
}

TEST_CASE("generator markers give KOM-32 four stages")
{
    const auto n = generate({MultiplierFamily::KOM, 32, KomVariant::ThreeProduct, true});
    CHECK(validate(n).ok());
    CHECK(n.stage_count == 4);
    const auto n4 = generate({MultiplierFamily::KOM, 32, KomVariant::FourProduct, true});
    CHECK(n4.stage_count == 4);
}

TEST_CASE("pipelining preserves function")
{
    const auto flat = generate({MultiplierFamily::BAUGH_WOOLEY, 8});
    const auto piped = insert_pipeline(flat, PipelinePolicy::cut_at_depth(5));
    std::mt19937_64 rng(11);
    std::vector<Assignment> stream;
    for (int i = 0; i < 300; ++i)
        stream.push_back({{"A", BitVec::from_unsigned(8, rng() & 0xff)}, {"B", BitVec::from_unsigned(8, rng() & 0xff)}});
    const auto aligned = simulate_pipelined(piped, stream).aligned();
    for (std::size_t i = 0; i < stream.size(); ++i)
        CHECK(aligned[i].at("P") == evaluate(flat, stream[i]).at("P"));
}

TEST_CASE("assign_stages rejects decreasing stages and registered input")
{
    const auto n = chain3();
    CHECK_THROWS(assign_stages(n, {1, 0, 0}));
    CHECK_THROWS(assign_stages(n, {0, 0}));
    CHECK(assign_stages(n, {0, 0, 1}).stage_count == 2);
    CHECK_THROWS(insert_pipeline(insert_pipeline(n, PipelinePolicy::cut_at_depth(1)), PipelinePolicy::cut_at_depth(1)));
}
