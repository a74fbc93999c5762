#include <doctest.h>

#include <random>

#include <json.hpp>

#include "komsys/multipliers.hpp"
#include "komsys/netlist_json.hpp"
#include "komsys/simulate.hpp"

using namespace komsys;

TEST_CASE("KOM-32 survives export and import")
{
    const auto original = generate({MultiplierFamily::KOM, 32, KomVariant::ThreeProduct, true});
    const auto text = export_netlist_json(original);
    const auto copy = import_netlist_json(text);
    CHECK(validate(copy).ok());
    CHECK(copy.gates.size() == original.gates.size());
    CHECK(copy.registers.size() == original.registers.size());
    CHECK(copy.stage_count == original.stage_count);
    CHECK(export_netlist_json(copy) == text);

    std::mt19937_64 rng(99);
    std::vector<Assignment> stream;
    for (int i = 0; i < 100; ++i)
        stream.push_back({{"A", BitVec::from_unsigned(32, rng() & 0xffffffffu)},
                          {"B", BitVec::from_unsigned(32, rng() & 0xffffffffu)}});
    const auto x = simulate_pipelined(original, stream).aligned();
    const auto y = simulate_pipelined(copy, stream).aligned();
    for (std::size_t i = 0; i < stream.size(); ++i)
        CHECK(x[i].at("P") == y[i].at("P"));
}

TEST_CASE("import is strict")
{
    const auto base = nlohmann::json::parse(export_netlist_json(generate({MultiplierFamily::ARRAY, 2})));

    auto extra = base;
    extra["comment"] = "hello";
    CHECK_THROWS_AS(import_netlist_json(extra.dump()), FormatError);

    auto gate_extra = base;
    gate_extra["gates"][0]["delay"] = 2;
    CHECK_THROWS_AS(import_netlist_json(gate_extra.dump()), FormatError);

    auto missing = base;
    missing.erase("gates");
    CHECK_THROWS_AS(import_netlist_json(missing.dump()), FormatError);

    auto bad_kind = base;
    bad_kind["gates"][0]["kind"] = "MUX";
    CHECK_THROWS_AS(import_netlist_json(bad_kind.dump()), FormatError);

    CHECK_THROWS_AS(import_netlist_json("{not json"), FormatError);
    CHECK_NOTHROW(import_netlist_json(base.dump()));
}

TEST_CASE("imported netlists with defects are reported by validate")
{
    auto doc = nlohmann::json::parse(export_netlist_json(generate({MultiplierFamily::ARRAY, 2})));
    doc["gates"][1]["out"] = doc["gates"][0]["out"];
    const auto n = import_netlist_json(doc.dump());
    CHECK_FALSE(validate(n).ok());
}
