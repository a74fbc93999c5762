#include "komsys/netlist_json.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

namespace komsys {

using nlohmann::json;

std::string export_netlist_json(const Netlist& n, int indent)
{
    json doc;
    doc["name"] = n.name;
    auto buses = [](const std::vector<Bus>& list) {
        json arr = json::array();
        for (const auto& b : list)
            arr.push_back({{"name", b.name}, {"width", b.width()}});
        return arr;
    };
    doc["inputs"] = buses(n.inputs);
    doc["outputs"] = buses(n.outputs);
    json gates = json::array();
    for (const auto& g : n.gates) {
        json in = json::array();
        for (WireId w : g.inputs)
            in.push_back(n.wire_names.at(w));
        gates.push_back({{"id", g.id}, {"kind", std::string(to_string(g.kind))}, {"in", in},
                         {"out", n.wire_names.at(g.output)}});
    }
    doc["gates"] = std::move(gates);
    json regs = json::array();
    for (const auto& r : n.registers)
        regs.push_back({{"in", n.wire_names.at(r.input)}, {"out", n.wire_names.at(r.output)}, {"stage", r.stage}});
    doc["registers"] = std::move(regs);
    return doc.dump(indent) + "\n";
}

namespace {

void expect_fields(const json& obj, std::initializer_list<std::string_view> fields, const std::string& where)
{
    if (!obj.is_object())
        throw FormatError(where + ": expected an object");
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (std::find(fields.begin(), fields.end(), it.key()) == fields.end())
            throw FormatError(where + ": unknown field '" + it.key() + "'");
    for (auto f : fields)
        if (!obj.contains(std::string(f)))
            throw FormatError(where + ": missing field '" + std::string(f) + "'");
}

template <typename T>
T get_as(const json& v, const std::string& where)
{
    try {
        return v.get<T>();
    } catch (const json::exception&) {
        throw FormatError(where + ": wrong value type");
    }
}

} // namespace

Netlist import_netlist_json(std::string_view text)
{
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw FormatError(std::string("malformed netlist document: ") + e.what());
    }
    expect_fields(doc, {"name", "inputs", "outputs", "gates", "registers"}, "netlist");

    Netlist n;
    n.name = get_as<std::string>(doc["name"], "name");
    std::unordered_map<std::string, WireId> ids;
    auto wire = [&](const std::string& name) {
        auto [it, fresh] = ids.try_emplace(name, static_cast<WireId>(n.wire_names.size()));
        if (fresh)
            n.wire_names.push_back(name);
        return it->second;
    };

    auto read_buses = [&](const json& arr, std::vector<Bus>& out, const char* what) {
        if (!arr.is_array())
            throw FormatError(std::string(what) + ": expected an array");
        for (const auto& item : arr) {
            expect_fields(item, {"name", "width"}, what);
            Bus b;
            b.name = get_as<std::string>(item["name"], what);
            const int width = get_as<int>(item["width"], what);
            if (width < 1)
                throw FormatError(std::string(what) + ": bus " + b.name + " has non-positive width");
            for (int i = 0; i < width; ++i)
                b.wires.push_back(wire(bus_bit_name(b.name, i)));
            out.push_back(std::move(b));
        }
    };
    read_buses(doc["inputs"], n.inputs, "inputs");
    read_buses(doc["outputs"], n.outputs, "outputs");

    if (!doc["gates"].is_array())
        throw FormatError("gates: expected an array");
    for (const auto& item : doc["gates"]) {
        expect_fields(item, {"id", "kind", "in", "out"}, "gate");
        Gate g;
        g.id = get_as<std::string>(item["id"], "gate id");
        const auto kind_text = get_as<std::string>(item["kind"], "gate " + g.id);
        const auto kind = parse_gate_kind(kind_text);
        if (!kind)
            throw FormatError("gate " + g.id + ": unknown kind '" + kind_text + "'");
        g.kind = *kind;
        if (!item["in"].is_array())
            throw FormatError("gate " + g.id + ": 'in' must be an array");
        for (const auto& w : item["in"])
            g.inputs.push_back(wire(get_as<std::string>(w, "gate " + g.id)));
        g.output = wire(get_as<std::string>(item["out"], "gate " + g.id));
        n.gates.push_back(std::move(g));
    }

    if (!doc["registers"].is_array())
        throw FormatError("registers: expected an array");
    for (const auto& item : doc["registers"]) {
        expect_fields(item, {"in", "out", "stage"}, "register");
        Register r;
        r.input = wire(get_as<std::string>(item["in"], "register"));
        r.output = wire(get_as<std::string>(item["out"], "register"));
        r.stage = get_as<int>(item["stage"], "register");
        n.stage_count = std::max(n.stage_count, r.stage);
        n.registers.push_back(r);
    }
    return n;
}

void save_netlist(const Netlist& netlist, const std::filesystem::path& path)
{
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write " + path.string());
    out << export_netlist_json(netlist);
}

Netlist load_netlist(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return import_netlist_json(ss.str());
}

} // namespace komsys
