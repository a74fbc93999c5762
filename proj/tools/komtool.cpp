// komtool: generate, simulate and cost multiplier netlists, drive the systolic
// engine, and reproduce the utilization tables.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "komsys/bitvec.hpp"
#include "komsys/multipliers.hpp"
#include "komsys/netlist_json.hpp"
#include "komsys/pipeline.hpp"
#include "komsys/simulate.hpp"
#include "komsys/systolic/engine.hpp"
#include "komsys/timing.hpp"
#include "komsys/verify.hpp"
#include "komsys/workload.hpp"

using namespace komsys;

namespace {

constexpr std::uint64_t kDefaultSeed = 20240229;

struct Failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Netlist load_checked(const std::string& path)
{
    Netlist n = load_netlist(path);
    const auto v = validate(n);
    if (!v.ok())
        throw Failure(path + ": " + v.summary());
    return n;
}

// ---- gen ------------------------------------------------------------------

struct GenArgs {
    std::string family;
    int width = 0;
    std::string variant = "three-product";
    bool pipelined = false;
    std::string out;
};

MultiplierSpec make_spec(const std::string& family, int width, const std::string& variant, bool pipelined)
{
    const auto fam = parse_family(family);
    if (!fam)
        throw std::invalid_argument("unknown family '" + family + "' (kom, bw, dadda, array)");
    const auto var = parse_kom_variant(variant);
    if (!var)
        throw std::invalid_argument("unknown variant '" + variant + "' (three-product, four-product)");
    return {*fam, width, *var, pipelined};
}

int cmd_gen(const GenArgs& a)
{
    const auto net = generate(make_spec(a.family, a.width, a.variant, a.pipelined));
    save_netlist(net, a.out);
    std::cout << "wrote " << net.name << ": " << net.gates.size() << " gates, " << net.registers.size()
              << " registers, " << net.stage_count << " stages -> " << a.out << "\n";
    return 0;
}

// ---- eval -----------------------------------------------------------------

struct EvalArgs {
    std::string netlist;
    std::string family;
    int width = 0;
    std::string variant = "three-product";
    bool pipelined = false;
    std::string a, b;
    bool exhaustive = false;
    std::uint64_t random = 0;
    std::uint64_t seed = kDefaultSeed;
};

BitVec operand(const std::string& text, int width, bool is_signed, const char* name)
{
    const i128 v = parse_integer(text);
    const i128 lo = is_signed ? -(i128{1} << (width - 1)) : 0;
    const i128 hi = is_signed ? (i128{1} << (width - 1)) - 1 : (i128{1} << width) - 1;
    if (v < lo || v > hi)
        throw std::invalid_argument(std::string("operand ") + name + "=" + text + " does not fit a " +
                                    std::to_string(width) + "-bit " + (is_signed ? "signed" : "unsigned") +
                                    " input");
    return BitVec::from_signed(width, v);
}

int cmd_eval(const EvalArgs& a)
{
    Netlist net;
    bool is_signed = false;
    if (!a.netlist.empty()) {
        net = load_checked(a.netlist);
        is_signed = is_signed_multiplier_name(net.name);
    } else {
        const auto spec = make_spec(a.family, a.width, a.variant, a.pipelined);
        net = generate(spec);
        is_signed = spec.is_signed();
    }
    const Bus* in_a = net.find_input("A");
    const Bus* in_b = net.find_input("B");
    const Bus* out_p = net.find_output("P");
    if (!in_a || !in_b || !out_p)
        throw Failure("netlist '" + net.name + "' does not have multiplier buses A, B and P");

    if (!a.a.empty()) {
        Assignment in{{"A", operand(a.a, in_a->width(), is_signed, "a")},
                      {"B", operand(a.b, in_b->width(), is_signed, "b")}};
        const auto trace = simulate_pipelined(net, {in});
        const BitVec p = trace.aligned().front().at("P");
        std::cout << (is_signed ? to_decimal(p.to_signed()) : to_decimal(p.to_unsigned())) << "\n";
        return 0;
    }
    const auto result = a.exhaustive ? sweep_exhaustive(net, is_signed) : sweep_random(net, a.random, a.seed, is_signed);
    std::cout << result.passed << "/" << result.checked << " pass\n";
    if (!result.ok()) {
        std::cout << "first mismatch: " << result.first_failure << "\n";
        return 1;
    }
    return 0;
}

// ---- timing ---------------------------------------------------------------

struct TimingArgs {
    std::string netlist;
    std::string delays;
    std::string format = "text";
};

DelayTable load_delays(const std::string& path)
{
    const auto doc = nlohmann::json::parse(read_file(path));
    if (!doc.is_object())
        throw std::invalid_argument("delay file must be a JSON object of gate kind -> delay");
    DelayTable t;
    for (const auto& [key, value] : doc.items()) {
        std::optional<GateKind> kind;
        for (auto k : kAllGateKinds)
            if (to_string(k) == key)
                kind = k;
        if (!kind)
            throw std::invalid_argument("unknown gate kind '" + key + "' in " + path);
        if (!value.is_number() || value.get<double>() < 0)
            throw std::invalid_argument("delay for " + key + " must be a non-negative number");
        t.delay[*kind] = value.get<double>();
    }
    return t;
}

int cmd_timing(const TimingArgs& a)
{
    const auto net = load_checked(a.netlist);
    const auto delays = a.delays.empty() ? DelayTable::unit() : load_delays(a.delays);
    const auto r = critical_path(net, delays);
    if (a.format == "machine") {
        nlohmann::ordered_json j;
        j["netlist"] = net.name;
        j["per_stage_delay"] = r.per_stage_delay;
        j["max_stage_delay"] = r.max_stage_delay;
        j["total_unpipelined_delay"] = r.total_unpipelined_delay;
        j["worst_stage"] = r.worst_stage;
        j["witness_path"] = r.witness_path;
        std::cout << j.dump(2) << "\n";
        return 0;
    }
    std::cout << net.name << "\n";
    for (std::size_t s = 0; s < r.per_stage_delay.size(); ++s)
        std::cout << "  stage " << s << ": " << r.per_stage_delay[s] << "\n";
    std::cout << "  max stage delay: " << r.max_stage_delay << " (stage " << r.worst_stage << ")\n";
    std::cout << "  total unpipelined delay: " << r.total_unpipelined_delay << "\n";
    std::cout << "  critical path (" << r.witness_path.size() << " gates):";
    for (const auto& id : r.witness_path)
        std::cout << " " << id;
    std::cout << "\n";
    return 0;
}

// ---- pipeline -------------------------------------------------------------

struct PipelineArgs {
    std::string netlist;
    int max_depth = 0;
    std::string out;
};

int cmd_pipeline(const PipelineArgs& a)
{
    const auto net = load_checked(a.netlist);
    auto piped = insert_pipeline(net, PipelinePolicy::cut_at_depth(a.max_depth));
    piped.name = net.name;
    save_netlist(piped, a.out);
    const auto t = critical_path(piped, DelayTable::unit());
    std::cout << "wrote " << piped.name << ": " << piped.stage_count << " stages, " << piped.registers.size()
              << " registers, max stage depth " << t.max_stage_delay << " -> " << a.out << "\n";
    return 0;
}

// ---- systolic -------------------------------------------------------------

struct SystolicArgs {
    std::string config, input, weights, out;
};

int cmd_systolic(const SystolicArgs& a)
{
    using namespace komsys::systolic;
    const auto program = parse_program(read_file(a.config));
    const auto input = load_tensor(a.input);
    std::optional<IntTensor> weights;
    if (!a.weights.empty())
        weights = load_tensor(a.weights);
    Engine engine;
    const auto outputs = engine.execute(program, input, weights);
    if (outputs.empty())
        throw Failure("program has no RUN instruction");
    save_tensor(a.out, outputs.back());
    std::cout << outputs.size() << " run(s), " << engine.multiplies() << " multiplications; result "
              << outputs.back().height << "x" << outputs.back().width << "x" << outputs.back().channels << " -> "
              << a.out << "\n";
    return 0;
}

// ---- tables ---------------------------------------------------------------

struct TablesArgs {
    std::string format = "text";
    std::string data;
};

int cmd_tables(const TablesArgs& a)
{
    const TableData tables = a.data.empty() ? builtin_table_data() : parse_table_data(read_file(a.data));
    const auto units = derive_unit_costs(tables);
    const auto check = check_tables(tables, units);

    if (a.format == "machine") {
        nlohmann::ordered_json j;
        j["version"] = tables.version;
        auto& uj = j["unit_costs"] = nlohmann::ordered_json::object();
        for (const auto& [kind, u] : units)
            uj[std::string(to_string(kind))] = {{"slice_registers", u.slice_registers},
                                                {"slice_luts", u.slice_luts},
                                                {"lut_ff_pairs", u.lut_ff_pairs},
                                                {"bonded_iobs", u.bonded_iobs}};
        auto& rows = j["cells"] = nlohmann::ordered_json::array();
        for (int order : kTableOrders)
            for (auto kind : kAllMultiplierKinds) {
                const auto est = estimate_matrix_mult_resources(order, units.at(kind));
                for (auto field : kAllCostFields) {
                    const auto shipped = tables.find(order, kind, field);
                    nlohmann::ordered_json cell;
                    cell["order"] = order;
                    cell["kind"] = std::string(to_string(kind));
                    cell["field"] = std::string(to_string(field));
                    cell["model"] = field_value(est, field);
                    cell["shipped"] = shipped ? nlohmann::ordered_json(*shipped) : nlohmann::ordered_json();
                    cell["match"] = shipped && *shipped == field_value(est, field);
                    rows.push_back(std::move(cell));
                }
            }
        j["matched"] = check.matched;
        j["total"] = check.total;
        std::cout << j.dump(2) << "\n";
    } else {
        int table = 0;
        for (int order : kTableOrders) {
            std::cout << "Table " << ++table << ": " << order << "×" << order
                      << " matrix multiplication (slice registers, slice LUTs, LUT-FF pairs, bonded IOBs)\n";
            for (auto kind : kAllMultiplierKinds) {
                const auto est = estimate_matrix_mult_resources(order, units.at(kind));
                std::cout << order << "×" << order << ", " << to_string(kind) << ": " << est.slice_registers << " "
                          << est.slice_luts << " " << est.lut_ff_pairs << " " << est.bonded_iobs << "\n";
            }
        }
        for (const auto& m : check.missing)
            std::cout << "missing: " << m.order << "×" << m.order << " " << to_string(m.kind) << " "
                      << to_string(m.field) << "\n";
        for (const auto& m : check.mismatches)
            std::cout << "mismatch: " << m.shipped.order << "×" << m.shipped.order << " " << to_string(m.shipped.kind)
                      << " " << to_string(m.shipped.field) << " shipped " << m.shipped.value << ", model "
                      << m.modelled << "\n";
        std::cout << check.matched << "/" << check.total << " cells match\n";
    }
    return check.ok() ? 0 : 1;
}

// ---- workload -------------------------------------------------------------

struct WorkloadArgs {
    std::string arch, multiplier;
    std::string format = "text";
};

int cmd_workload(const WorkloadArgs& a)
{
    const auto arch = parse_cnn_arch(a.arch);
    if (!arch)
        throw std::invalid_argument("unknown architecture '" + a.arch + "' (alexnet, vgg16, vgg19)");
    const auto kind = parse_multiplier_kind(a.multiplier);
    if (!kind)
        throw std::invalid_argument("unknown multiplier '" + a.multiplier + "' (kom16, kom32, bw32, dadda32)");
    const auto report = workload_report(builtin_arch(*arch), builtin_unit_costs().at(*kind));
    if (a.format == "csv")
        std::cout << workload_csv(report);
    else if (a.format == "machine" || a.format == "json")
        std::cout << workload_json(report);
    else
        std::cout << workload_text(report);
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Multiplier netlist generator, systolic engine simulator and resource estimator"};
    app.require_subcommand(1);

    GenArgs gen;
    auto* g = app.add_subcommand("gen", "Generate a multiplier netlist");
    g->add_option("--family", gen.family, "kom | bw | dadda | array")->required();
    g->add_option("--width", gen.width, "Operand width (power of two)")->required();
    g->add_option("--variant", gen.variant, "KOM decomposition: three-product | four-product");
    g->add_flag("--pipelined", gen.pipelined, "Insert pipeline registers (KOM only)");
    g->add_option("--out", gen.out, "Output netlist JSON")->required();

    EvalArgs eval;
    auto* e = app.add_subcommand("eval", "Evaluate a multiplier netlist");
    auto* e_net = e->add_option("--netlist", eval.netlist, "Netlist JSON");
    auto* e_fam = e->add_option("--family", eval.family, "Generate instead: kom | bw | dadda | array");
    auto* e_width = e->add_option("--width", eval.width, "Operand width for --family");
    e->add_option("--variant", eval.variant, "KOM decomposition for --family");
    e->add_flag("--pipelined", eval.pipelined, "Pipelined KOM for --family");
    auto* e_a = e->add_option("--a", eval.a, "Operand A (decimal or 0x hex)");
    auto* e_b = e->add_option("--b", eval.b, "Operand B (decimal or 0x hex)");
    auto* e_ex = e->add_flag("--exhaustive", eval.exhaustive, "Check every operand pair");
    auto* e_rand = e->add_option("--random", eval.random, "Check COUNT random operand pairs");
    e->add_option("--seed", eval.seed, "Seed for --random")->capture_default_str();
    e_net->excludes(e_fam);
    e_fam->needs(e_width);
    e_a->needs(e_b);
    e_b->needs(e_a);
    e_a->excludes(e_ex)->excludes(e_rand);
    e_ex->excludes(e_rand);

    TimingArgs timing;
    auto* t = app.add_subcommand("timing", "Critical-path report");
    t->add_option("--netlist", timing.netlist, "Netlist JSON")->required();
    t->add_option("--delays", timing.delays, "JSON object mapping gate kind to delay");
    t->add_option("--format", timing.format, "text | machine")->check(CLI::IsMember({"text", "machine"}));

    PipelineArgs pipe;
    auto* p = app.add_subcommand("pipeline", "Insert pipeline registers by depth");
    p->add_option("--netlist", pipe.netlist, "Combinational netlist JSON")->required();
    p->add_option("--max-depth", pipe.max_depth, "Largest unit-delay depth per stage")->required();
    p->add_option("--out", pipe.out, "Output netlist JSON")->required();

    SystolicArgs sys;
    auto* s = app.add_subcommand("systolic", "Run an engine script");
    s->add_option("--config", sys.config, "Engine script")->required();
    s->add_option("--input", sys.input, "Input tensor")->required();
    s->add_option("--weights", sys.weights, "Weight tensor for LOAD_WEIGHTS without values");
    s->add_option("--out", sys.out, "Output tensor")->required();

    TablesArgs tables;
    auto* tb = app.add_subcommand("tables", "Reproduce the utilization tables");
    tb->add_option("--format", tables.format, "text | machine")->check(CLI::IsMember({"text", "machine"}));
    tb->add_option("--data", tables.data, "Table data file instead of the embedded copy");

    WorkloadArgs work;
    auto* w = app.add_subcommand("workload", "CNN multiplier resource estimate");
    w->add_option("--arch", work.arch, "alexnet | vgg16 | vgg19")->required();
    w->add_option("--multiplier", work.multiplier, "kom16 | kom32 | bw32 | dadda32")->required();
    w->add_option("--format", work.format, "text | csv | machine")
        ->check(CLI::IsMember({"text", "csv", "machine", "json"}));

    CLI11_PARSE(app, argc, argv);

    try {
        if (*g)
            return cmd_gen(gen);
        if (*e) {
            if (eval.netlist.empty() && eval.family.empty())
                throw std::invalid_argument("eval needs --netlist or --family/--width");
            if (eval.a.empty() && !eval.exhaustive && !*e_rand)
                throw std::invalid_argument("eval needs --a/--b, --exhaustive or --random");
            return cmd_eval(eval);
        }
        if (*t)
            return cmd_timing(timing);
        if (*p)
            return cmd_pipeline(pipe);
        if (*s)
            return cmd_systolic(sys);
        if (*tb)
            return cmd_tables(tables);
        if (*w)
            return cmd_workload(work);
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }
    return 0;
}
