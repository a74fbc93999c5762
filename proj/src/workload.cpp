#include "komsys/workload.hpp"

#include <charconv>
#include <sstream>

#include <json.hpp>

#include "komsys/table_data.hpp"

namespace komsys {

std::string_view to_string(CostField field)
{
    switch (field) {
    case CostField::SliceRegisters: return "slice_registers";
    case CostField::SliceLuts: return "slice_luts";
    case CostField::LutFfPairs: return "lut_ff_pairs";
    case CostField::BondedIobs: return "bonded_iobs";
    }
    return "?";
}

std::optional<CostField> parse_cost_field(std::string_view text)
{
    for (auto f : kAllCostFields)
        if (to_string(f) == text)
            return f;
    return std::nullopt;
}

std::uint64_t field_value(const UnitCost& u, CostField field)
{
    switch (field) {
    case CostField::SliceRegisters: return u.slice_registers;
    case CostField::SliceLuts: return u.slice_luts;
    case CostField::LutFfPairs: return u.lut_ff_pairs;
    case CostField::BondedIobs: return u.bonded_iobs;
    }
    return 0;
}

std::uint64_t field_value(const CostReport& r, CostField field)
{
    switch (field) {
    case CostField::SliceRegisters: return r.slice_registers;
    case CostField::SliceLuts: return r.slice_luts;
    case CostField::LutFfPairs: return r.lut_ff_pairs;
    case CostField::BondedIobs: return r.bonded_iobs;
    }
    return 0;
}

std::optional<std::uint64_t> TableData::find(int order, MultiplierKind kind, CostField field) const
{
    for (const auto& c : cells)
        if (c.order == order && c.kind == kind && c.field == field)
            return c.value;
    return std::nullopt;
}

namespace {

std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

template <typename T>
bool parse_number(std::string_view s, T& out)
{
    const auto* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(s.data(), end, out);
    return ec == std::errc{} && ptr == end;
}

std::string cell_name(const TableCell& c)
{
    return std::to_string(c.order) + "x" + std::to_string(c.order) + " " + std::string(to_string(c.kind)) + " " +
           std::string(to_string(c.field));
}

} // namespace

TableData parse_table_data(std::string_view text)
{
    TableData data;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        const auto raw = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        const auto line = trim(raw);
        if (line.empty())
            continue;
        if (line.front() == '#') {
            const auto v = line.find("version");
            if (v != std::string_view::npos)
                data.version = std::string(trim(line.substr(v + 7)));
            continue;
        }
        std::vector<std::string_view> parts;
        std::string_view rest = line;
        for (;;) {
            const auto comma = rest.find(',');
            parts.push_back(trim(rest.substr(0, comma)));
            if (comma == std::string_view::npos)
                break;
            rest = rest.substr(comma + 1);
        }
        if (parts.size() == 4 && parts[0] == "order")
            continue;
        const auto where = "table data line " + std::to_string(line_no) + ": ";
        if (parts.size() != 4)
            throw TableDataError(where + "expected 4 comma-separated fields");
        TableCell cell;
        if (!parse_number(parts[0], cell.order) || cell.order < 1)
            throw TableDataError(where + "bad order '" + std::string(parts[0]) + "'");
        const auto kind = parse_multiplier_kind(parts[1]);
        if (!kind)
            throw TableDataError(where + "unknown multiplier kind '" + std::string(parts[1]) + "'");
        const auto field = parse_cost_field(parts[2]);
        if (!field)
            throw TableDataError(where + "unknown field '" + std::string(parts[2]) + "'");
        if (!parse_number(parts[3], cell.value))
            throw TableDataError(where + "bad value '" + std::string(parts[3]) + "'");
        cell.kind = *kind;
        cell.field = *field;
        if (data.find(cell.order, cell.kind, cell.field))
            throw TableDataError(where + "duplicate cell " + cell_name(cell));
        data.cells.push_back(cell);
    }
    return data;
}

const TableData& builtin_table_data()
{
    static const TableData data = parse_table_data(generated::kTableText);
    return data;
}

std::uint64_t multiplier_count(int n)
{
    if (n < 1)
        throw std::invalid_argument("matrix order must be positive");
    const auto m = static_cast<std::uint64_t>(n);
    return m * m * m;
}

std::map<MultiplierKind, UnitCost> derive_unit_costs(const TableData& tables)
{
    constexpr int base_order = 3;
    const auto divisor = multiplier_count(base_order);
    std::map<MultiplierKind, UnitCost> units;
    for (auto kind : kAllMultiplierKinds) {
        UnitCost u;
        u.kind = kind;
        for (auto field : kAllCostFields) {
            const auto cell = tables.find(base_order, kind, field);
            const TableCell probe{base_order, kind, field, 0};
            if (!cell)
                throw CalibrationError("missing table cell " + cell_name(probe));
            if (*cell % divisor != 0)
                throw CalibrationError("table cell " + cell_name(probe) + " = " + std::to_string(*cell) +
                                       " is not a multiple of " + std::to_string(divisor));
            const auto value = *cell / divisor;
            switch (field) {
            case CostField::SliceRegisters: u.slice_registers = value; break;
            case CostField::SliceLuts: u.slice_luts = value; break;
            case CostField::LutFfPairs: u.lut_ff_pairs = value; break;
            case CostField::BondedIobs: u.bonded_iobs = value; break;
            }
        }
        units[kind] = u;
    }
    return units;
}

TableCheck check_tables(const TableData& tables, const std::map<MultiplierKind, UnitCost>& units)
{
    TableCheck check;
    for (int order : kTableOrders)
        for (auto kind : kAllMultiplierKinds)
            for (auto field : kAllCostFields) {
                ++check.total;
                const auto shipped = tables.find(order, kind, field);
                if (!shipped) {
                    check.missing.push_back({order, kind, field, 0});
                    continue;
                }
                const auto modelled = field_value(units.at(kind), field) * multiplier_count(order);
                if (modelled == *shipped)
                    ++check.matched;
                else
                    check.mismatches.push_back({{order, kind, field, *shipped}, modelled});
            }
    return check;
}

std::map<MultiplierKind, UnitCost> calibrate_unit_costs(const TableData& tables)
{
    auto units = derive_unit_costs(tables);
    const auto check = check_tables(tables, units);
    if (!check.ok()) {
        std::string msg = "calibration failed:";
        for (const auto& m : check.missing)
            msg += " missing cell " + cell_name(m) + ";";
        for (const auto& m : check.mismatches)
            msg += " cell " + cell_name(m.shipped) + " is " + std::to_string(m.shipped.value) + ", model gives " +
                   std::to_string(m.modelled) + ";";
        msg.pop_back();
        throw CalibrationError(msg);
    }
    return units;
}

const std::map<MultiplierKind, UnitCost>& builtin_unit_costs()
{
    static const auto units = calibrate_unit_costs(builtin_table_data());
    return units;
}

CostReport estimate_matrix_mult_resources(int n, const UnitCost& unit)
{
    const auto count = multiplier_count(n);
    CostReport r;
    r.slice_registers = unit.slice_registers * count;
    r.slice_luts = unit.slice_luts * count;
    r.lut_ff_pairs = unit.lut_ff_pairs * count;
    r.bonded_iobs = unit.bonded_iobs * count;
    return r;
}

CostReport estimate_matrix_mult_resources(int n, MultiplierKind kind)
{
    return estimate_matrix_mult_resources(n, builtin_unit_costs().at(kind));
}

std::string_view to_string(CnnArch arch)
{
    switch (arch) {
    case CnnArch::ALEXNET: return "ALEXNET";
    case CnnArch::VGG16: return "VGG16";
    case CnnArch::VGG19: return "VGG19";
    }
    return "?";
}

std::optional<CnnArch> parse_cnn_arch(std::string_view text)
{
    std::string upper(text);
    for (auto& c : upper)
        if (c >= 'a' && c <= 'z')
            c = static_cast<char>(c - 'a' + 'A');
    for (auto a : {CnnArch::ALEXNET, CnnArch::VGG16, CnnArch::VGG19})
        if (to_string(a) == upper)
            return a;
    return std::nullopt;
}

std::uint64_t CnnArchSpec::total_kernels() const
{
    std::uint64_t total = 0;
    for (const auto& k : kernel_inventory)
        total += k.count;
    return total;
}

CnnArchSpec builtin_arch(CnnArch arch)
{
    // VGG layer counts and kernel totals follow the published inventory
    // figures, not the original VGG configuration tables.
    switch (arch) {
    case CnnArch::ALEXNET: return {"ALEXNET", 227, 227, 3, 5, {{11, 96}, {5, 256}, {3, 1024}}, "published inventory"};
    case CnnArch::VGG16: return {"VGG16", 224, 224, 3, 12, {{3, 3968}}, "published inventory"};
    case CnnArch::VGG19: return {"VGG19", 224, 224, 3, 14, {{3, 4992}}, "published inventory"};
    }
    throw std::invalid_argument("unknown architecture");
}

WorkloadReport workload_report(const CnnArchSpec& arch, const UnitCost& unit)
{
    WorkloadReport r;
    r.architecture = arch.name;
    r.kind = unit.kind;
    for (const auto& k : arch.kernel_inventory) {
        WorkloadEntry e;
        e.kernel = k;
        e.instances = k.count * multiplier_count(k.size);
        e.cost = estimate_matrix_mult_resources(k.size, unit);
        e.cost.slice_registers *= k.count;
        e.cost.slice_luts *= k.count;
        e.cost.lut_ff_pairs *= k.count;
        e.cost.bonded_iobs *= k.count;
        r.total_kernels += k.count;
        r.total_instances += e.instances;
        r.aggregate += e.cost;
        r.entries.push_back(e);
    }
    return r;
}

std::string workload_csv(const WorkloadReport& r)
{
    std::ostringstream out;
    out << "architecture,multiplier,kernel_size,kernel_count,instances,slice_registers,slice_luts,lut_ff_pairs,"
           "bonded_iobs\n";
    auto row = [&](const std::string& size, const std::string& count, std::uint64_t inst, const CostReport& c) {
        out << r.architecture << ',' << to_string(r.kind) << ',' << size << ',' << count << ',' << inst << ','
            << c.slice_registers << ',' << c.slice_luts << ',' << c.lut_ff_pairs << ',' << c.bonded_iobs << '\n';
    };
    for (const auto& e : r.entries)
        row(std::to_string(e.kernel.size), std::to_string(e.kernel.count), e.instances, e.cost);
    row("total", std::to_string(r.total_kernels), r.total_instances, r.aggregate);
    return out.str();
}

namespace {

nlohmann::ordered_json cost_json(const CostReport& c)
{
    nlohmann::ordered_json j;
    j["slice_registers"] = c.slice_registers;
    j["slice_luts"] = c.slice_luts;
    j["lut_ff_pairs"] = c.lut_ff_pairs;
    j["bonded_iobs"] = c.bonded_iobs;
    return j;
}

} // namespace

std::string workload_json(const WorkloadReport& r)
{
    nlohmann::ordered_json j;
    j["architecture"] = r.architecture;
    j["multiplier"] = std::string(to_string(r.kind));
    j["total_kernels"] = r.total_kernels;
    j["total_instances"] = r.total_instances;
    j["aggregate"] = cost_json(r.aggregate);
    auto& entries = j["entries"] = nlohmann::ordered_json::array();
    for (const auto& e : r.entries) {
        nlohmann::ordered_json item;
        item["kernel_size"] = e.kernel.size;
        item["kernel_count"] = e.kernel.count;
        item["instances"] = e.instances;
        item["cost"] = cost_json(e.cost);
        entries.push_back(std::move(item));
    }
    return j.dump(2) + "\n";
}

std::string workload_text(const WorkloadReport& r)
{
    std::ostringstream out;
    out << r.architecture << " with " << to_string(r.kind) << " multipliers\n";
    for (const auto& e : r.entries)
        out << "  " << e.kernel.count << " x (" << e.kernel.size << "x" << e.kernel.size << "): " << e.instances
            << " multipliers, " << e.cost.slice_registers << " regs, " << e.cost.slice_luts << " LUTs, "
            << e.cost.lut_ff_pairs << " LUT-FF pairs, " << e.cost.bonded_iobs << " IOBs\n";
    out << "  total: " << r.total_kernels << " kernels, " << r.total_instances << " multipliers, "
        << r.aggregate.slice_registers << " regs, " << r.aggregate.slice_luts << " LUTs, "
        << r.aggregate.lut_ff_pairs << " LUT-FF pairs, " << r.aggregate.bonded_iobs << " IOBs\n";
    return out.str();
}

} // namespace komsys
