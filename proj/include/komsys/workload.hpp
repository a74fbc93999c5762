#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "komsys/cost.hpp"

namespace komsys {

inline constexpr int kTableOrders[] = {3, 5, 7, 11};

enum class CostField { SliceRegisters, SliceLuts, LutFfPairs, BondedIobs };

inline constexpr CostField kAllCostFields[] = {CostField::SliceRegisters, CostField::SliceLuts,
                                               CostField::LutFfPairs, CostField::BondedIobs};

std::string_view to_string(CostField field);
std::optional<CostField> parse_cost_field(std::string_view text);
std::uint64_t field_value(const UnitCost& unit, CostField field);
std::uint64_t field_value(const CostReport& report, CostField field);

struct TableCell {
    int order = 0;
    MultiplierKind kind = MultiplierKind::KOM16;
    CostField field = CostField::SliceRegisters;
    std::uint64_t value = 0;
};

/// Shipped utilization tables: one cell per (order, kind, field).
struct TableData {
    std::string version;
    std::vector<TableCell> cells;

    std::optional<std::uint64_t> find(int order, MultiplierKind kind, CostField field) const;
};

class TableDataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class CalibrationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Parses "order,kind,field,value" rows. Lines starting with '#' are comments;
/// a "# ... version N" comment sets the version. A header row is allowed.
TableData parse_table_data(std::string_view text);

/// The tables embedded at build time.
const TableData& builtin_table_data();

/// n^3 multipliers for an n x n by n x n matrix product.
std::uint64_t multiplier_count(int n);

/// Unit costs as order-3 cells divided by 27. Throws CalibrationError when a
/// cell is missing or not an exact multiple of 27.
std::map<MultiplierKind, UnitCost> derive_unit_costs(const TableData& tables);

struct CellMismatch {
    TableCell shipped;
    std::uint64_t modelled = 0;
};

struct TableCheck {
    std::size_t total = 0;
    std::size_t matched = 0;
    std::vector<CellMismatch> mismatches;
    std::vector<TableCell> missing;

    bool ok() const { return matched == total && missing.empty(); }
};

/// Compares unit cost x n^3 against every expected cell (all orders, kinds
/// and fields).
TableCheck check_tables(const TableData& tables, const std::map<MultiplierKind, UnitCost>& units);

/// derive_unit_costs followed by check_tables; any mismatch throws
/// CalibrationError naming the offending cells.
std::map<MultiplierKind, UnitCost> calibrate_unit_costs(const TableData& tables);

/// Calibrated from the embedded tables once, on first use.
const std::map<MultiplierKind, UnitCost>& builtin_unit_costs();

/// Unit cost times n^3 in each FPGA field; structural fields are left zero.
CostReport estimate_matrix_mult_resources(int n, const UnitCost& unit);
CostReport estimate_matrix_mult_resources(int n, MultiplierKind kind);

enum class CnnArch { ALEXNET, VGG16, VGG19 };

std::string_view to_string(CnnArch arch);
std::optional<CnnArch> parse_cnn_arch(std::string_view text);

struct KernelEntry {
    int size = 0;
    std::uint64_t count = 0;
};

struct CnnArchSpec {
    std::string name;
    int height = 0, width = 0, channels = 0;
    int conv_layers = 0;
    std::vector<KernelEntry> kernel_inventory;
    /// Where the inventory figures come from.
    std::string source;

    std::uint64_t total_kernels() const;
};

CnnArchSpec builtin_arch(CnnArch arch);

struct WorkloadEntry {
    KernelEntry kernel;
    std::uint64_t instances = 0;
    CostReport cost;
};

struct WorkloadReport {
    std::string architecture;
    MultiplierKind kind = MultiplierKind::KOM16;
    std::uint64_t total_kernels = 0;
    std::uint64_t total_instances = 0;
    CostReport aggregate;
    std::vector<WorkloadEntry> entries;
};

/// Each inventory entry needs count * k^3 multipliers.
WorkloadReport workload_report(const CnnArchSpec& arch, const UnitCost& unit);

std::string workload_csv(const WorkloadReport& report);
std::string workload_json(const WorkloadReport& report);
std::string workload_text(const WorkloadReport& report);

} // namespace komsys
