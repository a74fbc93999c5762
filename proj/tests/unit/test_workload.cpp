#include <doctest.h>

#include <array>
#include <fstream>
#include <sstream>
#include <string>

#include "komsys/workload.hpp"

using namespace komsys;

namespace {

std::string shipped_table_text()
{
    std::ifstream in(KOMSYS_TABLE_CSV);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("unit costs derived from the order-3 tables")
{
    const auto& u = builtin_unit_costs();
    CHECK(u.at(MultiplierKind::KOM16) == UnitCost{MultiplierKind::KOM16, 192, 616, 160, 65});
    CHECK(u.at(MultiplierKind::DADDA32) == UnitCost{MultiplierKind::DADDA32, 0, 2040, 0, 128});
    CHECK(u.at(MultiplierKind::BW32) == UnitCost{MultiplierKind::BW32, 227, 2609, 67, 137});
    CHECK(multiplier_count(1) == 1);
    CHECK(multiplier_count(3) == 27);
    CHECK(multiplier_count(11) == 1331);
    CHECK(builtin_table_data().cells.size() == 64);
    CHECK(builtin_table_data().version == "1");
    const auto check = check_tables(builtin_table_data(), u);
    CHECK(check.ok());
    CHECK(check.total == 64);
}

TEST_CASE("matrix multiplication estimates")
{
    const auto k16 = estimate_matrix_mult_resources(3, MultiplierKind::KOM16);
    CHECK(k16.slice_registers == 5184);
    CHECK(k16.slice_luts == 16632);
    CHECK(k16.lut_ff_pairs == 4320);
    CHECK(k16.bonded_iobs == 1755);
    const auto& units = builtin_unit_costs();
    for (int n : kTableOrders)
        for (auto kind : kAllMultiplierKinds)
            for (auto field : kAllCostFields)
                CHECK(field_value(estimate_matrix_mult_resources(n, kind), field) ==
                      *builtin_table_data().find(n, kind, field));
    const auto k32 = estimate_matrix_mult_resources(5, MultiplierKind::KOM32);
    CHECK((std::array{k32.slice_registers, k32.slice_luts, k32.lut_ff_pairs, k32.bonded_iobs}) ==
          std::array<std::uint64_t, 4>{118500, 246625, 118500, 16125});
    const auto bw = estimate_matrix_mult_resources(7, MultiplierKind::BW32);
    CHECK((std::array{bw.slice_registers, bw.slice_luts, bw.lut_ff_pairs, bw.bonded_iobs}) ==
          std::array<std::uint64_t, 4>{77861, 894887, 22981, 46991});
    CHECK(estimate_matrix_mult_resources(5, MultiplierKind::KOM32).slice_luts ==
          125 * units.at(MultiplierKind::KOM32).slice_luts);
    CHECK(estimate_matrix_mult_resources(7, MultiplierKind::BW32).bonded_iobs ==
          343 * units.at(MultiplierKind::BW32).bonded_iobs);
    CHECK_THROWS(estimate_matrix_mult_resources(0, MultiplierKind::BW32));
}

TEST_CASE("CNN workloads")
{
    const auto& units = builtin_unit_costs();
    const auto vgg16 = workload_report(builtin_arch(CnnArch::VGG16), units.at(MultiplierKind::KOM16));
    CHECK(vgg16.total_kernels == 3968);
    CHECK(vgg16.total_instances == 107136);
    CHECK(vgg16.aggregate.slice_luts == 65995776);

    const auto alex = workload_report(builtin_arch(CnnArch::ALEXNET), units.at(MultiplierKind::BW32));
    REQUIRE(alex.entries.size() == 3);
    CHECK(alex.entries[0].instances == 96 * 1331);
    std::uint64_t inst = 0;
    CostReport sum;
    for (const auto& e : alex.entries) {
        inst += e.instances;
        sum += e.cost;
    }
    CHECK(inst == alex.total_instances);
    CHECK(sum == alex.aggregate);
    CHECK(alex.aggregate.slice_registers == alex.total_instances * units.at(MultiplierKind::BW32).slice_registers);

    const auto alex_spec = builtin_arch(CnnArch::ALEXNET);
    CHECK(alex_spec.height == 227);
    CHECK(alex_spec.width == 227);
    CHECK(alex_spec.channels == 3);

    const CnnArchSpec tiny{"TINY", 1, 1, 1, 1, {{1, 1}}, "test"};
    const auto t = workload_report(tiny, units.at(MultiplierKind::KOM32));
    CHECK(t.total_instances == 1);
    CHECK(t.aggregate == estimate_matrix_mult_resources(1, MultiplierKind::KOM32));

    const auto vgg19 = builtin_arch(CnnArch::VGG19);
    CHECK(vgg19.total_kernels() - builtin_arch(CnnArch::VGG16).total_kernels() == 1024);
    CHECK(parse_cnn_arch("vgg19") == CnnArch::VGG19);
    CHECK_FALSE(parse_cnn_arch("resnet"));
}

TEST_CASE("report formats")
{
    const auto r = workload_report(builtin_arch(CnnArch::VGG16), builtin_unit_costs().at(MultiplierKind::DADDA32));
    const auto csv = workload_csv(r);
    CHECK(csv.rfind("architecture,multiplier,", 0) == 0);
    CHECK(csv.find("VGG16,DADDA32,total,3968,107136,") != std::string::npos);
    CHECK(workload_json(r).find("\"total_instances\": 107136") != std::string::npos);
    CHECK(workload_text(r).find("total: 3968 kernels") != std::string::npos);
}

TEST_CASE("table data parsing and calibration failures")
{
    const std::string text = shipped_table_text();
    CHECK(parse_table_data(text).cells.size() == 64);

    const std::string cell = "3,KOM16,slice_luts,16632";
    auto perturbed = text;
    perturbed.replace(perturbed.find(cell), cell.size(), "3,KOM16,slice_luts,16633");
    CHECK_THROWS_AS(calibrate_unit_costs(parse_table_data(perturbed)), CalibrationError);

    const std::string big = "11,BW32,bonded_iobs,";
    auto off = text;
    const auto at = off.find(big) + big.size();
    off.replace(at, off.find('\n', at) - at, "1");
    try {
        calibrate_unit_costs(parse_table_data(off));
        FAIL("expected a calibration error");
    } catch (const CalibrationError& e) {
        CHECK(std::string(e.what()).find("11x11 BW32 bonded_iobs") != std::string::npos);
    }

    CHECK_THROWS_AS(parse_table_data("3,KOM16,slice_luts\n"), TableDataError);
    CHECK_THROWS_AS(parse_table_data("3,KOM99,slice_luts,1\n"), TableDataError);
    CHECK_THROWS_AS(parse_table_data("3,KOM16,slice_luts,1\n3,KOM16,slice_luts,1\n"), TableDataError);
    CHECK_THROWS_AS(derive_unit_costs(parse_table_data("3,KOM16,slice_luts,27\n")), CalibrationError);
}
