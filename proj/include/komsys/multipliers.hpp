#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "komsys/bitvec.hpp"
#include "komsys/netlist.hpp"

namespace komsys {

enum class MultiplierFamily { KOM, BAUGH_WOOLEY, DADDA, ARRAY };

/// three_product is the classic Karatsuba-Ofman identity; four_product
/// instantiates all four half products of the schoolbook split.
enum class KomVariant { ThreeProduct, FourProduct };

struct MultiplierSpec {
    MultiplierFamily family = MultiplierFamily::KOM;
    int width = 32;
    KomVariant kom_variant = KomVariant::ThreeProduct;
    bool pipelined = false;

    bool is_signed() const { return family == MultiplierFamily::BAUGH_WOOLEY; }
};

class GeneratorError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

std::string_view to_string(MultiplierFamily family);
std::string_view to_string(KomVariant variant);
std::optional<MultiplierFamily> parse_family(std::string_view text);
std::optional<KomVariant> parse_kom_variant(std::string_view text);

/// Netlist name for a spec, e.g. "kom32_3p_pipe", "bw16", "dadda8".
std::string multiplier_name(const MultiplierSpec& spec);

/// True for netlist names produced for signed (Baugh-Wooley) multipliers.
bool is_signed_multiplier_name(std::string_view name);

/// All generators emit input buses A, B (width n) and output bus P (width 2n).
Netlist gen_kom(const MultiplierSpec& spec);
Netlist gen_baugh_wooley(const MultiplierSpec& spec);
Netlist gen_dadda(const MultiplierSpec& spec);
Netlist gen_array(const MultiplierSpec& spec);
Netlist generate(const MultiplierSpec& spec);

/// The 2-bit x 2-bit leaf circuit on its own (8 primitive gates).
Netlist gen_base_multiplier();
inline constexpr int kBaseMultiplierGates = 8;

/// Number of 2x2 leaf instances in the generated KOM netlist, counted from
/// the gate hierarchy.
std::uint64_t count_base_multipliers(const MultiplierSpec& spec);

/// Distinct hierarchy instances named `cell` (gate id path component).
std::uint64_t count_instances(const Netlist& netlist, std::string_view cell);

/// Dadda target heights strictly below `max_height`, descending: the height
/// after each reduction stage.
std::vector<int> dadda_stage_heights(int max_height);

/// Reduction stages used by gen_dadda for an n-bit multiplier, counted from
/// the gate hierarchy of the generated netlist.
int dadda_reduction_stages(const Netlist& dadda_netlist);

/// High/low split of an n-bit operand pair; A = a_l * 2^(n/2) + a_r.
struct KomDecomposition {
    u128 a_l = 0, a_r = 0, b_l = 0, b_r = 0;
    int shift_full = 0;
    int shift_half = 0;
};
KomDecomposition decompose(u128 a, u128 b, int width);

} // namespace komsys
