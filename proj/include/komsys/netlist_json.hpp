#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "komsys/netlist.hpp"

namespace komsys {

class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Interchange document:
///   {name, inputs:[{name,width}], outputs:[{name,width}],
///    gates:[{id,kind,in:[wire...],out}], registers:[{in,out,stage}]}
/// Wires are referenced by name; bus bit i of bus X is the wire "X[i]".
std::string export_netlist_json(const Netlist& netlist, int indent = 1);

/// Strict import: unknown or missing fields throw FormatError. The result is
/// not validated; run `validate` on it.
Netlist import_netlist_json(std::string_view text);

void save_netlist(const Netlist& netlist, const std::filesystem::path& path);
Netlist load_netlist(const std::filesystem::path& path);

} // namespace komsys
