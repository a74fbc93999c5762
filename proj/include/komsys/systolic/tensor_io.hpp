#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "komsys/systolic/array.hpp"

namespace komsys::systolic {

using Value = std::int64_t;
using IntTensor = Tensor<Value>;

class TensorFormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Text form: a "H W C" header, then H*W*C whitespace-separated integers in
/// row-major, channel-last order.
IntTensor read_tensor(std::istream& in);
IntTensor parse_tensor(const std::string& text);
IntTensor load_tensor(const std::string& path);

void write_tensor(std::ostream& out, const IntTensor& t);
std::string format_tensor(const IntTensor& t);
void save_tensor(const std::string& path, const IntTensor& t);

} // namespace komsys::systolic
