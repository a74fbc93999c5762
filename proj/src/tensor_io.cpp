#include "komsys/systolic/tensor_io.hpp"

#include <fstream>
#include <sstream>

namespace komsys::systolic {

namespace {

long long read_number(std::istream& in, const char* what)
{
    std::string token;
    if (!(in >> token))
        throw TensorFormatError(std::string("tensor text ends before ") + what);
    std::size_t used = 0;
    long long v = 0;
    try {
        v = std::stoll(token, &used, 10);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != token.size())
        throw TensorFormatError(std::string("bad integer '") + token + "' in " + what);
    return v;
}

} // namespace

IntTensor read_tensor(std::istream& in)
{
    const auto h = read_number(in, "header");
    const auto w = read_number(in, "header");
    const auto c = read_number(in, "header");
    if (h < 1 || w < 1 || c < 1)
        throw TensorFormatError("tensor extents must be positive, got " + std::to_string(h) + " " +
                                std::to_string(w) + " " + std::to_string(c));
    IntTensor t(h, w, c);
    for (Eigen::Index i = 0; i < t.size(); ++i)
        t.data(i) = read_number(in, "tensor data");
    std::string extra;
    if (in >> extra)
        throw TensorFormatError("unexpected trailing value '" + extra + "' after " + std::to_string(t.size()) +
                                " tensor elements");
    return t;
}

IntTensor parse_tensor(const std::string& text)
{
    std::istringstream in(text);
    return read_tensor(in);
}

IntTensor load_tensor(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw TensorFormatError("cannot open tensor file " + path);
    return read_tensor(in);
}

void write_tensor(std::ostream& out, const IntTensor& t)
{
    out << t.height << ' ' << t.width << ' ' << t.channels << '\n';
    const Eigen::Index row = t.width * t.channels;
    for (Eigen::Index i = 0; i < t.size(); ++i)
        out << t.data(i) << ((i + 1) % row == 0 ? '\n' : ' ');
}

std::string format_tensor(const IntTensor& t)
{
    std::ostringstream out;
    write_tensor(out, t);
    return out.str();
}

void save_tensor(const std::string& path, const IntTensor& t)
{
    std::ofstream out(path);
    if (!out)
        throw TensorFormatError("cannot write tensor file " + path);
    write_tensor(out, t);
}

} // namespace komsys::systolic
