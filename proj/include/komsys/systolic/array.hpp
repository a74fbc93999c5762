#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

namespace komsys::systolic {

class OverflowError : public std::overflow_error {
public:
    using std::overflow_error::overflow_error;
};

class ShapeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Integer scalars are checked; the accumulator never wraps silently.
template <typename Scalar>
Scalar checked_mul(Scalar a, Scalar b)
{
    if constexpr (std::is_integral_v<Scalar>) {
        Scalar r;
        if (__builtin_mul_overflow(a, b, &r))
            throw OverflowError("multiplication overflow: " + std::to_string(a) + " * " + std::to_string(b));
        return r;
    } else {
        return a * b;
    }
}

template <typename Scalar>
Scalar checked_add(Scalar a, Scalar b)
{
    if constexpr (std::is_integral_v<Scalar>) {
        Scalar r;
        if (__builtin_add_overflow(a, b, &r))
            throw OverflowError("accumulator overflow: " + std::to_string(a) + " + " + std::to_string(b));
        return r;
    } else {
        return a + b;
    }
}

template <typename Scalar>
struct Cell {
    Scalar h{0};
    Scalar y_reg{0};
};

/// y_n = y_{n-1} + h x; the cell's register takes the result.
template <typename Scalar>
Scalar cell_step(Cell<Scalar>& cell, Scalar y_prev, Scalar x)
{
    cell.y_reg = checked_add(y_prev, checked_mul(cell.h, x));
    return cell.y_reg;
}

/// A weight-stationary chain of MAC cells. Partial sums enter cell 0 as zero
/// and move one cell to the right per clock; every partial sum carries a valid
/// flag so bubbles are neither emitted nor counted as multiplications.
template <typename Scalar>
class MacChain {
public:
    explicit MacChain(const Vector<Scalar>& taps) : cells_(static_cast<std::size_t>(taps.size()))
    {
        if (taps.size() == 0)
            throw ShapeError("a MAC chain needs at least one cell");
        for (Eigen::Index j = 0; j < taps.size(); ++j)
            cells_[static_cast<std::size_t>(j)].h = taps(j);
        valid_.assign(cells_.size(), 0);
    }

    struct Output {
        Scalar y{0};
        bool valid = false;
    };

    std::size_t length() const { return cells_.size(); }
    std::uint64_t cycle() const { return cycle_; }
    std::uint64_t multiplies() const { return multiplies_; }

    /// One clock edge. `x(j)` is the operand presented to cell j this cycle;
    /// `start` launches a new partial sum into cell 0. Returns the value the
    /// last cell registers on this edge.
    Output clock(const Vector<Scalar>& x, bool start)
    {
        if (static_cast<std::size_t>(x.size()) != cells_.size())
            throw ShapeError("operand vector does not match chain length");
        // Right to left so every cell reads its neighbour's pre-edge value.
        for (std::size_t j = cells_.size(); j-- > 0;) {
            const bool in_valid = j == 0 ? start : valid_[j - 1] != 0;
            const Scalar y_prev = j == 0 ? Scalar{0} : cells_[j - 1].y_reg;
            if (in_valid) {
                cell_step(cells_[j], y_prev, x(static_cast<Eigen::Index>(j)));
                ++multiplies_;
            } else {
                cells_[j].y_reg = Scalar{0};
            }
            valid_[j] = in_valid ? 1 : 0;
        }
        ++cycle_;
        return {cells_.back().y_reg, valid_.back() != 0};
    }

private:
    std::vector<Cell<Scalar>> cells_;
    std::vector<char> valid_;
    std::uint64_t cycle_ = 0;
    std::uint64_t multiplies_ = 0;
};

template <typename Scalar>
struct FirResult {
    Vector<Scalar> y;
    /// Clock edges between the first sample entering and the first output.
    std::uint64_t latency = 0;
    std::uint64_t cycles = 0;
    std::uint64_t multiplies = 0;
};

/// y[n] = sum_k h[k] x[n-k]. The sample stream reaches cell j through 2j
/// delay registers, which lines x[n-j] up with the partial sum for y[n].
template <typename Scalar>
FirResult<Scalar> run_fir(const Vector<Scalar>& h, const Vector<Scalar>& x)
{
    if (h.size() == 0)
        throw ShapeError("FIR needs at least one coefficient");
    if (x.size() == 0)
        throw ShapeError("FIR needs at least one input sample");
    const Eigen::Index K = h.size(), N = x.size();
    MacChain<Scalar> chain(h);
    Vector<Scalar> delay = Vector<Scalar>::Zero(2 * K - 1);
    Vector<Scalar> operands(K);
    FirResult<Scalar> r;
    r.y = Vector<Scalar>::Zero(N);
    Eigen::Index emitted = 0;
    bool seen_first = false;
    for (Eigen::Index t = 0; emitted < N; ++t) {
        // delay(d) holds x[t - d].
        for (Eigen::Index d = delay.size() - 1; d > 0; --d)
            delay(d) = delay(d - 1);
        delay(0) = t < N ? x(t) : Scalar{0};
        for (Eigen::Index j = 0; j < K; ++j)
            operands(j) = delay(2 * j);
        const auto out = chain.clock(operands, t < N);
        if (out.valid) {
            if (!seen_first) {
                r.latency = static_cast<std::uint64_t>(t + 1);
                seen_first = true;
            }
            r.y(emitted++) = out.y;
        }
    }
    r.cycles = chain.cycle();
    r.multiplies = chain.multiplies();
    return r;
}

template <typename Scalar>
struct MatmulResult {
    Matrix<Scalar> c;
    std::uint64_t multiplies = 0;
    std::uint64_t cycles = 0;
};

/// C = A B with one MAC chain per row of A holding that row as its taps.
/// Column c of B is streamed skewed: cell k sees B(k, t - k) at cycle t, so
/// the partial sum launched at cycle c leaves the chain as C(i, c).
template <typename Scalar>
MatmulResult<Scalar> run_gemm(const Matrix<Scalar>& a, const Matrix<Scalar>& b)
{
    if (a.rows() == 0 || a.cols() == 0 || b.cols() == 0)
        throw ShapeError("matrix extents must be positive");
    if (a.cols() != b.rows())
        throw ShapeError("dimension mismatch: " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                         " times " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
    const Eigen::Index depth = a.cols(), cols = b.cols();
    MatmulResult<Scalar> r;
    r.c = Matrix<Scalar>::Zero(a.rows(), cols);
    Vector<Scalar> operands(depth);
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        MacChain<Scalar> chain(a.row(i).transpose());
        Eigen::Index emitted = 0;
        for (Eigen::Index t = 0; emitted < cols; ++t) {
            for (Eigen::Index k = 0; k < depth; ++k) {
                const Eigen::Index col = t - k;
                operands(k) = col >= 0 && col < cols ? b(k, col) : Scalar{0};
            }
            const auto out = chain.clock(operands, t < cols);
            if (out.valid)
                r.c(i, emitted++) = out.y;
        }
        r.multiplies += chain.multiplies();
        r.cycles += chain.cycle();
    }
    return r;
}

template <typename Scalar>
MatmulResult<Scalar> run_matmul(const Matrix<Scalar>& a, const Matrix<Scalar>& b)
{
    if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows())
        throw ShapeError("run_matmul expects two square matrices of equal order");
    return run_gemm(a, b);
}

/// H x W x C extents with channel-last row-major storage.
template <typename Scalar>
struct Tensor {
    Eigen::Index height = 0, width = 0, channels = 0;
    Vector<Scalar> data;

    Tensor() = default;
    Tensor(Eigen::Index h, Eigen::Index w, Eigen::Index c) : height(h), width(w), channels(c)
    {
        if (h < 1 || w < 1 || c < 1)
            throw ShapeError("tensor extents must be positive");
        data = Vector<Scalar>::Zero(h * w * c);
    }

    Eigen::Index index(Eigen::Index y, Eigen::Index x, Eigen::Index c) const { return (y * width + x) * channels + c; }
    Scalar& operator()(Eigen::Index y, Eigen::Index x, Eigen::Index c) { return data(index(y, x, c)); }
    Scalar operator()(Eigen::Index y, Eigen::Index x, Eigen::Index c) const { return data(index(y, x, c)); }
    Eigen::Index size() const { return data.size(); }

    static Tensor filled(Eigen::Index h, Eigen::Index w, Eigen::Index c, Scalar value)
    {
        Tensor t(h, w, c);
        t.data.setConstant(value);
        return t;
    }

    bool operator==(const Tensor& o) const
    {
        return height == o.height && width == o.width && channels == o.channels && data == o.data;
    }
};

template <typename Scalar>
struct ConvResult {
    Tensor<Scalar> map;
    std::uint64_t multiplies = 0;
};

/// Valid cross-correlation, stride 1, one output channel. Lowered with im2col:
/// every window becomes a column streamed through a chain holding the kernel.
template <typename Scalar>
ConvResult<Scalar> run_conv2d(const Tensor<Scalar>& image, const Tensor<Scalar>& kernel)
{
    if (kernel.channels != image.channels)
        throw ShapeError("channel mismatch: image has " + std::to_string(image.channels) + ", kernel has " +
                         std::to_string(kernel.channels));
    if (kernel.height > image.height || kernel.width > image.width)
        throw ShapeError("kernel larger than image");
    const Eigen::Index oh = image.height - kernel.height + 1, ow = image.width - kernel.width + 1;
    const Eigen::Index taps = kernel.size();
    Matrix<Scalar> patches(taps, oh * ow);
    for (Eigen::Index y = 0; y < oh; ++y)
        for (Eigen::Index x = 0; x < ow; ++x) {
            Eigen::Index row = 0;
            for (Eigen::Index ky = 0; ky < kernel.height; ++ky)
                for (Eigen::Index kx = 0; kx < kernel.width; ++kx)
                    for (Eigen::Index c = 0; c < kernel.channels; ++c)
                        patches(row++, y * ow + x) = image(y + ky, x + kx, c);
        }
    const Matrix<Scalar> weights = kernel.data.transpose();
    const auto product = run_gemm(weights, patches);
    ConvResult<Scalar> r{Tensor<Scalar>(oh, ow, 1), product.multiplies};
    r.map.data = product.c.row(0).transpose();
    return r;
}

enum class PoolMode { Max, Avg };

template <typename Scalar>
Scalar floor_div(Scalar num, Scalar den)
{
    if constexpr (std::is_integral_v<Scalar>) {
        Scalar q = num / den;
        if ((num % den != 0) && ((num < 0) != (den < 0)))
            --q;
        return q;
    } else {
        return num / den;
    }
}

/// Non-overlapping ph x pw windows, applied per channel.
template <typename Scalar>
Tensor<Scalar> run_pool(const Tensor<Scalar>& map, Eigen::Index ph, Eigen::Index pw, PoolMode mode)
{
    if (ph < 1 || pw < 1)
        throw ShapeError("pool window extents must be positive");
    if (map.height % ph != 0 || map.width % pw != 0)
        throw ShapeError("pool window " + std::to_string(ph) + "x" + std::to_string(pw) + " does not divide " +
                         std::to_string(map.height) + "x" + std::to_string(map.width));
    Tensor<Scalar> out(map.height / ph, map.width / pw, map.channels);
    for (Eigen::Index y = 0; y < out.height; ++y)
        for (Eigen::Index x = 0; x < out.width; ++x)
            for (Eigen::Index c = 0; c < map.channels; ++c) {
                Scalar acc = map(y * ph, x * pw, c);
                for (Eigen::Index dy = 0; dy < ph; ++dy)
                    for (Eigen::Index dx = 0; dx < pw; ++dx) {
                        if (dy == 0 && dx == 0)
                            continue;
                        const Scalar v = map(y * ph + dy, x * pw + dx, c);
                        acc = mode == PoolMode::Max ? std::max(acc, v) : checked_add(acc, v);
                    }
                out(y, x, c) = mode == PoolMode::Max ? acc : floor_div(acc, static_cast<Scalar>(ph * pw));
            }
    return out;
}

enum class Activation { Relu, Identity };

template <typename Scalar>
struct FcResult {
    Vector<Scalar> out;
    std::uint64_t multiplies = 0;
};

/// out = act(W x + b), one MAC chain per output row.
template <typename Scalar>
FcResult<Scalar> run_fc(const Matrix<Scalar>& w, const Vector<Scalar>& x, const Vector<Scalar>& b, Activation act)
{
    if (w.cols() != x.size() || w.rows() != b.size())
        throw ShapeError("dimension mismatch: W is " + std::to_string(w.rows()) + "x" + std::to_string(w.cols()) +
                         ", x has " + std::to_string(x.size()) + ", b has " + std::to_string(b.size()));
    const Matrix<Scalar> column = x;
    const auto product = run_gemm(w, column);
    FcResult<Scalar> r{Vector<Scalar>(w.rows()), product.multiplies};
    for (Eigen::Index i = 0; i < w.rows(); ++i) {
        const Scalar v = checked_add(product.c(i, 0), b(i));
        r.out(i) = act == Activation::Relu && v < Scalar{0} ? Scalar{0} : v;
    }
    return r;
}

} // namespace komsys::systolic
