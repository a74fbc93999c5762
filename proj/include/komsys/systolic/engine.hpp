#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "komsys/systolic/tensor_io.hpp"

namespace komsys::systolic {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class EngineMode { CONV1D, CONV2D, MATMUL, POOL_MAX, POOL_AVG, FC };

std::string_view to_string(EngineMode mode);
std::optional<EngineMode> parse_engine_mode(std::string_view text);

struct Instruction {
    enum class Op { LoadWeights, SetMode, SetParams, Run };
    Op op = Op::Run;
    EngineMode mode = EngineMode::CONV1D;
    std::map<std::string, std::string> params;
    /// Empty LOAD_WEIGHTS takes the weights from the external weight tensor.
    std::vector<Value> weights;
    int line = 0;
};

/// One instruction per line: SET_MODE <mode>, SET_PARAMS key=value ...,
/// LOAD_WEIGHTS [v ...], RUN. '#' starts a comment.
std::vector<Instruction> parse_program(const std::string& text);

/// Parameters per mode:
///   CONV1D  K                       weights K
///   CONV2D  kh kw [c]               weights kh*kw*c (c defaults to the input channels)
///   MATMUL  n                       weights n*n (row-major A; the input is B)
///   POOL_*  ph pw                   no weights
///   FC      m d [act=relu|identity] weights m*d; input holds x, optionally followed by m bias values
class Engine {
public:
    /// Applies a non-RUN instruction. SET_MODE clears the parameters, and
    /// the weights too once a mode has been set before.
    void apply(const Instruction& instruction, const std::optional<IntTensor>& weight_file = std::nullopt);

    /// Executes the configured mode on `input`.
    IntTensor run(const IntTensor& input);

    /// Runs a whole program. The first RUN consumes `input`; each later RUN
    /// consumes the previous result. Returns every RUN's output in order.
    std::vector<IntTensor> execute(const std::vector<Instruction>& program, const IntTensor& input,
                                   const std::optional<IntTensor>& weight_file = std::nullopt);

    std::optional<EngineMode> mode() const { return mode_; }
    std::uint64_t multiplies() const { return multiplies_; }
    std::uint64_t cycles() const { return cycles_; }

private:
    long param(const std::string& key, std::optional<long> fallback = std::nullopt) const;
    void require_weights(std::size_t expected) const;

    std::optional<EngineMode> mode_;
    std::map<std::string, std::string> params_;
    std::vector<Value> weights_;
    std::uint64_t multiplies_ = 0;
    std::uint64_t cycles_ = 0;
};

} // namespace komsys::systolic
