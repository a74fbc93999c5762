#include "komsys/systolic/engine.hpp"

#include <sstream>

namespace komsys::systolic {

std::string_view to_string(EngineMode mode)
{
    switch (mode) {
    case EngineMode::CONV1D: return "CONV1D";
    case EngineMode::CONV2D: return "CONV2D";
    case EngineMode::MATMUL: return "MATMUL";
    case EngineMode::POOL_MAX: return "POOL_MAX";
    case EngineMode::POOL_AVG: return "POOL_AVG";
    case EngineMode::FC: return "FC";
    }
    return "?";
}

std::optional<EngineMode> parse_engine_mode(std::string_view text)
{
    for (auto m : {EngineMode::CONV1D, EngineMode::CONV2D, EngineMode::MATMUL, EngineMode::POOL_MAX,
                   EngineMode::POOL_AVG, EngineMode::FC})
        if (to_string(m) == text)
            return m;
    return std::nullopt;
}

namespace {

std::string at_line(int line)
{
    return line > 0 ? "line " + std::to_string(line) + ": " : "";
}

Value parse_value(const std::string& token, int line)
{
    std::size_t used = 0;
    Value v = 0;
    try {
        v = std::stoll(token, &used, 10);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != token.size() || token.empty())
        throw ConfigError(at_line(line) + "bad integer '" + token + "'");
    return v;
}

} // namespace

std::vector<Instruction> parse_program(const std::string& text)
{
    std::vector<Instruction> program;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        std::istringstream words(raw.substr(0, hash));
        std::string op;
        if (!(words >> op))
            continue;
        Instruction ins;
        ins.line = line_no;
        std::string token;
        if (op == "SET_MODE") {
            ins.op = Instruction::Op::SetMode;
            if (!(words >> token))
                throw ConfigError(at_line(line_no) + "SET_MODE needs a mode");
            const auto mode = parse_engine_mode(token);
            if (!mode)
                throw ConfigError(at_line(line_no) + "unknown mode '" + token + "'");
            ins.mode = *mode;
            if (words >> token)
                throw ConfigError(at_line(line_no) + "unexpected '" + token + "' after SET_MODE");
        } else if (op == "SET_PARAMS") {
            ins.op = Instruction::Op::SetParams;
            while (words >> token) {
                const auto eq = token.find('=');
                if (eq == std::string::npos || eq == 0 || eq + 1 == token.size())
                    throw ConfigError(at_line(line_no) + "expected key=value, got '" + token + "'");
                ins.params[token.substr(0, eq)] = token.substr(eq + 1);
            }
        } else if (op == "LOAD_WEIGHTS") {
            ins.op = Instruction::Op::LoadWeights;
            while (words >> token)
                ins.weights.push_back(parse_value(token, line_no));
        } else if (op == "RUN") {
            ins.op = Instruction::Op::Run;
            if (words >> token)
                throw ConfigError(at_line(line_no) + "unexpected '" + token + "' after RUN");
        } else {
            throw ConfigError(at_line(line_no) + "unknown instruction '" + op + "'");
        }
        program.push_back(std::move(ins));
    }
    return program;
}

void Engine::apply(const Instruction& ins, const std::optional<IntTensor>& weight_file)
{
    switch (ins.op) {
    case Instruction::Op::SetMode:
        // Reconfiguring drops the previous mode's setup. Weights loaded
        // before the first SET_MODE are kept for it.
        if (mode_)
            weights_.clear();
        mode_ = ins.mode;
        params_.clear();
        break;
    case Instruction::Op::SetParams:
        for (const auto& [k, v] : ins.params)
            params_[k] = v;
        break;
    case Instruction::Op::LoadWeights:
        if (!ins.weights.empty()) {
            weights_ = ins.weights;
        } else if (weight_file) {
            weights_.assign(weight_file->data.begin(), weight_file->data.end());
        } else {
            throw ConfigError(at_line(ins.line) + "LOAD_WEIGHTS without values needs a weight tensor");
        }
        break;
    case Instruction::Op::Run:
        throw std::logic_error("RUN goes through Engine::run");
    }
}

long Engine::param(const std::string& key, std::optional<long> fallback) const
{
    const auto it = params_.find(key);
    if (it == params_.end()) {
        if (fallback)
            return *fallback;
        throw ConfigError("mode " + std::string(to_string(*mode_)) + " needs parameter '" + key + "'");
    }
    std::size_t used = 0;
    long v = 0;
    try {
        v = std::stol(it->second, &used, 10);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != it->second.size() || v < 1)
        throw ConfigError("parameter " + key + "=" + it->second + " must be a positive integer");
    return v;
}

void Engine::require_weights(std::size_t expected) const
{
    if (weights_.size() != expected)
        throw ConfigError("weight count mismatch: mode " + std::string(to_string(*mode_)) + " expects " +
                          std::to_string(expected) + " weights, " + std::to_string(weights_.size()) + " loaded");
}

IntTensor Engine::run(const IntTensor& input)
{
    if (!mode_)
        throw ConfigError("RUN before SET_MODE");
    auto weight_vector = [&] {
        return Vector<Value>(Eigen::Map<const Vector<Value>>(weights_.data(), static_cast<Eigen::Index>(weights_.size())));
    };
    switch (*mode_) {
    case EngineMode::CONV1D: {
        const auto k = param("K");
        require_weights(static_cast<std::size_t>(k));
        const auto r = run_fir<Value>(weight_vector(), input.data);
        multiplies_ += r.multiplies;
        cycles_ += r.cycles;
        IntTensor out(1, input.size(), 1);
        out.data = r.y;
        return out;
    }
    case EngineMode::CONV2D: {
        const auto kh = param("kh"), kw = param("kw"), c = param("c", input.channels);
        require_weights(static_cast<std::size_t>(kh * kw * c));
        IntTensor kernel(kh, kw, c);
        kernel.data = weight_vector();
        const auto r = run_conv2d(input, kernel);
        multiplies_ += r.multiplies;
        return r.map;
    }
    case EngineMode::MATMUL: {
        const auto n = param("n");
        require_weights(static_cast<std::size_t>(n * n));
        if (input.height != n || input.width != n || input.channels != 1)
            throw ShapeError("MATMUL with n=" + std::to_string(n) + " needs an " + std::to_string(n) + " " +
                             std::to_string(n) + " 1 input tensor");
        const Matrix<Value> a = Eigen::Map<const Matrix<Value>>(weights_.data(), n, n);
        const Matrix<Value> b = Eigen::Map<const Matrix<Value>>(input.data.data(), n, n);
        const auto r = run_matmul(a, b);
        multiplies_ += r.multiplies;
        cycles_ += r.cycles;
        IntTensor out(n, n, 1);
        out.data = Eigen::Map<const Vector<Value>>(r.c.data(), n * n);
        return out;
    }
    case EngineMode::POOL_MAX:
    case EngineMode::POOL_AVG: {
        require_weights(0);
        return run_pool(input, param("ph"), param("pw"),
                        *mode_ == EngineMode::POOL_MAX ? PoolMode::Max : PoolMode::Avg);
    }
    case EngineMode::FC: {
        const auto m = param("m"), d = param("d");
        require_weights(static_cast<std::size_t>(m * d));
        Activation act = Activation::Relu;
        if (const auto it = params_.find("act"); it != params_.end()) {
            if (it->second == "identity")
                act = Activation::Identity;
            else if (it->second != "relu")
                throw ConfigError("act must be relu or identity, got '" + it->second + "'");
        }
        if (input.size() != d && input.size() != d + m)
            throw ShapeError("FC input holds " + std::to_string(input.size()) + " values; expected d=" +
                             std::to_string(d) + " or d+m=" + std::to_string(d + m));
        const Matrix<Value> w = Eigen::Map<const Matrix<Value>>(weights_.data(), m, d);
        const Vector<Value> x = input.data.head(d);
        const Vector<Value> b = input.size() == d ? Vector<Value>::Zero(m) : Vector<Value>(input.data.tail(m));
        const auto r = run_fc(w, x, b, act);
        multiplies_ += r.multiplies;
        IntTensor out(1, m, 1);
        out.data = r.out;
        return out;
    }
    }
    throw std::logic_error("unhandled engine mode");
}

std::vector<IntTensor> Engine::execute(const std::vector<Instruction>& program, const IntTensor& input,
                                       const std::optional<IntTensor>& weight_file)
{
    std::vector<IntTensor> outputs;
    for (const auto& ins : program) {
        if (ins.op != Instruction::Op::Run) {
            apply(ins, weight_file);
            continue;
        }
        try {
            outputs.push_back(run(outputs.empty() ? input : outputs.back()));
        } catch (const ConfigError& e) {
            throw ConfigError(at_line(ins.line) + e.what());
        } catch (const ShapeError& e) {
            throw ShapeError(at_line(ins.line) + e.what());
        }
    }
    return outputs;
}

} // namespace komsys::systolic
