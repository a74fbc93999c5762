#include <doctest.h>

#include <filesystem>
#include <sstream>

#include "komsys/systolic/engine.hpp"

using namespace komsys::systolic;

namespace {

std::vector<IntTensor> run_script(const std::string& script, const IntTensor& input, Engine* engine = nullptr)
{
    Engine local;
    Engine& e = engine ? *engine : local;
    return e.execute(parse_program(script), input);
}

IntTensor row(std::initializer_list<Value> values)
{
    IntTensor t(1, static_cast<Eigen::Index>(values.size()), 1);
    Eigen::Index i = 0;
    for (auto v : values)
        t.data(i++) = v;
    return t;
}

} // namespace

TEST_CASE("CONV1D impulse response")
{
    Engine e;
    const auto out = run_script("SET_MODE CONV1D\nSET_PARAMS K=3\nLOAD_WEIGHTS 5 -1 2\nRUN\n", row({1, 0, 0, 0}), &e);
    REQUIRE(out.size() == 1);
    CHECK(out[0] == row({5, -1, 2, 0}));
    CHECK(e.multiplies() == 12);
    CHECK(e.cycles() > 0);
}

TEST_CASE("configuration errors")
{
    CHECK_THROWS_WITH_AS(run_script("LOAD_WEIGHTS 1 2\nRUN\n", row({1})), "line 2: RUN before SET_MODE", ConfigError);
    // Weights may precede the first SET_MODE.
    CHECK(run_script("LOAD_WEIGHTS 1 2 3\nSET_MODE CONV1D\nSET_PARAMS K=3\nRUN\n", row({1, 0, 0})).at(0) == row({1, 2, 3}));
    CHECK_THROWS_WITH_AS(parse_program("# header\nFROB 1\n"), "line 2: unknown instruction 'FROB'", ConfigError);
    CHECK_THROWS_WITH_AS(run_script("SET_MODE CONV1D\nSET_PARAMS K=3\nLOAD_WEIGHTS 1 2\nRUN\n", row({1})),
                         "line 4: weight count mismatch: mode CONV1D expects 3 weights, 2 loaded", ConfigError);
    CHECK_THROWS_AS(parse_program("SET_MODE FFT\n"), ConfigError);
    CHECK_THROWS_AS(parse_program("LOAD_WEIGHTS 1 two\n"), ConfigError);
    CHECK_THROWS_AS(parse_program("SET_PARAMS K\n"), ConfigError);
    CHECK_THROWS_AS(run_script("SET_MODE CONV1D\nLOAD_WEIGHTS 1\nRUN\n", row({1})), ConfigError);
    CHECK_THROWS_AS(run_script("SET_MODE CONV1D\nSET_PARAMS K=0\nRUN\n", row({1})), ConfigError);
}

TEST_CASE("FC with bias appended to the input")
{
    CHECK(run_script("SET_MODE FC\nSET_PARAMS m=1 d=2\nLOAD_WEIGHTS 1 1\nRUN\n", row({2, 3, 1})).at(0) == row({6}));
    const auto out = run_script("SET_MODE FC\nSET_PARAMS m=1 d=2\nLOAD_WEIGHTS 1 2\nRUN\n", row({2, 1, 2}));
    CHECK(out.at(0) == row({6}));
    const auto relu = run_script("SET_MODE FC\nSET_PARAMS m=1 d=2\nLOAD_WEIGHTS 1 2\nRUN\n", row({-2, -1}));
    CHECK(relu.at(0) == row({0}));
    const auto ident =
        run_script("SET_MODE FC\nSET_PARAMS m=1 d=2 act=identity\nLOAD_WEIGHTS 1 2\nRUN\n", row({-2, -1}));
    CHECK(ident.at(0) == row({-4}));
    CHECK_THROWS_AS(run_script("SET_MODE FC\nSET_PARAMS m=1 d=2\nLOAD_WEIGHTS 1 2\nRUN\n", row({1, 2, 3, 4})),
                    ShapeError);
}

TEST_CASE("CONV2D then POOL chained, weights from a tensor")
{
    const auto prog = parse_program("SET_MODE CONV2D\nSET_PARAMS kh=2 kw=2\nLOAD_WEIGHTS\nRUN\n"
                                    "SET_MODE POOL_MAX\nSET_PARAMS ph=2 pw=2\nRUN\n");
    IntTensor image(5, 5, 1);
    for (Eigen::Index i = 0; i < image.size(); ++i)
        image.data(i) = i;
    const auto weights = IntTensor::filled(2, 2, 1, 1);
    Engine e;
    const auto out = e.execute(prog, image, weights);
    REQUIRE(out.size() == 2);
    CHECK(out[0].height == 4);
    CHECK(out[0](0, 0, 0) == 0 + 1 + 5 + 6);
    CHECK(out[1].height == 2);
    CHECK(out[1](1, 1, 0) == out[0](3, 3, 0));
    CHECK_THROWS_AS(Engine().execute(prog, image), ConfigError);
}

TEST_CASE("MATMUL mode")
{
    IntTensor b(2, 2, 1);
    b.data << 5, 6, 7, 8;
    const auto out = run_script("SET_MODE MATMUL\nSET_PARAMS n=2\nLOAD_WEIGHTS 1 2 3 4\nRUN\n", b);
    CHECK(out.at(0).data == (Vector<Value>(4) << 19, 22, 43, 50).finished());
    CHECK_THROWS_AS(run_script("SET_MODE MATMUL\nSET_PARAMS n=2\nLOAD_WEIGHTS 1 2 3 4\nRUN\n", row({1, 2, 3, 4})),
                    ShapeError);
}

TEST_CASE("tensor text format")
{
    const auto t = parse_tensor("2 1 2\n1 -2\n3 4\n");
    CHECK(t.height == 2);
    CHECK(t.channels == 2);
    CHECK(t(1, 0, 1) == 4);
    CHECK(parse_tensor(format_tensor(t)) == t);
    CHECK_THROWS_AS(parse_tensor("1 1 2\n5\n"), TensorFormatError);
    CHECK_THROWS_AS(parse_tensor("1 1 1\n5 6\n"), TensorFormatError);
    CHECK_THROWS_AS(parse_tensor("1 0 1\n"), TensorFormatError);
    CHECK_THROWS_AS(parse_tensor("1 1 1\nx\n"), TensorFormatError);

    const auto path = std::filesystem::temp_directory_path() / "komsys_tensor_test.txt";
    save_tensor(path.string(), t);
    CHECK(load_tensor(path.string()) == t);
    std::filesystem::remove(path);
    CHECK_THROWS(load_tensor((std::filesystem::temp_directory_path() / "no_such_tensor.txt").string()));
}
