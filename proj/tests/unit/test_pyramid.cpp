#include <doctest.h>

#include <string>

#include "starprune/fst1.hpp"
#include "starprune/interpolate.hpp"
#include "starprune/pyramid.hpp"
#include "starprune/quantize.hpp"

#include "golden_fixture.hpp"
#include "test_util.hpp"

using namespace starprune;

namespace {

TokenMap embedded_map(const Tensor& values, int scale_index = 0) {
    TokenMap tm;
    tm.scale_index = scale_index;
    tm.rows = values.rows();
    tm.cols = values.cols();
    tm.codes.assign(static_cast<size_t>(tm.rows) * tm.cols, 0);
    tm.embedded = values;
    return tm;
}

}  // namespace

TEST_CASE("accumulating an all-zero residual returns prev exactly") {
    Tensor prev = testutil::random_tensor(8, 8, 3, 70);
    Codebook cb = build_codebook(4, 8, 3, 0.5f);
    Tensor zeros(4, 4, 3, 0.0f);
    TokenMap tm = quantize(zeros, cb);  // all codes 0, embedded all zero
    for (int32_t code : tm.codes) REQUIRE(code == 0);
    Tensor out = accumulate(prev, tm);
    CHECK(out == prev);
}

TEST_CASE("accumulating onto a zero base at final scale returns the embedding") {
    Tensor residual = testutil::random_tensor(6, 6, 2, 71);
    Tensor prev(6, 6, 2, 0.0f);
    Tensor out = accumulate(prev, embedded_map(residual));
    CHECK(out == residual);
}

TEST_CASE("accumulate equals the independent upsample-then-add oracle") {
    Tensor prev = testutil::random_tensor(8, 8, 3, 7);
    Tensor residual = testutil::random_tensor(4, 4, 3, 8);
    Tensor out = accumulate(prev, embedded_map(residual));

    for (int r = 0; r < 8; ++r)
        for (int c = 0; c < 8; ++c)
            for (int ch = 0; ch < 3; ++ch) {
                double up = testutil::oracle_bilinear_at(residual, r, c, ch, 8, 8);
                CHECK(out.at(r, c, ch) ==
                      doctest::Approx(prev.at(r, c, ch) + up).epsilon(1e-5));
            }
}

TEST_CASE("accumulate rejects channel mismatches and missing embeddings") {
    Tensor prev = testutil::random_tensor(4, 4, 3, 72);
    Tensor bad = testutil::random_tensor(4, 4, 2, 73);
    CHECK_THROWS_AS(accumulate(prev, embedded_map(bad)), ShapeError);

    TokenMap no_embed = embedded_map(bad);
    no_embed.embedded.reset();
    CHECK_THROWS_AS(accumulate(prev, no_embed), std::invalid_argument);
}

TEST_CASE("accumulation order is interchangeable within float tolerance") {
    Tensor f = testutil::random_tensor(8, 8, 2, 80);
    Tensor a = testutil::random_tensor(4, 4, 2, 81);
    Tensor b = testutil::random_tensor(2, 2, 2, 82);
    Tensor ab = accumulate(accumulate(f, embedded_map(a)), embedded_map(b));
    Tensor ba = accumulate(accumulate(f, embedded_map(b)), embedded_map(a));
    CHECK(testutil::max_abs_diff(ab, ba) <= 1e-6);
}

TEST_CASE("next_input at the final resolution is a bitwise copy") {
    Tensor f = testutil::random_tensor(8, 8, 3, 90);
    CHECK(next_input(f, {8, 8}) == f);
}

TEST_CASE("next_input of a constant feature is constant") {
    Tensor f(8, 8, 2, 1.25f);
    Tensor out = next_input(f, {3, 5});
    for (float v : out.storage()) CHECK(v == doctest::Approx(1.25f).epsilon(1e-7));
}

TEST_CASE("next_input matches the direct bilinear downsample oracle") {
    Tensor f = testutil::random_tensor(8, 8, 2, 91);
    Tensor out = next_input(f, {2, 2});
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c)
            for (int ch = 0; ch < 2; ++ch)
                CHECK(out.at(r, c, ch) ==
                      doctest::Approx(testutil::oracle_bilinear_at(f, r, c, ch, 2, 2))
                          .epsilon(1e-5));
}

TEST_CASE("next_input rejects targets beyond the feature resolution") {
    Tensor f = testutil::random_tensor(4, 4, 2, 92);
    CHECK_THROWS_AS(next_input(f, {8, 4}), std::invalid_argument);
    CHECK_THROWS_AS(next_input(f, {4, 8}), std::invalid_argument);
}

TEST_CASE("four-scale oracle run reproduces the golden file bitwise") {
    Tensor feature = golden::run_clip1_feature();
    Tensor want = fst1_load_tensor(std::string(STARPRUNE_TEST_DATA_DIR) +
                                   "/golden_pyramid.fst1");
    CHECK(feature == want);
}
