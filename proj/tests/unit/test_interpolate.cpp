#include <doctest.h>

#include <cmath>

#include "starprune/interpolate.hpp"

#include "test_util.hpp"

using namespace starprune;

TEST_CASE("interpolate preserves constant fields under any resize") {
    Tensor src(3, 5, 2, 3.0f);
    for (Extent2 target : {Extent2{1, 1}, Extent2{3, 5}, Extent2{7, 2}, Extent2{16, 16}}) {
        for (ResizeMode mode : {ResizeMode::Bilinear, ResizeMode::Nearest}) {
            Tensor out = interpolate(src, target, mode);
            REQUIRE(out.extent() == target);
            // nested-lerp blending keeps equal taps exact, comfortably
            // inside the 1e-7 absolute budget for constants
            for (float v : out.storage()) CHECK(std::abs(v - 3.0f) <= 1e-7f);
        }
    }
}

TEST_CASE("interpolate to the same shape is a bitwise identity") {
    Tensor src = testutil::random_tensor(2, 2, 3, 41);
    CHECK(interpolate(src, {2, 2}, ResizeMode::Bilinear) == src);
    CHECK(interpolate(src, {2, 2}, ResizeMode::Nearest) == src);
}

TEST_CASE("2x2 ramp upsampled to 4x4 matches the closed-form bilinear oracle") {
    Tensor src(2, 2, 1);
    src.at(0, 0, 0) = 0.0f;
    src.at(0, 1, 0) = 1.0f;
    src.at(1, 0, 0) = 2.0f;
    src.at(1, 1, 0) = 3.0f;

    Tensor out = interpolate(src, {4, 4}, ResizeMode::Bilinear);

    // Hand-frozen values from evaluating the align-corners-false formula on
    // paper: source coords -0.25, 0.25, 0.75, 1.25 per axis with clamping.
    const float expected[4][4] = {{0.0f, 0.25f, 0.75f, 1.0f},
                                  {0.5f, 0.75f, 1.25f, 1.5f},
                                  {1.5f, 1.75f, 2.25f, 2.5f},
                                  {2.0f, 2.25f, 2.75f, 3.0f}};
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c)
            CHECK(out.at(r, c, 0) == doctest::Approx(expected[r][c]).epsilon(1e-6));

    // And against the independent direct-formula oracle per pixel.
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c)
            CHECK(out.at(r, c, 0) ==
                  doctest::Approx(testutil::oracle_bilinear_at(src, r, c, 0, 4, 4))
                      .epsilon(1e-6));
}

TEST_CASE("bilinear resize agrees with the direct-formula oracle on random tensors") {
    for (uint64_t seed : {1ULL, 2ULL, 3ULL}) {
        Tensor src = testutil::random_tensor(5, 7, 3, seed);
        for (Extent2 target : {Extent2{9, 4}, Extent2{2, 13}, Extent2{5, 7}, Extent2{1, 1}}) {
            Tensor out = interpolate(src, target, ResizeMode::Bilinear);
            for (int r = 0; r < target.rows; ++r)
                for (int c = 0; c < target.cols; ++c)
                    for (int ch = 0; ch < 3; ++ch)
                        CHECK(out.at(r, c, ch) ==
                              doctest::Approx(testutil::oracle_bilinear_at(
                                                  src, r, c, ch, target.rows, target.cols))
                                  .epsilon(1e-5));
        }
    }
}

TEST_CASE("nearest resize picks the closest source center, ties toward lower index") {
    // Downsampling 4 -> 2 puts every output center exactly between two
    // source centers (coords 0.5 and 2.5): the tie must go to the lower one.
    Tensor src(4, 1, 1);
    for (int r = 0; r < 4; ++r) src.at(r, 0, 0) = static_cast<float>(r);
    Tensor out = interpolate(src, {2, 1}, ResizeMode::Nearest);
    CHECK(out.at(0, 0, 0) == 0.0f);
    CHECK(out.at(1, 0, 0) == 2.0f);

    for (int out_n : {1, 2, 3, 5, 8}) {
        for (int i = 0; i < out_n; ++i)
            CHECK(nearest_index(i, 4, out_n) == testutil::oracle_nearest_index(i, 4, out_n));
    }
}

TEST_CASE("interpolate rejects zero-sized targets") {
    Tensor src(2, 2, 1, 1.0f);
    CHECK_THROWS_AS(interpolate(src, {0, 2}, ResizeMode::Bilinear), std::invalid_argument);
    CHECK_THROWS_AS(interpolate(src, {2, 0}, ResizeMode::Nearest), std::invalid_argument);
}

TEST_CASE("bilinear_sample_into matches full interpolate pixel for pixel") {
    Tensor src = testutil::random_tensor(6, 3, 4, 99);
    Extent2 target{11, 5};
    Tensor full = interpolate(src, target, ResizeMode::Bilinear);
    std::vector<float> buf(4);
    for (int r = 0; r < target.rows; ++r)
        for (int c = 0; c < target.cols; ++c) {
            bilinear_sample_into(src, r, c, target, buf.data());
            for (int ch = 0; ch < 4; ++ch) CHECK(buf[ch] == full.at(r, c, ch));
        }
}

TEST_CASE("interpolate_field matches tensor interpolation on one channel") {
    Field f = testutil::random_field(4, 6, 17);
    Tensor t(4, 6, 1);
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 6; ++c) t.at(r, c, 0) = f.at(r, c);
    Field fo = interpolate_field(f, {7, 3}, ResizeMode::Bilinear);
    Tensor to = interpolate(t, {7, 3}, ResizeMode::Bilinear);
    // Both paths run the same nested-lerp arithmetic, so they agree bitwise.
    for (int r = 0; r < 7; ++r)
        for (int c = 0; c < 3; ++c) CHECK(fo.at(r, c) == to.at(r, c, 0));
}
