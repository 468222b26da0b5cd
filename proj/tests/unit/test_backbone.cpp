#include <doctest.h>

#include <cmath>
#include <vector>

#include "starprune/backbone.hpp"
#include "starprune/rng.hpp"
#include "starprune/schedule.hpp"
#include "starprune/sttp.hpp"
#include "starprune/synthetic.hpp"

#include "test_util.hpp"

using namespace starprune;

namespace {

std::vector<Position> all_positions(Extent2 e) {
    std::vector<Position> ps;
    for (int r = 0; r < e.rows; ++r)
        for (int c = 0; c < e.cols; ++c) ps.push_back({r, c});
    return ps;
}

// Independent re-derivation of the mixer's seeded weights: the draw order
// (per layer: wq, then wk, then wv, row-major) and the uniform bound
// 1/sqrt(C) are part of the documented construction.
struct NaiveWeights {
    std::vector<std::vector<float>> wq, wk, wv;  // per layer, (C, C) row-major
};

NaiveWeights draw_weights(uint64_t seed, int channels, int layers) {
    const float bound = 1.0f / std::sqrt(static_cast<float>(channels));
    SplitMix64 g(derive_seed(seed, {0x6D69786572ULL}));
    NaiveWeights w;
    const size_t n = static_cast<size_t>(channels) * channels;
    for (int l = 0; l < layers; ++l) {
        std::vector<float> q(n), k(n), v(n);
        for (float& x : q) x = g.uniform(-bound, bound);
        for (float& x : k) x = g.uniform(-bound, bound);
        for (float& x : v) x = g.uniform(-bound, bound);
        w.wq.push_back(std::move(q));
        w.wk.push_back(std::move(k));
        w.wv.push_back(std::move(v));
    }
    return w;
}

std::vector<double> project(const std::vector<double>& x, int m, int C,
                            const std::vector<float>& w) {
    std::vector<double> y(static_cast<size_t>(m) * C, 0.0);
    for (int i = 0; i < m; ++i)
        for (int b = 0; b < C; ++b) {
            double acc = 0.0;
            for (int a = 0; a < C; ++a)
                acc += x[static_cast<size_t>(i) * C + a] * w[static_cast<size_t>(a) * C + b];
            y[static_cast<size_t>(i) * C + b] = acc;
        }
    return y;
}

// Dense multi-head softmax attention, straight from the definition.
// Returns the layer output; optionally accumulates the head-mean attention
// matrix into `attn` (m, m).
std::vector<double> naive_layer(const std::vector<double>& x, int m, int C, int heads,
                                const std::vector<float>& wq, const std::vector<float>& wk,
                                const std::vector<float>& wv,
                                std::vector<double>* attn = nullptr) {
    const int dh = C / heads;
    std::vector<double> q = project(x, m, C, wq);
    std::vector<double> k = project(x, m, C, wk);
    std::vector<double> v = project(x, m, C, wv);
    std::vector<double> out(static_cast<size_t>(m) * C, 0.0);
    if (attn) attn->assign(static_cast<size_t>(m) * m, 0.0);
    for (int h = 0; h < heads; ++h) {
        const int off = h * dh;
        for (int i = 0; i < m; ++i) {
            std::vector<double> w(m);
            double denom = 0.0;
            for (int j = 0; j < m; ++j) {
                double dot = 0.0;
                for (int d = 0; d < dh; ++d)
                    dot += q[static_cast<size_t>(i) * C + off + d] *
                           k[static_cast<size_t>(j) * C + off + d];
                w[j] = std::exp(dot / std::sqrt(static_cast<double>(dh)));
                denom += w[j];
            }
            for (int j = 0; j < m; ++j) {
                double a = w[j] / denom;
                if (attn) (*attn)[static_cast<size_t>(i) * m + j] += a / heads;
                for (int d = 0; d < dh; ++d)
                    out[static_cast<size_t>(i) * C + off + d] +=
                        a * v[static_cast<size_t>(j) * C + off + d];
            }
        }
    }
    return out;
}

ClipState make_ctx(int clip_index, const Tensor& feature) {
    ClipState ctx;
    ctx.clip_index = clip_index;
    ctx.feature = feature;
    return ctx;
}

}  // namespace

TEST_CASE("oracle backbone returns zero residuals once converged") {
    Tensor target = testutil::random_tensor(8, 8, 4, 30);
    OracleBackbone oracle({target, target});
    ClipState ctx = make_ctx(1, target);  // current == target
    auto ps = all_positions({4, 4});
    Tensor input(4, 4, 4, 0.0f);
    std::vector<float> out = oracle.predict(input.data(), 16, ps, {4, 4}, ctx);
    for (float v : out) CHECK(v == 0.0f);
}

TEST_CASE("oracle backbone residual toward a constant target is the constant") {
    Tensor target(16, 16, 3, 1.0f);
    OracleBackbone oracle({target});
    ClipState ctx = make_ctx(0, Tensor(16, 16, 3, 0.0f));
    auto ps = all_positions({4, 4});
    Tensor input(4, 4, 3, 0.0f);
    std::vector<float> out = oracle.predict(input.data(), 16, ps, {4, 4}, ctx);
    for (float v : out) CHECK(v == doctest::Approx(1.0f).epsilon(1e-6));
}

TEST_CASE("oracle backbone is selection consistent") {
    Tensor target = testutil::random_tensor(16, 16, 4, 31);
    OracleBackbone oracle({target});
    ClipState ctx = make_ctx(0, testutil::random_tensor(16, 16, 4, 32));

    Extent2 scale{8, 8};
    auto full = all_positions(scale);
    Tensor input(8, 8, 4, 0.0f);
    std::vector<float> full_out =
        oracle.predict(input.data(), static_cast<int>(full.size()), full, scale, ctx);

    std::vector<Position> subset = {{0, 0}, {3, 5}, {7, 7}, {2, 2}, {6, 1}};
    std::vector<float> sub_in(subset.size() * 4, 0.0f);
    std::vector<float> sub_out = oracle.predict(
        sub_in.data(), static_cast<int>(subset.size()), subset, scale, ctx);

    for (size_t i = 0; i < subset.size(); ++i) {
        size_t lin = static_cast<size_t>(subset[i].row) * 8 + subset[i].col;
        for (int ch = 0; ch < 4; ++ch)
            CHECK(sub_out[i * 4 + ch] == full_out[lin * 4 + ch]);  // bitwise
    }
}

TEST_CASE("backbones validate their position arguments") {
    Tensor target = testutil::random_tensor(8, 8, 4, 33);
    OracleBackbone oracle({target});
    ClipState ctx = make_ctx(0, Tensor(8, 8, 4, 0.0f));
    Tensor input(2, 2, 4, 0.0f);

    std::vector<Position> dup = {{0, 0}, {0, 1}, {0, 0}, {1, 1}};
    CHECK_THROWS_AS(oracle.predict(input.data(), 4, dup, {2, 2}, ctx), std::invalid_argument);

    std::vector<Position> oob = {{0, 0}, {2, 0}, {0, 1}, {1, 1}};
    CHECK_THROWS_AS(oracle.predict(input.data(), 4, oob, {2, 2}, ctx), std::invalid_argument);

    std::vector<Position> none;
    CHECK_THROWS_AS(oracle.predict(input.data(), 0, none, {2, 2}, ctx), std::invalid_argument);
}

TEST_CASE("oracle backbone refuses attention scores") {
    Tensor target = testutil::random_tensor(4, 4, 2, 34);
    OracleBackbone oracle({target});
    Tensor input(2, 2, 2, 0.0f);
    auto ps = all_positions({2, 2});
    CHECK_THROWS_AS(oracle.attention_scores(input.data(), 4, ps, {2, 2}), UnsupportedError);
}

TEST_CASE("mixer with one token equals its own value projection") {
    const int C = 8;
    MixerBackbone mixer(77, C, 2, 1);  // single layer isolates one attention step
    NaiveWeights w = draw_weights(77, C, 1);

    Tensor x = testutil::random_tensor(1, 1, C, 35);
    std::vector<Position> ps = {{1, 1}};
    ClipState ctx = make_ctx(0, Tensor(4, 4, C, 0.0f));
    std::vector<float> out = mixer.predict(x.data(), 1, ps, {4, 4}, ctx);

    std::vector<double> xin(x.storage().begin(), x.storage().end());
    std::vector<double> want = project(xin, 1, C, w.wv[0]);
    for (int ch = 0; ch < C; ++ch)
        CHECK(out[static_cast<size_t>(ch)] == doctest::Approx(want[static_cast<size_t>(ch)])
                                                  .epsilon(1e-5));
}

TEST_CASE("mixer prediction matches the naive dense attention oracle") {
    const int C = 8, heads = 2, layers = 2, m = 16;
    MixerBackbone mixer(91, C, heads, layers);
    NaiveWeights w = draw_weights(91, C, layers);

    Tensor input = testutil::random_tensor(4, 4, C, 36);
    auto ps = all_positions({4, 4});
    ClipState ctx = make_ctx(0, Tensor(4, 4, C, 0.0f));
    std::vector<float> got = mixer.predict(input.data(), m, ps, {4, 4}, ctx);

    std::vector<double> x(input.storage().begin(), input.storage().end());
    for (int l = 0; l < layers; ++l) x = naive_layer(x, m, C, heads, w.wq[l], w.wk[l], w.wv[l]);
    for (size_t i = 0; i < got.size(); ++i)
        CHECK(got[i] == doctest::Approx(x[i]).epsilon(1e-4));
}

TEST_CASE("attention map: identical tokens attend uniformly, one unit each") {
    const int C = 8;
    MixerBackbone mixer(92, C);
    Tensor input(2, 2, C, 0.6f);  // four identical tokens
    auto ps = all_positions({2, 2});
    AttentionScoreMap map = mixer.attention_scores(input.data(), 4, ps, {2, 2});
    for (float v : map.data.storage()) CHECK(v == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("attention map entries are nonnegative and sum to the query count") {
    const int C = 8;
    MixerBackbone mixer(93, C);
    for (int m : {2, 5, 16}) {
        Tensor input = testutil::random_tensor(1, m, C, 37 + static_cast<uint64_t>(m));
        auto ps = all_positions({1, m});
        AttentionScoreMap map = mixer.attention_scores(input.data(), m, ps, {1, m});
        double sum = 0.0;
        for (float v : map.data.storage()) {
            CHECK(v >= 0.0f);
            sum += v;
        }
        CHECK(sum == doctest::Approx(static_cast<double>(m)).epsilon(1e-4));
    }
}

TEST_CASE("attention map matches the naive dense softmax oracle") {
    const int C = 8, heads = 2, m = 16;
    MixerBackbone mixer(94, C, heads, 2);
    NaiveWeights w = draw_weights(94, C, 1);

    Tensor input = testutil::random_tensor(4, 4, C, 38);
    auto ps = all_positions({4, 4});
    AttentionScoreMap map = mixer.attention_scores(input.data(), m, ps, {4, 4});

    std::vector<double> x(input.storage().begin(), input.storage().end());
    std::vector<double> attn;
    naive_layer(x, m, C, heads, w.wq[0], w.wk[0], w.wv[0], &attn);
    for (int j = 0; j < m; ++j) {
        double received = 0.0;
        for (int i = 0; i < m; ++i) received += attn[static_cast<size_t>(i) * m + j];
        CHECK(map.data.at(ps[static_cast<size_t>(j)].row, ps[static_cast<size_t>(j)].col) ==
              doctest::Approx(received).epsilon(1e-5));
    }
}

TEST_CASE("mixer rejects channel counts not divisible by the head count") {
    CHECK_THROWS_AS(MixerBackbone(1, 9, 2, 1), std::invalid_argument);
    CHECK_THROWS_AS(MixerBackbone(1, 0, 1, 1), std::invalid_argument);
}

TEST_CASE("mixer predictions are deterministic per seed") {
    const int C = 8;
    Tensor input = testutil::random_tensor(3, 3, C, 39);
    auto ps = all_positions({3, 3});
    ClipState ctx = make_ctx(0, Tensor(3, 3, C, 0.0f));
    MixerBackbone a(55, C), b(55, C), c(56, C);
    auto oa = a.predict(input.data(), 9, ps, {3, 3}, ctx);
    auto ob = b.predict(input.data(), 9, ps, {3, 3}, ctx);
    auto oc = c.predict(input.data(), 9, ps, {3, 3}, ctx);
    CHECK(oa == ob);
    CHECK(oa != oc);
}
