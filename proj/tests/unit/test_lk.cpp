#include <gtest/gtest.h>

#include <Eigen/Dense>

#include <cmath>
#include <random>

#include "msflow/lk.hpp"
#include "msflow/synth.hpp"

namespace msflow {
namespace {

// Smooth band-limited texture, defined everywhere so shifted copies are exact.
double texture(double x, double y) {
    return 0.5 + 0.2 * std::sin(0.45 * x + 0.2 * y) + 0.15 * std::cos(0.35 * y - 0.4 * x) +
           0.1 * std::sin(0.5 * x + 0.45 * y + 1.0);
}

Frame textured(int w, int h, Vec2 offset = {}) {
    Frame f(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) f.at(x, y) = texture(x + offset.u, y + offset.v);
    }
    return f;
}

Frame random_frame(int w, int h, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Frame f(w, h);
    for (double& v : f.pixels()) v = u(rng);
    return f;
}

TEST(Gradient, LinearRampHasConstantDerivative) {
    Frame f(8, 6);
    for (int y = 0; y < 6; ++y) {
        for (int x = 0; x < 8; ++x) f.at(x, y) = 0.1 * x + 0.03 * y;
    }
    const auto [gx, gy] = spatial_gradient(f);
    for (int y = 0; y < 6; ++y) {
        for (int x = 0; x < 8; ++x) {
            EXPECT_NEAR(gx.at(x, y), 0.1, 1e-12);
            EXPECT_NEAR(gy.at(x, y), 0.03, 1e-12);
        }
    }
}

TEST(Gradient, ConstantFrameHasZeroGradient) {
    const auto [gx, gy] = spatial_gradient(Frame(5, 5, 0.4));
    for (double v : gx.pixels()) EXPECT_EQ(v, 0.0);
    for (double v : gy.pixels()) EXPECT_EQ(v, 0.0);
}

TEST(Gradient, ProductSurfaceUsesCentralDifferences) {
    Frame f(5, 5);
    for (int y = 0; y < 5; ++y) {
        for (int x = 0; x < 5; ++x) f.at(x, y) = x * y;
    }
    const auto [gx, gy] = spatial_gradient(f);
    EXPECT_DOUBLE_EQ(gx.at(2, 3), 3.0);
    EXPECT_DOUBLE_EQ(gy.at(2, 3), 2.0);
}

TEST(Warp, ZeroFlowIsIdentity) {
    const Frame f = random_frame(9, 7, 1);
    const auto r = warp(f, Vec2{0.0, 0.0});
    EXPECT_EQ(r.image, f);
    EXPECT_EQ(r.out_of_bounds.count(), 0u);
}

TEST(Warp, IntegerShiftMovesPixels) {
    const Frame f = random_frame(9, 7, 2);
    const auto r = warp(f, Vec2{2.0, 1.0});
    EXPECT_DOUBLE_EQ(r.image.at(3, 2), f.at(5, 3));
    EXPECT_TRUE(r.out_of_bounds.at(7, 0));
    EXPECT_FALSE(r.out_of_bounds.at(6, 5));
}

TEST(Warp, HalfPixelOnRampInterpolates) {
    Frame f(6, 3);
    for (int y = 0; y < 3; ++y) {
        for (int x = 0; x < 6; ++x) f.at(x, y) = x;
    }
    const auto r = warp(f, Vec2{0.5, 0.0});
    EXPECT_DOUBLE_EQ(r.image.at(2, 1), 2.5);
}

TEST(NormalEquationsTest, SmallerEigenvalue) {
    NormalEquations eq{2.0, 0.0, 0.5, 0.0, 0.0};
    EXPECT_DOUBLE_EQ(eq.min_eigenvalue(), 0.5);
    eq.gxy = 1.0;
    eq.gyy = 2.0;
    EXPECT_DOUBLE_EQ(eq.min_eigenvalue(), 1.0);
}

TEST(LucasKanade, StaticPairGivesZeroFlow) {
    const Frame f = textured(40, 40);
    const FlowField flow = lk_flow(f, f, LKParams{});
    ASSERT_GT(flow.valid_count(), 0u);
    for (int y = 0; y < 40; ++y) {
        for (int x = 0; x < 40; ++x) {
            if (!flow.valid(x, y)) continue;
            EXPECT_EQ(flow.at(x, y).u, 0.0);
            EXPECT_EQ(flow.at(x, y).v, 0.0);
        }
    }
}

TEST(LucasKanade, RecoversUnitShiftOnTexture) {
    const Frame prev = textured(48, 48);
    const Frame next = textured(48, 48, {-1.0, 0.0});  // content moves right by one pixel
    const FlowField flow = lk_flow(prev, next, LKParams{});
    double epe = 0.0;
    std::size_t n = 0;
    for (int y = 0; y < 48; ++y) {
        for (int x = 0; x < 48; ++x) {
            if (!flow.valid(x, y)) continue;
            epe += (flow.at(x, y) - Vec2{1.0, 0.0}).norm();
            ++n;
        }
    }
    ASSERT_GT(n, 500u);
    EXPECT_LT(epe / static_cast<double>(n), 0.1);
}

TEST(LucasKanade, ConstantImageIsInvalidEverywhere) {
    const Frame f(20, 20, 0.5);
    EXPECT_EQ(lk_flow(f, f, LKParams{}).valid_count(), 0u);
}

TEST(LucasKanade, BorderPixelsAreInvalid) {
    const Frame f = textured(30, 30);
    const FlowField flow = lk_flow(f, f, LKParams{});
    for (int i = 0; i < 30; ++i) {
        EXPECT_FALSE(flow.valid(i, 0));
        EXPECT_FALSE(flow.valid(2, i));
        EXPECT_FALSE(flow.valid(29, i));
    }
}

TEST(LucasKanade, RejectsBadParameters) {
    const Frame f = textured(20, 20);
    LKParams p;
    p.window = 4;
    EXPECT_THROW(lk_flow(f, f, p), DomainError);
    p = {};
    p.iterations = 0;
    EXPECT_THROW(lk_flow(f, f, p), DomainError);
    EXPECT_THROW(lk_flow(f, textured(21, 20), LKParams{}), DomainError);
    EXPECT_THROW(lk_flow(Frame(5, 5), Frame(5, 5), LKParams{}), DomainError);
}

// The closed-form solve must agree with a generic weighted least-squares
// assembly of the same window.
TEST(LucasKanade, MatchesBruteForceLeastSquares) {
    const Frame prev = random_frame(40, 40, 11);
    const Frame next = random_frame(40, 40, 12);
    LKParams p;
    p.iterations = 1;
    p.max_residual = 0.0;
    p.min_eigenvalue = 0.0;
    const FlowField flow = lk_flow(prev, next, p);
    const auto [gx, gy] = spatial_gradient(prev);
    const auto weights = window_weights(p);
    const int r = p.window / 2;

    std::mt19937 rng(5);
    std::uniform_int_distribution<int> coord(r, 40 - r - 1);
    int checked = 0;
    while (checked < 100) {
        const int x = coord(rng);
        const int y = coord(rng);
        ASSERT_TRUE(flow.valid(x, y));
        Eigen::MatrixXd a(p.window * p.window, 2);
        Eigen::VectorXd b(p.window * p.window);
        for (int dy = -r, k = 0; dy <= r; ++dy) {
            for (int dx = -r; dx <= r; ++dx, ++k) {
                const double sw = std::sqrt(weights[static_cast<std::size_t>(k)]);
                a(k, 0) = sw * gx.at(x + dx, y + dy);
                a(k, 1) = sw * gy.at(x + dx, y + dy);
                b(k) = -sw * (next.at(x + dx, y + dy) - prev.at(x + dx, y + dy));
            }
        }
        const Eigen::Vector2d d = a.colPivHouseholderQr().solve(b);
        EXPECT_NEAR(flow.at(x, y).u, d(0), 1e-9);
        EXPECT_NEAR(flow.at(x, y).v, d(1), 1e-9);
        ++checked;
    }
}

TEST(LucasKanade, WeightsAreNormalized) {
    const auto w = window_weights(LKParams{});
    double sum = 0.0;
    for (double v : w) sum += v;
    EXPECT_NEAR(sum, 1.0, 1e-15);
    EXPECT_DOUBLE_EQ(w[24], *std::max_element(w.begin(), w.end()));
}

TEST(LucasKanade, SwappingFramesNegatesFlow) {
    const Frame a = textured(48, 48);
    const Frame b = textured(48, 48, {-0.4, -0.3});
    const FlowField fwd = lk_flow(a, b, LKParams{});
    const FlowField bwd = lk_flow(b, a, LKParams{});
    // Gradients come from the first frame only, so the two directions differ
    // by interpolation error; the sum is small and unbiased.
    Vec2 sum{};
    int n = 0;
    for (int y = 10; y < 38; ++y) {
        for (int x = 10; x < 38; ++x) {
            if (!fwd.valid(x, y) || !bwd.valid(x, y)) continue;
            const Vec2 s = fwd.at(x, y) + bwd.at(x, y);
            EXPECT_LT(s.norm(), 0.4);
            sum = sum + s;
            ++n;
        }
    }
    ASSERT_GT(n, 200);
    EXPECT_LT((1.0 / n * sum).norm(), 0.04);
}

TEST(LucasKanade, TranslatingBothFramesTranslatesTheField) {
    const Frame big_prev = textured(60, 60);
    const Frame big_next = textured(60, 60, {-0.6, 0.4});
    auto crop = [](const Frame& f, int ox, int oy) {
        Frame out(40, 40);
        for (int y = 0; y < 40; ++y) {
            for (int x = 0; x < 40; ++x) out.at(x, y) = f.at(x + ox, y + oy);
        }
        return out;
    };
    const FlowField a = lk_flow(crop(big_prev, 0, 0), crop(big_next, 0, 0), LKParams{});
    const FlowField b = lk_flow(crop(big_prev, 5, 3), crop(big_next, 5, 3), LKParams{});
    // Windows plus motion stay inside both crops.
    for (int y = 8; y < 26; ++y) {
        for (int x = 8; x < 26; ++x) {
            // Equal up to rounding of the absolute sample coordinates.
            ASSERT_EQ(a.valid(x + 5, y + 3), b.valid(x, y)) << x << "," << y;
            EXPECT_NEAR(a.at(x + 5, y + 3).u, b.at(x, y).u, 1e-12);
            EXPECT_NEAR(a.at(x + 5, y + 3).v, b.at(x, y).v, 1e-12);
        }
    }
}

TEST(LucasKanade, RegionMatchesFullFrame) {
    const Frame prev = textured(50, 40);
    const Frame next = textured(50, 40, {-1.3, 0.8});
    const FlowField full = lk_flow(prev, next, LKParams{});
    LKOptions opt;
    opt.region = Rect{10, 5, 30, 25};
    const FlowField part = lk_flow(prev, next, LKParams{}, opt);
    for (int y = 0; y < 40; ++y) {
        for (int x = 0; x < 50; ++x) {
            if (opt.region->contains(x, y)) {
                ASSERT_EQ(part.valid(x, y), full.valid(x, y));
                if (full.valid(x, y)) EXPECT_EQ(part.at(x, y), full.at(x, y));
            } else {
                EXPECT_FALSE(part.valid(x, y));
            }
        }
    }
}

TEST(LucasKanade, JobCountDoesNotChangeOutput) {
    const Frame prev = textured(64, 48);
    const Frame next = textured(64, 48, {-0.7, 0.2});
    LKOptions one;
    LKOptions many;
    many.jobs = 4;
    EXPECT_EQ(lk_flow(prev, next, LKParams{}, one), lk_flow(prev, next, LKParams{}, many));
}

TEST(LucasKanade, InitialGuessIsRefined) {
    const Frame prev = textured(64, 64);
    const Frame next = textured(64, 64, {-4.0, 0.0});
    FlowField guess(64, 64);
    for (int y = 0; y < 64; ++y) {
        for (int x = 0; x < 64; ++x) guess.set(x, y, {3.8, 0.1}, x != 30);
    }
    LKOptions opt;
    opt.initial = &guess;
    const FlowField flow = lk_flow(prev, next, LKParams{}, opt);
    std::size_t n = 0;
    for (int y = 0; y < 64; ++y) {
        EXPECT_FALSE(flow.valid(30, y));
        for (int x = 0; x < 64; ++x) {
            if (!flow.valid(x, y)) continue;
            EXPECT_LT((flow.at(x, y) - Vec2{4.0, 0.0}).norm(), 0.05);
            ++n;
        }
    }
    EXPECT_GT(n, 500u);
}

TEST(LucasKanade, ResidualGateRejectsWrongMatches) {
    const Frame prev = random_frame(30, 30, 3);
    const Frame next = random_frame(30, 30, 4);
    LKParams gated;
    LKParams open = gated;
    open.max_residual = 0.0;
    EXPECT_EQ(lk_flow(prev, next, gated).valid_count(), 0u);
    EXPECT_GT(lk_flow(prev, next, open).valid_count(), 0u);
}

TEST(ObjectSpeed, AveragesValidVectorsInMask) {
    FlowField flow(4, 4);
    flow.set(1, 1, {2.0, 0.0}, true);
    flow.set(2, 1, {4.0, 2.0}, true);
    flow.set(2, 2, {100.0, 100.0}, false);
    flow.set(0, 0, {50.0, 0.0}, true);
    Mask mask(4, 4);
    mask.set(1, 1, true);
    mask.set(2, 1, true);
    mask.set(2, 2, true);
    const auto v = mean_object_speed(flow, mask);
    ASSERT_TRUE(v.has_value());
    EXPECT_DOUBLE_EQ(v->u, 3.0);
    EXPECT_DOUBLE_EQ(v->v, 1.0);
}

TEST(ObjectSpeed, NoValidPixelGivesNothing) {
    FlowField flow(3, 3);
    Mask mask(3, 3);
    mask.set(1, 1, true);
    EXPECT_FALSE(mean_object_speed(flow, mask).has_value());
}

TEST(ObjectSpeed, EmptyOrMismatchedMaskIsError) {
    FlowField flow(3, 3);
    EXPECT_THROW((void)mean_object_speed(flow, Mask(3, 3)), DomainError);
    EXPECT_THROW((void)mean_object_speed(flow, Mask(4, 3, true)), DomainError);
}

TEST(Upsample, ConstantFieldStaysConstant) {
    FlowField coarse(8, 8);
    for (int y = 0; y < 8; ++y) {
        for (int x = 0; x < 8; ++x) coarse.set(x, y, {1.5, -0.5}, true);
    }
    const FlowField fine = upsample_flow(coarse, 2.0, 16, 16);
    EXPECT_EQ(fine.valid_count(), 256u);
    EXPECT_EQ(fine.at(15, 3), (Vec2{1.5, -0.5}));
    const FlowField scaled = scale_vectors(fine, 2.0);
    EXPECT_EQ(scaled.at(7, 7), (Vec2{3.0, -1.0}));
}

TEST(Upsample, IgnoresInvalidNeighbours) {
    FlowField coarse(2, 1);
    coarse.set(0, 0, {1.0, 0.0}, true);
    coarse.set(1, 0, {9.0, 0.0}, false);
    const FlowField fine = upsample_flow(coarse, 2.0, 4, 2);
    ASSERT_TRUE(fine.valid(1, 0));
    EXPECT_DOUBLE_EQ(fine.at(1, 0).u, 1.0);
    EXPECT_FALSE(fine.valid(2, 0));
}

TEST(ObjectSpeed, LevelZeroTracksSlowSquare) {
    SynthSpec spec = default_stimulus(1.0);
    spec.seed = 4;
    const auto seq = generate_sequence(spec);
    const auto v = mean_object_speed(lk_flow(seq[0], seq[1], LKParams{}), object_mask(spec));
    ASSERT_TRUE(v.has_value());
    EXPECT_NEAR(v->norm(), 1.0, 0.15);
}

}  // namespace
}  // namespace msflow
