#include <gtest/gtest.h>

#include <cmath>

#include "msflow/serial.hpp"
#include "msflow/synth.hpp"

namespace msflow {
namespace {

TEST(Serial, SingleLevelIsPlainLucasKanade) {
    SynthSpec spec = default_stimulus(1.3);
    spec.seed = 8;
    const auto seq = generate_sequence(spec);
    SerialParams p;
    p.levels = 1;
    EXPECT_EQ(serial_flow(seq[0], seq[1], p), lk_flow(seq[0], seq[1], p.lk));
}

TEST(Serial, TracksFastDiagonalMotion) {
    SynthSpec spec = default_stimulus(10.0 * std::sqrt(2.0));
    spec.seed = 1;
    const auto seq = generate_sequence(spec);
    const auto v = serial_object_speed(seq, object_mask(spec), SerialParams{});
    ASSERT_TRUE(v.has_value());
    EXPECT_NEAR(v->norm(), 10.0 * std::sqrt(2.0), 0.15 * 10.0 * std::sqrt(2.0));
}

TEST(Serial, TwoLevelsRecoverHorizontalMotion) {
    SynthSpec spec = default_stimulus(2.0, {1.0, 0.0});
    spec.seed = 2;
    const auto seq = generate_sequence(spec);
    SerialParams p;
    p.levels = 2;
    const auto v = serial_object_speed(seq, object_mask(spec), p);
    ASSERT_TRUE(v.has_value());
    EXPECT_NEAR(v->u, 2.0, 0.3);
    EXPECT_NEAR(v->v, 0.0, 0.3);
}

TEST(Serial, StaticSceneGivesZeroFlow) {
    SynthSpec spec;
    spec.noise_sigma = 0.0;
    const auto seq = generate_sequence(spec);
    const FlowField flow = serial_flow(seq[0], seq[1], SerialParams{});
    ASSERT_GT(flow.valid_count(), 0u);
    for (int y = 0; y < flow.height(); ++y) {
        for (int x = 0; x < flow.width(); ++x) {
            if (flow.valid(x, y)) EXPECT_EQ(flow.at(x, y), Vec2{});
        }
    }
    const auto v = serial_object_speed(seq, object_mask(spec), SerialParams{});
    ASSERT_TRUE(v.has_value());
    EXPECT_EQ(*v, Vec2{});
}

TEST(Serial, FullyInvalidMaskGivesNoEstimate) {
    const FrameSequence seq{Frame(64, 64, 0.3), Frame(64, 64, 0.3)};
    Mask mask(64, 64);
    mask.set(30, 30, true);
    EXPECT_FALSE(serial_object_speed(seq, mask, SerialParams{}).has_value());
}

TEST(Serial, RegionMatchesFullFrame) {
    SynthSpec spec = default_stimulus(6.0);
    spec.seed = 3;
    const auto seq = generate_sequence(spec);
    const Mask mask = object_mask(spec);
    const FlowField full = serial_flow(seq[0], seq[1], SerialParams{});
    FlowOptions opt;
    opt.region = mask.bounds();
    const FlowField part = serial_flow(seq[0], seq[1], SerialParams{}, opt);
    for (int y = opt.region->y0; y < opt.region->y1; ++y) {
        for (int x = opt.region->x0; x < opt.region->x1; ++x) {
            ASSERT_EQ(part.valid(x, y), full.valid(x, y));
            if (full.valid(x, y)) EXPECT_EQ(part.at(x, y), full.at(x, y));
        }
    }
}

TEST(Serial, RecordsTimingsPerLevel) {
    const auto seq = generate_sequence(default_stimulus(3.0));
    LevelTimings t;
    FlowOptions opt;
    opt.timings = &t;
    (void)serial_flow(seq[0], seq[1], SerialParams{}, opt);
    ASSERT_EQ(t.level_seconds.size(), 3u);
    for (double s : t.level_seconds) EXPECT_GE(s, 0.0);
}

TEST(Serial, RejectsBadParameters) {
    const Frame f(64, 64);
    SerialParams p;
    p.levels = 0;
    EXPECT_THROW(serial_flow(f, f, p), DomainError);
    p = {};
    p.scale = 1.0;
    EXPECT_THROW(serial_flow(f, f, p), DomainError);
    p = {};
    p.levels = 5;  // 4x4 top level is smaller than the window
    EXPECT_THROW(serial_flow(f, f, p), DomainError);
}

}  // namespace
}  // namespace msflow
