#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "msflow/discrim.hpp"

namespace msflow {
namespace {

DiscriminationParams oracle_params() {
    DiscriminationParams p;
    p.speeds = integer_speeds(1, 15);
    p.deltas = default_deltas();
    p.realizations = 3;
    return p;
}

double first_candidate_above(const std::vector<double>& deltas, double alpha) {
    for (double d : deltas) {
        if (d > alpha) return d;
    }
    return NAN;
}

TEST(Candidates, Defaults) {
    const auto d = default_deltas();
    ASSERT_EQ(d.size(), 59u);
    EXPECT_DOUBLE_EQ(d.front(), 0.02);
    EXPECT_DOUBLE_EQ(d.back(), 0.60);
    EXPECT_EQ(integer_speeds(1, 15).size(), 15u);
}

TEST(Detectable, Inequality) {
    EXPECT_TRUE(detectable_change(10.0, 10.0, 10.6, 9.4, 0.05));
    EXPECT_FALSE(detectable_change(10.0, 10.0, 10.6, 9.6, 0.05));
    EXPECT_FALSE(detectable_change(10.0, 10.0, std::nullopt, 9.0, 0.05));
    EXPECT_FALSE(detectable_change(10.0, std::nullopt, 11.0, 9.0, 0.05));
}

TEST(Detectable, ZeroChangeIsNeverDetected) {
    DiscriminationParams p = oracle_params();
    EXPECT_FALSE(is_detectable(5.0, 0.0, ground_truth_estimator(), p, 0));
    EstimatorConfig c;
    c.method = Method::single_level;
    EXPECT_FALSE(is_detectable(2.0, 0.0, make_speed_estimator(c), p, 1));
}

TEST(Oracle, MinDetectableIsFirstCandidateAboveAlpha) {
    for (double alpha : {0.05, 0.1, 0.125, 0.3}) {
        DiscriminationParams p = oracle_params();
        p.alpha = alpha;
        const double expected = 100.0 * first_candidate_above(p.deltas, alpha);
        for (const auto& point : discrimination_curve(ground_truth_estimator(), p)) {
            ASSERT_TRUE(point.min_delta_pct.has_value()) << point.speed;
            EXPECT_DOUBLE_EQ(*point.min_delta_pct, expected) << "alpha " << alpha << " v " << point.speed;
        }
    }
}

TEST(Oracle, NothingDetectableBeyondLargestCandidate) {
    DiscriminationParams p = oracle_params();
    p.alpha = 0.7;
    EXPECT_FALSE(min_detectable(4.0, ground_truth_estimator(), p).has_value());
}

class EstimatorCurves : public ::testing::Test {
protected:
    static DiscriminationParams params() {
        DiscriminationParams p;
        p.speeds = {2.0, 5.0};
        p.deltas = default_deltas();
        p.realizations = 6;
        p.seed = 3;
        return p;
    }
    static SpeedEstimator estimator() {
        EstimatorConfig c;
        c.method = Method::serial;
        return make_speed_estimator(c);
    }
};

TEST_F(EstimatorCurves, ThresholdGrowsWithAlpha) {
    DiscriminationParams lo = params();
    DiscriminationParams hi = params();
    hi.alpha = 0.10;
    const auto a = discrimination_curve(estimator(), lo);
    const auto b = discrimination_curve(estimator(), hi);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!b[i].min_delta_pct) continue;
        ASSERT_TRUE(a[i].min_delta_pct.has_value());
        EXPECT_LE(*a[i].min_delta_pct, *b[i].min_delta_pct);
    }
}

TEST_F(EstimatorCurves, ThresholdGrowsWithQuota) {
    DiscriminationParams lo = params();
    lo.quota = 0.6;
    DiscriminationParams hi = params();
    hi.quota = 1.0;
    const auto a = discrimination_curve(estimator(), lo);
    const auto b = discrimination_curve(estimator(), hi);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!b[i].min_delta_pct) continue;
        ASSERT_TRUE(a[i].min_delta_pct.has_value());
        EXPECT_LE(*a[i].min_delta_pct, *b[i].min_delta_pct);
    }
}

TEST_F(EstimatorCurves, ReproducibleAndJobIndependent) {
    DiscriminationParams p = params();
    const auto first = discrimination_curve(estimator(), p);
    p.jobs = 3;
    const auto second = discrimination_curve(estimator(), p);
    ASSERT_EQ(first.size(), second.size());
    for (std::size_t i = 0; i < first.size(); ++i) EXPECT_EQ(first[i].min_delta_pct, second[i].min_delta_pct);
}

TEST_F(EstimatorCurves, SameEstimatorTwiceGivesSameRows) {
    const auto rows = compare({{"serial", 3, estimator()}, {"serial", 3, estimator()}}, params(), 1.0, 15.0);
    ASSERT_EQ(rows.size(), 2u);
    for (std::size_t i = 0; i < rows[0].curve.size(); ++i) {
        EXPECT_EQ(rows[0].curve[i].min_delta_pct, rows[1].curve[i].min_delta_pct);
    }
    EXPECT_EQ(rows[0].summary.mean, rows[1].summary.mean);
}

TEST(Stimulus, PairedAndIndependentNoise) {
    DiscriminationParams p = oracle_params();
    EXPECT_EQ(discrimination_stimulus(p, 4.0, 2).seed, discrimination_stimulus(p, 4.4, 2).seed);
    p.paired_noise = false;
    EXPECT_NE(discrimination_stimulus(p, 4.0, 2).seed, discrimination_stimulus(p, 4.4, 2).seed);
    EXPECT_EQ(discrimination_stimulus(p, 4.0, 2).seed, discrimination_stimulus(p, 4.0, 2).seed);
    EXPECT_NEAR(discrimination_stimulus(p, 4.0, 0).velocity.norm(), 4.0, 1e-12);
}

TEST(Summary, SampleVarianceOverRange) {
    DiscriminationCurve c{{1.0, 6.0}, {2.0, 8.0}, {3.0, std::nullopt}, {4.0, 10.0}, {20.0, 50.0}};
    const CurveSummary s = summarize(c, 1.0, 15.0);
    EXPECT_EQ(s.count, 3);
    EXPECT_DOUBLE_EQ(s.mean, 8.0);
    EXPECT_DOUBLE_EQ(s.variance, 4.0);
    EXPECT_DOUBLE_EQ(max_discriminated_speed(c, 30.0), 4.0);
    EXPECT_DOUBLE_EQ(max_discriminated_speed(c, 5.0), 0.0);
}

TEST(Csv, CurveAndSummaryLayout) {
    ComparisonRow row{"parallel", 3, {{1.0, 6.0}, {2.0, std::nullopt}}, {6.0, 0.0, 1.0, 2.0, 1}};
    std::ostringstream curve;
    write_curve_csv({row}, curve);
    EXPECT_EQ(curve.str(), "method,L,v_obj,min_delta_pct\nparallel,3,1,6\nparallel,3,2,\n");
    std::ostringstream summary;
    write_summary_csv({row}, summary);
    EXPECT_EQ(summary.str().substr(0, summary.str().find('\n')), "method,L,mean,variance,range_lo,range_hi");
}

TEST(Params, Validation) {
    DiscriminationParams p = oracle_params();
    p.quota = 0.4;
    EXPECT_THROW(validate(p), DomainError);
    p = oracle_params();
    p.deltas = {0.3, 0.2};
    EXPECT_THROW(validate(p), DomainError);
    p = oracle_params();
    p.speeds = {200.0};
    EXPECT_THROW(validate(p), DomainError);
}

}  // namespace
}  // namespace msflow
