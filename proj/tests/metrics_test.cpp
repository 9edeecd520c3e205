#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "binbench/metrics.hpp"
#include "binbench/raster.hpp"
#include "test_support.hpp"

using namespace binbench;
using namespace binbench::metrics;
namespace oracle = testsupport::oracle;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

BinaryImage drd_fixture_gt() {
    BinaryImage gt(8, 8);
    for (int y = 3; y <= 4; ++y)
        for (int x = 3; x <= 4; ++x) gt.set(x, y, true);
    return gt;
}

}  // namespace

TEST(Confusion, Basics) {
    BinaryImage gt(4, 4, true);
    BinaryImage b(4, 4, false);
    EXPECT_EQ(confusion_counts(gt, gt), (ConfusionCounts{16, 0, 0, 0}));
    EXPECT_EQ(confusion_counts(gt, b), (ConfusionCounts{0, 0, 16, 0}));
    EXPECT_THROW(confusion_counts(gt, BinaryImage(4, 5)), ShapeError);
}

TEST(Confusion, MatchesTally) {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 20; ++trial) {
        const auto gt = testsupport::random_mask(8, 8, 0.4, rng);
        const auto b = testsupport::random_mask(8, 8, 0.4, rng);
        const auto c = confusion_counts(gt, b);
        const auto t = oracle::tally(gt, b);
        EXPECT_EQ(double(c.tp), t.tp);
        EXPECT_EQ(double(c.fp), t.fp);
        EXPECT_EQ(double(c.fn), t.fn);
        EXPECT_EQ(double(c.tn), t.tn);
        EXPECT_EQ(c.total(), 64u);
    }
}

TEST(FMeasure, Cases) {
    EXPECT_DOUBLE_EQ(f_measure({4, 0, 0, 0}), 100.0);
    EXPECT_NEAR(f_measure({2, 1, 1, 0}), 66.6667, 1e-4);
    EXPECT_EQ(f_measure({0, 5, 5, 0}), 0.0);
    EXPECT_EQ(f_measure({0, 0, 0, 9}), 0.0);
}

TEST(PseudoFMeasure, Cases) {
    BinaryImage gt(20, 9);
    for (int y = 2; y < 7; ++y)
        for (int x = 2; x < 18; ++x) gt.set(x, y, true);
    EXPECT_DOUBLE_EQ(pseudo_f_measure(gt, gt), 100.0);
    EXPECT_EQ(pseudo_f_measure(gt, BinaryImage(20, 9)), 0.0);

    // b = skeleton: skeleton recall 1 and precision TP/(TP+FP) = 1
    const auto skel = skeletonize(gt);
    EXPECT_DOUBLE_EQ(pseudo_f_measure(gt, skel), 100.0);
    // b = the bar's top row: precision 1, skeleton recall 0
    BinaryImage top(20, 9);
    for (int x = 2; x < 18; ++x) top.set(x, 2, true);
    const double r = double(oracle::tally(skel, top).tp) / double(skel.count());
    EXPECT_NEAR(pseudo_f_measure(gt, top), r == 0 ? 0.0 : 200 * r / (1 + r), 1e-9);
    // b = bar plus an equal-sized spurious block: recall 1, precision 1/2
    BinaryImage doubled(20, 18);
    BinaryImage gt2(20, 18);
    for (int y = 2; y < 7; ++y)
        for (int x = 2; x < 18; ++x) {
            gt2.set(x, y, true);
            doubled.set(x, y, true);
            doubled.set(x, y + 9, true);
        }
    EXPECT_NEAR(pseudo_f_measure(gt2, doubled), 200 * 0.5 / 1.5, 1e-9);

    EXPECT_EQ(pseudo_f_measure(BinaryImage(5, 5), BinaryImage(5, 5, true)), 0.0);
    EXPECT_THROW(pseudo_f_measure(gt, BinaryImage(3, 3)), ShapeError);
}

TEST(Psnr, Cases) {
    BinaryImage gt(2, 2);
    gt.set(0, 0, true);
    EXPECT_EQ(psnr(gt, gt), kInf);
    BinaryImage b = gt;
    b.set(1, 1, true);
    EXPECT_NEAR(psnr(gt, b), 6.0206, 1e-4);
    EXPECT_DOUBLE_EQ(psnr(gt, complement(gt)), 0.0);
    EXPECT_THROW(psnr(gt, BinaryImage(3, 2)), ShapeError);
}

TEST(Nrm, Cases) {
    EXPECT_EQ(nrm({5, 0, 0, 5}, NrmMode::Literal), 0.0);
    EXPECT_EQ(nrm({5, 0, 0, 5}, NrmMode::Standard), 0.0);
    EXPECT_EQ(nrm({0, 0, 0, 0}), 0.0);
    const ConfusionCounts c{2, 1, 1, 10};
    EXPECT_NEAR(nrm(c, NrmMode::Literal), (0.5 + 1.0 / 11) / 2, 1e-12);
    EXPECT_NEAR(nrm(c, NrmMode::Literal), 0.29545, 1e-5);
    EXPECT_NEAR(nrm(c, NrmMode::Standard), 0.21212, 1e-5);
    EXPECT_EQ(nrm(c), nrm(c, NrmMode::Literal));
}

TEST(Nrm, ModeNames) {
    EXPECT_EQ(parse_nrm_mode("standard"), NrmMode::Standard);
    EXPECT_EQ(parse_nrm_mode("literal"), NrmMode::Literal);
    EXPECT_THROW(parse_nrm_mode("dibco"), InvalidParameter);
    EXPECT_EQ(parse_mpm_normalizer("gt-object"), MpmNormalizer::GroundTruthObject);
    EXPECT_EQ(to_string(MpmNormalizer::AllPixels), "all-pixels");
    EXPECT_THROW(parse_mpm_normalizer("x"), InvalidParameter);
}

TEST(DrdWeights, Invariants) {
    const auto& w = drd_weight_matrix();
    double sum = 0;
    for (const auto& row : w)
        for (double v : row) {
            EXPECT_GE(v, 0.0);
            sum += v;
        }
    EXPECT_NEAR(sum, 1.0, 1e-12);
    EXPECT_EQ(w[2][2], 0.0);
    EXPECT_NEAR(w[2][3], 0.072357, 1e-6);
    EXPECT_NEAR(w[2][3], 1 / 13.82039, 1e-6);
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) {
            EXPECT_NEAR(w[i][j], w[j][i], 1e-12);
            EXPECT_NEAR(w[i][j], w[4 - i][j], 1e-12);
            EXPECT_NEAR(w[i][j], w[i][4 - j], 1e-12);
            EXPECT_NEAR(w[i][j], w[4 - j][i], 1e-12);  // 90 degree rotation
            EXPECT_NEAR(w[i][j], oracle::drd_weight(j - 2, i - 2), 1e-15);
        }
}

TEST(Nubn, Cases) {
    EXPECT_EQ(nubn(BinaryImage(8, 8)), 0u);
    BinaryImage one(8, 8);
    one.set(3, 3, true);
    EXPECT_EQ(nubn(one), 1u);
    BinaryImage q(16, 16);
    q.set(3, 4, true);
    q.set(4, 4, true);
    EXPECT_EQ(nubn(q), 1u);
    EXPECT_EQ(nubn(BinaryImage(16, 16, true)), 0u);
    // trailing partial block 2x8 counted over its own pixels
    BinaryImage partial(10, 8);
    partial.set(9, 0, true);
    EXPECT_EQ(nubn(partial), 1u);
    BinaryImage partial_full(10, 8);
    for (int y = 0; y < 8; ++y) {
        partial_full.set(8, y, true);
        partial_full.set(9, y, true);
    }
    EXPECT_EQ(nubn(partial_full), 0u);
}

TEST(Drd, HandCase) {
    const auto gt = drd_fixture_gt();
    auto b = gt;
    b.set(5, 5, true);
    const double expected = 1 - (1 / (2 * std::sqrt(2.0)) + 2 / std::sqrt(5.0) + 1 / std::sqrt(2.0)) / 13.82039;
    EXPECT_NEAR(drd(gt, b), expected, 1e-5);
    EXPECT_NEAR(drd(gt, b), 0.85854, 1e-4);
    EXPECT_EQ(drd(gt, gt), 0.0);
}

TEST(Drd, BlankGroundTruthGuard) {
    BinaryImage gt(12, 12);
    BinaryImage b(12, 12);
    b.set(6, 6, true);
    EXPECT_NEAR(drd(gt, b), 1.0, 1e-12);
}

TEST(Drd, BorderReadsAreBackground) {
    BinaryImage gt(4, 4, true);
    BinaryImage b = gt;
    b.set(0, 0, false);
    EXPECT_NEAR(drd(gt, b), oracle::drd(gt, b), 1e-12);
}

TEST(Drd, NumeratorMonotone) {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 30; ++trial) {
        const auto gt = testsupport::random_mask(16, 16, 0.3, rng);
        auto b = gt;
        double prev = 0;
        const double n = std::max<double>(double(nubn(gt)), 1.0);
        for (int k = 0; k < 20; ++k) {
            const int i = int(rng() % 256);
            if (b.at(i) != gt.at(i)) continue;
            b.set(static_cast<std::size_t>(i), !gt.at(i));
            const double cur = drd(gt, b) * n;
            ASSERT_GE(cur, prev - 1e-12);
            prev = cur;
        }
    }
}

TEST(Mpm, HandCase) {
    BinaryImage gt(5, 5);
    gt.set(2, 2, true);
    auto b = gt;
    b.set(2, 0, true);
    // 4 at 1, 4 at sqrt2, 4 at 2, 8 at sqrt5, 4 at sqrt8
    const double d = 4 + 4 * std::sqrt(2.0) + 8 + 8 * std::sqrt(5.0) + 8 * std::sqrt(2.0);
    EXPECT_NEAR(d, 46.8591, 1e-4);
    EXPECT_NEAR(mpm(gt, b), 2 / (2 * d), 1e-12);
    EXPECT_NEAR(mpm(gt, b), 0.021340, 1e-5);
    EXPECT_EQ(mpm(gt, gt), 0.0);
    EXPECT_EQ(mpm(gt, BinaryImage(5, 5)), 0.0);
}

TEST(Mpm, GroundTruthObjectNormalizer) {
    BinaryImage gt(9, 9);
    for (int y = 2; y < 7; ++y)
        for (int x = 2; x < 7; ++x) gt.set(x, y, true);
    BinaryImage b(9, 9);
    // misses the whole square; contour distance inside is 1 at the 3x3 ring and 2 at the center
    const double num = 8 * 1.0 + 2.0;
    EXPECT_NEAR(mpm(gt, b, MpmNormalizer::GroundTruthObject), num / (2 * num), 1e-12);
    EXPECT_LT(mpm(gt, b, MpmNormalizer::AllPixels), 0.5);
}

TEST(Mpm, Errors) {
    EXPECT_THROW(mpm(BinaryImage(4, 4), BinaryImage(4, 4, true)), EmptyGroundTruthError);
    BinaryImage gt(4, 4);
    gt.set(1, 1, true);
    EXPECT_THROW(mpm(gt, BinaryImage(4, 3)), ShapeError);
}

TEST(Mpm, FpFnSwapSymmetry) {
    // Only the error locations matter, not whether each one is an FP or an FN.
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        const auto gt = testsupport::random_mask(12, 12, 0.4, rng);
        if (gt.count() == 0 || gt.count() == gt.size()) continue;
        const auto wrong = testsupport::random_mask(12, 12, 0.2, rng);
        auto b1 = gt;
        for (std::size_t i = 0; i < gt.size(); ++i)
            if (wrong.at(i)) b1.set(i, !gt.at(i));
        const double m1 = mpm(gt, b1);
        const auto d = distance_transform(extract_contour(gt));
        double num = 0, all = 0;
        for (std::size_t i = 0; i < gt.size(); ++i) {
            all += d.dist[i];
            if (wrong.at(i)) num += d.dist[i];
        }
        ASSERT_NEAR(m1, num == 0 ? 0 : num / (2 * all), 1e-12);
    }
}

TEST(EvaluatePair, Identity) {
    std::mt19937_64 rng(2);
    auto gt = testsupport::random_mask(16, 16, 0.3, rng);
    const auto r = evaluate_pair(gt, gt);
    EXPECT_EQ(r.f_measure, 100.0);
    EXPECT_EQ(r.pseudo_f_measure, 100.0);
    EXPECT_EQ(r.psnr, kInf);
    EXPECT_EQ(r.drd, 0.0);
    EXPECT_EQ(r.mpm, 0.0);
    EXPECT_EQ(r.nrm, 0.0);
}

TEST(EvaluatePair, Complement) {
    std::mt19937_64 rng(3);
    const auto gt = testsupport::random_mask(16, 16, 0.3, rng);
    const auto b = complement(gt);
    const auto r = evaluate_pair(gt, b);
    EXPECT_EQ(r.f_measure, 0.0);
    EXPECT_EQ(r.psnr, 0.0);
    EXPECT_DOUBLE_EQ(r.nrm, nrm(confusion_counts(gt, b)));
}

TEST(EvaluatePair, CompositionalAndAgainstOracles) {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 200; ++trial) {
        const double dens = 0.1 + 0.8 * (trial % 7) / 6.0;
        auto gt = testsupport::random_mask(16, 16, dens, rng);
        if (gt.count() == 0) gt.set(3, 3, true);
        const auto b = testsupport::random_mask(16, 16, dens, rng);
        for (auto mode : {NrmMode::Literal, NrmMode::Standard}) {
            const auto r = evaluate_pair(gt, b, {mode, MpmNormalizer::AllPixels});
            const auto c = confusion_counts(gt, b);
            ASSERT_EQ(r.f_measure, f_measure(c));
            ASSERT_EQ(r.pseudo_f_measure, pseudo_f_measure(gt, b));
            ASSERT_EQ(r.psnr, psnr(gt, b));
            ASSERT_EQ(r.drd, drd(gt, b));
            ASSERT_EQ(r.mpm, mpm(gt, b));
            ASSERT_EQ(r.nrm, nrm(c, mode));

            ASSERT_NEAR(r.f_measure, oracle::f_measure(gt, b), 1e-9);
            ASSERT_NEAR(r.pseudo_f_measure, oracle::pseudo_f_measure(gt, skeletonize(gt), b), 1e-9);
            ASSERT_NEAR(r.psnr, oracle::psnr(gt, b), 1e-9);
            ASSERT_NEAR(r.drd, oracle::drd(gt, b), 1e-9);
            ASSERT_NEAR(r.mpm, oracle::mpm(gt, b), 1e-9);
            ASSERT_NEAR(r.nrm, mode == NrmMode::Standard ? oracle::nrm_standard(gt, b) : oracle::nrm_literal(gt, b),
                        1e-9);
        }
    }
}

TEST(EvaluatePair, FiniteAndNonNegative) {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 100; ++trial) {
        auto gt = testsupport::random_mask(10, 10, 0.3, rng);
        if (gt.count() == 0) gt.set(0, 0, true);
        auto b = testsupport::random_mask(10, 10, 0.3, rng);
        if (trial % 10 == 0) b = gt;
        const auto r = evaluate_pair(gt, b);
        for (double v : {r.f_measure, r.pseudo_f_measure, r.drd, r.mpm, r.nrm}) {
            ASSERT_TRUE(std::isfinite(v));
            ASSERT_GE(v, 0.0);
        }
        ASSERT_EQ(std::isinf(r.psnr), b == gt);
        ASSERT_EQ(r.f_measure == 100.0 && r.drd == 0.0 && r.mpm == 0.0, b == gt);
        ASSERT_LE(r.nrm, 1.0);
    }
}
