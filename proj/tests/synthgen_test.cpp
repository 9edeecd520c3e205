#include <gtest/gtest.h>

#include <fstream>
#include <set>

#include "binbench/binarizers.hpp"
#include "binbench/metrics.hpp"
#include "binbench/pnm.hpp"
#include "binbench/synthgen.hpp"
#include "test_support.hpp"

using namespace binbench;
using namespace binbench::synth;

namespace {

std::set<int> distinct_values(const GrayImage& g) {
    std::set<int> v;
    for (auto p : g.pixels()) v.insert(p);
    return v;
}

std::vector<std::uint8_t> slurp(const std::filesystem::path& p) { return pnm::read_file(p); }

}  // namespace

TEST(SplitMix, ReferenceSequence) {
    // Published first outputs for seed 0.
    SplitMix64 r(0);
    EXPECT_EQ(r.next(), 0xE220A8397B1DCDAFull);
    EXPECT_EQ(r.next(), 0x6E789E6AA1B965F4ull);
    EXPECT_EQ(r.next(), 0x06C45D188009454Full);
}

TEST(SplitMix, UniformAndChanceRanges) {
    SplitMix64 r(42);
    for (int i = 0; i < 1000; ++i) {
        const int v = r.uniform(-3, 4);
        ASSERT_GE(v, -3);
        ASSERT_LE(v, 4);
    }
    SplitMix64 a(1);
    for (int i = 0; i < 100; ++i) {
        EXPECT_FALSE(a.chance(0));
        EXPECT_TRUE(a.chance(1000));
    }
    SplitMix64 n(9);
    double sum = 0;
    for (int i = 0; i < 4000; ++i) sum += double(n.normal_q12()) / 4096;
    EXPECT_NEAR(sum / 4000, 0.0, 0.1);
}

TEST(Spec, Validation) {
    DegradationSpec s;
    EXPECT_NO_THROW(s.validate());
    s.strokes = 0;
    EXPECT_THROW(s.validate(), InvalidSpecError);
    EXPECT_THROW(generate(s), InvalidSpecError);
    s.require_foreground = false;
    EXPECT_NO_THROW(s.validate());
    EXPECT_EQ(generate(s).ground_truth.count(), 0u);
    s = {};
    s.width = 8;
    EXPECT_THROW(s.validate(), InvalidSpecError);
    s = {};
    s.stroke_width_min = 5;
    s.stroke_width_max = 3;
    EXPECT_THROW(s.validate(), InvalidSpecError);
    s = {};
    s.degradations[Degradation::Noise] = 1.5;
    EXPECT_THROW(s.validate(), InvalidSpecError);
}

TEST(Degradations, Names) {
    for (auto d : all_degradations()) EXPECT_EQ(parse_degradation(to_string(d)), d);
    EXPECT_EQ(all_degradations().size(), 7u);
    EXPECT_THROW(parse_degradation("smudge"), InvalidSpecError);
}

TEST(Generate, CleanPageHasTwoBandsAndOtsuIsPerfect) {
    for (std::uint64_t seed : {1u, 7u, 99u}) {
        DegradationSpec s;
        s.seed = seed;
        const auto page = generate(s);
        EXPECT_GT(page.ground_truth.count(), 0u);
        std::set<int> ink, paper;
        for (std::size_t i = 0; i < page.page.size(); ++i)
            (page.ground_truth.at(i) ? ink : paper).insert(page.page.pixels()[i]);
        // background is one flat level, ink sits in the 20..80 band
        EXPECT_EQ(paper.size(), 1u);
        EXPECT_GE(*ink.begin(), 20);
        EXPECT_LE(*ink.rbegin(), 80);
        EXPECT_GT(*paper.begin(), *ink.rbegin());
        const auto b = binarize::otsu(page.page);
        EXPECT_EQ(metrics::f_measure(metrics::confusion_counts(page.ground_truth, b)), 100.0);
    }
}

TEST(Generate, Deterministic) {
    DegradationSpec s;
    s.seed = 1234;
    for (auto d : all_degradations()) s.degradations[d] = default_intensity(d);
    const auto a = generate(s);
    const auto b = generate(s);
    EXPECT_EQ(a.page, b.page);
    EXPECT_EQ(a.ground_truth, b.ground_truth);
    s.seed = 1235;
    EXPECT_NE(generate(s).page, a.page);
}

TEST(Generate, GroundTruthInvariantUnderDegradations) {
    DegradationSpec clean;
    clean.seed = 77;
    const auto ref = generate(clean);
    for (auto d : all_degradations()) {
        for (double level : {0.1, 0.4, 1.0}) {
            auto s = clean;
            s.degradations[d] = level;
            const auto page = generate(s);
            EXPECT_EQ(page.ground_truth, ref.ground_truth) << to_string(d) << " " << level;
            EXPECT_NE(page.page, ref.page) << to_string(d) << " " << level;
        }
    }
    auto all = clean;
    for (auto d : all_degradations()) all.degradations[d] = 0.7;
    EXPECT_EQ(generate(all).ground_truth, ref.ground_truth);
}

TEST(Generate, BleedThroughKeepsForegroundFraction) {
    DegradationSpec s;
    s.seed = 5;
    const auto base = generate(s);
    s.degradations[Degradation::BleedThrough] = 0.4;
    const auto bled = generate(s);
    EXPECT_EQ(bled.ground_truth.count(), base.ground_truth.count());
    // bleed only darkens the paper
    for (std::size_t i = 0; i < base.page.size(); ++i) ASSERT_LE(bled.page.pixels()[i], base.page.pixels()[i]);
}

TEST(Generate, StrokeWidthRange) {
    DegradationSpec s;
    s.seed = 3;
    s.stroke_width_min = 1;
    s.stroke_width_max = 1;
    const auto thin = generate(s);
    s.stroke_width_min = 6;
    s.stroke_width_max = 6;
    const auto thick = generate(s);
    EXPECT_GT(thick.ground_truth.count(), 2 * thin.ground_truth.count());
}

TEST(Generate, IlluminationIsAdditiveRamp) {
    DegradationSpec s;
    s.seed = 8;
    const auto base = generate(s);
    s.degradations[Degradation::IlluminationGradient] = 0.5;
    const auto lit = generate(s);
    int max_shift = 0;
    for (std::size_t i = 0; i < base.page.size(); ++i) {
        const int d = int(base.page.pixels()[i]) - int(lit.page.pixels()[i]);
        ASSERT_GE(d, 0);
        max_shift = std::max(max_shift, d);
    }
    EXPECT_GT(max_shift, 50);
    EXPECT_LE(max_shift, 100);
}

TEST(Profiles, PhibcLikeLabelFrequencies) {
    int faded = 0, bleed = 0, lines = 0;
    const int n = 100;
    for (int i = 0; i < n; ++i) {
        const auto d = profile_degradations("phibc-like", std::size_t(i));
        faded += std::count(d.begin(), d.end(), Degradation::FadedInk);
        bleed += std::count(d.begin(), d.end(), Degradation::BleedThrough);
        lines += std::count(d.begin(), d.end(), Degradation::Lines);
    }
    EXPECT_EQ(faded, 70);
    EXPECT_EQ(bleed, 30);
    EXPECT_EQ(lines, 30);
}

TEST(Profiles, NamesAndErrors) {
    const auto& names = profile_names();
    for (const char* want : {"clean", "phibc-like", "heavy", "bleed-through", "noise"})
        EXPECT_NE(std::find(names.begin(), names.end(), want), names.end()) << want;
    EXPECT_TRUE(profile_degradations("clean", 3).empty());
    EXPECT_EQ(profile_degradations("noise", 0), (std::vector<Degradation>{Degradation::Noise}));
    EXPECT_THROW(profile_degradations("glossy", 0), InvalidSpecError);
}

TEST(Profiles, CorpusPageSpecSeeds) {
    CorpusOptions opts;
    opts.intensity[Degradation::BleedThrough] = 0.9;
    const auto s = corpus_page_spec("bleed-through", 100, 4, opts);
    EXPECT_EQ(s.seed, 104u);
    EXPECT_EQ(s.degradations.at(Degradation::BleedThrough), 0.9);
}

TEST(Corpus, SingleEntry) {
    const auto dir = testsupport::scratch_dir("corpus_one");
    const auto manifest = generate_corpus(1, 5, "phibc-like", dir);
    EXPECT_EQ(manifest, dir / "manifest.json");
    const auto entries = read_corpus_manifest(manifest);
    ASSERT_EQ(entries.size(), 1u);
    EXPECT_EQ(entries[0].seed, 5u);
    EXPECT_TRUE(std::filesystem::exists(dir / entries[0].page_path));
    EXPECT_TRUE(std::filesystem::exists(dir / entries[0].gt_path));
    const auto gt = pnm::read_binary(dir / entries[0].gt_path);
    const auto page = pnm::read_gray(dir / entries[0].page_path);
    EXPECT_EQ(gt.width(), page.width());
    std::filesystem::remove_all(dir);
}

TEST(Corpus, RepeatableTrees) {
    const auto a = testsupport::scratch_dir("corpus_a");
    const auto b = testsupport::scratch_dir("corpus_b");
    generate_corpus(10, 77, "phibc-like", a);
    generate_corpus(10, 77, "phibc-like", b);
    std::size_t files = 0;
    for (const auto& e : std::filesystem::recursive_directory_iterator(a)) {
        if (!e.is_regular_file()) continue;
        ++files;
        const auto rel = std::filesystem::relative(e.path(), a);
        ASSERT_EQ(slurp(e.path()), slurp(b / rel)) << rel;
    }
    EXPECT_EQ(files, 21u);
    std::filesystem::remove_all(a);
    std::filesystem::remove_all(b);
}

TEST(Corpus, UnwritableDirectory) {
    const auto dir = testsupport::scratch_dir("corpus_bad");
    std::ofstream(dir / "file") << "x";
    EXPECT_THROW(generate_corpus(1, 1, "clean", dir / "file" / "sub"), IoError);
    std::filesystem::remove_all(dir);
}
