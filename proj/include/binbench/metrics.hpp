#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <string_view>

#include "binbench/image.hpp"

namespace binbench::metrics {

struct ConfusionCounts {
    std::uint64_t tp = 0;
    std::uint64_t fp = 0;
    std::uint64_t fn = 0;
    std::uint64_t tn = 0;

    std::uint64_t total() const noexcept { return tp + fp + fn + tn; }
    bool operator==(const ConfusionCounts&) const = default;
};

/// How the two rate terms of NRM are normalised.
enum class NrmMode {
    /// NR_FN = FN / (FN + FP), NR_FP = FP / (FP + TN).
    Literal,
    /// NR_FN = FN / (FN + TP), NR_FP = FP / (FP + TN), the DIBCO convention.
    Standard,
};

/// Which pixels contribute to the MPM normaliser D.
enum class MpmNormalizer {
    AllPixels,
    GroundTruthObject,
};

struct EvalOptions {
    NrmMode nrm_mode = NrmMode::Literal;
    MpmNormalizer mpm_normalizer = MpmNormalizer::AllPixels;
};

NrmMode parse_nrm_mode(std::string_view s);
std::string_view to_string(NrmMode m);
MpmNormalizer parse_mpm_normalizer(std::string_view s);
std::string_view to_string(MpmNormalizer m);

/// The six measures for one (ground truth, binarization) pair.
struct MetricReport {
    double f_measure = 0.0;         // percent
    double pseudo_f_measure = 0.0;  // percent
    double psnr = 0.0;              // dB, +inf when identical
    double drd = 0.0;
    double mpm = 0.0;
    double nrm = 0.0;

    bool operator==(const MetricReport&) const = default;
};

/// 5x5 DRD weights, indexed [dy + 2][dx + 2].
using WeightMatrix5 = std::array<std::array<double, 5>, 5>;

ConfusionCounts confusion_counts(const BinaryImage& gt, const BinaryImage& b);

double f_measure(const ConfusionCounts& c);
double pseudo_f_measure(const BinaryImage& gt, const BinaryImage& b);
double psnr(const BinaryImage& gt, const BinaryImage& b);
double psnr(const ConfusionCounts& c);
double nrm(const ConfusionCounts& c, NrmMode mode = NrmMode::Literal);

const WeightMatrix5& drd_weight_matrix();
std::uint64_t nubn(const BinaryImage& gt);
double drd(const BinaryImage& gt, const BinaryImage& b);

/// Throws EmptyGroundTruthError when gt has no foreground.
double mpm(const BinaryImage& gt, const BinaryImage& b,
           MpmNormalizer normalizer = MpmNormalizer::AllPixels);

MetricReport evaluate_pair(const BinaryImage& gt, const BinaryImage& b,
                           const EvalOptions& opts = {});

}  // namespace binbench::metrics
