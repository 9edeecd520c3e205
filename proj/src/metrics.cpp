#include "binbench/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "binbench/raster.hpp"

namespace binbench::metrics {

NrmMode parse_nrm_mode(std::string_view s) {
    if (s == "literal") return NrmMode::Literal;
    if (s == "standard") return NrmMode::Standard;
    throw InvalidParameter("unknown nrm mode '" + std::string(s) +
                           "' (expected literal or standard)");
}

std::string_view to_string(NrmMode m) {
    return m == NrmMode::Literal ? "literal" : "standard";
}

MpmNormalizer parse_mpm_normalizer(std::string_view s) {
    if (s == "all-pixels") return MpmNormalizer::AllPixels;
    if (s == "gt-object") return MpmNormalizer::GroundTruthObject;
    throw InvalidParameter("unknown mpm normalizer '" + std::string(s) +
                           "' (expected all-pixels or gt-object)");
}

std::string_view to_string(MpmNormalizer m) {
    return m == MpmNormalizer::AllPixels ? "all-pixels" : "gt-object";
}

ConfusionCounts confusion_counts(const BinaryImage& gt, const BinaryImage& b) {
    require_same_shape(gt, b, "confusion_counts");
    ConfusionCounts c;
    for (std::size_t i = 0; i < gt.size(); ++i) {
        const bool g = gt.at(i);
        const bool v = b.at(i);
        if (g && v) {
            ++c.tp;
        } else if (!g && v) {
            ++c.fp;
        } else if (g) {
            ++c.fn;
        } else {
            ++c.tn;
        }
    }
    return c;
}

namespace {

double ratio(std::uint64_t num, std::uint64_t den) {
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

double harmonic_percent(double recall, double precision) {
    if (recall + precision == 0.0) return 0.0;
    return 100.0 * 2.0 * recall * precision / (recall + precision);
}

}  // namespace

double f_measure(const ConfusionCounts& c) {
    if (c.tp == 0) return 0.0;
    return harmonic_percent(ratio(c.tp, c.tp + c.fn), ratio(c.tp, c.tp + c.fp));
}

double pseudo_f_measure(const BinaryImage& gt, const BinaryImage& b) {
    require_same_shape(gt, b, "pseudo_f_measure");
    const auto skel = skeletonize(gt);
    std::uint64_t skel_total = 0;
    std::uint64_t skel_hit = 0;
    for (std::size_t i = 0; i < skel.size(); ++i) {
        if (!skel.at(i)) continue;
        ++skel_total;
        if (b.at(i)) ++skel_hit;
    }
    if (skel_total == 0) return 0.0;
    const auto c = confusion_counts(gt, b);
    if (c.tp == 0) return 0.0;
    return harmonic_percent(ratio(skel_hit, skel_total), ratio(c.tp, c.tp + c.fp));
}

double psnr(const ConfusionCounts& c) {
    const auto wrong = c.fp + c.fn;
    if (wrong == 0) return std::numeric_limits<double>::infinity();
    const double mse = static_cast<double>(wrong) / static_cast<double>(c.total());
    return 10.0 * std::log10(1.0 / mse);
}

double psnr(const BinaryImage& gt, const BinaryImage& b) {
    return psnr(confusion_counts(gt, b));
}

double nrm(const ConfusionCounts& c, NrmMode mode) {
    const double nr_fn = mode == NrmMode::Literal ? ratio(c.fn, c.fn + c.fp)
                                                       : ratio(c.fn, c.fn + c.tp);
    const double nr_fp = ratio(c.fp, c.fp + c.tn);
    return (nr_fn + nr_fp) / 2.0;
}

const WeightMatrix5& drd_weight_matrix() {
    static const WeightMatrix5 weights = [] {
        WeightMatrix5 m{};
        double total = 0.0;
        for (int dy = -2; dy <= 2; ++dy) {
            for (int dx = -2; dx <= 2; ++dx) {
                if (dx == 0 && dy == 0) continue;
                const double v = 1.0 / std::sqrt(static_cast<double>(dx * dx + dy * dy));
                m[static_cast<std::size_t>(dy + 2)][static_cast<std::size_t>(dx + 2)] = v;
                total += v;
            }
        }
        for (auto& row : m) {
            for (auto& v : row) v /= total;
        }
        return m;
    }();
    return weights;
}

std::uint64_t nubn(const BinaryImage& gt) {
    std::uint64_t count = 0;
    for (int by = 0; by < gt.height(); by += 8) {
        for (int bx = 0; bx < gt.width(); bx += 8) {
            const int ey = std::min(by + 8, gt.height());
            const int ex = std::min(bx + 8, gt.width());
            bool any_fg = false;
            bool any_bg = false;
            for (int y = by; y < ey && !(any_fg && any_bg); ++y) {
                for (int x = bx; x < ex; ++x) {
                    (gt(x, y) ? any_fg : any_bg) = true;
                }
            }
            if (any_fg && any_bg) ++count;
        }
    }
    return count;
}

double drd(const BinaryImage& gt, const BinaryImage& b) {
    require_same_shape(gt, b, "drd");
    const auto& w = drd_weight_matrix();
    double total = 0.0;
    for (int y = 0; y < gt.height(); ++y) {
        for (int x = 0; x < gt.width(); ++x) {
            const bool v = b(x, y);
            if (v == gt(x, y)) continue;
            double dk = 0.0;
            for (int dy = -2; dy <= 2; ++dy) {
                for (int dx = -2; dx <= 2; ++dx) {
                    if (gt.at_or_background(x + dx, y + dy) != v) {
                        dk += w[static_cast<std::size_t>(dy + 2)][static_cast<std::size_t>(dx + 2)];
                    }
                }
            }
            total += dk;
        }
    }
    return total / static_cast<double>(std::max<std::uint64_t>(nubn(gt), 1));
}

double mpm(const BinaryImage& gt, const BinaryImage& b, MpmNormalizer normalizer) {
    require_same_shape(gt, b, "mpm");
    if (gt.count() == 0) throw EmptyGroundTruthError("mpm: ground truth has no foreground");
    const auto field = distance_transform(extract_contour(gt));
    double fn_sum = 0.0;
    double fp_sum = 0.0;
    double norm = 0.0;
    for (std::size_t i = 0; i < gt.size(); ++i) {
        const double d = field.dist[i];
        const bool g = gt.at(i);
        if (normalizer == MpmNormalizer::AllPixels || g) norm += d;
        if (g && !b.at(i)) fn_sum += d;
        if (!g && b.at(i)) fp_sum += d;
    }
    const double num = fn_sum + fp_sum;
    if (num == 0.0) return 0.0;
    return num / (2.0 * std::max(norm, 1.0));
}

MetricReport evaluate_pair(const BinaryImage& gt, const BinaryImage& b, const EvalOptions& opts) {
    const auto c = confusion_counts(gt, b);
    MetricReport r;
    r.f_measure = f_measure(c);
    r.pseudo_f_measure = pseudo_f_measure(gt, b);
    r.psnr = psnr(c);
    r.drd = drd(gt, b);
    r.mpm = mpm(gt, b, opts.mpm_normalizer);
    r.nrm = nrm(c, opts.nrm_mode);
    return r;
}

}  // namespace binbench::metrics
