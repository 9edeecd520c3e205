#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "binbench/image.hpp"
#include "binbench/raster.hpp"

namespace binbench::binarize {

enum class Method { Otsu, Niblack, SauvolaGrid, SuContrast, NiblackEnsemble };

Method parse_method(std::string_view name);
std::string_view to_string(Method m);
const std::vector<Method>& all_methods();

struct BinarizerParams {
    Method method = Method::Otsu;
    int window = 31;
    // Unset means the method default: -0.2 for Niblack, +0.2 for Sauvola.
    std::optional<double> k;
    double r_dynamic = 128.0;
    int grid_cell = 32;
    // Exponent of the adaptive contrast/gradient mixing factor.
    double gamma = 1.0;
    double canny_low = 20.0;
    double canny_high = 60.0;
    double canny_sigma = 1.0;
    int min_component = 6;
    int edge_density_min = 4;

    double effective_k() const;
    /// Throws InvalidParameter on any out-of-range field.
    void validate() const;
};

/// Parses a JSON object; unknown keys are rejected with InvalidParameter.
BinarizerParams params_from_json(std::string_view json_text);
std::string params_to_json(const BinarizerParams& p);

/// Global threshold maximising between-class variance. Pixels below the
/// threshold are ink. Ties resolve to the smallest threshold; a histogram with
/// no admissible split yields 0.
int otsu_threshold(const Histogram& hist);

BinaryImage otsu(const GrayImage& img);
BinaryImage niblack(const GrayImage& img, const BinarizerParams& p);

/// Per-pixel Sauvola thresholds interpolated from grid-cell centres.
std::vector<double> sauvola_grid_thresholds(const GrayImage& img, const BinarizerParams& p);
BinaryImage sauvola_grid(const GrayImage& img, const BinarizerParams& p);

/// Intermediate products of the contrast/edge/stroke-width binarizer.
struct SuStages {
    /// Combined contrast map scaled to [0,255].
    GrayImage contrast;
    BinaryImage high_contrast;
    BinaryImage edges;
    /// High-contrast pixels that are also Canny edges.
    BinaryImage text_edges;
    int stroke_width = 3;
    /// Local threshold result before component filtering.
    BinaryImage thresholded;
    BinaryImage result;
};

SuStages su_contrast_stages(const GrayImage& img, const BinarizerParams& p);
BinaryImage su_contrast(const GrayImage& img, const BinarizerParams& p);

/// Stroke width from horizontal gaps between consecutive edge pixels whose
/// span is darker than the mean of its two end pixels. Returns the mode
/// (smallest on ties), or 3 when no gap qualifies.
int estimate_stroke_width(const GrayImage& img, const BinaryImage& edges);

/// The four Niblack-family threshold maps and their average.
struct EnsembleThresholds {
    GrayImage filtered;
    std::vector<double> niblack;
    std::vector<double> sauvola;
    std::vector<double> wolf;
    std::vector<double> nick;
    std::vector<double> average;
};

/// Replaces a pixel by its 3x3 median only where they differ by more than 50.
GrayImage conditional_median(const GrayImage& img);

EnsembleThresholds ensemble_thresholds(const GrayImage& img, const BinarizerParams& p);
BinaryImage niblack_ensemble(const GrayImage& img, const BinarizerParams& p);

/// 3x3 closing whose additions are limited to 4-neighbours of `b`.
BinaryImage constrained_close(const BinaryImage& b);

/// Dispatches on p.method after validating p.
BinaryImage run(const GrayImage& img, const BinarizerParams& p);

}  // namespace binbench::binarize
