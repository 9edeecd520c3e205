#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "binbench/image.hpp"

namespace binbench {

using Histogram = std::array<std::uint64_t, 256>;

Histogram histogram(const GrayImage& img);

/// Per-pixel window mean and population standard deviation.
struct LocalStats {
    int width = 0;
    int height = 0;
    std::vector<double> mean;
    std::vector<double> stddev;
};

/// Sliding-window statistics with replicate padding. `window` must be odd and >= 3.
/// Sums are accumulated in integers, so results are exact up to the final
/// division and square root.
LocalStats local_stats(const GrayImage& img, int window);

/// Exact squared Euclidean distance from each pixel to the nearest seed.
/// Separable two-pass lower-envelope transform; values are integers stored as double.
std::vector<double> squared_distance_transform(const BinaryImage& seed);

/// Throws EmptySeedError when `seed` has no foreground pixel.
DistanceField distance_transform(const BinaryImage& seed);

/// Foreground pixels with at least one background 4-neighbour; the border
/// outside the image counts as background.
BinaryImage extract_contour(const BinaryImage& b);

/// Iterative two-subpass 3x3 thinning, run until a full pass deletes nothing.
///
/// Each subpass selects deletion candidates in parallel with the classic
/// conditions (2 <= B <= 6, one 0->1 transition around the ring, and the
/// directional products), then deletes them in raster order, re-checking the
/// same conditions against the partially updated mask. The re-check makes
/// every deletion a simple-point deletion, so 8-connected components are
/// never split or erased (a 2x2 block would otherwise vanish).
BinaryImage skeletonize(const BinaryImage& b);

struct EdgeOptions {
    double low = 20.0;
    double high = 60.0;
    double sigma = 1.0;
};

/// Canny pipeline: Gaussian smoothing, Sobel gradients, non-maximum suppression
/// over four quantised directions and hysteresis linking over 8-neighbours.
/// Thresholds apply to the Sobel gradient magnitude.
BinaryImage detect_edges(const GrayImage& img, const EdgeOptions& opts);
BinaryImage detect_edges(const GrayImage& img, double low, double high);

struct Components {
    int width = 0;
    int height = 0;
    /// 0 = background, 1..count() in first-encounter raster order.
    std::vector<int> labels;
    /// sizes[i] is the pixel count of label i + 1.
    std::vector<std::size_t> sizes;

    std::size_t count() const noexcept { return sizes.size(); }
};

/// 8-connected component labelling.
Components connected_components(const BinaryImage& b);

/// Clears every 8-connected component with fewer than `min_size` pixels.
BinaryImage remove_small_components(const BinaryImage& b, std::size_t min_size);

/// 3x3 median with replicate padding.
GrayImage median3x3(const GrayImage& img);

}  // namespace binbench
