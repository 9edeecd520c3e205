#include "binbench/binarizers.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>

namespace binbench::binarize {

namespace {

constexpr double kContrastEpsilon = 1e-6;
constexpr int kMedianDeviation = 50;

std::size_t idx(int w, int x, int y) {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(w) + static_cast<std::size_t>(x);
}

BinaryImage below(const GrayImage& img, const std::vector<double>& threshold) {
    BinaryImage out(img.width(), img.height());
    const auto px = img.pixels();
    for (std::size_t i = 0; i < px.size(); ++i) out.set(i, px[i] < threshold[i]);
    return out;
}

// Clipped-window box sums over a double-valued plane.
class Integral {
public:
    Integral(int w, int h, const std::vector<double>& values) : w_(w), h_(h) {
        const auto stride = static_cast<std::size_t>(w + 1);
        table_.assign(stride * static_cast<std::size_t>(h + 1), 0.0);
        for (int y = 0; y < h; ++y) {
            double row = 0.0;
            for (int x = 0; x < w; ++x) {
                row += values[idx(w, x, y)];
                table_[static_cast<std::size_t>(y + 1) * stride + static_cast<std::size_t>(x + 1)] =
                    table_[static_cast<std::size_t>(y) * stride + static_cast<std::size_t>(x + 1)] + row;
            }
        }
    }

    double sum(int x0, int y0, int x1, int y1) const {
        x0 = std::max(x0, 0);
        y0 = std::max(y0, 0);
        x1 = std::min(x1, w_ - 1);
        y1 = std::min(y1, h_ - 1);
        const auto stride = static_cast<std::size_t>(w_ + 1);
        auto t = [&](int x, int y) { return table_[static_cast<std::size_t>(y) * stride + static_cast<std::size_t>(x)]; };
        return t(x1 + 1, y1 + 1) - t(x0, y1 + 1) - t(x1 + 1, y0) + t(x0, y0);
    }

private:
    int w_;
    int h_;
    std::vector<double> table_;
};

}  // namespace

Method parse_method(std::string_view name) {
    if (name == "otsu") return Method::Otsu;
    if (name == "niblack") return Method::Niblack;
    if (name == "sauvola-grid") return Method::SauvolaGrid;
    if (name == "su-contrast") return Method::SuContrast;
    if (name == "niblack-ensemble") return Method::NiblackEnsemble;
    throw InvalidParameter("unknown method '" + std::string(name) +
                           "' (expected otsu, niblack, sauvola-grid, su-contrast, niblack-ensemble)");
}

std::string_view to_string(Method m) {
    switch (m) {
        case Method::Otsu: return "otsu";
        case Method::Niblack: return "niblack";
        case Method::SauvolaGrid: return "sauvola-grid";
        case Method::SuContrast: return "su-contrast";
        case Method::NiblackEnsemble: return "niblack-ensemble";
    }
    return "?";
}

const std::vector<Method>& all_methods() {
    static const std::vector<Method> methods{Method::Otsu, Method::Niblack, Method::SauvolaGrid,
                                             Method::SuContrast, Method::NiblackEnsemble};
    return methods;
}

double BinarizerParams::effective_k() const {
    if (k) return *k;
    return method == Method::Niblack ? -0.2 : 0.2;
}

void BinarizerParams::validate() const {
    if (window < 3 || window % 2 == 0) {
        throw InvalidParameter("window must be odd and >= 3, got " + std::to_string(window));
    }
    if (grid_cell < 8) throw InvalidParameter("grid_cell must be >= 8");
    if (!(canny_low > 0.0) || canny_low > canny_high) {
        throw InvalidParameter("require 0 < canny_low <= canny_high");
    }
    if (!(canny_sigma >= 0.0) || !std::isfinite(canny_sigma)) throw InvalidParameter("canny_sigma must be >= 0");
    if (!(r_dynamic > 0.0)) throw InvalidParameter("r_dynamic must be positive");
    if (!std::isfinite(gamma) || gamma < 0.0) throw InvalidParameter("gamma must be >= 0");
    if (k && !std::isfinite(*k)) throw InvalidParameter("k must be finite");
    if (min_component < 0) throw InvalidParameter("min_component must be >= 0");
    if (edge_density_min < 0) throw InvalidParameter("edge_density_min must be >= 0");
}

namespace {

// x * y as a 192-bit value (high 128 bits, low 64 bits).
std::pair<unsigned __int128, std::uint64_t> mul_wide(unsigned __int128 x, std::uint64_t y) {
    const auto lo = static_cast<unsigned __int128>(static_cast<std::uint64_t>(x)) * y;
    const auto hi = static_cast<unsigned __int128>(static_cast<std::uint64_t>(x >> 64)) * y;
    return {hi + (lo >> 64), static_cast<std::uint64_t>(lo)};
}

}  // namespace

int otsu_threshold(const Histogram& hist) {
    std::uint64_t total_n = 0;
    std::uint64_t total_s = 0;
    for (std::size_t v = 0; v < hist.size(); ++v) {
        total_n += hist[v];
        total_s += hist[v] * v;
    }
    // Variances are compared as exact fractions num/den.
    int best_t = 0;
    unsigned __int128 best_num = 0;
    std::uint64_t best_den = 1;
    std::uint64_t n0 = 0;
    std::uint64_t s0 = 0;
    for (int t = 0; t < 256; ++t) {
        // class 0 holds values < t
        if (t > 0) {
            n0 += hist[static_cast<std::size_t>(t - 1)];
            s0 += hist[static_cast<std::size_t>(t - 1)] * static_cast<std::uint64_t>(t - 1);
        }
        const auto n1 = total_n - n0;
        if (n0 == 0 || n1 == 0) continue;
        const auto s1 = total_s - s0;
        // n^2 * between-class variance = (s0*n1 - s1*n0)^2 / (n0*n1)
        const auto diff = static_cast<__int128>(s0) * n1 - static_cast<__int128>(s1) * n0;
        const auto mag = static_cast<unsigned __int128>(diff < 0 ? -diff : diff);
        const auto num = mag * mag;
        const auto den = n0 * n1;
        if (mul_wide(num, best_den) > mul_wide(best_num, den)) {
            best_num = num;
            best_den = den;
            best_t = t;
        }
    }
    return best_t;
}

BinaryImage otsu(const GrayImage& img) {
    const int t = otsu_threshold(histogram(img));
    BinaryImage out(img.width(), img.height());
    const auto px = img.pixels();
    for (std::size_t i = 0; i < px.size(); ++i) out.set(i, px[i] < t);
    return out;
}

BinaryImage niblack(const GrayImage& img, const BinarizerParams& p) {
    p.validate();
    const auto stats = local_stats(img, p.window);
    const double k = p.effective_k();
    std::vector<double> t(img.size());
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = stats.mean[i] + k * stats.stddev[i];
    return below(img, t);
}

namespace {

// Centre of each grid cell along one axis, clamped to the cell's extent.
std::vector<int> cell_centres(int extent, int cell) {
    std::vector<int> c;
    for (int start = 0; start < extent; start += cell) {
        const int end = std::min(start + cell, extent) - 1;
        c.push_back((start + end) / 2);
    }
    return c;
}

// Index of the lower bracketing centre and interpolation weight for `pos`.
std::pair<std::size_t, double> bracket(const std::vector<int>& centres, int pos) {
    if (centres.size() == 1 || pos <= centres.front()) return {0, 0.0};
    if (pos >= centres.back()) return {centres.size() - 1, 0.0};
    const auto it = std::upper_bound(centres.begin(), centres.end(), pos);
    const auto i = static_cast<std::size_t>(it - centres.begin()) - 1;
    const double span = centres[i + 1] - centres[i];
    return {i, (pos - centres[i]) / span};
}

}  // namespace

std::vector<double> sauvola_grid_thresholds(const GrayImage& img, const BinarizerParams& p) {
    p.validate();
    const int w = img.width();
    const int h = img.height();
    const auto stats = local_stats(img, p.window);
    const double k = p.effective_k();
    const auto cx = cell_centres(w, p.grid_cell);
    const auto cy = cell_centres(h, p.grid_cell);

    std::vector<double> grid(cx.size() * cy.size());
    for (std::size_t j = 0; j < cy.size(); ++j) {
        for (std::size_t i = 0; i < cx.size(); ++i) {
            const auto at = idx(w, cx[i], cy[j]);
            const double m = stats.mean[at];
            const double s = stats.stddev[at];
            grid[j * cx.size() + i] = m * (1.0 + k * (s / p.r_dynamic - 1.0));
        }
    }
    auto g = [&](std::size_t i, std::size_t j) { return grid[j * cx.size() + i]; };

    std::vector<double> out(img.size());
    for (int y = 0; y < h; ++y) {
        const auto [j, fy] = bracket(cy, y);
        const auto j1 = std::min(j + 1, cy.size() - 1);
        for (int x = 0; x < w; ++x) {
            const auto [i, fx] = bracket(cx, x);
            const auto i1 = std::min(i + 1, cx.size() - 1);
            const double top = g(i, j) * (1.0 - fx) + g(i1, j) * fx;
            const double bottom = g(i, j1) * (1.0 - fx) + g(i1, j1) * fx;
            out[idx(w, x, y)] = top * (1.0 - fy) + bottom * fy;
        }
    }
    return out;
}

BinaryImage sauvola_grid(const GrayImage& img, const BinarizerParams& p) {
    return below(img, sauvola_grid_thresholds(img, p));
}

int estimate_stroke_width(const GrayImage& img, const BinaryImage& edges) {
    std::map<int, std::size_t> gaps;
    std::vector<int> xs;
    for (int y = 0; y < img.height(); ++y) {
        xs.clear();
        for (int x = 0; x < img.width(); ++x) {
            if (edges(x, y)) xs.push_back(x);
        }
        for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
            const int x1 = xs[i];
            const int x2 = xs[i + 1];
            if (x2 - x1 < 2) continue;
            double span = 0.0;
            for (int x = x1 + 1; x < x2; ++x) span += img(x, y);
            span /= (x2 - x1 - 1);
            const double ends = (img(x1, y) + img(x2, y)) / 2.0;
            if (span >= ends) continue;
            // edges may land on either side of the boundary, so count the dark pixels
            int lo = 255;
            int hi = 0;
            for (int x = x1; x <= x2; ++x) {
                lo = std::min<int>(lo, img(x, y));
                hi = std::max<int>(hi, img(x, y));
            }
            const int mid = (lo + hi) / 2;
            int dark = 0;
            for (int x = x1; x <= x2; ++x) dark += img(x, y) <= mid ? 1 : 0;
            // single dark pixels are impulse noise, not strokes
            if (dark >= 2) ++gaps[dark];
        }
    }
    int best = 3;
    std::size_t best_count = 0;
    for (const auto& [gap, count] : gaps) {
        if (count > best_count) {
            best = gap;
            best_count = count;
        }
    }
    return best;
}

SuStages su_contrast_stages(const GrayImage& img, const BinarizerParams& p) {
    p.validate();
    const int w = img.width();
    const int h = img.height();
    SuStages st;

    double mean = 0.0;
    for (const auto v : img.pixels()) mean += v;
    mean /= static_cast<double>(img.size());
    double var = 0.0;
    for (const auto v : img.pixels()) var += (v - mean) * (v - mean);
    const double sigma = std::sqrt(var / static_cast<double>(img.size()));
    const double alpha = std::clamp(std::pow(sigma / 128.0, p.gamma), 0.0, 1.0);

    st.contrast = GrayImage(w, h);
    std::vector<double> mid_level(img.size());
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            int lo = 255;
            int hi = 0;
            for (int dy = -1; dy <= 1; ++dy) {
                for (int dx = -1; dx <= 1; ++dx) {
                    const int v = img.clamped(x + dx, y + dy);
                    lo = std::min(lo, v);
                    hi = std::max(hi, v);
                }
            }
            mid_level[idx(w, x, y)] = (hi + lo) / 2.0;
            const double contrast = (hi - lo) / (hi + lo + kContrastEpsilon);
            const double gradient = (hi - lo) / 255.0;
            const double combined = alpha * contrast + (1.0 - alpha) * gradient;
            st.contrast(x, y) = static_cast<std::uint8_t>(std::lround(std::clamp(combined, 0.0, 1.0) * 255.0));
        }
    }

    const int t = otsu_threshold(histogram(st.contrast));
    st.high_contrast = BinaryImage(w, h);
    if (t > 0) {
        const auto px = st.contrast.pixels();
        for (std::size_t i = 0; i < px.size(); ++i) st.high_contrast.set(i, px[i] >= t);
    }
    st.edges = detect_edges(img, EdgeOptions{p.canny_low, p.canny_high, p.canny_sigma});
    st.text_edges = BinaryImage(w, h);
    for (std::size_t i = 0; i < img.size(); ++i) {
        st.text_edges.set(i, st.high_contrast.at(i) && st.edges.at(i));
    }

    st.stroke_width = estimate_stroke_width(img, st.text_edges);

    std::vector<double> edge_count(img.size());
    std::vector<double> edge_sum(img.size());
    std::vector<double> edge_sq(img.size());
    for (std::size_t i = 0; i < img.size(); ++i) {
        if (!st.text_edges.at(i)) continue;
        const double v = mid_level[i];
        edge_count[i] = 1.0;
        edge_sum[i] = v;
        edge_sq[i] = v * v;
    }
    const Integral count_t(w, h, edge_count);
    const Integral sum_t(w, h, edge_sum);
    const Integral sq_t(w, h, edge_sq);
    const int r = st.stroke_width;
    const double min_edges = std::max(p.edge_density_min, 1);

    st.thresholded = BinaryImage(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const double n = count_t.sum(x - r, y - r, x + r, y + r);
            if (n < min_edges) continue;
            const double m = sum_t.sum(x - r, y - r, x + r, y + r) / n;
            const double var_e = std::max(0.0, sq_t.sum(x - r, y - r, x + r, y + r) / n - m * m);
            if (img(x, y) <= m + std::sqrt(var_e) / 2.0) st.thresholded.set(x, y, true);
        }
    }
    st.result = remove_small_components(st.thresholded, static_cast<std::size_t>(p.min_component));
    return st;
}

BinaryImage su_contrast(const GrayImage& img, const BinarizerParams& p) {
    return su_contrast_stages(img, p).result;
}

GrayImage conditional_median(const GrayImage& img) {
    const auto med = median3x3(img);
    GrayImage out = img;
    const auto src = img.pixels();
    const auto m = med.pixels();
    auto dst = out.pixels();
    for (std::size_t i = 0; i < src.size(); ++i) {
        if (std::abs(int(src[i]) - int(m[i])) > kMedianDeviation) dst[i] = m[i];
    }
    return out;
}

EnsembleThresholds ensemble_thresholds(const GrayImage& img, const BinarizerParams& p) {
    p.validate();
    EnsembleThresholds e;
    e.filtered = conditional_median(img);
    const auto stats = local_stats(e.filtered, p.window);
    const auto n = img.size();
    const double s_max = *std::max_element(stats.stddev.begin(), stats.stddev.end());
    const double img_min = *std::min_element(e.filtered.pixels().begin(), e.filtered.pixels().end());

    e.niblack.resize(n);
    e.sauvola.resize(n);
    e.wolf.resize(n);
    e.nick.resize(n);
    e.average.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double m = stats.mean[i];
        const double s = stats.stddev[i];
        e.niblack[i] = m - 0.2 * s;
        e.sauvola[i] = m * (1.0 + 0.2 * (s / p.r_dynamic - 1.0));
        const double rel = s_max > 0.0 ? s / s_max : 0.0;
        e.wolf[i] = m - 0.5 * (1.0 - rel) * (m - img_min);
        e.nick[i] = m - 0.1 * std::sqrt(s * s + m * m);
        e.average[i] = (e.niblack[i] + e.sauvola[i] + e.wolf[i] + e.nick[i]) / 4.0;
    }
    return e;
}

BinaryImage constrained_close(const BinaryImage& b) {
    const int w = b.width();
    const int h = b.height();
    BinaryImage dilated(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            bool any = false;
            for (int dy = -1; dy <= 1 && !any; ++dy) {
                for (int dx = -1; dx <= 1 && !any; ++dx) any = b.at_or_background(x + dx, y + dy);
            }
            dilated.set(x, y, any);
        }
    }
    BinaryImage out(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (b(x, y)) {
                out.set(x, y, true);
                continue;
            }
            const bool near = b.at_or_background(x - 1, y) || b.at_or_background(x + 1, y) ||
                              b.at_or_background(x, y - 1) || b.at_or_background(x, y + 1);
            if (!near) continue;
            // erosion treats the outside of the image as foreground
            bool all = true;
            for (int dy = -1; dy <= 1 && all; ++dy) {
                for (int dx = -1; dx <= 1 && all; ++dx) {
                    if (dilated.contains(x + dx, y + dy)) all = dilated(x + dx, y + dy);
                }
            }
            out.set(x, y, all);
        }
    }
    return out;
}

BinaryImage niblack_ensemble(const GrayImage& img, const BinarizerParams& p) {
    const auto e = ensemble_thresholds(img, p);
    const auto raw = below(e.filtered, e.average);
    return constrained_close(remove_small_components(raw, static_cast<std::size_t>(p.min_component)));
}

BinaryImage run(const GrayImage& img, const BinarizerParams& p) {
    p.validate();
    switch (p.method) {
        case Method::Otsu: return otsu(img);
        case Method::Niblack: return niblack(img, p);
        case Method::SauvolaGrid: return sauvola_grid(img, p);
        case Method::SuContrast: return su_contrast(img, p);
        case Method::NiblackEnsemble: return niblack_ensemble(img, p);
    }
    throw InvalidParameter("unhandled method");
}

}  // namespace binbench::binarize
