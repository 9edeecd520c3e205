#include "binbench/raster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace binbench {

Histogram histogram(const GrayImage& img) {
    Histogram h{};
    for (const auto v : img.pixels()) ++h[v];
    return h;
}

LocalStats local_stats(const GrayImage& img, int window) {
    if (window < 3 || window % 2 == 0) {
        throw InvalidParameter("local_stats: window must be odd and >= 3, got " +
                               std::to_string(window));
    }
    const int w = img.width();
    const int h = img.height();
    const int r = window / 2;
    const int pw = w + 2 * r;
    const int ph = h + 2 * r;
    const auto stride = static_cast<std::size_t>(pw + 1);

    std::vector<std::int64_t> sum(stride * static_cast<std::size_t>(ph + 1), 0);
    std::vector<std::int64_t> sq(sum.size(), 0);
    for (int y = 0; y < ph; ++y) {
        std::int64_t row_sum = 0;
        std::int64_t row_sq = 0;
        for (int x = 0; x < pw; ++x) {
            const std::int64_t v = img.clamped(x - r, y - r);
            row_sum += v;
            row_sq += v * v;
            const auto i = static_cast<std::size_t>(y + 1) * stride + static_cast<std::size_t>(x + 1);
            sum[i] = sum[i - stride] + row_sum;
            sq[i] = sq[i - stride] + row_sq;
        }
    }

    auto box = [&](const std::vector<std::int64_t>& t, int x, int y) {
        // padded window rows y..y+window-1, cols x..x+window-1
        const auto top = static_cast<std::size_t>(y) * stride;
        const auto bot = static_cast<std::size_t>(y + window) * stride;
        const auto l = static_cast<std::size_t>(x);
        const auto rr = static_cast<std::size_t>(x + window);
        return t[bot + rr] - t[top + rr] - t[bot + l] + t[top + l];
    };

    LocalStats out;
    out.width = w;
    out.height = h;
    out.mean.resize(img.size());
    out.stddev.resize(img.size());
    const std::int64_t n = static_cast<std::int64_t>(window) * window;
    const double dn = static_cast<double>(n);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const auto s = box(sum, x, y);
            const auto s2 = box(sq, x, y);
            const auto var_num = n * s2 - s * s;  // n^2 * variance, exact
            const auto i = static_cast<std::size_t>(y) * static_cast<std::size_t>(w) +
                           static_cast<std::size_t>(x);
            out.mean[i] = static_cast<double>(s) / dn;
            out.stddev[i] = std::sqrt(static_cast<double>(std::max<std::int64_t>(var_num, 0))) / dn;
        }
    }
    return out;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// One-dimensional squared distance transform over the lower envelope of
// parabolas rooted at finite samples. Infinite samples contribute nothing.
void edt_1d(std::span<const double> f, std::span<double> out, std::vector<int>& v,
            std::vector<double>& z) {
    const int n = static_cast<int>(f.size());
    v.resize(static_cast<std::size_t>(n));
    z.resize(static_cast<std::size_t>(n) + 1);
    int k = -1;
    for (int q = 0; q < n; ++q) {
        const double fq = f[static_cast<std::size_t>(q)];
        if (fq == kInf) continue;
        while (k >= 0) {
            const int p = v[static_cast<std::size_t>(k)];
            const double s = ((fq + double(q) * q) - (f[static_cast<std::size_t>(p)] + double(p) * p)) /
                             (2.0 * (q - p));
            if (s <= z[static_cast<std::size_t>(k)]) {
                --k;
            } else {
                ++k;
                v[static_cast<std::size_t>(k)] = q;
                z[static_cast<std::size_t>(k)] = s;
                z[static_cast<std::size_t>(k) + 1] = kInf;
                break;
            }
        }
        if (k < 0) {
            k = 0;
            v[0] = q;
            z[0] = -kInf;
            z[1] = kInf;
        }
    }
    if (k < 0) {
        std::fill(out.begin(), out.end(), kInf);
        return;
    }
    int j = 0;
    for (int q = 0; q < n; ++q) {
        while (z[static_cast<std::size_t>(j) + 1] < q) ++j;
        const int p = v[static_cast<std::size_t>(j)];
        const double d = q - p;
        out[static_cast<std::size_t>(q)] = d * d + f[static_cast<std::size_t>(p)];
    }
}

}  // namespace

std::vector<double> squared_distance_transform(const BinaryImage& seed) {
    const int w = seed.width();
    const int h = seed.height();
    const auto uw = static_cast<std::size_t>(w);
    std::vector<double> grid(seed.size());
    for (std::size_t i = 0; i < seed.size(); ++i) grid[i] = seed.at(i) ? 0.0 : kInf;

    std::vector<int> v;
    std::vector<double> z;
    std::vector<double> col(static_cast<std::size_t>(h));
    std::vector<double> col_out(static_cast<std::size_t>(h));
    for (int x = 0; x < w; ++x) {
        for (int y = 0; y < h; ++y) col[static_cast<std::size_t>(y)] = grid[static_cast<std::size_t>(y) * uw + static_cast<std::size_t>(x)];
        edt_1d(col, col_out, v, z);
        for (int y = 0; y < h; ++y) grid[static_cast<std::size_t>(y) * uw + static_cast<std::size_t>(x)] = col_out[static_cast<std::size_t>(y)];
    }
    std::vector<double> row_out(uw);
    for (int y = 0; y < h; ++y) {
        std::span<double> row(grid.data() + static_cast<std::size_t>(y) * uw, uw);
        edt_1d(row, row_out, v, z);
        std::copy(row_out.begin(), row_out.end(), row.begin());
    }
    return grid;
}

DistanceField distance_transform(const BinaryImage& seed) {
    if (seed.count() == 0) throw EmptySeedError("distance_transform: seed set is empty");
    DistanceField out;
    out.width = seed.width();
    out.height = seed.height();
    out.dist = squared_distance_transform(seed);
    for (auto& d : out.dist) d = std::sqrt(d);
    return out;
}

BinaryImage extract_contour(const BinaryImage& b) {
    BinaryImage out(b.width(), b.height());
    for (int y = 0; y < b.height(); ++y) {
        for (int x = 0; x < b.width(); ++x) {
            if (!b(x, y)) continue;
            const bool edge = !b.at_or_background(x - 1, y) || !b.at_or_background(x + 1, y) ||
                              !b.at_or_background(x, y - 1) || !b.at_or_background(x, y + 1);
            if (edge) out.set(x, y, true);
        }
    }
    return out;
}

namespace {

// Ring order P2..P9: N, NE, E, SE, S, SW, W, NW.
constexpr std::array<int, 8> kRingDx{0, 1, 1, 1, 0, -1, -1, -1};
constexpr std::array<int, 8> kRingDy{-1, -1, 0, 1, 1, 1, 0, -1};

bool thinning_deletable(const BinaryImage& b, int x, int y, bool first_subpass) {
    std::array<int, 8> p{};
    int count = 0;
    for (std::size_t i = 0; i < 8; ++i) {
        p[i] = b.at_or_background(x + kRingDx[i], y + kRingDy[i]) ? 1 : 0;
        count += p[i];
    }
    if (count < 2 || count > 6) return false;
    int transitions = 0;
    for (std::size_t i = 0; i < 8; ++i) {
        if (p[i] == 0 && p[(i + 1) % 8] == 1) ++transitions;
    }
    if (transitions != 1) return false;
    const int n = p[0], e = p[2], s = p[4], w = p[6];
    if (first_subpass) return n * e * s == 0 && e * s * w == 0;
    return n * e * w == 0 && n * s * w == 0;
}

}  // namespace

BinaryImage skeletonize(const BinaryImage& b) {
    BinaryImage img = b;
    if (img.size() == 0) return img;
    std::vector<std::pair<int, int>> candidates;
    bool changed = true;
    while (changed) {
        changed = false;
        for (const bool first : {true, false}) {
            candidates.clear();
            for (int y = 0; y < img.height(); ++y) {
                for (int x = 0; x < img.width(); ++x) {
                    if (img(x, y) && thinning_deletable(img, x, y, first)) candidates.emplace_back(x, y);
                }
            }
            for (const auto& [x, y] : candidates) {
                if (thinning_deletable(img, x, y, first)) {
                    img.set(x, y, false);
                    changed = true;
                }
            }
        }
    }
    return img;
}

namespace {

std::vector<double> gaussian_smooth(const GrayImage& img, double sigma) {
    const int w = img.width();
    const int h = img.height();
    std::vector<double> src(img.size());
    for (std::size_t i = 0; i < img.size(); ++i) src[i] = img.pixels()[i];
    if (sigma <= 0.0) return src;

    const int radius = static_cast<int>(std::ceil(3.0 * sigma));
    std::vector<double> kernel(static_cast<std::size_t>(2 * radius + 1));
    double total = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        const double v = std::exp(-(i * i) / (2.0 * sigma * sigma));
        kernel[static_cast<std::size_t>(i + radius)] = v;
        total += v;
    }
    for (auto& v : kernel) v /= total;

    auto at = [w](int x, int y) { return static_cast<std::size_t>(y) * static_cast<std::size_t>(w) + static_cast<std::size_t>(x); };
    std::vector<double> tmp(src.size());
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int i = -radius; i <= radius; ++i) {
                acc += kernel[static_cast<std::size_t>(i + radius)] * src[at(std::clamp(x + i, 0, w - 1), y)];
            }
            tmp[at(x, y)] = acc;
        }
    }
    std::vector<double> out(src.size());
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int i = -radius; i <= radius; ++i) {
                acc += kernel[static_cast<std::size_t>(i + radius)] * tmp[at(x, std::clamp(y + i, 0, h - 1))];
            }
            out[at(x, y)] = acc;
        }
    }
    return out;
}

}  // namespace

BinaryImage detect_edges(const GrayImage& img, const EdgeOptions& opts) {
    if (opts.low < 0.0 || opts.low > opts.high) {
        throw InvalidParameter("detect_edges: require 0 <= low <= high");
    }
    if (opts.sigma < 0.0) throw InvalidParameter("detect_edges: sigma must be >= 0");

    const int w = img.width();
    const int h = img.height();
    const auto smooth = gaussian_smooth(img, opts.sigma);
    auto idx = [w](int x, int y) { return static_cast<std::size_t>(y) * static_cast<std::size_t>(w) + static_cast<std::size_t>(x); };
    auto s = [&](int x, int y) { return smooth[idx(std::clamp(x, 0, w - 1), std::clamp(y, 0, h - 1))]; };

    std::vector<double> mag(img.size());
    std::vector<double> gxs(img.size());
    std::vector<double> gys(img.size());
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const double gx = (s(x + 1, y - 1) + 2 * s(x + 1, y) + s(x + 1, y + 1)) -
                              (s(x - 1, y - 1) + 2 * s(x - 1, y) + s(x - 1, y + 1));
            const double gy = (s(x - 1, y + 1) + 2 * s(x, y + 1) + s(x + 1, y + 1)) -
                              (s(x - 1, y - 1) + 2 * s(x, y - 1) + s(x + 1, y - 1));
            gxs[idx(x, y)] = gx;
            gys[idx(x, y)] = gy;
            mag[idx(x, y)] = std::hypot(gx, gy);
        }
    }
    auto m = [&](int x, int y) {
        return (x < 0 || y < 0 || x >= w || y >= h) ? 0.0 : mag[idx(x, y)];
    };

    // tan(22.5 deg)
    constexpr double kTan = 0.41421356237309503;
    std::vector<std::uint8_t> state(img.size(), 0);  // 1 weak, 2 strong
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const double g = mag[idx(x, y)];
            if (g < opts.low) continue;
            const double ax = std::abs(gxs[idx(x, y)]);
            const double ay = std::abs(gys[idx(x, y)]);
            int dx = 0;
            int dy = 0;
            if (ay <= kTan * ax) {
                dx = 1;
            } else if (ax <= kTan * ay) {
                dy = 1;
            } else if (gxs[idx(x, y)] * gys[idx(x, y)] > 0) {
                dx = 1;
                dy = 1;
            } else {
                dx = 1;
                dy = -1;
            }
            // Plateaus resolve toward the positive-direction pixel.
            if (g >= m(x - dx, y - dy) && g > m(x + dx, y + dy)) {
                state[idx(x, y)] = g >= opts.high ? 2 : 1;
            }
        }
    }

    BinaryImage out(w, h);
    std::vector<std::pair<int, int>> stack;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (state[idx(x, y)] != 2 || out(x, y)) continue;
            out.set(x, y, true);
            stack.emplace_back(x, y);
            while (!stack.empty()) {
                const auto [cx, cy] = stack.back();
                stack.pop_back();
                for (int ny = cy - 1; ny <= cy + 1; ++ny) {
                    for (int nx = cx - 1; nx <= cx + 1; ++nx) {
                        if (nx < 0 || ny < 0 || nx >= w || ny >= h || out(nx, ny)) continue;
                        if (state[idx(nx, ny)] == 0) continue;
                        out.set(nx, ny, true);
                        stack.emplace_back(nx, ny);
                    }
                }
            }
        }
    }
    return out;
}

BinaryImage detect_edges(const GrayImage& img, double low, double high) {
    return detect_edges(img, EdgeOptions{low, high, 1.0});
}

Components connected_components(const BinaryImage& b) {
    Components out;
    out.width = b.width();
    out.height = b.height();
    out.labels.assign(b.size(), 0);
    const int w = b.width();
    const int h = b.height();
    auto idx = [w](int x, int y) { return static_cast<std::size_t>(y) * static_cast<std::size_t>(w) + static_cast<std::size_t>(x); };
    std::vector<std::pair<int, int>> stack;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (!b(x, y) || out.labels[idx(x, y)] != 0) continue;
            const int label = static_cast<int>(out.sizes.size()) + 1;
            std::size_t size = 0;
            out.labels[idx(x, y)] = label;
            stack.emplace_back(x, y);
            while (!stack.empty()) {
                const auto [cx, cy] = stack.back();
                stack.pop_back();
                ++size;
                for (int ny = cy - 1; ny <= cy + 1; ++ny) {
                    for (int nx = cx - 1; nx <= cx + 1; ++nx) {
                        if (!b.at_or_background(nx, ny) || out.labels[idx(nx, ny)] != 0) continue;
                        out.labels[idx(nx, ny)] = label;
                        stack.emplace_back(nx, ny);
                    }
                }
            }
            out.sizes.push_back(size);
        }
    }
    return out;
}

BinaryImage remove_small_components(const BinaryImage& b, std::size_t min_size) {
    if (b.size() == 0 || min_size <= 1) return b;
    const auto cc = connected_components(b);
    BinaryImage out(b.width(), b.height());
    for (std::size_t i = 0; i < b.size(); ++i) {
        const int label = cc.labels[i];
        if (label != 0 && cc.sizes[static_cast<std::size_t>(label - 1)] >= min_size) out.set(i, true);
    }
    return out;
}

GrayImage median3x3(const GrayImage& img) {
    GrayImage out(img.width(), img.height());
    std::array<std::uint8_t, 9> buf{};
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
            std::size_t k = 0;
            for (int dy = -1; dy <= 1; ++dy) {
                for (int dx = -1; dx <= 1; ++dx) buf[k++] = img.clamped(x + dx, y + dy);
            }
            std::nth_element(buf.begin(), buf.begin() + 4, buf.end());
            out(x, y) = buf[4];
        }
    }
    return out;
}

}  // namespace binbench
