#include "binbench/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>

#include "binbench/pnm.hpp"

namespace binbench::synth {

std::uint64_t SplitMix64::next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

int SplitMix64::uniform(int lo, int hi) {
    if (hi <= lo) return lo;
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(next() % span);
}

bool SplitMix64::chance(int per_mille) {
    return static_cast<int>(next() % 1000) < per_mille;
}

std::int64_t SplitMix64::normal_q12() {
    std::int64_t sum = 0;
    for (int i = 0; i < 12; ++i) sum += static_cast<std::int64_t>(next() >> 52);
    // mean of the sum is 12 * 4095 / 2
    return (2 * sum - 12 * 4095) / 2;
}

std::string_view to_string(Degradation d) {
    switch (d) {
        case Degradation::BleedThrough: return "bleed-through";
        case Degradation::FadedInk: return "faded-ink";
        case Degradation::IlluminationGradient: return "illumination-gradient";
        case Degradation::Noise: return "noise";
        case Degradation::Blur: return "blur";
        case Degradation::Lines: return "lines";
        case Degradation::Fibers: return "fibers";
    }
    return "?";
}

const std::vector<Degradation>& all_degradations() {
    static const std::vector<Degradation> all{
        Degradation::BleedThrough, Degradation::FadedInk, Degradation::IlluminationGradient,
        Degradation::Noise,        Degradation::Blur,     Degradation::Lines,
        Degradation::Fibers};
    return all;
}

Degradation parse_degradation(std::string_view s) {
    for (const auto d : all_degradations()) {
        if (to_string(d) == s) return d;
    }
    throw InvalidSpecError("unknown degradation '" + std::string(s) + "'");
}

double default_intensity(Degradation d) {
    switch (d) {
        case Degradation::BleedThrough: return 0.4;
        case Degradation::FadedInk: return 0.5;
        case Degradation::IlluminationGradient: return 0.6;
        case Degradation::Noise: return 0.3;
        case Degradation::Blur: return 0.3;
        case Degradation::Lines: return 0.5;
        case Degradation::Fibers: return 0.5;
    }
    return 0.0;
}

void DegradationSpec::validate() const {
    if (width < 16 || height < 16 || width > 8192 || height > 8192) {
        throw InvalidSpecError("page must be between 16 and 8192 pixels per side");
    }
    if (strokes < 0) throw InvalidSpecError("stroke count must be >= 0");
    if (strokes == 0 && require_foreground) {
        throw InvalidSpecError("zero strokes cannot produce a nonempty ground truth");
    }
    if (stroke_width_min < 1 || stroke_width_min > stroke_width_max || stroke_width_max > 15) {
        throw InvalidSpecError("stroke width range must satisfy 1 <= min <= max <= 15");
    }
    if (2 * (stroke_width_max + 2) >= std::min(width, height)) {
        throw InvalidSpecError("page too small for the stroke width range");
    }
    for (const auto& [d, v] : degradations) {
        if (!(v >= 0.0 && v <= 1.0)) {
            throw InvalidSpecError(std::string(to_string(d)) + " intensity must lie in [0,1]");
        }
    }
}

namespace {

// Independent streams so that enabling a degradation never perturbs the
// stroke geometry (and therefore the ground truth).
enum Stream : std::uint64_t {
    kStrokes = 0,
    kFade = 0x5ADEULL,
    kBleed = 0xB1EEDULL,
    kIllumination = 0x111AULL,
    kLines = 0x11FEULL,
    kFibers = 0xF1BEULL,
    kNoise = 0x401CEULL,
};

SplitMix64 stream(std::uint64_t seed, Stream s) {
    return SplitMix64(seed ^ (static_cast<std::uint64_t>(s) * 0xD1B54A32D192ED03ULL));
}

int per_mille(double v) { return static_cast<int>(std::lround(v * 1000.0)); }

struct Point {
    int x;
    int y;
};

struct Stroke {
    int width;
    int ink;
    std::vector<Point> samples;
};

Stroke random_stroke(SplitMix64& rng, const DegradationSpec& spec) {
    Stroke s;
    s.width = rng.uniform(spec.stroke_width_min, spec.stroke_width_max);
    s.ink = rng.uniform(20, 80);
    const int margin = spec.stroke_width_max + 2;
    const int max_x = spec.width - 1 - margin;
    const int max_y = spec.height - 1 - margin;
    const int reach = std::max(8, std::min(spec.width, spec.height) / 4);
    const Point p0{rng.uniform(margin, max_x), rng.uniform(margin, max_y)};
    const Point p2{std::clamp(p0.x + rng.uniform(-reach, reach), margin, max_x),
                   std::clamp(p0.y + rng.uniform(-reach, reach), margin, max_y)};
    const Point p1{std::clamp((p0.x + p2.x) / 2 + rng.uniform(-reach / 2, reach / 2), margin, max_x),
                   std::clamp((p0.y + p2.y) / 2 + rng.uniform(-reach / 2, reach / 2), margin, max_y)};

    const std::int64_t n = 2 * (std::abs(p1.x - p0.x) + std::abs(p1.y - p0.y) +
                                std::abs(p2.x - p1.x) + std::abs(p2.y - p1.y)) + 1;
    const std::int64_t nn = n * n;
    for (std::int64_t i = 0; i <= n; ++i) {
        const std::int64_t a = n - i;
        const std::int64_t b = i;
        // quadratic Bezier in exact integer arithmetic, rounded to nearest
        const std::int64_t x = (a * a * p0.x + 2 * a * b * p1.x + b * b * p2.x + nn / 2) / nn;
        const std::int64_t y = (a * a * p0.y + 2 * a * b * p1.y + b * b * p2.y + nn / 2) / nn;
        const Point p{static_cast<int>(x), static_cast<int>(y)};
        if (s.samples.empty() || s.samples.back().x != p.x || s.samples.back().y != p.y) {
            s.samples.push_back(p);
        }
    }
    return s;
}

// Calls fn(x, y) for every pixel of a disc of diameter `width` around p.
template <typename Fn>
void stamp(Point p, int width, int w, int h, Fn&& fn) {
    const int odd = width % 2;
    const int off = odd ? 0 : 1;
    const int lo = -(width / 2);
    const int hi = odd ? width / 2 : width / 2 - 1;
    for (int dy = lo; dy <= hi; ++dy) {
        for (int dx = lo; dx <= hi; ++dx) {
            const int ex = 2 * dx + off;
            const int ey = 2 * dy + off;
            if (ex * ex + ey * ey > width * width) continue;
            const int x = p.x + dx;
            const int y = p.y + dy;
            if (x >= 0 && y >= 0 && x < w && y < h) fn(x, y);
        }
    }
}

class Canvas {
public:
    Canvas(int w, int h, int fill) : w_(w), h_(h), v_(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), fill) {}
    int& at(int x, int y) { return v_[static_cast<std::size_t>(y) * static_cast<std::size_t>(w_) + static_cast<std::size_t>(x)]; }
    int get_clamped(int x, int y) const {
        x = std::clamp(x, 0, w_ - 1);
        y = std::clamp(y, 0, h_ - 1);
        return v_[static_cast<std::size_t>(y) * static_cast<std::size_t>(w_) + static_cast<std::size_t>(x)];
    }
    int width() const { return w_; }
    int height() const { return h_; }
    std::vector<int>& values() { return v_; }

private:
    int w_;
    int h_;
    std::vector<int> v_;
};

void apply_bleed(Canvas& page, const BinaryImage& gt, const DegradationSpec& spec, double intensity) {
    auto rng = stream(spec.seed, kBleed);
    const int opacity = per_mille(intensity);
    const int w = page.width();
    const int h = page.height();
    for (int i = 0; i < spec.strokes; ++i) {
        const auto s = random_stroke(rng, spec);
        for (const auto& p : s.samples) {
            // reverse side shows through mirrored
            stamp({w - 1 - p.x, p.y}, s.width, w, h, [&](int x, int y) {
                if (gt(x, y)) return;
                int& v = page.at(x, y);
                const int blended = v - (v - s.ink) * opacity / 1000;
                v = std::min(v, blended);
            });
        }
    }
}

void apply_illumination(Canvas& page, const DegradationSpec& spec, double intensity) {
    auto rng = stream(spec.seed, kIllumination);
    const int w = page.width();
    const int h = page.height();
    const int shade_max = per_mille(intensity) / 5;  // gray levels at full ramp
    const int mode = rng.uniform(0, 4);
    const int cx = rng.uniform(0, w - 1);
    const int cy = rng.uniform(0, h - 1);
    const std::int64_t far_x = std::max(cx, w - 1 - cx);
    const std::int64_t far_y = std::max(cy, h - 1 - cy);
    const std::int64_t far2 = std::max<std::int64_t>(far_x * far_x + far_y * far_y, 1);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            std::int64_t ramp = 0;  // per mille
            switch (mode) {
                case 0: ramp = 1000LL * x / (w - 1); break;
                case 1: ramp = 1000LL * (w - 1 - x) / (w - 1); break;
                case 2: ramp = 1000LL * y / (h - 1); break;
                case 3: ramp = 1000LL * (h - 1 - y) / (h - 1); break;
                default: {
                    const std::int64_t dx = x - cx;
                    const std::int64_t dy = y - cy;
                    ramp = 1000 * (dx * dx + dy * dy) / far2;
                }
            }
            page.at(x, y) -= static_cast<int>(shade_max * ramp / 1000);
        }
    }
}

void apply_lines(Canvas& page, const DegradationSpec& spec, int background, double intensity) {
    auto rng = stream(spec.seed, kLines);
    const int spacing = std::max(8, page.height() / 8);
    const int first = rng.uniform(2, spacing - 1);
    const int value = background - per_mille(intensity) * 70 / 1000;
    for (int y = first; y < page.height(); y += spacing) {
        for (int x = 0; x < page.width(); ++x) page.at(x, y) = std::min(page.at(x, y), value);
    }
}

void apply_fibers(Canvas& page, const DegradationSpec& spec, double intensity) {
    auto rng = stream(spec.seed, kFibers);
    static constexpr int kDx[8] = {1, 1, 0, -1, -1, -1, 0, 1};
    static constexpr int kDy[8] = {0, 1, 1, 1, 0, -1, -1, -1};
    const int pm = per_mille(intensity);
    const int count = 4 + pm * 8 / 1000;
    const int delta = 15 + pm * 40 / 1000;
    const int w = page.width();
    const int h = page.height();
    for (int f = 0; f < count; ++f) {
        int x = rng.uniform(0, w - 1);
        int y = rng.uniform(0, h - 1);
        int dir = rng.uniform(0, 7);
        const int length = rng.uniform(w / 4, w / 2);
        for (int step = 0; step < length; ++step) {
            int& v = page.at(x, y);
            v = std::max(0, v - delta);
            if (rng.chance(250)) dir = (dir + (rng.chance(500) ? 1 : 7)) % 8;
            x += kDx[dir];
            y += kDy[dir];
            if (x < 0 || y < 0 || x >= w || y >= h) break;
        }
    }
}

void apply_blur(Canvas& page, double intensity) {
    const int r = per_mille(intensity) >= 500 ? 2 : 1;
    const Canvas src = page;
    const int n = (2 * r + 1) * (2 * r + 1);
    for (int y = 0; y < page.height(); ++y) {
        for (int x = 0; x < page.width(); ++x) {
            int sum = 0;
            for (int dy = -r; dy <= r; ++dy) {
                for (int dx = -r; dx <= r; ++dx) sum += src.get_clamped(x + dx, y + dy);
            }
            page.at(x, y) = (sum + n / 2) / n;
        }
    }
}

void apply_noise(Canvas& page, const DegradationSpec& spec, double intensity) {
    auto rng = stream(spec.seed, kNoise);
    const std::int64_t sigma_milli = per_mille(intensity) * 24;
    const std::uint64_t impulse_per_100k = static_cast<std::uint64_t>(per_mille(intensity)) * 2;
    for (auto& v : page.values()) {
        v += static_cast<int>(rng.normal_q12() * sigma_milli / (4096 * 1000));
        if (rng.next() % 100000 < impulse_per_100k) v = (rng.next() & 1) ? 255 : 0;
    }
}

}  // namespace

SyntheticPage generate(const DegradationSpec& spec) {
    spec.validate();
    const int w = spec.width;
    const int h = spec.height;
    auto has = [&](Degradation d) { return spec.degradations.count(d) != 0; };
    auto level = [&](Degradation d) { return spec.degradations.at(d); };

    auto rng = stream(spec.seed, kStrokes);
    const int background = rng.uniform(190, 230);
    std::vector<Stroke> strokes;
    for (int i = 0; i < spec.strokes; ++i) strokes.push_back(random_stroke(rng, spec));

    Canvas page(w, h, background);
    BinaryImage gt(w, h);
    auto fade_rng = stream(spec.seed, kFade);
    const int fade = has(Degradation::FadedInk) ? per_mille(level(Degradation::FadedInk)) * 3 / 4 : 0;
    for (const auto& s : strokes) {
        const int n = static_cast<int>(s.samples.size());
        int fade_begin = n;
        int fade_end = n;
        if (fade > 0 && fade_rng.chance(600)) {
            fade_begin = fade_rng.uniform(0, n - 1);
            fade_end = std::min(n, fade_begin + fade_rng.uniform(std::max(1, n / 4), n));
        }
        const int faded_ink = s.ink + (background - s.ink) * fade / 1000;
        for (int i = 0; i < n; ++i) {
            const int ink = (i >= fade_begin && i < fade_end) ? faded_ink : s.ink;
            stamp(s.samples[static_cast<std::size_t>(i)], s.width, w, h, [&](int x, int y) {
                gt.set(x, y, true);
                page.at(x, y) = ink;
            });
        }
    }

    if (has(Degradation::BleedThrough)) apply_bleed(page, gt, spec, level(Degradation::BleedThrough));
    if (has(Degradation::Lines)) apply_lines(page, spec, background, level(Degradation::Lines));
    if (has(Degradation::Fibers)) apply_fibers(page, spec, level(Degradation::Fibers));
    if (has(Degradation::IlluminationGradient)) {
        apply_illumination(page, spec, level(Degradation::IlluminationGradient));
    }
    if (has(Degradation::Blur)) apply_blur(page, level(Degradation::Blur));
    if (has(Degradation::Noise)) apply_noise(page, spec, level(Degradation::Noise));

    GrayImage out(w, h);
    auto px = out.pixels();
    const auto& vals = page.values();
    for (std::size_t i = 0; i < px.size(); ++i) px[i] = static_cast<std::uint8_t>(std::clamp(vals[i], 0, 255));
    if (spec.require_foreground && gt.count() == 0) {
        throw InvalidSpecError("spec produced an empty ground truth");
    }
    return {std::move(out), std::move(gt)};
}

namespace {

using D = Degradation;

// Degradation labels of the ten PHIBC images, mapped onto the
// generator's knobs (colour/multi-degraded background -> illumination,
// degraded background/spots/ink noise -> noise, visible fibres -> fibers).
const std::vector<std::vector<Degradation>>& phibc_rows() {
    static const std::vector<std::vector<Degradation>> rows{
        {D::FadedInk, D::Noise, D::IlluminationGradient},
        {D::BleedThrough},
        {D::BleedThrough, D::Noise},
        {D::FadedInk, D::IlluminationGradient, D::Noise},
        {D::FadedInk, D::IlluminationGradient, D::Fibers},
        {D::FadedInk, D::Lines, D::Noise},
        {D::FadedInk, D::Lines, D::Noise, D::IlluminationGradient},
        {D::Blur, D::FadedInk, D::Noise},
        {D::FadedInk, D::Noise},
        {D::Lines, D::Blur, D::IlluminationGradient, D::Fibers, D::BleedThrough},
    };
    return rows;
}

}  // namespace

const std::vector<std::string>& profile_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> n{"clean", "phibc-like", "heavy"};
        for (const auto d : all_degradations()) n.emplace_back(to_string(d));
        return n;
    }();
    return names;
}

std::vector<Degradation> profile_degradations(std::string_view profile, std::size_t index) {
    std::vector<Degradation> out;
    if (profile == "clean") return out;
    if (profile == "phibc-like") {
        out = phibc_rows()[index % phibc_rows().size()];
    } else if (profile == "heavy") {
        out = all_degradations();
    } else {
        bool found = false;
        for (const auto d : all_degradations()) {
            if (to_string(d) == profile) {
                out.push_back(d);
                found = true;
            }
        }
        if (!found) {
            std::string valid;
            for (const auto& n : profile_names()) valid += (valid.empty() ? "" : ", ") + n;
            throw InvalidSpecError("unknown profile '" + std::string(profile) + "' (valid: " + valid + ")");
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

DegradationSpec corpus_page_spec(std::string_view profile, std::uint64_t base_seed,
                                 std::size_t index, const CorpusOptions& opts) {
    DegradationSpec spec;
    spec.seed = base_seed + index;
    spec.width = opts.width;
    spec.height = opts.height;
    spec.strokes = opts.strokes;
    spec.stroke_width_min = opts.stroke_width_min;
    spec.stroke_width_max = opts.stroke_width_max;
    for (const auto d : profile_degradations(profile, index)) {
        const auto it = opts.intensity.find(d);
        spec.degradations[d] = it != opts.intensity.end() ? it->second : default_intensity(d);
    }
    return spec;
}

std::filesystem::path generate_corpus(std::size_t n, std::uint64_t base_seed, std::string_view profile,
                                      const std::filesystem::path& outdir, const CorpusOptions& opts) {
    if (n == 0) throw InvalidSpecError("corpus size must be >= 1");
    // resolve the profile before touching the filesystem
    (void)profile_degradations(profile, 0);

    std::error_code ec;
    std::filesystem::create_directories(outdir / "pages", ec);
    if (!ec) std::filesystem::create_directories(outdir / "gt", ec);
    if (ec) throw IoError("cannot create corpus directory " + outdir.string() + ": " + ec.message());

    nlohmann::json images = nlohmann::json::array();
    for (std::size_t i = 0; i < n; ++i) {
        const auto spec = corpus_page_spec(profile, base_seed, i, opts);
        const auto page = generate(spec);
        char id[32];
        std::snprintf(id, sizeof id, "page_%04zu", i);
        const std::string page_rel = std::string("pages/") + id + ".pgm";
        const std::string gt_rel = std::string("gt/") + id + ".pbm";
        pnm::write_pgm(outdir / page_rel, page.page);
        pnm::write_pbm(outdir / gt_rel, page.ground_truth);
        nlohmann::json labels = nlohmann::json::array();
        for (const auto& [d, _] : spec.degradations) labels.push_back(std::string(to_string(d)));
        images.push_back({{"id", id},
                          {"page_path", page_rel},
                          {"gt_path", gt_rel},
                          {"degradations", labels},
                          {"seed", spec.seed}});
    }
    const nlohmann::json manifest{
        {"profile", std::string(profile)}, {"base_seed", base_seed}, {"images", images}};
    const auto path = outdir / "manifest.json";
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out << manifest.dump(2) << '\n';
    if (!out) throw IoError("write failed for " + path.string());
    return path;
}

std::vector<CorpusEntry> read_corpus_manifest(const std::filesystem::path& manifest) {
    std::ifstream in(manifest);
    if (!in) throw DecodeError("cannot open " + manifest.string());
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw DecodeError(manifest.string() + ": " + e.what());
    }
    if (!doc.contains("images") || !doc["images"].is_array()) {
        throw DecodeError(manifest.string() + ": missing 'images' array");
    }
    std::vector<CorpusEntry> out;
    try {
        for (const auto& img : doc["images"]) {
            CorpusEntry e;
            e.id = img.at("id").get<std::string>();
            e.page_path = img.at("page_path").get<std::string>();
            e.gt_path = img.at("gt_path").get<std::string>();
            if (img.contains("degradations")) {
                for (const auto& d : img["degradations"]) e.degradations.push_back(parse_degradation(d.get<std::string>()));
            }
            if (img.contains("seed")) e.seed = img["seed"].get<std::uint64_t>();
            out.push_back(std::move(e));
        }
    } catch (const nlohmann::json::exception& e) {
        throw DecodeError(manifest.string() + ": " + e.what());
    }
    return out;
}

}  // namespace binbench::synth
