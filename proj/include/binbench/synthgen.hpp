#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "binbench/image.hpp"

namespace binbench::synth {

class InvalidSpecError : public Error {
public:
    using Error::Error;
};

/// SplitMix64. Fixed constants so fixtures reproduce across platforms and
/// languages:
///   state += 0x9E3779B97F4A7C15
///   z = (state ^ (state >> 30)) * 0xBF58476D1CE4E5B9
///   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
///   return z ^ (z >> 31)
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next();
    /// Uniform integer in [lo, hi] by modulo reduction.
    int uniform(int lo, int hi);
    /// True with probability per_mille / 1000.
    bool chance(int per_mille);
    /// Approximately standard normal, scaled by 4096 (Irwin-Hall sum of 12
    /// 12-bit uniforms). Integer arithmetic only.
    std::int64_t normal_q12();

private:
    std::uint64_t state_;
};

enum class Degradation { BleedThrough, FadedInk, IlluminationGradient, Noise, Blur, Lines, Fibers };

std::string_view to_string(Degradation d);
Degradation parse_degradation(std::string_view s);
const std::vector<Degradation>& all_degradations();
/// Intensity used when a profile enables a degradation without an override.
double default_intensity(Degradation d);

struct DegradationSpec {
    std::uint64_t seed = 1;
    int width = 256;
    int height = 256;
    int strokes = 14;
    int stroke_width_min = 2;
    int stroke_width_max = 4;
    /// Enabled degradations and their intensities in [0,1].
    std::map<Degradation, double> degradations;
    bool require_foreground = true;

    /// Throws InvalidSpecError.
    void validate() const;
};

struct SyntheticPage {
    GrayImage page;
    BinaryImage ground_truth;
};

/// Renders random quadratic strokes, records the exact stroke mask as ground
/// truth, then degrades only the gray page.
SyntheticPage generate(const DegradationSpec& spec);

struct CorpusEntry {
    std::string id;
    std::string page_path;  // relative to the manifest directory
    std::string gt_path;
    std::vector<Degradation> degradations;
    std::uint64_t seed = 0;
};

struct CorpusOptions {
    int width = 256;
    int height = 256;
    int strokes = 14;
    int stroke_width_min = 2;
    int stroke_width_max = 4;
    /// Overrides default_intensity() for enabled degradations.
    std::map<Degradation, double> intensity;
};

const std::vector<std::string>& profile_names();

/// Degradations a named profile enables on page `index`. Throws
/// InvalidSpecError for an unknown profile.
std::vector<Degradation> profile_degradations(std::string_view profile, std::size_t index);

/// Spec for page `index` of a corpus: seed = base_seed + index.
DegradationSpec corpus_page_spec(std::string_view profile, std::uint64_t base_seed,
                                 std::size_t index, const CorpusOptions& opts);

/// Writes pages/<id>.pgm, gt/<id>.pbm and manifest.json under `outdir`.
/// Returns the manifest path. Throws IoError when outdir is unwritable.
std::filesystem::path generate_corpus(std::size_t n, std::uint64_t base_seed,
                                      std::string_view profile,
                                      const std::filesystem::path& outdir,
                                      const CorpusOptions& opts = {});

std::vector<CorpusEntry> read_corpus_manifest(const std::filesystem::path& manifest);

}  // namespace binbench::synth
