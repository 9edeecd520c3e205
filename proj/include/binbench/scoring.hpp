#pragma once

#include <array>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "binbench/metrics.hpp"

namespace binbench::scoring {

class MissingCellError : public Error {
public:
    using Error::Error;
};

class InsufficientMethodsError : public Error {
public:
    using Error::Error;
};

enum class Measure { FMeasure, PseudoFMeasure, Psnr, Drd, Mpm, Nrm };

inline constexpr std::size_t kMeasureCount = 6;
inline constexpr std::array<Measure, kMeasureCount> kMeasures{
    Measure::FMeasure, Measure::PseudoFMeasure, Measure::Psnr,
    Measure::Drd,      Measure::Mpm,            Measure::Nrm};

constexpr bool higher_is_better(Measure m) {
    return m == Measure::FMeasure || m == Measure::PseudoFMeasure || m == Measure::Psnr;
}

double value_of(const metrics::MetricReport& r, Measure m);

using MeasureRow = std::array<double, kMeasureCount>;

/// method x image -> MetricReport. Method and image ids are kept sorted.
class ResultTable {
public:
    void set(const std::string& method, const std::string& image, const metrics::MetricReport& r);

    const std::vector<std::string>& methods() const noexcept { return methods_; }
    const std::vector<std::string>& images() const noexcept { return images_; }

    /// Throws MissingCellError.
    const metrics::MetricReport& at(const std::string& method, const std::string& image) const;
    bool complete() const noexcept;
    /// Throws MissingCellError naming the first absent cell.
    void require_complete() const;

private:
    std::vector<std::string> methods_;
    std::vector<std::string> images_;
    std::map<std::pair<std::string, std::string>, metrics::MetricReport> cells_;
};

/// Per image (in table order), the best value of each measure across methods.
std::vector<MeasureRow> best_per_cell(const ResultTable& t);

/// One term of the relative score: value/best for higher-is-better measures,
/// best/value otherwise. A zero best for a lower-is-better measure scores 1 only
/// for a zero value; an infinite best PSNR scores 1 only for an infinite value.
double score_term(Measure m, double value, double best);

struct ScoreBoard {
    std::vector<std::string> methods;
    std::vector<double> scores;
    std::vector<int> ranks;
};

/// Higher score takes the better (lower) rank; equal scores share the lower number.
std::vector<int> rank(std::span<const double> scores);

/// Throws InsufficientMethodsError for fewer than two methods.
ScoreBoard score(const ResultTable& t);

}  // namespace binbench::scoring
