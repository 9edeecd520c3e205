#include "binbench/scoring.hpp"

#include <algorithm>
#include <cmath>

namespace binbench::scoring {

double value_of(const metrics::MetricReport& r, Measure m) {
    switch (m) {
        case Measure::FMeasure: return r.f_measure;
        case Measure::PseudoFMeasure: return r.pseudo_f_measure;
        case Measure::Psnr: return r.psnr;
        case Measure::Drd: return r.drd;
        case Measure::Mpm: return r.mpm;
        case Measure::Nrm: return r.nrm;
    }
    return 0.0;
}

namespace {

void insert_sorted(std::vector<std::string>& v, const std::string& s) {
    const auto it = std::lower_bound(v.begin(), v.end(), s);
    if (it == v.end() || *it != s) v.insert(it, s);
}

}  // namespace

void ResultTable::set(const std::string& method, const std::string& image,
                      const metrics::MetricReport& r) {
    insert_sorted(methods_, method);
    insert_sorted(images_, image);
    cells_[{method, image}] = r;
}

const metrics::MetricReport& ResultTable::at(const std::string& method,
                                             const std::string& image) const {
    const auto it = cells_.find({method, image});
    if (it == cells_.end()) {
        throw MissingCellError("result table has no entry for method '" + method + "' on image '" +
                               image + "'");
    }
    return it->second;
}

bool ResultTable::complete() const noexcept {
    return cells_.size() == methods_.size() * images_.size();
}

void ResultTable::require_complete() const {
    for (const auto& img : images_) {
        for (const auto& m : methods_) (void)at(m, img);
    }
}

std::vector<MeasureRow> best_per_cell(const ResultTable& t) {
    t.require_complete();
    std::vector<MeasureRow> best;
    best.reserve(t.images().size());
    for (const auto& img : t.images()) {
        MeasureRow row{};
        for (std::size_t j = 0; j < kMeasureCount; ++j) {
            const auto m = kMeasures[j];
            bool first = true;
            for (const auto& method : t.methods()) {
                const double v = value_of(t.at(method, img), m);
                if (first || (higher_is_better(m) ? v > row[j] : v < row[j])) row[j] = v;
                first = false;
            }
        }
        best.push_back(row);
    }
    return best;
}

double score_term(Measure m, double value, double best) {
    if (higher_is_better(m)) {
        if (std::isinf(best)) return std::isinf(value) ? 1.0 : 0.0;
        if (best == 0.0) return 1.0;  // every method scored 0 on this cell
        return value / best;
    }
    if (best == 0.0) return value == 0.0 ? 1.0 : 0.0;
    return best / value;
}

std::vector<int> rank(std::span<const double> scores) {
    std::vector<int> ranks(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i) {
        int better = 0;
        for (const double other : scores) {
            if (other > scores[i]) ++better;
        }
        ranks[i] = better + 1;
    }
    return ranks;
}

ScoreBoard score(const ResultTable& t) {
    if (t.methods().size() < 2) {
        throw InsufficientMethodsError("scoring needs at least 2 methods, got " +
                                       std::to_string(t.methods().size()));
    }
    const auto best = best_per_cell(t);
    ScoreBoard board;
    board.methods = t.methods();
    for (const auto& method : t.methods()) {
        double total = 0.0;
        for (std::size_t i = 0; i < t.images().size(); ++i) {
            const auto& r = t.at(method, t.images()[i]);
            for (std::size_t j = 0; j < kMeasureCount; ++j) {
                total += score_term(kMeasures[j], value_of(r, kMeasures[j]), best[i][j]);
            }
        }
        board.scores.push_back(total);
    }
    board.ranks = rank(board.scores);
    return board;
}

}  // namespace binbench::scoring
