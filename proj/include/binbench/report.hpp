#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "binbench/metrics.hpp"
#include "binbench/scoring.hpp"

namespace binbench::report {

struct EvalRow {
    std::string image;
    std::string method;
    metrics::MetricReport report;
};

/// Fixed-point rendering; +inf prints as "inf".
std::string format_fixed(double v, int decimals);

/// {"options": {...}, "rows": [{image, method, fmeasure, pfmeasure, psnr, drd,
/// mpm, nrm}]}. Full precision; infinite PSNR is the string "inf".
std::string rows_to_json(const std::vector<EvalRow>& rows, const metrics::EvalOptions& opts);

/// Percent measures print with 2 decimals, the rest at full precision.
std::string rows_to_csv(const std::vector<EvalRow>& rows);

/// Accepts either serialisation above. Throws DecodeError.
std::vector<EvalRow> rows_from_json(std::string_view text);
std::vector<EvalRow> rows_from_csv(std::string_view text);

scoring::ResultTable table_from_rows(const std::vector<EvalRow>& rows);

/// method,score,rank with 4-decimal scores.
std::string scoreboard_to_csv(const scoring::ScoreBoard& board);
std::string scoreboard_to_json(const scoring::ScoreBoard& board);

}  // namespace binbench::report
