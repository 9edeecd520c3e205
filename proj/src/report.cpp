#include "binbench/report.hpp"

#include <cmath>
#include <cstdio>
#include <json.hpp>
#include <limits>
#include <sstream>

namespace binbench::report {

namespace {

using nlohmann::json;

constexpr const char* kCsvHeader = "image,method,fmeasure,pfmeasure,psnr,drd,mpm,nrm";

json number_or_inf(double v) {
    if (std::isinf(v)) return "inf";
    return v;
}

double read_number(const json& v, const char* key) {
    if (v.is_string() && v.get<std::string>() == "inf") return std::numeric_limits<double>::infinity();
    if (!v.is_number()) throw DecodeError(std::string("evaluation row: '") + key + "' is not a number");
    return v.get<double>();
}

double parse_double(const std::string& s) {
    if (s == "inf") return std::numeric_limits<double>::infinity();
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw DecodeError("malformed number '" + s + "'");
    }
    if (used != s.size()) throw DecodeError("malformed number '" + s + "'");
    return v;
}

std::string full(double v) {
    if (std::isinf(v)) return "inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

std::string format_fixed(double v, int decimals) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

std::string rows_to_json(const std::vector<EvalRow>& rows, const metrics::EvalOptions& opts) {
    json arr = json::array();
    for (const auto& r : rows) {
        arr.push_back({{"image", r.image},
                       {"method", r.method},
                       {"fmeasure", r.report.f_measure},
                       {"pfmeasure", r.report.pseudo_f_measure},
                       {"psnr", number_or_inf(r.report.psnr)},
                       {"drd", r.report.drd},
                       {"mpm", r.report.mpm},
                       {"nrm", r.report.nrm}});
    }
    const json doc{{"options",
                    {{"nrm_mode", std::string(metrics::to_string(opts.nrm_mode))},
                     {"mpm_normalizer", std::string(metrics::to_string(opts.mpm_normalizer))}}},
                   {"rows", arr}};
    return doc.dump(2) + "\n";
}

std::string rows_to_csv(const std::vector<EvalRow>& rows) {
    std::ostringstream out;
    out << kCsvHeader << '\n';
    for (const auto& r : rows) {
        out << r.image << ',' << r.method << ',' << format_fixed(r.report.f_measure, 2) << ','
            << format_fixed(r.report.pseudo_f_measure, 2) << ',' << full(r.report.psnr) << ','
            << full(r.report.drd) << ',' << full(r.report.mpm) << ',' << full(r.report.nrm) << '\n';
    }
    return out.str();
}

std::vector<EvalRow> rows_from_json(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw DecodeError(std::string("evaluation output: ") + e.what());
    }
    const json* rows = nullptr;
    if (doc.is_array()) {
        rows = &doc;
    } else if (doc.is_object() && doc.contains("rows") && doc["rows"].is_array()) {
        rows = &doc["rows"];
    } else {
        throw DecodeError("evaluation output: expected a 'rows' array");
    }
    std::vector<EvalRow> out;
    for (const auto& r : *rows) {
        if (!r.is_object() || !r.contains("image") || !r.contains("method")) {
            throw DecodeError("evaluation row: missing image or method");
        }
        EvalRow row;
        row.image = r["image"].get<std::string>();
        row.method = r["method"].get<std::string>();
        for (const char* key : {"fmeasure", "pfmeasure", "psnr", "drd", "mpm", "nrm"}) {
            if (!r.contains(key)) throw DecodeError(std::string("evaluation row: missing '") + key + "'");
        }
        row.report.f_measure = read_number(r["fmeasure"], "fmeasure");
        row.report.pseudo_f_measure = read_number(r["pfmeasure"], "pfmeasure");
        row.report.psnr = read_number(r["psnr"], "psnr");
        row.report.drd = read_number(r["drd"], "drd");
        row.report.mpm = read_number(r["mpm"], "mpm");
        row.report.nrm = read_number(r["nrm"], "nrm");
        out.push_back(std::move(row));
    }
    return out;
}

std::vector<EvalRow> rows_from_csv(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    if (!std::getline(in, line) || line != kCsvHeader) {
        throw DecodeError("evaluation CSV: unexpected header");
    }
    std::vector<EvalRow> out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) f.push_back(cell);
        if (f.size() != 8) throw DecodeError("evaluation CSV: expected 8 fields in '" + line + "'");
        EvalRow row;
        row.image = f[0];
        row.method = f[1];
        row.report.f_measure = parse_double(f[2]);
        row.report.pseudo_f_measure = parse_double(f[3]);
        row.report.psnr = parse_double(f[4]);
        row.report.drd = parse_double(f[5]);
        row.report.mpm = parse_double(f[6]);
        row.report.nrm = parse_double(f[7]);
        out.push_back(std::move(row));
    }
    return out;
}

scoring::ResultTable table_from_rows(const std::vector<EvalRow>& rows) {
    scoring::ResultTable t;
    for (const auto& r : rows) t.set(r.method, r.image, r.report);
    return t;
}

std::string scoreboard_to_csv(const scoring::ScoreBoard& board) {
    std::ostringstream out;
    out << "method,score,rank\n";
    for (std::size_t i = 0; i < board.methods.size(); ++i) {
        out << board.methods[i] << ',' << format_fixed(board.scores[i], 4) << ',' << board.ranks[i] << '\n';
    }
    return out.str();
}

std::string scoreboard_to_json(const scoring::ScoreBoard& board) {
    json arr = json::array();
    for (std::size_t i = 0; i < board.methods.size(); ++i) {
        arr.push_back({{"method", board.methods[i]}, {"score", board.scores[i]}, {"rank", board.ranks[i]}});
    }
    return json{{"scoreboard", arr}}.dump(2) + "\n";
}

}  // namespace binbench::report
