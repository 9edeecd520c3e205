#include "binbench/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "binbench/binarizers.hpp"
#include "binbench/metrics.hpp"
#include "binbench/pnm.hpp"
#include "binbench/report.hpp"
#include "binbench/scoring.hpp"
#include "binbench/synthgen.hpp"

namespace binbench::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Argument combinations the parser cannot express.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CommandFailure {
    int code;
    std::string message;
};

std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DecodeError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out << text;
    if (!out) throw IoError("write failed for " + path.string());
}

void ensure_parent(const fs::path& path) {
    if (!path.has_parent_path()) return;
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create " + path.parent_path().string() + ": " + ec.message());
}

unsigned thread_cap() {
    unsigned n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("BINBENCH_THREADS")) {
        try {
            const int v = std::stoi(env);
            if (v >= 1) n = static_cast<unsigned>(v);
        } catch (const std::exception&) {
            // ignore malformed values
        }
    }
    return n;
}

// Splices options from a JSON config file in front of the user's own flags so
// that flags given on the command line take precedence.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
    std::vector<std::string> rest;
    std::optional<std::string> config_path;
    for (std::size_t i = 1; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            config_path = args[++i];
        } else if (args[i].rfind("--config=", 0) == 0) {
            config_path = args[i].substr(9);
        } else {
            rest.push_back(args[i]);
        }
    }
    if (!config_path || rest.empty()) return rest;

    json doc;
    try {
        doc = json::parse(read_text(*config_path));
    } catch (const json::parse_error& e) {
        throw InvalidParameter("config " + *config_path + ": " + e.what());
    }
    if (!doc.is_object()) throw InvalidParameter("config must be a JSON object");
    const std::string& sub = rest.front();
    const json& section = doc.contains(sub) && doc[sub].is_object() ? doc[sub] : doc;

    std::vector<std::string> injected;
    for (const auto& [key, value] : section.items()) {
        if (value.is_object()) continue;  // another subcommand's section
        const std::string flag = "--" + key;
        if (value.is_boolean()) {
            if (value.get<bool>()) injected.push_back(flag);
        } else if (value.is_array()) {
            for (const auto& v : value) {
                injected.push_back(flag);
                injected.push_back(v.is_string() ? v.get<std::string>() : v.dump());
            }
        } else {
            injected.push_back(flag);
            injected.push_back(value.is_string() ? value.get<std::string>() : value.dump());
        }
    }
    std::vector<std::string> merged{rest.front()};
    merged.insert(merged.end(), injected.begin(), injected.end());
    merged.insert(merged.end(), rest.begin() + 1, rest.end());
    return merged;
}

// ---- binarize -------------------------------------------------------------

struct BinarizeOptions {
    std::string input;
    std::string output;
    std::string manifest;
    std::string outdir;
    std::string method;
    std::string params_path;
    bool debug = false;
};

binarize::BinarizerParams resolve_params(const BinarizeOptions& o) {
    binarize::BinarizerParams p;
    if (!o.params_path.empty()) {
        std::string text;
        try {
            text = read_text(o.params_path);
        } catch (const DecodeError& e) {
            throw InvalidParameter(e.what());
        }
        p = binarize::params_from_json(text);
    }
    if (!o.method.empty()) p.method = binarize::parse_method(o.method);
    p.validate();
    return p;
}

void dump_debug(const GrayImage& img, const binarize::BinarizerParams& p, const fs::path& output) {
    const auto base = output.parent_path() / output.stem();
    auto name = [&](const std::string& suffix) { return fs::path(base.string() + suffix); };
    if (p.method == binarize::Method::SuContrast) {
        const auto st = binarize::su_contrast_stages(img, p);
        pnm::write_pgm(name(".stage1_contrast.pgm"), st.contrast);
        pnm::write_pgm(name(".stage2_text_edges.pgm"), st.text_edges);
        pnm::write_pgm(name(".stage3_threshold.pgm"), st.thresholded);
        pnm::write_pgm(name(".stage4_final.pgm"), st.result);
    } else if (p.method == binarize::Method::NiblackEnsemble) {
        const auto e = binarize::ensemble_thresholds(img, p);
        GrayImage t(img.width(), img.height());
        auto px = t.pixels();
        for (std::size_t i = 0; i < px.size(); ++i) {
            px[i] = static_cast<std::uint8_t>(std::clamp(std::lround(e.average[i]), 0L, 255L));
        }
        pnm::write_pgm(name(".stage1_filtered.pgm"), e.filtered);
        pnm::write_pgm(name(".stage2_threshold_map.pgm"), t);
    }
}

int cmd_binarize(const BinarizeOptions& o, std::ostream& out) {
    const auto params = resolve_params(o);
    if (!o.manifest.empty()) {
        if (o.outdir.empty()) throw UsageError("--manifest requires --outdir");
        const fs::path manifest(o.manifest);
        const auto entries = synth::read_corpus_manifest(manifest);
        const fs::path dir = fs::path(o.outdir) / std::string(binarize::to_string(params.method));
        std::error_code ec;
        fs::create_directories(dir, ec);
        if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
        for (const auto& e : entries) {
            const auto img = pnm::read_gray(manifest.parent_path() / e.page_path);
            const auto mask = binarize::run(img, params);
            pnm::write_pbm(dir / (e.id + ".pbm"), mask);
            if (o.debug) dump_debug(img, params, dir / (e.id + ".pbm"));
        }
        out << dir.string() << '\n';
        return kOk;
    }
    if (o.input.empty() || o.output.empty()) {
        throw UsageError("binarize needs --input and --output (or --manifest and --outdir)");
    }
    const auto img = pnm::read_gray(o.input);
    const auto mask = binarize::run(img, params);
    ensure_parent(o.output);
    pnm::write_mask(o.output, mask);
    if (o.debug) dump_debug(img, params, o.output);
    return kOk;
}

// ---- evaluate -------------------------------------------------------------

struct EvaluateOptions {
    std::string manifest;
    std::string output;
    std::string format;
    std::string nrm_mode;
    std::string mpm_normalizer;
    std::string results_dir;
    std::vector<std::string> methods;
};

struct EvalJob {
    std::string image;
    fs::path gt;
    std::vector<std::pair<std::string, fs::path>> methods;  // sorted by method id
};

struct LoadedManifest {
    std::vector<EvalJob> jobs;
    metrics::EvalOptions options;
};

LoadedManifest load_eval_manifest(const EvaluateOptions& o) {
    const fs::path path(o.manifest);
    json doc;
    try {
        doc = json::parse(read_text(path));
    } catch (const json::parse_error& e) {
        throw DecodeError(path.string() + ": " + e.what());
    }
    const fs::path base = path.parent_path();
    LoadedManifest m;
    try {
        if (doc.contains("options")) {
            const auto& opt = doc["options"];
            if (opt.contains("nrm_mode")) m.options.nrm_mode = metrics::parse_nrm_mode(opt["nrm_mode"].get<std::string>());
            if (opt.contains("mpm_normalizer")) {
                m.options.mpm_normalizer = metrics::parse_mpm_normalizer(opt["mpm_normalizer"].get<std::string>());
            }
        }
        if (doc.contains("entries")) {
            for (const auto& e : doc["entries"]) {
                EvalJob job;
                job.image = e.at("id").get<std::string>();
                job.gt = base / e.at("gt_path").get<std::string>();
                for (const auto& [method, p] : e.at("binarizations").items()) {
                    job.methods.emplace_back(method, base / p.get<std::string>());
                }
                m.jobs.push_back(std::move(job));
            }
        } else if (doc.contains("images")) {
            const fs::path results = o.results_dir.empty() ? base / "results" : fs::path(o.results_dir);
            auto methods = o.methods;
            if (methods.empty()) {
                std::error_code ec;
                for (const auto& d : fs::directory_iterator(results, ec)) {
                    if (d.is_directory()) methods.push_back(d.path().filename().string());
                }
            }
            if (methods.empty()) throw InvalidParameter("no methods given and none found under " + results.string());
            for (const auto& e : synth::read_corpus_manifest(path)) {
                EvalJob job;
                job.image = e.id;
                job.gt = base / e.gt_path;
                for (const auto& method : methods) job.methods.emplace_back(method, results / method / (e.id + ".pbm"));
                m.jobs.push_back(std::move(job));
            }
        } else {
            throw DecodeError(path.string() + ": manifest needs 'entries' or 'images'");
        }
    } catch (const json::exception& e) {
        throw DecodeError(path.string() + ": " + e.what());
    }
    if (!o.nrm_mode.empty()) m.options.nrm_mode = metrics::parse_nrm_mode(o.nrm_mode);
    if (!o.mpm_normalizer.empty()) m.options.mpm_normalizer = metrics::parse_mpm_normalizer(o.mpm_normalizer);

    std::sort(m.jobs.begin(), m.jobs.end(), [](const auto& a, const auto& b) { return a.image < b.image; });
    for (auto& job : m.jobs) std::sort(job.methods.begin(), job.methods.end());
    return m;
}

std::vector<report::EvalRow> evaluate_job(const EvalJob& job, const metrics::EvalOptions& opts) {
    const auto gt = pnm::read_binary(job.gt);
    std::vector<report::EvalRow> rows;
    for (const auto& [method, path] : job.methods) {
        const auto b = pnm::read_binary(path);
        if (!gt.same_shape(b)) {
            throw ShapeError("entry '" + job.image + "' method '" + method + "': binarization is " +
                             std::to_string(b.width()) + "x" + std::to_string(b.height()) +
                             ", ground truth is " + std::to_string(gt.width()) + "x" +
                             std::to_string(gt.height()));
        }
        try {
            rows.push_back({job.image, method, metrics::evaluate_pair(gt, b, opts)});
        } catch (const EmptyGroundTruthError& e) {
            throw EmptyGroundTruthError("entry '" + job.image + "': " + e.what());
        }
    }
    return rows;
}

int cmd_evaluate(const EvaluateOptions& o, std::ostream& out) {
    std::string format = o.format;
    if (format.empty()) format = fs::path(o.output).extension() == ".csv" ? "csv" : "json";
    if (format != "csv" && format != "json") throw InvalidParameter("--format must be csv or json");
    const auto manifest = load_eval_manifest(o);
    const auto& jobs = manifest.jobs;

    std::vector<std::vector<report::EvalRow>> results(jobs.size());
    std::vector<std::exception_ptr> errors(jobs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < jobs.size(); i = next++) {
            try {
                results[i] = evaluate_job(jobs[i], manifest.options);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const unsigned n_threads = std::min<unsigned>(thread_cap(), static_cast<unsigned>(std::max<std::size_t>(jobs.size(), 1)));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < n_threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    // report the first failing entry in manifest order
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }

    std::vector<report::EvalRow> rows;
    for (auto& r : results) rows.insert(rows.end(), r.begin(), r.end());
    const auto text = format == "json" ? report::rows_to_json(rows, manifest.options) : report::rows_to_csv(rows);
    write_text(o.output, text);
    out << rows.size() << " rows written to " << o.output << '\n';
    return kOk;
}

// ---- rank -----------------------------------------------------------------

struct RankOptions {
    std::string input;
    std::string output;
    std::string format;
};

int cmd_rank(const RankOptions& o, std::ostream& out) {
    const auto text = read_text(o.input);
    const auto first = text.find_first_not_of(" \t\r\n");
    const bool is_json = first != std::string::npos && (text[first] == '{' || text[first] == '[');
    const auto rows = is_json ? report::rows_from_json(text) : report::rows_from_csv(text);
    const auto table = report::table_from_rows(rows);
    const auto board = scoring::score(table);

    std::string format = o.format;
    if (format.empty()) format = fs::path(o.output).extension() == ".json" ? "json" : "csv";
    if (format != "csv" && format != "json") throw InvalidParameter("--format must be csv or json");
    write_text(o.output, format == "json" ? report::scoreboard_to_json(board) : report::scoreboard_to_csv(board));
    out << report::scoreboard_to_csv(board);
    return kOk;
}

// ---- gen ------------------------------------------------------------------

struct GenOptions {
    std::size_t n = 10;
    std::uint64_t seed = 1;
    std::string profile = "phibc-like";
    std::string outdir;
    synth::CorpusOptions corpus;
    std::vector<std::string> intensities;
};

int cmd_gen(GenOptions o, std::ostream& out) {
    for (const auto& kv : o.intensities) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw InvalidParameter("--intensity expects name=value, got '" + kv + "'");
        double v = 0.0;
        try {
            v = std::stod(kv.substr(eq + 1));
        } catch (const std::exception&) {
            throw InvalidParameter("--intensity value is not a number in '" + kv + "'");
        }
        o.corpus.intensity[synth::parse_degradation(kv.substr(0, eq))] = v;
    }
    const auto manifest = synth::generate_corpus(o.n, o.seed, o.profile, o.outdir, o.corpus);
    out << manifest.string() << '\n';
    return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Document binarization toolkit and evaluation harness", "binbench"};
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.set_help_all_flag("--help-all");
    app.add_option("--config", "JSON file of option defaults; command-line flags override it");

    BinarizeOptions bo;
    auto* bin = app.add_subcommand("binarize", "Binarize a page (or every page of a corpus manifest)");
    bin->add_option("-i,--input", bo.input, "Input PGM/PBM/PPM page");
    bin->add_option("-o,--output", bo.output, "Output mask (.pbm writes P4, otherwise P5)");
    bin->add_option("--manifest", bo.manifest, "Corpus manifest to binarize in batch");
    bin->add_option("--outdir", bo.outdir, "Batch output root; masks go to <outdir>/<method>/<id>.pbm");
    bin->add_option("-m,--method", bo.method, "otsu | niblack | sauvola-grid | su-contrast | niblack-ensemble");
    bin->add_option("-p,--params", bo.params_path, "Binarizer parameters (JSON)");
    bin->add_flag("--debug", bo.debug, "Write intermediate stage images next to the output");

    EvaluateOptions eo;
    auto* ev = app.add_subcommand("evaluate", "Score binarizations against ground truth");
    ev->add_option("--manifest", eo.manifest, "Evaluation or corpus manifest (JSON)")->required();
    ev->add_option("-o,--output", eo.output, "Report path")->required();
    ev->add_option("--format", eo.format, "csv | json (default json unless the output ends in .csv)");
    ev->add_option("--nrm-mode", eo.nrm_mode, "literal | standard");
    ev->add_option("--mpm-normalizer", eo.mpm_normalizer, "all-pixels | gt-object");
    ev->add_option("--results-dir", eo.results_dir, "For corpus manifests: root holding <method>/<id>.pbm");
    ev->add_option("--methods", eo.methods, "For corpus manifests: method ids to evaluate")->delimiter(',')
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);

    RankOptions ro;
    auto* rk = app.add_subcommand("rank", "Relative scores and ranks from an evaluation report");
    rk->add_option("-i,--input", ro.input, "Evaluation report (JSON or CSV)")->required();
    rk->add_option("-o,--output", ro.output, "Scoreboard path")->required();
    rk->add_option("--format", ro.format, "csv | json (default from the output extension)");

    GenOptions go;
    auto* gen = app.add_subcommand("gen", "Generate a synthetic degraded corpus");
    gen->add_option("-n,--count", go.n, "Number of pages");
    gen->add_option("--seed", go.seed, "Base seed; page i uses seed + i");
    gen->add_option("--profile", go.profile, "Degradation profile");
    gen->add_option("--outdir", go.outdir, "Output directory")->required();
    gen->add_option("--width", go.corpus.width, "Page width");
    gen->add_option("--height", go.corpus.height, "Page height");
    gen->add_option("--strokes", go.corpus.strokes, "Strokes per page");
    gen->add_option("--stroke-width-min", go.corpus.stroke_width_min);
    gen->add_option("--stroke-width-max", go.corpus.stroke_width_max);
    gen->add_option("--intensity", go.intensities, "Override a degradation intensity, e.g. bleed-through=0.4")
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);

    try {
        auto argv = expand_config(args);
        std::reverse(argv.begin(), argv.end());
        app.parse(argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kParams;
    }

    try {
        if (*bin) return cmd_binarize(bo, out);
        if (*ev) return cmd_evaluate(eo, out);
        if (*rk) return cmd_rank(ro, out);
        if (*gen) return cmd_gen(go, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const DecodeError& e) {
        err << "error: " << e.what() << '\n';
        return kDecode;
    } catch (const InvalidParameter& e) {
        err << "error: " << e.what() << '\n';
        return kParams;
    } catch (const synth::InvalidSpecError& e) {
        err << "error: " << e.what() << '\n';
        return kParams;
    } catch (const ShapeError& e) {
        err << "error: " << e.what() << '\n';
        return kDimension;
    } catch (const EmptyGroundTruthError& e) {
        err << "error: " << e.what() << '\n';
        return kDimension;
    } catch (const scoring::InsufficientMethodsError& e) {
        err << "error: " << e.what() << '\n';
        return kInsufficientMethods;
    } catch (const scoring::MissingCellError& e) {
        err << "error: " << e.what() << '\n';
        return kDecode;
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kIo;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kParams;
    }
    return kUsage;
}

}  // namespace binbench::cli
