// reidkit: deterministic erasing augmentation, retrieval evaluation, model
// efficiency scoring, and loss gradient checking behind one CLI.
//
// Exit codes: 0 success; 1 I/O or runtime failure (gradcheck: check failed);
// 2 invalid configuration or malformed input format; 3 no valid query
// (eval); 4 extractor failure (occlusion-bench).

#include <unistd.h>

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "reidkit/bench.hpp"
#include "reidkit/efficiency.hpp"
#include "reidkit/erase.hpp"
#include "reidkit/feature_io.hpp"
#include "reidkit/gradcheck.hpp"
#include "reidkit/image_io.hpp"
#include "reidkit/retrieval.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace reidkit;

namespace {

// ---- logging (REIDKIT_LOG=debug|info|warn|error, default warn) ----

int log_level() {
    static const int level = [] {
        const char* env = std::getenv("REIDKIT_LOG");
        const std::string v = env ? env : "warn";
        if (v == "debug") return 3;
        if (v == "info") return 2;
        if (v == "warn") return 1;
        return 0;
    }();
    return level;
}

void log_info(const std::string& msg) {
    if (log_level() >= 2) std::cerr << "[reidkit] " << msg << "\n";
}

// ---- shared option plumbing ----

struct ConfigKey {
    std::string key;          // JSON key
    std::string option;       // CLI option name, e.g. "--seed"
    std::function<void(const json&)> apply;
};

// Values from --config fill every option the command line left untouched;
// unknown keys are rejected.
void apply_config_file(const CLI::App& cmd, const std::string& path,
                       const std::vector<ConfigKey>& keys) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config file not readable: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw std::invalid_argument("config file " + path + ": " + e.what());
    }
    if (j.contains("config") && j["config"].is_object()) j = j["config"];  // echoed report
    for (const auto& [key, value] : j.items()) {
        if (key == "command") continue;
        const ConfigKey* match = nullptr;
        for (const ConfigKey& ck : keys) {
            if (ck.key == key) {
                match = &ck;
                break;
            }
        }
        if (!match) throw std::invalid_argument("unknown config key: " + key);
        try {
            if (cmd.count(match->option) == 0) match->apply(value);
        } catch (const json::exception& e) {
            throw std::invalid_argument("config key " + key + ": " + e.what());
        }
    }
}

void emit_report(const json& report, const std::string& output_path) {
    if (output_path.empty()) {
        std::cout << report.dump(2) << "\n";
        return;
    }
    std::ofstream out(output_path);
    if (!out) throw IoError(output_path + ": cannot open for writing");
    out << report.dump(2) << "\n";
    if (!out) throw IoError(output_path + ": write failed");
    std::cout << output_path << "\n";
}

std::vector<double> parse_double_list(const std::string& csv, const std::string& what) {
    std::vector<double> out;
    std::istringstream in(csv);
    std::string item;
    while (std::getline(in, item, ',')) {
        try {
            std::size_t used = 0;
            const double v = std::stod(item, &used);
            if (used != item.size()) throw std::invalid_argument(item);
            out.push_back(v);
        } catch (const std::exception&) {
            throw std::invalid_argument("bad " + what + " entry: '" + item + "'");
        }
    }
    if (out.empty()) throw std::invalid_argument(what + " list is empty");
    return out;
}

Metric parse_metric(const std::string& name) {
    if (name == "euclidean") return Metric::euclidean;
    if (name == "cosine") return Metric::cosine;
    throw std::invalid_argument("unknown metric: " + name);
}

// ---- augment ----

struct AugmentOpts {
    std::string input, output, summary;
    std::string mode = "rpe";
    double prob = 0.5, sl = 0.02, sh = 0.45, r = 0.35;
    int points = 20;
    std::uint64_t seed = 0;
    bool dump_masks = false;
    std::string erase_value = "per-pixel";
    int jobs = 1;
};

struct AugmentEntry {
    std::string path;
    bool re_applied = false, rpe_applied = false, no_fit = false;
    double erased_ratio = 0.0;
};

void overlay_mask(Image& union_mask, const PolygonMask& mask) {
    for (int y = mask.box.y0; y <= mask.box.y1; ++y) {
        for (int x = mask.box.x0; x <= mask.box.x1; ++x) {
            if (mask.covered_at(x, y)) union_mask.at(x, y, 0) = 255;
        }
    }
}

int run_augment(const AugmentOpts& o) {
    if (o.mode != "re" && o.mode != "rpe" && o.mode != "both") {
        throw std::invalid_argument("augment: --mode must be re, rpe, or both");
    }
    EraseConfig cfg;
    cfg.probability = o.prob;
    cfg.area_lo = o.sl;
    cfg.area_hi = o.sh;
    cfg.aspect = o.r;
    cfg.vertices = o.points;
    cfg.per_pixel_noise = o.erase_value != "single";
    if (o.erase_value != "single" && o.erase_value != "per-pixel") {
        throw std::invalid_argument("augment: --erase-value must be per-pixel or single");
    }
    cfg.validate();
    if (o.jobs < 1) throw std::invalid_argument("augment: --jobs must be >= 1");

    const fs::path in_root(o.input), out_root(o.output);
    if (!fs::is_directory(in_root)) throw IoError(o.input + ": not a directory");
    std::error_code ec;
    if (fs::weakly_canonical(out_root, ec) == fs::weakly_canonical(in_root, ec)) {
        throw std::invalid_argument("augment: --output must differ from --input");
    }

    std::vector<fs::path> rel_paths;
    for (const auto& entry : fs::recursive_directory_iterator(in_root)) {
        if (entry.is_regular_file() && is_image_file(entry.path())) {
            rel_paths.push_back(fs::relative(entry.path(), in_root));
        }
    }
    std::sort(rel_paths.begin(), rel_paths.end());
    if (rel_paths.empty()) throw IoError(o.input + ": no images found");
    log_info("augmenting " + std::to_string(rel_paths.size()) + " images");

    std::vector<AugmentEntry> entries(rel_paths.size());
    std::vector<fs::path> created;
    std::mutex created_mutex;
    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::exception_ptr first_error;

    const auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= rel_paths.size()) return;
            {
                std::lock_guard lock(error_mutex);
                if (first_error) return;
            }
            try {
                const fs::path rel = rel_paths[i];
                const Image img = load_image(in_root / rel);
                Rng rng(o.seed ^ static_cast<std::uint64_t>(i));

                AugmentEntry entry;
                entry.path = rel.generic_string();
                Image out = img;
                Image union_mask;
                if (o.dump_masks) union_mask = Image::make(img.width, img.height, 1, 0);

                if (o.mode == "re" || o.mode == "both") {
                    EraseResult r = re_erase(out, cfg, rng);
                    entry.re_applied = r.applied;
                    entry.no_fit = entry.no_fit || r.no_fit;
                    if (r.applied && o.dump_masks) overlay_mask(union_mask, r.mask);
                    out = std::move(r.image);
                }
                if (o.mode == "rpe" || o.mode == "both") {
                    EraseResult r = rpe_erase(out, cfg, rng);
                    entry.rpe_applied = r.applied;
                    entry.no_fit = entry.no_fit || r.no_fit;
                    if (r.applied && o.dump_masks) overlay_mask(union_mask, r.mask);
                    out = std::move(r.image);
                }

                std::size_t changed_pixels = 0;
                for (std::size_t p = 0; p < out.data.size(); p += img.channels) {
                    for (int c = 0; c < img.channels; ++c) {
                        if (out.data[p + c] != img.data[p + c]) {
                            ++changed_pixels;
                            break;
                        }
                    }
                }
                entry.erased_ratio = static_cast<double>(changed_pixels) /
                                     static_cast<double>(img.pixel_count());

                const fs::path out_path = out_root / rel;
                fs::create_directories(out_path.parent_path());
                {
                    std::lock_guard lock(created_mutex);
                    created.push_back(out_path);
                }
                save_image(out, out_path);
                if (o.dump_masks && (entry.re_applied || entry.rpe_applied)) {
                    fs::path mask_path = out_path;
                    mask_path += ".mask.pgm";
                    {
                        std::lock_guard lock(created_mutex);
                        created.push_back(mask_path);
                    }
                    save_image(union_mask, mask_path);
                }
                entries[i] = std::move(entry);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };

    const int jobs = std::min<std::size_t>(o.jobs, rel_paths.size());
    if (jobs <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }

    if (first_error) {
        for (const fs::path& p : created) {
            std::error_code ec;
            fs::remove(p, ec);
        }
        std::rethrow_exception(first_error);
    }

    json config{{"command", "augment"},
                {"input", o.input},
                {"output", o.output},
                {"mode", o.mode},
                {"prob", o.prob},
                {"sl", o.sl},
                {"sh", o.sh},
                {"r", o.r},
                {"points", o.points},
                {"seed", o.seed},
                {"dump_masks", o.dump_masks},
                {"erase_value", o.erase_value},
                {"jobs", o.jobs},
                {"summary", o.summary}};
    json images = json::array();
    for (const AugmentEntry& e : entries) {
        images.push_back({{"path", e.path},
                          {"re_applied", e.re_applied},
                          {"rpe_applied", e.rpe_applied},
                          {"no_fit", e.no_fit},
                          {"erased_ratio", e.erased_ratio}});
    }
    const json summary{{"config", config}, {"images", images}};

    const fs::path summary_path =
        o.summary.empty() ? out_root / "augment_summary.json" : fs::path(o.summary);
    std::ofstream out(summary_path);
    if (!out) throw IoError(summary_path.string() + ": cannot open for writing");
    out << summary.dump(2) << "\n";
    std::cout << summary_path.string() << "\n";
    return 0;
}

// ---- eval ----

struct EvalOpts {
    std::string query, gallery, output;
    std::string metric = "euclidean";
    std::string ranks = "1,5,10";
    bool normalize = false;
    int jobs = 1;
};

int run_eval(const EvalOpts& o) {
    FeatureSet queries = load_features(o.query);
    FeatureSet gallery = load_features(o.gallery);
    if (o.normalize) {
        for (FeatureSet* set : {&queries, &gallery}) {
            for (int i = 0; i < set->size(); ++i) {
                const auto normalized = l2_normalize(set->values.row(i));
                std::copy(normalized.begin(), normalized.end(), set->values.row(i).begin());
            }
        }
    }

    std::vector<int> ranks;
    for (double r : parse_double_list(o.ranks, "rank")) {
        if (r < 1 || r != static_cast<int>(r)) {
            throw std::invalid_argument("ranks must be positive integers");
        }
        ranks.push_back(static_cast<int>(r));
    }
    for (int r : ranks) {
        if (r > gallery.size()) {
            throw std::invalid_argument("rank " + std::to_string(r) + " exceeds gallery size " +
                                        std::to_string(gallery.size()));
        }
    }

    const RankingResult result = evaluate(queries, gallery, parse_metric(o.metric), o.jobs);

    json report{{"config", json{{"command", "eval"},
                                {"query", o.query},
                                {"gallery", o.gallery},
                                {"metric", o.metric},
                                {"ranks", o.ranks},
                                {"normalize", o.normalize},
                                {"jobs", o.jobs},
                                {"output", o.output}}},
                {"mAP", result.map},
                {"scored_queries", result.scored_queries}};
    for (int r : ranks) report["R" + std::to_string(r)] = result.cmc[r - 1];
    emit_report(report, o.output);
    return 0;
}

// ---- es ----

struct EsOpts {
    std::string models, output, csv;
    double thr = 30.0, lambda = 1.0;
};

int run_es(const EsOpts& o) {
    std::ifstream in(o.models);
    if (!in) throw std::invalid_argument(o.models + ": cannot open");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw std::invalid_argument(o.models + ": " + e.what());
    }
    if (!j.is_array()) throw std::invalid_argument(o.models + ": expected a JSON array");

    std::vector<ModelProfile> models;
    for (const json& m : j) {
        try {
            ModelProfile profile;
            profile.name = m.at("name").get<std::string>();
            profile.r1 = m.at("r1").get<double>();
            profile.map = m.at("map").get<double>();
            profile.fd = m.at("fd").get<double>();
            profile.v = m.at("v").get<double>();
            profile.s = m.at("s").get<double>();
            models.push_back(std::move(profile));
        } catch (const json::exception& e) {
            throw std::invalid_argument(o.models + ": bad model record: " + e.what());
        }
    }

    EsConfig cfg;
    cfg.thr = o.thr;
    cfg.lambda = o.lambda;
    const std::vector<EsRow> rows = es_table(models, cfg);

    json rows_json = json::array();
    for (const EsRow& row : rows) {
        char display[32];
        std::snprintf(display, sizeof(display), "%.2f", row.es);
        rows_json.push_back({{"name", row.name},
                             {"score_r1", row.score_r1},
                             {"score_map", row.score_map},
                             {"es", row.es},
                             {"es_display", display}});
    }
    const json report{{"config", json{{"command", "es"},
                                      {"models", o.models},
                                      {"thr", o.thr},
                                      {"lambda", o.lambda},
                                      {"output", o.output},
                                      {"csv", o.csv}}},
                      {"rows", rows_json}};

    if (!o.csv.empty()) {
        std::ofstream csv(o.csv);
        if (!csv) throw IoError(o.csv + ": cannot open for writing");
        csv << "name,score_r1,score_map,es\n";
        for (const EsRow& row : rows) {
            csv << row.name << "," << row.score_r1 << "," << row.score_map << "," << row.es
                << "\n";
        }
    }
    emit_report(report, o.output);
    return 0;
}

// ---- gradcheck ----

struct GradcheckOpts {
    std::string loss = "all";
    std::uint64_t seed = 7;
    int trials = 10;
    double threshold = 1e-4;
    std::string output;
};

int run_gradcheck(const GradcheckOpts& o) {
    if (o.trials < 1) throw std::invalid_argument("gradcheck: --trials must be >= 1");
    std::vector<GradCheckReport> reports;
    if (o.loss == "ce") {
        reports.push_back(gradcheck_ce(o.seed, o.trials));
    } else if (o.loss == "triplet") {
        reports.push_back(gradcheck_triplet(o.seed, o.trials));
    } else if (o.loss == "oim") {
        reports.push_back(gradcheck_oim(o.seed, o.trials));
    } else if (o.loss == "mse") {
        reports.push_back(gradcheck_mse(o.seed, o.trials));
    } else if (o.loss == "all") {
        reports = gradcheck_all(o.seed, o.trials);
    } else {
        throw std::invalid_argument("gradcheck: --loss must be ce|triplet|oim|mse|all");
    }

    bool passed = true;
    json results = json::array();
    for (const GradCheckReport& r : reports) {
        if (!(r.max_rel_err < o.threshold)) {
            passed = false;
            std::cerr << "gradcheck: " << r.loss << " failed: max_rel_err=" << r.max_rel_err
                      << " at trial " << r.worst_trial << " coordinate " << r.worst_coordinate
                      << "\n";
        }
        results.push_back({{"loss", r.loss},
                           {"max_rel_err", r.max_rel_err},
                           {"mean_rel_err", r.mean_rel_err},
                           {"points_checked", r.points_checked},
                           {"seed", r.seed},
                           {"worst_trial", r.worst_trial},
                           {"worst_coordinate", r.worst_coordinate}});
    }
    const json report{{"config", json{{"command", "gradcheck"},
                                      {"loss", o.loss},
                                      {"seed", o.seed},
                                      {"trials", o.trials},
                                      {"threshold", o.threshold},
                                      {"output", o.output}}},
                      {"passed", passed},
                      {"results", results}};
    emit_report(report, o.output);
    return passed ? 0 : 1;
}

// ---- occlusion-bench ----

struct BenchOpts {
    std::string query_dir, query_annotations, gallery_dir, gallery_annotations;
    std::string levels = "0,0.1,0.2,0.3,0.4,0.5";
    std::string modes = "re,rpe,both";
    std::string extractor;
    std::uint64_t seed = 0;
    std::string workdir;
    std::string metric = "euclidean";
    std::string output, csv;
};

int run_occlusion_bench(const BenchOpts& o) {
    std::vector<OcclusionMode> modes;
    {
        std::istringstream in(o.modes);
        std::string item;
        while (std::getline(in, item, ',')) {
            if (item == "re") {
                modes.push_back(OcclusionMode::re);
            } else if (item == "rpe") {
                modes.push_back(OcclusionMode::rpe);
            } else if (item == "both") {
                modes.push_back(OcclusionMode::re_plus_rpe);
            } else {
                throw std::invalid_argument("unknown mode: '" + item + "'");
            }
        }
    }
    const std::vector<double> levels = parse_double_list(o.levels, "level");
    for (double level : levels) {
        if (!(level >= 0.0 && level <= 1.0)) {
            throw std::invalid_argument("occlusion level outside [0,1]");
        }
    }
    if (o.extractor.empty()) throw std::invalid_argument("--extractor is required");

    const fs::path workdir = o.workdir.empty()
                                 ? fs::temp_directory_path() /
                                       ("reidkit-bench-" + std::to_string(::getpid()))
                                 : fs::path(o.workdir);
    ExtractorHook hook;
    hook.command = o.extractor;
    const OcclusionBenchReport bench =
        run_occlusion_bench(o.query_dir, o.query_annotations, o.gallery_dir,
                            o.gallery_annotations, levels, modes, hook, o.seed, workdir,
                            parse_metric(o.metric));

    json grid = json::array();
    for (const OcclusionCell& cell : bench.cells) {
        grid.push_back({{"level", cell.level},
                        {"mode", occlusion_mode_name(cell.mode)},
                        {"R1", cell.r1},
                        {"mAP", cell.map}});
    }
    const json report{{"config", json{{"command", "occlusion-bench"},
                                      {"query_dir", o.query_dir},
                                      {"query_annotations", o.query_annotations},
                                      {"gallery_dir", o.gallery_dir},
                                      {"gallery_annotations", o.gallery_annotations},
                                      {"levels", o.levels},
                                      {"modes", o.modes},
                                      {"extractor", o.extractor},
                                      {"seed", o.seed},
                                      {"workdir", workdir.string()},
                                      {"metric", o.metric},
                                      {"output", o.output},
                                      {"csv", o.csv}}},
                      {"clean", json{{"R1", bench.clean_r1}, {"mAP", bench.clean_map}}},
                      {"grid", grid}};

    if (!o.csv.empty()) {
        std::ofstream csv(o.csv);
        if (!csv) throw IoError(o.csv + ": cannot open for writing");
        csv << "level,mode,r1,map\n";
        for (const OcclusionCell& cell : bench.cells) {
            csv << cell.level << "," << occlusion_mode_name(cell.mode) << "," << cell.r1 << ","
                << cell.map << "\n";
        }
    }
    emit_report(report, o.output);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"reidkit: erasing augmentation, retrieval evaluation, and model scoring"};
    app.require_subcommand(1);

    AugmentOpts aug;
    std::string aug_config;
    CLI::App* aug_cmd = app.add_subcommand("augment", "erase a directory of images");
    aug_cmd->add_option("--input", aug.input, "input image directory");
    aug_cmd->add_option("--output", aug.output, "output directory (tree is mirrored)");
    aug_cmd->add_option("--mode", aug.mode, "re, rpe, or both");
    aug_cmd->add_option("--prob", aug.prob, "erase probability p");
    aug_cmd->add_option("--sl", aug.sl, "area ratio lower bound");
    aug_cmd->add_option("--sh", aug.sh, "area ratio upper bound");
    aug_cmd->add_option("--r", aug.r, "aspect ratio bound in (0,1)");
    aug_cmd->add_option("--points", aug.points, "polygon vertex count");
    aug_cmd->add_option("--seed", aug.seed, "base seed; image i uses seed^i");
    aug_cmd->add_flag("--dump-masks", aug.dump_masks, "write <image>.mask.pgm next to outputs");
    aug_cmd->add_option("--erase-value", aug.erase_value, "per-pixel or single");
    aug_cmd->add_option("--jobs", aug.jobs, "worker threads (wall time only)");
    aug_cmd->add_option("--summary", aug.summary, "summary JSON path");
    aug_cmd->add_option("--config", aug_config, "JSON config (flags override)");

    EvalOpts ev;
    std::string ev_config;
    CLI::App* ev_cmd = app.add_subcommand("eval", "CMC/mAP over REIDFEAT files");
    ev_cmd->add_option("--query", ev.query, "query REIDFEAT file");
    ev_cmd->add_option("--gallery", ev.gallery, "gallery REIDFEAT file");
    ev_cmd->add_option("--metric", ev.metric, "euclidean or cosine");
    ev_cmd->add_option("--ranks", ev.ranks, "comma list of CMC ranks");
    ev_cmd->add_flag("--normalize", ev.normalize, "L2-normalize rows before ranking");
    ev_cmd->add_option("--jobs", ev.jobs, "worker threads (wall time only)");
    ev_cmd->add_option("--output", ev.output, "report path (default: stdout)");
    ev_cmd->add_option("--config", ev_config, "JSON config (flags override)");

    EsOpts es;
    std::string es_config;
    CLI::App* es_cmd = app.add_subcommand("es", "efficiency scores for model profiles");
    es_cmd->add_option("--models", es.models, "JSON array of model profiles");
    es_cmd->add_option("--thr", es.thr, "metric threshold");
    es_cmd->add_option("--lambda", es.lambda, "weight of the mAP term");
    es_cmd->add_option("--output", es.output, "report path (default: stdout)");
    es_cmd->add_option("--csv", es.csv, "also write a CSV table");
    es_cmd->add_option("--config", es_config, "JSON config (flags override)");

    GradcheckOpts gc;
    std::string gc_config;
    CLI::App* gc_cmd = app.add_subcommand("gradcheck", "finite-difference gradient checks");
    gc_cmd->add_option("--loss", gc.loss, "ce|triplet|oim|mse|all");
    gc_cmd->add_option("--seed", gc.seed, "instance seed");
    gc_cmd->add_option("--trials", gc.trials, "random instances per loss");
    gc_cmd->add_option("--threshold", gc.threshold, "max relative error to pass");
    gc_cmd->add_option("--output", gc.output, "report path (default: stdout)");
    gc_cmd->add_option("--config", gc_config, "JSON config (flags override)");

    BenchOpts bench;
    std::string bench_config;
    CLI::App* bench_cmd = app.add_subcommand("occlusion-bench", "occlusion robustness sweep");
    bench_cmd->add_option("--query-dir", bench.query_dir, "query image directory");
    bench_cmd->add_option("--query-annotations", bench.query_annotations,
                          "CSV filename,person_id,camera_id");
    bench_cmd->add_option("--gallery-dir", bench.gallery_dir, "gallery image directory");
    bench_cmd->add_option("--gallery-annotations", bench.gallery_annotations,
                          "CSV filename,person_id,camera_id");
    bench_cmd->add_option("--levels", bench.levels, "comma list of occlusion levels");
    bench_cmd->add_option("--modes", bench.modes, "comma list of re|rpe|both");
    bench_cmd->add_option("--extractor", bench.extractor,
                          "command run as: <cmd> --input DIR --output FILE");
    bench_cmd->add_option("--seed", bench.seed, "occlusion seed");
    bench_cmd->add_option("--workdir", bench.workdir, "scratch directory");
    bench_cmd->add_option("--metric", bench.metric, "euclidean or cosine");
    bench_cmd->add_option("--output", bench.output, "report path (default: stdout)");
    bench_cmd->add_option("--csv", bench.csv, "also write a CSV grid");
    bench_cmd->add_option("--config", bench_config, "JSON config (flags override)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }

    try {
        if (*aug_cmd) {
            if (!aug_config.empty()) {
                apply_config_file(
                    *aug_cmd, aug_config,
                    {{"input", "--input", [&](const json& v) { aug.input = v.get<std::string>(); }},
                     {"output", "--output",
                      [&](const json& v) { aug.output = v.get<std::string>(); }},
                     {"mode", "--mode", [&](const json& v) { aug.mode = v.get<std::string>(); }},
                     {"prob", "--prob", [&](const json& v) { aug.prob = v.get<double>(); }},
                     {"sl", "--sl", [&](const json& v) { aug.sl = v.get<double>(); }},
                     {"sh", "--sh", [&](const json& v) { aug.sh = v.get<double>(); }},
                     {"r", "--r", [&](const json& v) { aug.r = v.get<double>(); }},
                     {"points", "--points", [&](const json& v) { aug.points = v.get<int>(); }},
                     {"seed", "--seed",
                      [&](const json& v) { aug.seed = v.get<std::uint64_t>(); }},
                     {"dump_masks", "--dump-masks",
                      [&](const json& v) { aug.dump_masks = v.get<bool>(); }},
                     {"erase_value", "--erase-value",
                      [&](const json& v) { aug.erase_value = v.get<std::string>(); }},
                     {"jobs", "--jobs", [&](const json& v) { aug.jobs = v.get<int>(); }},
                     {"summary", "--summary",
                      [&](const json& v) { aug.summary = v.get<std::string>(); }}});
            }
            if (aug.input.empty() || aug.output.empty()) {
                throw std::invalid_argument("augment: --input and --output are required");
            }
            return run_augment(aug);
        }
        if (*ev_cmd) {
            if (!ev_config.empty()) {
                apply_config_file(
                    *ev_cmd, ev_config,
                    {{"query", "--query", [&](const json& v) { ev.query = v.get<std::string>(); }},
                     {"gallery", "--gallery",
                      [&](const json& v) { ev.gallery = v.get<std::string>(); }},
                     {"metric", "--metric",
                      [&](const json& v) { ev.metric = v.get<std::string>(); }},
                     {"ranks", "--ranks", [&](const json& v) { ev.ranks = v.get<std::string>(); }},
                     {"normalize", "--normalize",
                      [&](const json& v) { ev.normalize = v.get<bool>(); }},
                     {"jobs", "--jobs", [&](const json& v) { ev.jobs = v.get<int>(); }},
                     {"output", "--output",
                      [&](const json& v) { ev.output = v.get<std::string>(); }}});
            }
            if (ev.query.empty() || ev.gallery.empty()) {
                throw std::invalid_argument("eval: --query and --gallery are required");
            }
            try {
                return run_eval(ev);
            } catch (const FeatureFormatError& e) {
                std::cerr << "reidkit eval: " << e.what() << "\n";
                return 2;
            } catch (const NoValidQuery& e) {
                std::cerr << "reidkit eval: " << e.what() << "\n";
                return 3;
            }
        }
        if (*es_cmd) {
            if (!es_config.empty()) {
                apply_config_file(
                    *es_cmd, es_config,
                    {{"models", "--models",
                      [&](const json& v) { es.models = v.get<std::string>(); }},
                     {"thr", "--thr", [&](const json& v) { es.thr = v.get<double>(); }},
                     {"lambda", "--lambda", [&](const json& v) { es.lambda = v.get<double>(); }},
                     {"output", "--output",
                      [&](const json& v) { es.output = v.get<std::string>(); }},
                     {"csv", "--csv", [&](const json& v) { es.csv = v.get<std::string>(); }}});
            }
            if (es.models.empty()) throw std::invalid_argument("es: --models is required");
            try {
                return run_es(es);
            } catch (const std::domain_error& e) {
                std::cerr << "reidkit es: " << e.what() << "\n";
                return 2;
            }
        }
        if (*gc_cmd) {
            if (!gc_config.empty()) {
                apply_config_file(
                    *gc_cmd, gc_config,
                    {{"loss", "--loss", [&](const json& v) { gc.loss = v.get<std::string>(); }},
                     {"seed", "--seed", [&](const json& v) { gc.seed = v.get<std::uint64_t>(); }},
                     {"trials", "--trials", [&](const json& v) { gc.trials = v.get<int>(); }},
                     {"threshold", "--threshold",
                      [&](const json& v) { gc.threshold = v.get<double>(); }},
                     {"output", "--output",
                      [&](const json& v) { gc.output = v.get<std::string>(); }}});
            }
            return run_gradcheck(gc);
        }
        if (*bench_cmd) {
            if (!bench_config.empty()) {
                apply_config_file(
                    *bench_cmd, bench_config,
                    {{"query_dir", "--query-dir",
                      [&](const json& v) { bench.query_dir = v.get<std::string>(); }},
                     {"query_annotations", "--query-annotations",
                      [&](const json& v) { bench.query_annotations = v.get<std::string>(); }},
                     {"gallery_dir", "--gallery-dir",
                      [&](const json& v) { bench.gallery_dir = v.get<std::string>(); }},
                     {"gallery_annotations", "--gallery-annotations",
                      [&](const json& v) { bench.gallery_annotations = v.get<std::string>(); }},
                     {"levels", "--levels",
                      [&](const json& v) { bench.levels = v.get<std::string>(); }},
                     {"modes", "--modes",
                      [&](const json& v) { bench.modes = v.get<std::string>(); }},
                     {"extractor", "--extractor",
                      [&](const json& v) { bench.extractor = v.get<std::string>(); }},
                     {"seed", "--seed",
                      [&](const json& v) { bench.seed = v.get<std::uint64_t>(); }},
                     {"workdir", "--workdir",
                      [&](const json& v) { bench.workdir = v.get<std::string>(); }},
                     {"metric", "--metric",
                      [&](const json& v) { bench.metric = v.get<std::string>(); }},
                     {"output", "--output",
                      [&](const json& v) { bench.output = v.get<std::string>(); }},
                     {"csv", "--csv", [&](const json& v) { bench.csv = v.get<std::string>(); }}});
            }
            if (bench.query_dir.empty() || bench.gallery_dir.empty() ||
                bench.query_annotations.empty() || bench.gallery_annotations.empty()) {
                throw std::invalid_argument(
                    "occlusion-bench: --query-dir, --gallery-dir and both annotation files are "
                    "required");
            }
            try {
                return run_occlusion_bench(bench);
            } catch (const ExtractorError& e) {
                std::cerr << "reidkit occlusion-bench: " << e.what() << "\n";
                return 4;
            }
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "reidkit: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "reidkit: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
