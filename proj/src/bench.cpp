#include "reidkit/bench.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "reidkit/feature_io.hpp"
#include "reidkit/image_io.hpp"

namespace reidkit {

namespace fs = std::filesystem;

Annotations load_annotations_csv(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw BenchError(path.string() + ": cannot open annotations");
    Annotations ann;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (lineno == 1 && line.rfind("filename", 0) == 0) continue;  // header
        std::istringstream row(line);
        std::string fname, pid, cam;
        if (!std::getline(row, fname, ',') || !std::getline(row, pid, ',') ||
            !std::getline(row, cam)) {
            throw BenchError(path.string() + ":" + std::to_string(lineno) + ": malformed row");
        }
        try {
            ann.filenames.push_back(fname);
            ann.person_ids.push_back(std::stoi(pid));
            ann.camera_ids.push_back(std::stoi(cam));
        } catch (const std::exception&) {
            throw BenchError(path.string() + ":" + std::to_string(lineno) + ": bad id field");
        }
    }
    if (ann.filenames.empty()) throw BenchError(path.string() + ": no annotation rows");
    return ann;
}

const char* occlusion_mode_name(OcclusionMode mode) {
    switch (mode) {
        case OcclusionMode::re: return "re";
        case OcclusionMode::rpe: return "rpe";
        case OcclusionMode::re_plus_rpe: return "both";
    }
    return "?";
}

namespace {

std::string shell_quote(const std::string& s) {
    std::string out = "'";
    for (char c : s) {
        if (c == '\'') {
            out += "'\\''";
        } else {
            out += c;
        }
    }
    out += "'";
    return out;
}

std::vector<std::string> sorted_image_files(const fs::path& dir) {
    std::vector<std::string> files;
    if (!fs::is_directory(dir)) throw BenchError(dir.string() + ": not a directory");
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && is_image_file(entry.path())) {
            files.push_back(entry.path().filename().string());
        }
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw BenchError(dir.string() + ": no images found");
    return files;
}

// Runs the extractor over `dir` and relabels the rows from the annotations.
FeatureSet extract_and_label(const ExtractorHook& hook, const fs::path& dir,
                             const Annotations& ann, const fs::path& out_file) {
    const std::vector<std::string> files = sorted_image_files(dir);

    std::map<std::string, std::size_t> by_name;
    for (std::size_t i = 0; i < ann.size(); ++i) by_name[ann.filenames[i]] = i;
    for (const std::string& f : files) {
        if (!by_name.count(f)) throw BenchError("missing annotation for image '" + f + "'");
    }

    const std::string cmd = hook.command + " --input " + shell_quote(dir.string()) +
                            " --output " + shell_quote(out_file.string());
    const int rc = std::system(cmd.c_str());
    if (rc != 0) {
        throw ExtractorError("extractor failed (exit status " + std::to_string(rc) +
                             "): " + cmd);
    }

    FeatureSet set;
    try {
        set = load_features(out_file);
    } catch (const std::exception& e) {
        throw ExtractorError(std::string("extractor produced malformed output: ") + e.what());
    }
    if (static_cast<std::size_t>(set.size()) != files.size()) {
        throw ExtractorError("extractor wrote " + std::to_string(set.size()) +
                             " records for " + std::to_string(files.size()) + " images");
    }
    for (std::size_t i = 0; i < files.size(); ++i) {
        const std::size_t a = by_name.at(files[i]);
        set.person_ids[i] = ann.person_ids[a];
        set.camera_ids[i] = ann.camera_ids[a];
    }
    return set;
}

std::uint64_t mix_cell_seed(std::uint64_t base, std::size_t level_idx, std::size_t mode_idx) {
    Rng rng(base ^ (0x51ED2701u + 1000003ULL * level_idx + 7919ULL * mode_idx));
    return rng.next_u64();
}

}  // namespace

OcclusionBenchReport run_occlusion_bench(const fs::path& query_dir, const fs::path& query_csv,
                                         const fs::path& gallery_dir, const fs::path& gallery_csv,
                                         std::span<const double> levels,
                                         std::span<const OcclusionMode> modes,
                                         const ExtractorHook& extractor, std::uint64_t seed,
                                         const fs::path& workdir, Metric metric) {
    for (double level : levels) {
        if (!(level >= 0.0 && level <= 1.0)) {
            throw std::invalid_argument("run_occlusion_bench: level outside [0,1]");
        }
    }
    if (levels.empty() || modes.empty()) {
        throw std::invalid_argument("run_occlusion_bench: empty level or mode list");
    }
    const Annotations query_ann = load_annotations_csv(query_csv);
    const Annotations gallery_ann = load_annotations_csv(gallery_csv);
    fs::create_directories(workdir);

    OcclusionBenchReport report;
    report.seed = seed;
    report.extractor = extractor.command;

    const FeatureSet gallery =
        extract_and_label(extractor, gallery_dir, gallery_ann, workdir / "gallery.reidfeat");
    {
        const FeatureSet clean =
            extract_and_label(extractor, query_dir, query_ann, workdir / "query_clean.reidfeat");
        const RankingResult clean_eval = evaluate(clean, gallery, metric);
        report.clean_r1 = clean_eval.cmc[0];
        report.clean_map = clean_eval.map;
    }

    const std::vector<std::string> query_files = sorted_image_files(query_dir);
    for (std::size_t li = 0; li < levels.size(); ++li) {
        for (std::size_t mi = 0; mi < modes.size(); ++mi) {
            const std::string cell_name =
                "cell_l" + std::to_string(li) + "_m" + std::to_string(mi);
            const fs::path cell_dir = workdir / cell_name;
            fs::create_directories(cell_dir);
            const std::uint64_t cell_seed = mix_cell_seed(seed, li, mi);

            for (std::size_t i = 0; i < query_files.size(); ++i) {
                const Image img = load_image(query_dir / query_files[i]);
                Rng rng(cell_seed ^ static_cast<std::uint64_t>(i));
                const Image occluded = inject_occlusion(img, levels[li], modes[mi], rng);
                // Keep the extension so the extractor sees the same format.
                save_image(occluded, cell_dir / query_files[i]);
            }

            const FeatureSet occluded_queries = extract_and_label(
                extractor, cell_dir, query_ann, workdir / (cell_name + ".reidfeat"));
            const RankingResult eval = evaluate(occluded_queries, gallery, metric);

            OcclusionCell cell;
            cell.level = levels[li];
            cell.mode = modes[mi];
            cell.r1 = eval.cmc[0];
            cell.map = eval.map;
            report.cells.push_back(cell);
        }
    }
    return report;
}

}  // namespace reidkit
