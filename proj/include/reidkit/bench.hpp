#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "reidkit/erase.hpp"
#include "reidkit/retrieval.hpp"

namespace reidkit {

struct BenchError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ExtractorError : BenchError {
    using BenchError::BenchError;
};

// Rows of a "filename,person_id,camera_id" CSV (a header line is allowed).
struct Annotations {
    std::vector<std::string> filenames;
    std::vector<int> person_ids;
    std::vector<int> camera_ids;

    std::size_t size() const { return filenames.size(); }
};

Annotations load_annotations_csv(const std::filesystem::path& path);

// External feature extractor, invoked serially as
//   <command> --input <image dir> --output <features.reidfeat>
// It must exit 0 and write one REIDFEAT record per regular image file of the
// input directory, in lexicographically sorted filename order; person and
// camera ids are then assigned from the annotations.
struct ExtractorHook {
    std::string command;
};

struct OcclusionCell {
    double level = 0.0;
    OcclusionMode mode = OcclusionMode::re;
    double r1 = 0.0;
    double map = 0.0;
};

struct OcclusionBenchReport {
    std::vector<OcclusionCell> cells;  // |levels| x |modes|, level-major
    double clean_r1 = 0.0;
    double clean_map = 0.0;
    std::uint64_t seed = 0;
    std::string extractor;
};

const char* occlusion_mode_name(OcclusionMode mode);

/// For each (level, mode): occludes every query image, extracts features,
/// and evaluates against the fixed clean gallery. Image i of cell c is
/// occluded with Rng(cell_seed(c) ^ i), so results are deterministic given
/// the seed and independent of scheduling.
OcclusionBenchReport run_occlusion_bench(
    const std::filesystem::path& query_dir, const std::filesystem::path& query_csv,
    const std::filesystem::path& gallery_dir, const std::filesystem::path& gallery_csv,
    std::span<const double> levels, std::span<const OcclusionMode> modes,
    const ExtractorHook& extractor, std::uint64_t seed, const std::filesystem::path& workdir,
    Metric metric = Metric::euclidean);

}  // namespace reidkit
