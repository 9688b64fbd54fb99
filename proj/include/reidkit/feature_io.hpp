#pragma once

#include <filesystem>
#include <stdexcept>

#include "reidkit/descriptor.hpp"

namespace reidkit {

struct FeatureFormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// REIDFEAT v1: magic "REIDFT01", little-endian u32 N, u32 D, u32 flags, then
// N records of (i32 person_id, i32 camera_id, D x f32 values). Values are
// stored as f32; an optional JSON sidecar "<file>.json" records the branch
// layout. Load/save round-trips are bit-exact.

void save_features(const FeatureSet& set, const std::filesystem::path& path);
FeatureSet load_features(const std::filesystem::path& path);

}  // namespace reidkit
