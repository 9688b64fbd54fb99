#pragma once

#include <unistd.h>

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "reidkit/image.hpp"
#include "reidkit/rng.hpp"

namespace testutil {

// Scratch directory removed on scope exit.
struct TempDir {
    std::filesystem::path path;

    explicit TempDir(const std::string& tag) {
        static std::atomic<int> counter{0};
        path = std::filesystem::temp_directory_path() /
               (tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        std::filesystem::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
};

inline reidkit::Image random_image(int w, int h, int channels, std::uint64_t seed) {
    reidkit::Image img = reidkit::Image::make(w, h, channels);
    reidkit::Rng rng(seed);
    for (auto& byte : img.data) byte = static_cast<std::uint8_t>(rng.uniform_int(0, 255));
    return img;
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_file(const std::filesystem::path& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

// Binary path handed in by ctest (falls back to the build-tree layout).
inline std::string binary_from_env(const char* var, const std::string& fallback) {
    const char* env = std::getenv(var);
    return env ? env : fallback;
}

}  // namespace testutil
