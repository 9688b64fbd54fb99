// Toy pixel-hash feature extractor for pipeline tests: each image maps to a
// grid of per-channel block means in [0,1]. Deterministic in the pixels; no
// learning involved.

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "reidkit/feature_io.hpp"
#include "reidkit/image_io.hpp"

namespace fs = std::filesystem;
using namespace reidkit;

namespace {

std::vector<double> block_means(const Image& img, int grid) {
    std::vector<double> feat(static_cast<std::size_t>(grid) * grid * 3, 0.0);
    for (int by = 0; by < grid; ++by) {
        const int y0 = static_cast<int>(static_cast<long>(by) * img.height / grid);
        const int y1 =
            std::max(y0 + 1, static_cast<int>(static_cast<long>(by + 1) * img.height / grid));
        for (int bx = 0; bx < grid; ++bx) {
            const int x0 = static_cast<int>(static_cast<long>(bx) * img.width / grid);
            const int x1 =
                std::max(x0 + 1, static_cast<int>(static_cast<long>(bx + 1) * img.width / grid));
            double sum[3] = {0.0, 0.0, 0.0};
            long count = 0;
            for (int y = y0; y < y1 && y < img.height; ++y) {
                for (int x = x0; x < x1 && x < img.width; ++x) {
                    for (int c = 0; c < 3; ++c) {
                        sum[c] += img.at(x, y, img.channels == 3 ? c : 0);
                    }
                    ++count;
                }
            }
            for (int c = 0; c < 3; ++c) {
                feat[(static_cast<std::size_t>(by) * grid + bx) * 3 + c] =
                    count > 0 ? sum[c] / (255.0 * count) : 0.0;
            }
        }
    }
    return feat;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"toy block-mean feature extractor"};
    std::string input, output;
    int grid = 4;
    app.add_option("--input", input, "directory of images")->required();
    app.add_option("--output", output, "REIDFEAT v1 output file")->required();
    app.add_option("--grid", grid, "pooling grid size")->check(CLI::Range(1, 64));
    CLI11_PARSE(app, argc, argv);

    try {
        std::vector<std::string> files;
        for (const auto& entry : fs::directory_iterator(input)) {
            if (entry.is_regular_file() && is_image_file(entry.path())) {
                files.push_back(entry.path().filename().string());
            }
        }
        std::sort(files.begin(), files.end());
        if (files.empty()) {
            std::cerr << "toy-extractor: no images under " << input << "\n";
            return 1;
        }

        FeatureSet set;
        set.values = Mat(static_cast<int>(files.size()), grid * grid * 3);
        set.person_ids.assign(files.size(), 0);
        set.camera_ids.assign(files.size(), 0);
        for (std::size_t i = 0; i < files.size(); ++i) {
            const Image img = load_image(fs::path(input) / files[i]);
            const std::vector<double> feat = block_means(img, grid);
            std::copy(feat.begin(), feat.end(), set.values.row(static_cast<int>(i)).begin());
        }
        save_features(set, output);
    } catch (const std::exception& e) {
        std::cerr << "toy-extractor: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
