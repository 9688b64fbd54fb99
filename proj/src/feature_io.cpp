#include "reidkit/feature_io.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <fstream>

#include <json.hpp>

namespace reidkit {

namespace {

constexpr std::array<std::uint8_t, 8> kMagic = {0x52, 0x45, 0x49, 0x44,
                                                0x46, 0x54, 0x30, 0x31};  // "REIDFT01"

void put_u32(std::string& out, std::uint32_t v) {
    out.push_back(static_cast<char>(v & 0xFF));
    out.push_back(static_cast<char>((v >> 8) & 0xFF));
    out.push_back(static_cast<char>((v >> 16) & 0xFF));
    out.push_back(static_cast<char>((v >> 24) & 0xFF));
}

void put_i32(std::string& out, std::int32_t v) { put_u32(out, static_cast<std::uint32_t>(v)); }
void put_f32(std::string& out, float v) { put_u32(out, std::bit_cast<std::uint32_t>(v)); }

struct Reader {
    const std::uint8_t* data;
    std::size_t size;
    std::size_t pos = 0;
    const std::filesystem::path& path;

    void need(std::size_t n) const {
        if (pos + n > size) {
            throw FeatureFormatError(path.string() + ": truncated feature file");
        }
    }
    std::uint32_t u32() {
        need(4);
        const std::uint32_t v = static_cast<std::uint32_t>(data[pos]) |
                                (static_cast<std::uint32_t>(data[pos + 1]) << 8) |
                                (static_cast<std::uint32_t>(data[pos + 2]) << 16) |
                                (static_cast<std::uint32_t>(data[pos + 3]) << 24);
        pos += 4;
        return v;
    }
    std::int32_t i32() { return static_cast<std::int32_t>(u32()); }
    float f32() { return std::bit_cast<float>(u32()); }
};

std::filesystem::path sidecar_path(const std::filesystem::path& path) {
    return std::filesystem::path(path.string() + ".json");
}

}  // namespace

void save_features(const FeatureSet& set, const std::filesystem::path& path) {
    set.validate();
    std::string out;
    out.reserve(20 + static_cast<std::size_t>(set.size()) * (8 + 4 * set.dim()));
    out.append(reinterpret_cast<const char*>(kMagic.data()), kMagic.size());
    put_u32(out, static_cast<std::uint32_t>(set.size()));
    put_u32(out, static_cast<std::uint32_t>(set.dim()));
    put_u32(out, set.flags);
    for (int i = 0; i < set.size(); ++i) {
        put_i32(out, set.person_ids[i]);
        put_i32(out, set.camera_ids[i]);
        for (int j = 0; j < set.dim(); ++j) {
            put_f32(out, static_cast<float>(set.values(i, j)));
        }
    }

    std::ofstream file(path, std::ios::binary);
    if (!file) throw FeatureFormatError(path.string() + ": cannot open for writing");
    file.write(out.data(), static_cast<std::streamsize>(out.size()));
    if (!file) throw FeatureFormatError(path.string() + ": write failed");

    if (!set.layout.empty()) {
        nlohmann::json sidecar;
        for (BranchId id : set.layout) sidecar["branches"].push_back(std::string(branch_name(id)));
        std::ofstream side(sidecar_path(path));
        if (!side) throw FeatureFormatError(path.string() + ": cannot write sidecar");
        side << sidecar.dump(2) << "\n";
    }
}

FeatureSet load_features(const std::filesystem::path& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) throw FeatureFormatError(path.string() + ": cannot open");
    std::string bytes((std::istreambuf_iterator<char>(file)), std::istreambuf_iterator<char>());

    Reader r{reinterpret_cast<const std::uint8_t*>(bytes.data()), bytes.size(), 0, path};
    r.need(kMagic.size());
    for (std::uint8_t m : kMagic) {
        if (r.data[r.pos++] != m) {
            throw FeatureFormatError(path.string() + ": bad magic (not a REIDFEAT v1 file)");
        }
    }
    const std::uint32_t n = r.u32();
    const std::uint32_t d = r.u32();
    const std::uint32_t flags = r.u32();
    if (n == 0 || d == 0 || n > (1u << 26) || d > (1u << 20)) {
        throw FeatureFormatError(path.string() + ": implausible record counts");
    }
    r.need(static_cast<std::size_t>(n) * (8 + 4 * static_cast<std::size_t>(d)));

    FeatureSet set;
    set.flags = flags;
    set.values = Mat(static_cast<int>(n), static_cast<int>(d));
    set.person_ids.resize(n);
    set.camera_ids.resize(n);
    for (std::uint32_t i = 0; i < n; ++i) {
        set.person_ids[i] = r.i32();
        set.camera_ids[i] = r.i32();
        for (std::uint32_t j = 0; j < d; ++j) {
            set.values(static_cast<int>(i), static_cast<int>(j)) = r.f32();
        }
    }
    if (r.pos != r.size) throw FeatureFormatError(path.string() + ": trailing bytes");

    const auto side = sidecar_path(path);
    if (std::filesystem::exists(side)) {
        std::ifstream sidein(side);
        nlohmann::json j;
        try {
            sidein >> j;
        } catch (const nlohmann::json::exception& e) {
            throw FeatureFormatError(side.string() + ": " + e.what());
        }
        for (const auto& name : j.value("branches", nlohmann::json::array())) {
            const auto id = branch_from_name(name.get<std::string>());
            if (!id) throw FeatureFormatError(side.string() + ": unknown branch name");
            set.layout.push_back(*id);
        }
        int total = 0;
        for (BranchId id : set.layout) total += branch_dim(id);
        if (total != set.dim()) {
            throw FeatureFormatError(side.string() + ": layout does not match feature dim");
        }
    }
    return set;
}

}  // namespace reidkit
