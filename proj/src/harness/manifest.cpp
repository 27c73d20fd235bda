#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "subspace/common.hpp"
#include "subspace/harness.hpp"
#include "subspace/rng.hpp"

namespace subspace::harness {

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string file_checksum(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("checksum: cannot open file: " + path);
    std::string bytes(std::istreambuf_iterator<char>(in),
                      std::istreambuf_iterator<char>{});
    char buf[32];
    std::snprintf(buf, sizeof buf, "fnv1a64:%016llx",
                  static_cast<unsigned long long>(fnv1a64(bytes)));
    return buf;
}

void write_file_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw DataError("cannot open file for writing: " + tmp);
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw DataError("write failed: " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

std::string build_string() { return "subspace-lab 0.1.0"; }

void write_manifest(const ExperimentConfig& cfg,
                    const std::vector<std::string>& files,
                    double duration_seconds) {
    std::string out = "# run manifest\n";
    out += serialize_config(cfg);
    out += "rng = ";
    out += RandomStream::method_name();
    out += '\n';
    out += "build = " + build_string() + '\n';
    char buf[48];
    std::snprintf(buf, sizeof buf, "duration_seconds = %.3f\n",
                  duration_seconds);
    out += buf;
    auto dir = std::filesystem::path(cfg.out);
    std::vector<std::string> sorted = files;
    std::sort(sorted.begin(), sorted.end());
    for (const auto& name : sorted) {
        out += "file ";
        out += name;
        out += ' ';
        out += file_checksum((dir / name).string());
        out += '\n';
    }
    write_file_atomic((dir / "manifest.txt").string(), out);
}

}  // namespace subspace::harness
