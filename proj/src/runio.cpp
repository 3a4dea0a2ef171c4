#include "abc/runio.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "abc/prob.hpp"

namespace abc {

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string g9(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot read file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

namespace {

std::string hex64(std::uint64_t v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

void write_all(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("cannot write file: " + path);
    out << content;
    if (!out) throw ValidationError("write failed: " + path);
}

}  // namespace

void write_csv(const std::string& path, const RunMeta& meta, const std::string& header,
               const std::vector<std::vector<double>>& rows) {
    std::ostringstream out;
    out << "# config_hash=" << hex64(meta.config_hash) << "\n";
    out << "# seed=" << meta.seed << "\n";
    out << header << "\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ",";
            out << g9(row[i]);
        }
        out << "\n";
    }
    write_all(path, out.str());
}

void write_json(const std::string& path, const RunMeta& meta, nlohmann::json body) {
    body["config_hash"] = hex64(meta.config_hash);
    body["seed"] = meta.seed;
    write_all(path, body.dump(2) + "\n");
}

}  // namespace abc
