#pragma once
// Reproducible file emission: every artifact carries the config hash and seed,
// numbers are printed with 9 significant digits, reruns are byte-identical.

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace abc {

struct RunMeta {
    std::uint64_t config_hash = 0;
    std::uint64_t seed = 0;
};

std::uint64_t fnv1a(const std::string& s);

std::string g9(double v);  // %.9g

std::string read_file(const std::string& path);

// rows of doubles under a comma-separated header; two leading comment lines
// carry the metadata.
void write_csv(const std::string& path, const RunMeta& meta, const std::string& header,
               const std::vector<std::vector<double>>& rows);

// body is augmented with config_hash (hex) and seed, then dumped with sorted
// keys and 2-space indent.
void write_json(const std::string& path, const RunMeta& meta, nlohmann::json body);

}  // namespace abc
