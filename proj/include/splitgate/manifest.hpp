#pragma once
// Run provenance: every CLI invocation records what ran, on which inputs,
// with which seed and overrides.  The manifest hash covers exactly the
// fields that determine the outputs — wall-clock time is recorded but
// excluded — so identical manifests certify identical artifacts.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace splitgate {

inline constexpr const char* tool_version = "0.1.0";

struct RunManifest {
    std::string command;                  // subcommand name
    std::vector<std::string> input_files;
    std::uint64_t seed = 0;
    // Flag overrides as (name, value) pairs, in command-line order.
    std::vector<std::pair<std::string, std::string>> overrides;
    std::string output_directory;
    std::string version = tool_version;
    double wall_clock_seconds = 0.0;  // informational; never hashed

    // FNV-1a 64-bit over the deterministic fields, as 16 hex digits.
    std::string hash() const;
};

}  // namespace splitgate
