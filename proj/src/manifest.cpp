#include "splitgate/manifest.hpp"

#include <sstream>

namespace splitgate {

namespace {

void fnv1a(std::uint64_t& state, const std::string& text) {
    for (const unsigned char byte : text) {
        state ^= byte;
        state *= 1099511628211ULL;
    }
    // Field separator, so {"ab","c"} and {"a","bc"} hash differently.
    state ^= 0x1fu;
    state *= 1099511628211ULL;
}

}  // namespace

std::string RunManifest::hash() const {
    std::uint64_t state = 14695981039346656037ULL;
    fnv1a(state, command);
    for (const auto& path : input_files) fnv1a(state, path);
    fnv1a(state, std::to_string(seed));
    for (const auto& [name, value] : overrides) {
        fnv1a(state, name);
        fnv1a(state, value);
    }
    fnv1a(state, output_directory);
    fnv1a(state, version);

    std::ostringstream out;
    out << std::hex;
    for (int shift = 60; shift >= 0; shift -= 4)
        out << ((state >> shift) & 0xfu);
    return out.str();
}

}  // namespace splitgate
