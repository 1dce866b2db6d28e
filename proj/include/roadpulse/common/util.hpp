#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace roadpulse {

// Identifier ordering used for deterministic tie-breaks: plain integers
// compare numerically, everything else falls back to lexicographic.
bool natural_less(const std::string& a, const std::string& b);

std::string trim(const std::string& s);
std::vector<std::string> split(const std::string& s, char sep);

// FNV-1a 64-bit, used for output-file content hashes in run manifests.
std::uint64_t fnv1a64(const void* data, std::size_t len);
std::uint64_t fnv1a64_file(const std::string& path);
std::string to_hex(std::uint64_t v);

} // namespace roadpulse
