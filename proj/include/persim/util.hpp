#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace persim {

std::string trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char delim);
std::string to_lower(std::string_view s);
bool starts_with_ci(std::string_view s, std::string_view prefix);

// Whitespace-token count; the word-length rule used for narrative profiles.
std::size_t word_count(std::string_view text);

std::optional<long long> parse_int(std::string_view s);
std::optional<double> parse_double(std::string_view s);

// FNV-1a 64-bit, used for template/profile provenance hashes and for
// deriving mock latent traits from persona text.
std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t v);

// splitmix64: cheap seed mixer for deriving independent RNG streams from
// (run seed, persona id, repeat index) style tuples.
std::uint64_t mix64(std::uint64_t x);
std::uint64_t combine_seed(std::uint64_t seed, std::string_view key);
std::uint64_t combine_seed(std::uint64_t seed, std::uint64_t extra);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

std::string iso8601_now();

}  // namespace persim
