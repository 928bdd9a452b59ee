#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace sape {

// Raised for malformed or inconsistent input data. The CLI maps this to
// exit code 2, as opposed to usage errors (exit code 1).
struct data_error : std::runtime_error {
  explicit data_error(const std::string& what) : std::runtime_error(what) {}
};

std::vector<std::string> split_ws(const std::string& line);
std::vector<std::string> split_on(const std::string& s, const std::string& sep);
std::string join(const std::vector<std::string>& tokens, const std::string& sep = " ");

// Structural UTF-8 validation; on failure *bad_byte (if given) receives the
// offset of the offending byte.
bool utf8_valid(const std::string& s, std::size_t* bad_byte = nullptr);
std::vector<uint32_t> utf8_decode(const std::string& s);
std::string utf8_encode(const std::vector<uint32_t>& cps);

// Lowercase for ASCII, Latin-1 supplement and Latin Extended-A.
uint32_t lowercase_codepoint(uint32_t cp);
std::string lowercase_token(const std::string& token);

std::vector<std::string> read_lines(const std::string& path);
void write_lines(const std::string& path, const std::vector<std::string>& lines);
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

uint64_t fnv1a64(const std::string& data);
std::string fnv1a64_hex(const std::string& data);

// Deterministic draws on top of std::mt19937_64. The engine's output is
// pinned by the standard; std::uniform_* distributions are not.
inline uint64_t rng_below(std::mt19937_64& g, uint64_t n) { return g() % n; }
inline double rng_unit(std::mt19937_64& g) {
  return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

}  // namespace sape
