#pragma once

#include <charconv>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace dweb {

// Locale-independent number formatting. All emitted artifacts go through
// these helpers so output is byte-identical across platforms.

std::string fmt_int(long long value);
std::string fmt_uint(unsigned long long value);

// Shortest representation that round-trips exactly (config, manifest, SQL literals).
std::string fmt_real(double value);

// Fixed one decimal (CSV / INSERT measure values).
std::string fmt_fixed1(double value);

// Fixed N decimals (report tables).
std::string fmt_fixed(double value, int decimals);

std::optional<long long> parse_int(std::string_view text);
std::optional<double> parse_real(std::string_view text);
// Accepts decimal or 0x-prefixed hex.
std::optional<std::uint64_t> parse_u64(std::string_view text);

std::string_view trim(std::string_view text);
bool iequals(std::string_view a, std::string_view b);

// FNV-1a 64-bit over a byte string, rendered as 16 lowercase hex digits.
std::uint64_t fnv1a64(std::string_view bytes);
std::string fnv1a64_hex(std::string_view bytes);

}  // namespace dweb
