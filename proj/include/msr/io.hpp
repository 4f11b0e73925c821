#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "msr/params.hpp"
#include "msr/repair.hpp"

namespace msr {

using Json = nlohmann::ordered_json;

inline constexpr int kParamsFormatVersion = 1;
inline constexpr int kManifestFormatVersion = 1;

/// True for JSON integers >= 0, whether stored signed or unsigned.
bool is_nonnegative_integer(const Json& j);

Json field_to_json(const GaloisField& field);
FieldRef field_from_json(const Json& j);

/// Params file: {version, k, field, seed, cauchy{a,b}, V, delta, epsilon,
/// delta_prime, epsilon_prime}, symbols as hex strings.
Json params_to_json(const CodeParams& p);
/// Recomputes every derived matrix and checks the stored dual constants
/// against the recomputed ones (Format error on mismatch). Does not validate.
CodeParams params_from_json(const Json& j);

/// Stable 64-bit FNV-1a fingerprint of the serialized params.
std::string params_fingerprint(const CodeParams& p);

Json report_to_json(const BandwidthReport& report);

std::string read_text(const std::filesystem::path& path);
std::vector<std::uint8_t> read_bytes(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);
void write_bytes(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes);

Json read_json(const std::filesystem::path& path);
/// Two-space indented with a trailing newline.
std::string dump_json(const Json& j);

/// Deterministic pseudo-random bytes.
std::vector<std::uint8_t> random_bytes(std::size_t count, std::uint64_t seed);

} // namespace msr
