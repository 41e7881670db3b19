#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>

#include <json.hpp>

#include "splitconv/base_code.hpp"
#include "splitconv/bounds.hpp"
#include "splitconv/conversion.hpp"
#include "splitconv/convertible.hpp"
#include "splitconv/flow.hpp"

namespace splitconv {

using Json = nlohmann::json;

/// Integer when the denominator is 1, otherwise a "p/q" string.
Json rational_to_json(const Rational& r);
Rational rational_from_json(const Json& j);

Json params_to_json(const ConversionParams& params);

/// Re-derives from ni/ki/nf/kf and rejects files whose derived fields disagree
/// (Error(format)). Derivation errors propagate unchanged.
ConversionParams params_from_json(const Json& j);

Json points_to_json(const EvaluationPoints& points);

/// Loads without validation so that corrupted files reach the MDS checks.
/// Throws Error(format) for non-byte entries.
EvaluationPoints points_from_json(const Json& j);

/// columns[symbol][instance] is the encoding vector of that subsymbol.
Json code_to_json(const VectorCode& code);

Json report_to_json(const BandwidthReport& report);

Json feasibility_to_json(const FeasibilityReport& report);

// Codeword file: "CVTC", version 0x01, field polynomial, n, k, alpha (all
// 16-bit big-endian), then n * alpha subsymbol bytes, symbol-major.

inline constexpr std::uint8_t kCodewordVersion = 0x01;

void write_codeword(std::ostream& os, const Codeword& cw);

/// Throws Error(format) on a bad magic, version, truncation, trailing bytes or a
/// field polynomial different from the active one.
Codeword read_codeword(std::istream& is);

/// Writes the codeword, and a "<path>.json" sidecar holding the unpadded
/// message length when one is given. Throws Error(format) on I/O failure.
void save_codeword(const std::filesystem::path& path, const Codeword& cw,
                   std::optional<std::size_t> message_length = std::nullopt);

Codeword load_codeword(const std::filesystem::path& path);

/// Reads the sidecar if present.
std::optional<std::size_t> load_message_length(const std::filesystem::path& path);

Json load_json(const std::filesystem::path& path);

}  // namespace splitconv
