#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "splitconv/base_code.hpp"
#include "splitconv/bounds.hpp"
#include "splitconv/convertible.hpp"
#include "splitconv/gf256.hpp"

namespace splitconv {

/// n symbols of alpha subsymbols, stored symbol-major. Indices are 0-based.
struct Codeword {
  std::size_t n = 0;
  std::size_t k = 0;
  std::size_t alpha = 0;
  std::vector<Gf> subsymbols;

  Codeword() = default;
  Codeword(std::size_t n_, std::size_t k_, std::size_t alpha_)
      : n(n_), k(k_), alpha(alpha_), subsymbols(n_ * alpha_) {}

  std::span<Gf> symbol(std::size_t s) { return {subsymbols.data() + s * alpha, alpha}; }
  std::span<const Gf> symbol(std::size_t s) const { return {subsymbols.data() + s * alpha, alpha}; }
  Gf& at(std::size_t s, std::size_t l) { return subsymbols[s * alpha + l]; }
  Gf at(std::size_t s, std::size_t l) const { return subsymbols[s * alpha + l]; }

  friend bool operator==(const Codeword&, const Codeword&) = default;
};

/// Throws Error(dimension_mismatch) unless message.size() == alpha * k.
Codeword encode(const VectorCode& code, std::span<const Gf> message);

struct SymbolData {
  std::size_t index = 0;  // 0-based symbol index
  std::vector<Gf> subsymbols;
};

/// Recovers the alpha*k message from exactly k distinct symbols. Throws
/// Error(invalid_argument) on a wrong count or duplicate, and
/// Error(invariant_violation) if the system is singular.
std::vector<Gf> decode(const VectorCode& code, std::span<const SymbolData> available);

enum class SymbolRole { unchanged, retired };

struct SymbolDownload {
  std::size_t symbol = 0;    // 0-based index into the initial codeword
  SymbolRole role = SymbolRole::unchanged;
  std::size_t codeword = 0;  // final codeword (1-based) for unchanged symbols, 0 for retired
  std::vector<std::size_t> instances;  // 0-based subsymbol indices to transfer
};

/// Which subsymbols each initial symbol sends to the converter.
struct DownloadPlan {
  std::vector<SymbolDownload> symbols;  // indexed by initial symbol

  std::size_t total() const;
  bool permits(std::size_t symbol, std::size_t instance) const;
};

/// Plan used by the bandwidth-optimal conversion: beta1 subsymbols from every
/// data symbol and beta2 from every initial parity.
DownloadPlan make_download_plan(const ConversionParams& params);

/// Plan of the default approach: all of every data symbol, nothing from parities.
DownloadPlan make_default_plan(const ConversionParams& params);

struct BandwidthReport {
  std::size_t downloaded_subsymbols = 0;
  std::size_t written_subsymbols = 0;
  std::size_t gamma_r = 0;
  std::size_t gamma_w = 0;
  std::size_t gamma = 0;
  std::size_t baseline_default = 0;
  std::size_t baseline_access_optimal = 0;
  Rational bound_loose;
  std::optional<Rational> bound_tight;  // only defined for rI >= rF
};

struct ConversionResult {
  std::vector<Codeword> finals;  // one per final codeword, in order
  BandwidthReport report;
  std::size_t unused_downloads = 0;  // planned subsymbols never consumed
};

/// Split conversion touching only planned subsymbols. Throws
/// Error(plan_violation) if the procedure reaches for anything else and
/// Error(dimension_mismatch) if the codeword shape does not match params.
ConversionResult convert(const Codeword& initial, const ConversionParams& params, const EvaluationPoints& points);

/// Same procedure, restricted to an arbitrary plan.
ConversionResult convert(const Codeword& initial, const ConversionParams& params, const EvaluationPoints& points,
                         const DownloadPlan& plan);

/// Reads all data, re-encodes each slice under the final code.
ConversionResult convert_default(const Codeword& initial, const ConversionParams& params,
                                 const EvaluationPoints& points);

/// Message slice m_i (1-based codeword) of a full initial message.
std::vector<Gf> message_slice(std::span<const Gf> message, std::size_t codeword, const ConversionParams& params);

}  // namespace splitconv
