#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "splitconv/base_code.hpp"
#include "splitconv/gf256.hpp"
#include "splitconv/matrix.hpp"

namespace splitconv {

enum class ConversionCase {
  split_down,  // r_initial > r_final
  split_up,    // r_initial <= r_final
};

std::string_view case_name(ConversionCase c);

/// Parameters of an (nI, kI; nF, kF) split conversion, kI = lambda_final * kF,
/// together with the subpacketization and per-symbol download sizes of the
/// matching construction.
struct ConversionParams {
  std::size_t n_initial = 0;
  std::size_t k_initial = 0;
  std::size_t n_final = 0;
  std::size_t k_final = 0;
  std::size_t lambda_final = 0;
  std::size_t r_initial = 0;
  std::size_t r_final = 0;
  std::size_t alpha = 0;
  std::size_t beta1 = 0;  // subsymbols read from each unchanged symbol
  std::size_t beta2 = 0;  // subsymbols read from each retired symbol
  ConversionCase kind = ConversionCase::split_down;

  /// Number of evaluation points shared by the initial and final codes.
  std::size_t max_r() const { return r_initial > r_final ? r_initial : r_final; }

  friend bool operator==(const ConversionParams&, const ConversionParams&) = default;
};

/// Throws Error(not_split_regime) when kF does not divide kI or lambda < 2,
/// Error(no_savings_region) when rF >= kF, Error(invalid_argument) for
/// non-positive counts or n <= k.
ConversionParams derive_params(std::size_t n_initial, std::size_t k_initial, std::size_t n_final,
                               std::size_t k_final);

// The functions below use 1-based indices throughout: instance l in [alpha],
// parity t, final codeword i in [lambda_final], block and offset within block.

struct BlockCoords {
  std::size_t block = 0;
  std::size_t offset = 0;

  friend bool operator==(const BlockCoords&, const BlockCoords&) = default;
};

/// Splits an instance into (block, offset). Blocks 1..lambda hold r_final
/// instances each; split_down has a tail block lambda + 1 of r_initial - r_final.
BlockCoords block_coords(std::size_t instance, const ConversionParams& params);

/// Instance of codeword i's data that sits in initial-code position `instance`
/// after codeword i's first lambda blocks are rotated right by i - 1.
/// Tail-block instances are rejected.
std::size_t permuted_instance(std::size_t instance, std::size_t codeword, const ConversionParams& params);

/// Length alpha*kI column selecting instance l of codeword i's kF data symbols,
/// weighted by the matching slice of base parity vector h_t.
std::vector<Gf> projection_vector(std::size_t codeword, std::size_t parity, std::size_t instance,
                                  const ConversionParams& params, const EvaluationPoints& points);

/// Encoding column of initial parity t at instance l: permuted projections
/// plus, where the construction calls for one, a piggyback.
std::vector<Gf> initial_encoding_vector(std::size_t parity, std::size_t instance, const ConversionParams& params,
                                        const EvaluationPoints& points);

/// Encoding column of parity t of final codeword i at instance l, expressed
/// over the whole initial message.
std::vector<Gf> final_encoding_vector(std::size_t codeword, std::size_t parity, std::size_t instance,
                                      const ConversionParams& params, const EvaluationPoints& points);

/// Coefficient on the split_down piggyback carried by initial parity t in
/// block b at offset o. Equal to 1 for block 1.
Gf piggyback_weight(std::size_t parity, std::size_t block, std::size_t offset, const EvaluationPoints& points,
                    std::size_t k_final);

/// An [n, k, alpha] linear vector code. Symbol s (0-based) instance l (0-based)
/// is message * generator column s*alpha + l.
struct VectorCode {
  std::size_t n = 0;
  std::size_t k = 0;
  std::size_t alpha = 0;
  Matrix generator;  // (alpha*k) x (alpha*n)

  std::size_t column_index(std::size_t symbol, std::size_t instance) const { return symbol * alpha + instance; }
  std::vector<Gf> encoding_vector(std::size_t symbol, std::size_t instance) const {
    return generator.column(column_index(symbol, instance));
  }
  /// True iff the first k symbols are the identity on the message.
  bool is_systematic() const;
};

VectorCode build_initial_code(const ConversionParams& params, const EvaluationPoints& points);

/// The one [nF, kF, alpha] code shared by every final codeword. Built from
/// codeword 1 and checked against every other codeword; throws
/// Error(invariant_violation) on any mismatch.
VectorCode build_final_code(const ConversionParams& params, const EvaluationPoints& points);

/// Every k-subset of symbols determines the message.
bool verify_mds_vector(const VectorCode& code);

/// Points for a construction: the search-ordered first tuple of max_r points
/// certifying the [kI + max_r, kI] base code. With verify_vector_codes, tuples
/// whose initial or final vector code fails verify_mds_vector are skipped.
EvaluationPoints construction_points(const ConversionParams& params, bool verify_vector_codes = false);

}  // namespace splitconv
