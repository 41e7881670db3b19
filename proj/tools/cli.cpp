#include "cli.hpp"

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iterator>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "splitconv/base_code.hpp"
#include "splitconv/bounds.hpp"
#include "splitconv/conversion.hpp"
#include "splitconv/convertible.hpp"
#include "splitconv/error.hpp"
#include "splitconv/flow.hpp"
#include "splitconv/gf256.hpp"
#include "splitconv/serialize.hpp"

namespace splitconv::cli {

namespace {

namespace fs = std::filesystem;

// Every flag of every subcommand; only the active subcommand's fields are read.
struct RunConfig {
  std::string field_poly;
  std::size_t ni = 0, ki = 0, nf = 0, kf = 0;
  std::string params_file;
  std::string points_file;
  std::string in;
  std::string out;
  std::string out_dir;
  std::string report;
  std::string symbols;
  bool default_plan = false;
  bool final_code = false;
  bool vector_check = true;
  std::uint64_t seed = 1;
  std::size_t trials = 20;
  std::int64_t lf = 2;
  std::string ri_over_ki;
  std::size_t samples = 100;
  std::optional<std::int64_t> example_kf;
  bool json = false;
  std::string beta1;
  std::string beta2;
};

// Restores the process-wide field on scope exit.
class FieldGuard {
 public:
  FieldGuard() : saved_(gf::polynomial()) {}
  ~FieldGuard() {
    if (gf::polynomial() != saved_) gf::configure(saved_);
  }
  FieldGuard(const FieldGuard&) = delete;
  FieldGuard& operator=(const FieldGuard&) = delete;

 private:
  std::uint16_t saved_;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

int exit_code(Errc code) {
  switch (code) {
    case Errc::not_split_regime: return kNotSplitRegime;
    case Errc::no_savings_region: return kNoSavingsRegion;
    default: return kInputError;
  }
}

void report_error(std::ostream& err, const std::string& reason, const std::string& message) {
  err << Json{{"error", reason}, {"message", message}}.dump() << '\n';
}

std::uint16_t parse_poly(const std::string& text) {
  try {
    std::size_t used = 0;
    const unsigned long v = std::stoul(text, &used, 0);
    if (used != text.size() || v > 0xFFFF) throw UsageError("bad field polynomial '" + text + "'");
    return static_cast<std::uint16_t>(v);
  } catch (const std::logic_error&) {
    throw UsageError("bad field polynomial '" + text + "'");
  }
}

ConversionParams load_params(const RunConfig& cfg) { return params_from_json(load_json(cfg.params_file)); }

EvaluationPoints load_points(const RunConfig& cfg, const ConversionParams& params) {
  if (cfg.points_file.empty()) return construction_points(params, cfg.vector_check);
  return points_from_json(load_json(cfg.points_file));
}

std::vector<Gf> read_bytes(const fs::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(Errc::format, "cannot open " + path.string());
  std::vector<Gf> out;
  for (auto it = std::istreambuf_iterator<char>(is); it != std::istreambuf_iterator<char>(); ++it) {
    out.emplace_back(static_cast<std::uint8_t>(*it));
  }
  return out;
}

void write_bytes(const fs::path& path, std::span<const Gf> data) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(Errc::format, "cannot write " + path.string());
  for (auto x : data) os.put(static_cast<char>(x.value()));
  if (!os) throw Error(Errc::format, "write failed for " + path.string());
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream os(path);
  if (!os) throw Error(Errc::format, "cannot write " + path.string());
  os << text;
}

// "1,3,5" (1-based) to 0-based indices.
std::vector<std::size_t> parse_symbols(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const unsigned long v = std::stoul(item, &used);
      if (used != item.size() || v == 0) throw UsageError("bad symbol index '" + item + "'");
      out.push_back(v - 1);
    } catch (const std::logic_error&) {
      throw UsageError("bad symbol index '" + item + "'");
    }
  }
  return out;
}

// Picks the initial or final code from the codeword's dimensions.
VectorCode code_for(const Codeword& cw, const ConversionParams& p, const EvaluationPoints& points) {
  if (cw.alpha == p.alpha && cw.n == p.n_initial && cw.k == p.k_initial) return build_initial_code(p, points);
  if (cw.alpha == p.alpha && cw.n == p.n_final && cw.k == p.k_final) return build_final_code(p, points);
  throw Error(Errc::format, "codeword dimensions match neither the initial nor the final code");
}

std::string fixed6(const Rational& r) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(6) << to_double(r);
  return os.str();
}

// CLI betas are in subsymbols; the flow oracle works with alpha = 1.
Rational parse_beta(const std::string& text, std::size_t alpha) {
  const Rational v = parse_rational(text);
  if (v < Rational(0) || v > Rational(static_cast<std::int64_t>(alpha))) {
    throw Error(Errc::invalid_argument, "beta must lie in [0, alpha]");
  }
  return v / Rational(static_cast<std::int64_t>(alpha));
}

int cmd_params(const RunConfig& cfg, std::ostream& out) {
  out << params_to_json(derive_params(cfg.ni, cfg.ki, cfg.nf, cfg.kf)).dump(2) << '\n';
  return kSuccess;
}

int cmd_search_points(const RunConfig& cfg, std::ostream& out) {
  const auto p = derive_params(cfg.ni, cfg.ki, cfg.nf, cfg.kf);
  const auto points = construction_points(p, cfg.vector_check);
  const Json j{{"points", points_to_json(points)}, {"field_poly", gf::polynomial()}};
  if (cfg.out.empty()) {
    out << j.dump(2) << '\n';
  } else {
    write_text(cfg.out, j.dump(2) + "\n");
  }
  return kSuccess;
}

int cmd_code(const RunConfig& cfg, std::ostream& out) {
  const auto p = load_params(cfg);
  const auto points = load_points(cfg, p);
  const auto code = cfg.final_code ? build_final_code(p, points) : build_initial_code(p, points);
  out << code_to_json(code).dump(2) << '\n';
  return kSuccess;
}

int cmd_encode(const RunConfig& cfg, std::ostream&) {
  const auto p = load_params(cfg);
  const auto points = load_points(cfg, p);
  auto message = read_bytes(cfg.in);
  const std::size_t length = message.size();
  if (length > p.alpha * p.k_initial) {
    throw Error(Errc::format, "message of " + std::to_string(length) + " bytes exceeds alpha*kI = " +
                                  std::to_string(p.alpha * p.k_initial));
  }
  message.resize(p.alpha * p.k_initial);
  save_codeword(cfg.out, encode(build_initial_code(p, points), message), length);
  return kSuccess;
}

int cmd_decode(const RunConfig& cfg, std::ostream&) {
  const auto p = load_params(cfg);
  const auto points = load_points(cfg, p);
  const Codeword cw = load_codeword(cfg.in);
  const VectorCode code = code_for(cw, p, points);

  std::vector<std::size_t> chosen;
  if (cfg.symbols.empty()) {
    for (std::size_t s = 0; s < code.k; ++s) chosen.push_back(s);
  } else {
    chosen = parse_symbols(cfg.symbols);
  }
  std::vector<SymbolData> available;
  for (auto s : chosen) {
    if (s >= cw.n) throw UsageError("symbol index " + std::to_string(s + 1) + " exceeds n");
    const auto sym = cw.symbol(s);
    available.push_back({s, {sym.begin(), sym.end()}});
  }
  auto message = decode(code, available);
  if (const auto len = load_message_length(cfg.in)) message.resize(std::min(*len, message.size()));
  write_bytes(cfg.out, message);
  return kSuccess;
}

int cmd_convert(const RunConfig& cfg, std::ostream& out) {
  const auto p = load_params(cfg);
  const auto points = load_points(cfg, p);
  const Codeword initial = load_codeword(cfg.in);
  if (initial.n != p.n_initial || initial.k != p.k_initial || initial.alpha != p.alpha) {
    throw Error(Errc::format, "input codeword does not match the initial code dimensions");
  }
  const auto result = cfg.default_plan ? convert_default(initial, p, points) : convert(initial, p, points);

  // Final codeword i holds message bytes [(i-1) alpha kF, i alpha kF).
  const auto length = load_message_length(cfg.in);
  const std::size_t slice = p.alpha * p.k_final;
  fs::create_directories(cfg.out_dir);
  for (std::size_t i = 0; i < result.finals.size(); ++i) {
    std::optional<std::size_t> part;
    if (length) part = *length > i * slice ? std::min(*length - i * slice, slice) : 0;
    save_codeword(fs::path(cfg.out_dir) / ("final_" + std::to_string(i + 1) + ".cvtc"), result.finals[i], part);
  }

  Json j = report_to_json(result.report);
  j["unused_downloads"] = result.unused_downloads;
  j["plan"] = cfg.default_plan ? "default" : "optimized";
  const std::string text = j.dump(2) + "\n";
  out << text;
  if (!cfg.report.empty()) write_text(cfg.report, text);
  return kSuccess;
}

Json check(const std::string& name, bool pass, Json detail) {
  return Json{{"name", name}, {"pass", pass}, {"detail", std::move(detail)}};
}

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  const auto p = load_params(cfg);
  const auto points = load_points(cfg, p);
  Json checks = Json::array();

  // Codes that fail to build (e.g. repeated points) count as failed checks.
  std::optional<VectorCode> initial, final_code;
  try {
    initial = build_initial_code(p, points);
    checks.push_back(check("mds_initial", verify_mds_vector(*initial), Json::object()));
  } catch (const Error& e) {
    checks.push_back(check("mds_initial", false, Json{{"error", reason_code(e.code())}, {"message", e.what()}}));
  }
  try {
    final_code = build_final_code(p, points);
    checks.push_back(check("mds_final", verify_mds_vector(*final_code), Json::object()));
  } catch (const Error& e) {
    checks.push_back(check("mds_final", false, Json{{"error", reason_code(e.code())}, {"message", e.what()}}));
  }

  if (initial && final_code) {
    std::mt19937_64 rng(cfg.seed);
    std::size_t mismatches = 0, decode_failures = 0;
    std::optional<BandwidthReport> report;
    std::size_t unused = 0;
    for (std::size_t trial = 0; trial < cfg.trials; ++trial) {
      std::vector<Gf> message(p.alpha * p.k_initial);
      for (auto& x : message) x = Gf(static_cast<std::uint8_t>(rng() & 0xFF));
      try {
        const auto result = convert(encode(*initial, message), p, points);
        report = result.report;
        unused = std::max(unused, result.unused_downloads);
        for (std::size_t i = 0; i < p.lambda_final; ++i) {
          const auto slice = message_slice(message, i + 1, p);
          if (result.finals[i] != encode(*final_code, slice)) ++mismatches;
          // Decode from a random kF-subset under the shared final code.
          std::vector<std::size_t> order(p.n_final);
          for (std::size_t s = 0; s < order.size(); ++s) order[s] = s;
          std::shuffle(order.begin(), order.end(), rng);
          std::vector<SymbolData> available;
          for (std::size_t s = 0; s < p.k_final; ++s) {
            const auto sym = result.finals[i].symbol(order[s]);
            available.push_back({order[s], {sym.begin(), sym.end()}});
          }
          if (decode(*final_code, available) != slice) ++decode_failures;
        }
      } catch (const Error&) {
        ++mismatches;
      }
    }
    checks.push_back(check("round_trip", mismatches == 0 && decode_failures == 0,
                           Json{{"trials", cfg.trials}, {"mismatches", mismatches}, {"decode_failures", decode_failures}}));

    if (report) {
      const std::size_t expected = p.lambda_final * p.k_final * p.beta1 + p.r_initial * p.beta2;
      const bool accounting = report->gamma_r == expected && report->downloaded_subsymbols == report->gamma_r &&
                              report->gamma_w == report->written_subsymbols &&
                              report->gamma_w == p.lambda_final * p.r_final * p.alpha && unused == 0;
      checks.push_back(check("bandwidth_accounting", accounting,
                             Json{{"gamma_r", report->gamma_r},
                                  {"expected_gamma_r", expected},
                                  {"gamma_w", report->gamma_w},
                                  {"unused_downloads", unused}}));

      // Optimality against whichever bound is proven for this region.
      const Rational measured(static_cast<std::int64_t>(report->gamma_r));
      bool optimal = true;
      if (p.r_initial <= p.r_final) optimal = optimal && measured == report->bound_loose;
      if (p.r_initial >= p.r_final) optimal = optimal && report->bound_tight && measured == *report->bound_tight;
      checks.push_back(check("optimality", optimal, report_to_json(*report)));
    } else {
      checks.push_back(check("bandwidth_accounting", false, Json{{"message", "no successful conversion"}}));
      checks.push_back(check("optimality", false, Json{{"message", "no successful conversion"}}));
    }
  } else {
    checks.push_back(check("round_trip", false, Json{{"message", "code construction failed"}}));
  }

  const auto a = static_cast<std::int64_t>(p.alpha);
  const BetaAssignment betas{Rational(static_cast<std::int64_t>(p.beta1), a),
                             Rational(static_cast<std::int64_t>(p.beta2), a)};
  const auto flow = check_feasibility(BoundInputs::from(p), betas);
  checks.push_back(check("flow_feasibility", flow.feasible, feasibility_to_json(flow)));

  bool pass = true;
  for (const auto& c : checks) pass = pass && c.at("pass").get<bool>();
  const Json j{{"params", params_to_json(p)},
               {"points", points_to_json(points)},
               {"seed", cfg.seed},
               {"trials", cfg.trials},
               {"checks", checks},
               {"pass", pass}};
  out << j.dump(2) << '\n';
  return pass ? kSuccess : kVerificationFailure;
}

int cmd_bounds(const RunConfig& cfg, std::ostream& out) {
  const auto pts = curve(cfg.lf, parse_rational(cfg.ri_over_ki), cfg.samples, cfg.example_kf);
  std::ostringstream os;
  if (cfg.json) {
    Json arr = Json::array();
    for (const auto& pt : pts) {
      arr.push_back(Json{{"rf_over_ri", rational_to_json(pt.rf_over_ri)},
                         {"rel_default", rational_to_json(pt.rel_default)},
                         {"rel_access_opt", rational_to_json(pt.rel_access_opt)},
                         {"rel_bound", rational_to_json(pt.rel_bound)},
                         {"achievable", pt.achievable}});
    }
    os << arr.dump(2) << '\n';
  } else {
    os << "rf_over_ri,rel_default,rel_access_opt,rel_bound,achievable\n";
    for (const auto& pt : pts) {
      os << fixed6(pt.rf_over_ri) << ',' << fixed6(pt.rel_default) << ',' << fixed6(pt.rel_access_opt) << ','
         << fixed6(pt.rel_bound) << ',' << (pt.achievable ? 1 : 0) << '\n';
    }
  }
  if (cfg.out.empty()) {
    out << os.str();
  } else {
    write_text(cfg.out, os.str());
  }
  return kSuccess;
}

int cmd_bounds_table(const RunConfig& cfg, std::ostream& out) {
  const auto p = load_params(cfg);
  const auto b = BoundInputs::from(p);
  const Rational alpha(static_cast<std::int64_t>(p.alpha));
  const std::vector<std::pair<std::string, Rational>> rows{{"Default", gamma_read_default(b)},
                                                           {"Access optimal", gamma_read_access_optimal(b)},
                                                           {"Bandwidth optimal", bound_combined(b)}};
  if (cfg.json) {
    Json arr = Json::array();
    for (const auto& [name, per_alpha] : rows) {
      arr.push_back(Json{{"approach", name},
                         {"per_alpha", rational_to_json(per_alpha)},
                         {"gamma_r", rational_to_json(per_alpha * alpha)}});
    }
    out << Json{{"params", params_to_json(p)}, {"rows", arr}}.dump(2) << '\n';
    return kSuccess;
  }
  out << std::left << std::setw(20) << "approach" << std::setw(15) << "gamma_r/alpha"
      << "gamma_r (alpha=" << p.alpha << ")\n";
  for (const auto& [name, per_alpha] : rows) {
    out << std::left << std::setw(20) << name << std::setw(15) << to_string(per_alpha) << to_string(per_alpha * alpha)
        << '\n';
  }
  return kSuccess;
}

int cmd_flow_check(const RunConfig& cfg, std::ostream& out) {
  const auto p = load_params(cfg);
  const auto b = BoundInputs::from(p);
  const auto a = static_cast<std::int64_t>(p.alpha);
  BetaAssignment betas{Rational(static_cast<std::int64_t>(p.beta1), a), Rational(static_cast<std::int64_t>(p.beta2), a)};
  if (!cfg.beta1.empty()) betas.beta1 = parse_beta(cfg.beta1, p.alpha);
  if (!cfg.beta2.empty()) betas.beta2 = parse_beta(cfg.beta2, p.alpha);

  const auto rep = check_feasibility(b, betas);
  const Rational scale(a);
  const Json j{{"alpha", p.alpha},
               {"beta1", rational_to_json(betas.beta1 * scale)},
               {"beta2", rational_to_json(betas.beta2 * scale)},
               {"feasible", rep.feasible},
               {"worst_flow", rational_to_json(rep.worst_flow * scale)},
               {"worst_collectors", rep.worst_collectors},
               {"lemma_cut_value", rational_to_json(rep.lemma_cut_value * scale)},
               {"required_flow", rational_to_json(rep.required_flow * scale)},
               {"configurations", rep.configurations}};
  out << j.dump(2) << '\n';
  return rep.feasible ? kSuccess : kVerificationFailure;
}

void add_code_dims(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--ni", cfg.ni, "initial code length")->required();
  sub->add_option("--ki", cfg.ki, "initial code dimension")->required();
  sub->add_option("--nf", cfg.nf, "final code length")->required();
  sub->add_option("--kf", cfg.kf, "final code dimension")->required();
}

void add_params_file(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--params-file", cfg.params_file, "JSON conversion parameters")->required();
}

void add_points_file(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--points-file", cfg.points_file, "JSON evaluation points (searched when omitted)");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Split-regime convertible codes: construction, conversion and bandwidth bounds", "splitconv"};
  app.require_subcommand(1);
  app.add_option("--field-poly", cfg.field_poly, "GF(2^8) reduction polynomial, e.g. 0x11D");

  auto* params = app.add_subcommand("params", "derive conversion parameters");
  add_code_dims(params, cfg);

  auto* search = app.add_subcommand("search-points", "find evaluation points for the construction");
  add_code_dims(search, cfg);
  search->add_option("--out", cfg.out, "output file (stdout when omitted)");
  search->add_flag("!--no-vector-check", cfg.vector_check, "skip the vector-code MDS check during the search");

  auto* code = app.add_subcommand("code", "dump encoding vectors of the initial or final code");
  add_params_file(code, cfg);
  add_points_file(code, cfg);
  code->add_flag("--final", cfg.final_code, "dump the final code");

  auto* enc = app.add_subcommand("encode", "encode a message under the initial code");
  add_params_file(enc, cfg);
  add_points_file(enc, cfg);
  enc->add_option("--in", cfg.in, "raw message bytes")->required();
  enc->add_option("--out", cfg.out, "output codeword file")->required();

  auto* dec = app.add_subcommand("decode", "recover the message from k symbols");
  add_params_file(dec, cfg);
  add_points_file(dec, cfg);
  dec->add_option("--in", cfg.in, "codeword file")->required();
  dec->add_option("--out", cfg.out, "output message file")->required();
  dec->add_option("--symbols", cfg.symbols, "comma-separated 1-based symbol indices (first k when omitted)");

  auto* conv = app.add_subcommand("convert", "convert an initial codeword into final codewords");
  add_params_file(conv, cfg);
  add_points_file(conv, cfg);
  conv->add_option("--in", cfg.in, "initial codeword file")->required();
  conv->add_option("--out-dir", cfg.out_dir, "directory for final_<i>.cvtc")->required();
  conv->add_option("--report", cfg.report, "also write the bandwidth report here");
  conv->add_flag("--default", cfg.default_plan, "read everything and re-encode");

  auto* ver = app.add_subcommand("verify", "run the verification suite");
  add_params_file(ver, cfg);
  add_points_file(ver, cfg);
  ver->add_option("--seed", cfg.seed, "message RNG seed");
  ver->add_option("--trials", cfg.trials, "random messages to convert");

  auto* bounds = app.add_subcommand("bounds", "read bandwidth curve relative to the default approach");
  bounds->add_option("--lf", cfg.lf, "number of final codewords per initial codeword")->required();
  bounds->add_option("--ri-over-ki", cfg.ri_over_ki, "rI/kI as a decimal or p/q")->required();
  bounds->add_option("--samples", cfg.samples, "number of rF/rI samples");
  bounds->add_option("--kf", cfg.example_kf, "example kF for the achievable column");
  bounds->add_option("--out", cfg.out, "output file (stdout when omitted)");
  bounds->add_flag("--json", cfg.json, "emit exact rationals as JSON");

  auto* table = app.add_subcommand("bounds-table", "read bandwidth of each approach");
  add_params_file(table, cfg);
  table->add_flag("--json", cfg.json, "emit JSON");

  auto* flow = app.add_subcommand("flow-check", "information-flow feasibility of (beta1, beta2)");
  add_params_file(flow, cfg);
  flow->add_option("--beta1", cfg.beta1, "subsymbols per unchanged symbol (construction value when omitted)");
  flow->add_option("--beta2", cfg.beta2, "subsymbols per retired symbol (construction value when omitted)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    report_error(err, "USAGE", e.what());
    return kInputError;
  }

  FieldGuard guard;
  try {
    if (!cfg.field_poly.empty()) gf::configure(parse_poly(cfg.field_poly));
    if (params->parsed()) return cmd_params(cfg, out);
    if (search->parsed()) return cmd_search_points(cfg, out);
    if (code->parsed()) return cmd_code(cfg, out);
    if (enc->parsed()) return cmd_encode(cfg, out);
    if (dec->parsed()) return cmd_decode(cfg, out);
    if (conv->parsed()) return cmd_convert(cfg, out);
    if (ver->parsed()) return cmd_verify(cfg, out);
    if (bounds->parsed()) return cmd_bounds(cfg, out);
    if (table->parsed()) return cmd_bounds_table(cfg, out);
    if (flow->parsed()) return cmd_flow_check(cfg, out);
  } catch (const UsageError& e) {
    report_error(err, "USAGE", e.what());
    return kInputError;
  } catch (const Error& e) {
    report_error(err, reason_code(e.code()), e.what());
    return exit_code(e.code());
  } catch (const Json::exception& e) {
    report_error(err, "FORMAT_ERROR", e.what());
    return kInputError;
  } catch (const fs::filesystem_error& e) {
    report_error(err, "IO_ERROR", e.what());
    return kInputError;
  }
  report_error(err, "USAGE", "no subcommand");
  return kInputError;
}

}  // namespace splitconv::cli
