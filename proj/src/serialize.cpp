#include "splitconv/serialize.hpp"

#include <array>
#include <fstream>
#include <iterator>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "splitconv/error.hpp"

namespace splitconv {

namespace {

constexpr std::array<char, 4> kMagic{'C', 'V', 'T', 'C'};
constexpr std::size_t kHeaderSize = 4 + 1 + 2 * 4;

void put_u16(std::vector<char>& out, std::size_t v) {
  if (v > 0xFFFF) throw Error(Errc::format, "value does not fit the 16-bit header field");
  out.push_back(static_cast<char>((v >> 8) & 0xFF));
  out.push_back(static_cast<char>(v & 0xFF));
}

std::size_t get_u16(const std::string& buf, std::size_t at) {
  return (static_cast<std::size_t>(static_cast<unsigned char>(buf[at])) << 8) |
         static_cast<std::size_t>(static_cast<unsigned char>(buf[at + 1]));
}

std::filesystem::path sidecar(const std::filesystem::path& path) {
  auto p = path;
  p += ".json";
  return p;
}

}  // namespace

Json rational_to_json(const Rational& r) {
  if (r.denominator() == 1) return r.numerator();
  return to_string(r);
}

Rational rational_from_json(const Json& j) {
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  if (j.is_string()) return parse_rational(j.get<std::string>());
  throw Error(Errc::format, "expected an integer or a rational string");
}

Json params_to_json(const ConversionParams& p) {
  return Json{{"ni", p.n_initial},   {"ki", p.k_initial}, {"nf", p.n_final},  {"kf", p.k_final},
              {"lambda_f", p.lambda_final}, {"ri", p.r_initial}, {"rf", p.r_final}, {"alpha", p.alpha},
              {"beta1", p.beta1},    {"beta2", p.beta2},  {"case", std::string(case_name(p.kind))}};
}

ConversionParams params_from_json(const Json& j) {
  ConversionParams p;
  try {
    p = derive_params(j.at("ni").get<std::size_t>(), j.at("ki").get<std::size_t>(), j.at("nf").get<std::size_t>(),
                      j.at("kf").get<std::size_t>());
  } catch (const Json::exception& e) {
    throw Error(Errc::format, std::string("malformed params: ") + e.what());
  }
  // Optional derived fields must agree with the derivation.
  const Json full = params_to_json(p);
  for (const auto& [key, value] : j.items()) {
    if (full.contains(key) && full.at(key) != value) {
      throw Error(Errc::format, "params field '" + key + "' disagrees with the derived value");
    }
  }
  return p;
}

Json points_to_json(const EvaluationPoints& points) {
  Json arr = Json::array();
  for (auto x : points.values()) arr.push_back(x.value());
  return arr;
}

EvaluationPoints points_from_json(const Json& j) {
  const Json& arr = j.is_object() && j.contains("points") ? j.at("points") : j;
  if (!arr.is_array()) throw Error(Errc::format, "points must be a JSON array");
  std::vector<Gf> values;
  for (const auto& v : arr) {
    if (!v.is_number_integer() || v.get<std::int64_t>() < 0 || v.get<std::int64_t>() > 255) {
      throw Error(Errc::format, "points must be integers in [0, 255]");
    }
    values.emplace_back(static_cast<std::uint8_t>(v.get<int>()));
  }
  return EvaluationPoints::unchecked(std::move(values));
}

Json code_to_json(const VectorCode& code) {
  Json columns = Json::array();
  for (std::size_t s = 0; s < code.n; ++s) {
    Json symbol = Json::array();
    for (std::size_t l = 0; l < code.alpha; ++l) {
      Json col = Json::array();
      for (auto x : code.encoding_vector(s, l)) col.push_back(x.value());
      symbol.push_back(std::move(col));
    }
    columns.push_back(std::move(symbol));
  }
  return Json{{"n", code.n}, {"k", code.k}, {"alpha", code.alpha}, {"field_poly", gf::polynomial()},
              {"columns", std::move(columns)}};
}

Json report_to_json(const BandwidthReport& r) {
  return Json{{"downloaded_subsymbols", r.downloaded_subsymbols},
              {"written_subsymbols", r.written_subsymbols},
              {"gamma_r", r.gamma_r},
              {"gamma_w", r.gamma_w},
              {"gamma", r.gamma},
              {"baseline_default", r.baseline_default},
              {"baseline_access_optimal", r.baseline_access_optimal},
              {"bound_loose", rational_to_json(r.bound_loose)},
              {"bound_tight", r.bound_tight ? rational_to_json(*r.bound_tight) : Json(nullptr)}};
}

Json feasibility_to_json(const FeasibilityReport& r) {
  return Json{{"feasible", r.feasible},
              {"worst_flow", rational_to_json(r.worst_flow)},
              {"worst_collectors", r.worst_collectors},
              {"lemma_cut_value", rational_to_json(r.lemma_cut_value)},
              {"required_flow", rational_to_json(r.required_flow)}};
}

void write_codeword(std::ostream& os, const Codeword& cw) {
  std::vector<char> out(kMagic.begin(), kMagic.end());
  out.push_back(static_cast<char>(kCodewordVersion));
  put_u16(out, gf::polynomial());
  put_u16(out, cw.n);
  put_u16(out, cw.k);
  put_u16(out, cw.alpha);
  for (auto x : cw.subsymbols) out.push_back(static_cast<char>(x.value()));
  os.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!os) throw Error(Errc::format, "failed to write codeword");
}

Codeword read_codeword(std::istream& is) {
  const std::string buf{std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
  if (buf.size() < kHeaderSize) throw Error(Errc::format, "codeword file is truncated");
  if (!std::equal(kMagic.begin(), kMagic.end(), buf.begin())) throw Error(Errc::format, "bad codeword magic");
  if (static_cast<std::uint8_t>(buf[4]) != kCodewordVersion) {
    throw Error(Errc::format, "unsupported codeword version");
  }
  if (get_u16(buf, 5) != gf::polynomial()) {
    throw Error(Errc::format, "codeword field polynomial differs from the active field");
  }
  const std::size_t n = get_u16(buf, 7);
  const std::size_t k = get_u16(buf, 9);
  const std::size_t alpha = get_u16(buf, 11);
  if (buf.size() != kHeaderSize + n * alpha) {
    throw Error(Errc::format, buf.size() < kHeaderSize + n * alpha ? "codeword file is truncated"
                                                                    : "codeword file has trailing bytes");
  }
  Codeword cw(n, k, alpha);
  for (std::size_t i = 0; i < n * alpha; ++i) {
    cw.subsymbols[i] = Gf(static_cast<std::uint8_t>(buf[kHeaderSize + i]));
  }
  return cw;
}

void save_codeword(const std::filesystem::path& path, const Codeword& cw, std::optional<std::size_t> message_length) {
  {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error(Errc::format, "cannot open " + path.string() + " for writing");
    write_codeword(os, cw);
  }
  if (message_length) {
    std::ofstream os(sidecar(path));
    if (!os) throw Error(Errc::format, "cannot write " + sidecar(path).string());
    os << Json{{"message_length", *message_length}}.dump() << "\n";
  }
}

Codeword load_codeword(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(Errc::format, "cannot open " + path.string());
  return read_codeword(is);
}

std::optional<std::size_t> load_message_length(const std::filesystem::path& path) {
  if (!std::filesystem::exists(sidecar(path))) return std::nullopt;
  const Json j = load_json(sidecar(path));
  if (!j.is_object() || !j.contains("message_length") || !j.at("message_length").is_number_unsigned()) {
    throw Error(Errc::format, "malformed message length sidecar");
  }
  return j.at("message_length").get<std::size_t>();
}

Json load_json(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw Error(Errc::format, "cannot open " + path.string());
  try {
    return Json::parse(is);
  } catch (const Json::exception& e) {
    throw Error(Errc::format, path.string() + ": " + e.what());
  }
}

}  // namespace splitconv
