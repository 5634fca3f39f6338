#pragma once

// bank.json: {"method", "c_prime", "channels", "lambda", "filters", "values"}
// with `filters` column-major. Numbers are written with 17 significant
// digits so they read back bit-exactly.

#include <cstdio>
#include <fstream>
#include <string>

#include "json.hpp"

#include "cspkit/csp.hpp"
#include "cspkit/error.hpp"

namespace cspkit {

namespace detail {

inline std::string format_sig17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace detail

inline std::string bank_to_json(const FilterBank& bank) {
  std::string out = "{\n";
  out += "  \"method\": \"" + std::string(to_string(bank.method)) + "\",\n";
  out += "  \"c_prime\": " + std::to_string(bank.c_prime()) + ",\n";
  out += "  \"channels\": " + std::to_string(bank.channels()) + ",\n";
  out += "  \"lambda\": " + detail::format_sig17(bank.reg.lambda) + ",\n";
  out += "  \"filters\": [";
  for (Index j = 0; j < bank.filters.cols(); ++j)
    for (Index i = 0; i < bank.filters.rows(); ++i) {
      if (i != 0 || j != 0) out += ", ";
      out += detail::format_sig17(bank.filters(i, j));
    }
  out += "],\n  \"values\": [";
  for (std::size_t i = 0; i < bank.values.size(); ++i) {
    if (i != 0) out += ", ";
    out += detail::format_sig17(bank.values[i]);
  }
  out += "]\n}\n";
  return out;
}

inline FilterBank bank_from_json(const std::string& text) {
  try {
    const nlohmann::json j = nlohmann::json::parse(text);
    const auto method = method_from_string(j.at("method").get<std::string>());
    if (!method) throw Error(ErrorCode::Config, "unknown method in bank");
    const auto c_prime = j.at("c_prime").get<Index>();
    const auto channels = j.at("channels").get<Index>();
    const auto entries = j.at("filters").get<std::vector<double>>();
    if (static_cast<Index>(entries.size()) != c_prime * channels)
      throw Error(ErrorCode::DimensionMismatch, "bank filter count does not match its shape");
    FilterBank bank;
    bank.method = *method;
    bank.reg = RegParam{j.at("lambda").get<double>()};
    bank.filters = Eigen::Map<const Matrix>(entries.data(), channels, c_prime);
    bank.values = j.at("values").get<std::vector<double>>();
    return bank;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Config, std::string("malformed bank: ") + e.what());
  }
}

inline void write_bank(const FilterBank& bank, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path);
  out << bank_to_json(bank);
}

inline FilterBank read_bank(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return bank_from_json(text);
}

}  // namespace cspkit
