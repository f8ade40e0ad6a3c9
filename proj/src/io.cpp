#include "mdm/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace mdm {

using nlohmann::json;

DigitMeasure parse_measure_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw DomainError(std::string("malformed measure file: ") + e.what());
  }
  if (!j.is_object()) throw DomainError("measure file must hold a JSON object");
  try {
    const int base = j.at("base").get<int>();
    const json& dj = j.at("digits");
    if (!dj.is_array()) throw DomainError("\"digits\" must be an array");
    std::vector<std::vector<int>> digits;
    for (const auto& d : dj) {
      if (d.is_number_integer()) {
        digits.push_back({d.get<int>()});
      } else {
        digits.push_back(d.get<std::vector<int>>());
      }
    }
    if (j.contains("dim")) {
      const int dim = j.at("dim").get<int>();
      for (std::size_t i = 0; i < digits.size(); ++i) {
        if (static_cast<int>(digits[i].size()) != dim) {
          throw DomainError("digit " + std::to_string(i) + " does not have " + std::to_string(dim) +
                                " coordinates",
                            static_cast<int>(i));
        }
      }
    }
    std::optional<std::vector<double>> weights;
    if (j.contains("weights") && !j.at("weights").is_null()) weights = j.at("weights").get<std::vector<double>>();
    return new_digit_measure(base, digits, weights);
  } catch (const json::exception& e) {
    throw DomainError(std::string("malformed measure file: ") + e.what());
  }
}

DigitMeasure load_measure_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open measure file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_measure_json(ss.str());
}

namespace {

json measure_json(const DigitMeasure& m) {
  json digits = json::array();
  for (int i = 0; i < m.size(); ++i) {
    json d = json::array();
    for (int c = 0; c < m.dim(); ++c) d.push_back(m.digits()(c, i));
    digits.push_back(d);
  }
  std::vector<double> w(m.weights().data(), m.weights().data() + m.size());
  return {{"base", m.base()}, {"dim", m.dim()}, {"digits", digits}, {"weights", w}};
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

std::string measure_to_json(const DigitMeasure& m) { return measure_json(m).dump(); }

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::string header_comment(const std::string& command, const ConfigEcho& config) {
  std::string out = "# mdm " + std::string(kToolVersion) + " " + command;
  for (const auto& [k, v] : config) out += " " + k + "=" + v;
  return out + "\n";
}

void write_gcp_csv(std::ostream& os, const std::vector<ScanRow>& rows) {
  os << "Q,delta,S,ratio,primes_only\n";
  for (const auto& r : rows) {
    os << r.Q << ',' << format_double(r.delta) << ',' << format_double(r.S) << ','
       << format_double(r.ratio) << ',' << (r.primes_only ? "true" : "false") << '\n';
  }
}

void write_partial_sums_csv(std::ostream& os, const std::vector<PartialSumRow>& rows) {
  os << "R,sum,exponent_estimate\n";
  for (const auto& r : rows) {
    os << r.R << ',' << format_double(r.sum) << ','
       << (r.exponent_estimate ? format_double(*r.exponent_estimate) : "") << '\n';
  }
}

void write_census_csv(std::ostream& os, const ResidueCensus& census) {
  os << "xi,abs_coeff,threshold\n";
  for (const auto& e : census.offenders) {
    os << e.xi << ',' << format_double(e.abs_coeff) << ',' << format_double(e.threshold) << '\n';
  }
}

void write_khinchine_csv(std::ostream& os, const std::vector<KhinchineRow>& rows) {
  os << "Q,psi_sum,mu_series\n";
  for (const auto& r : rows) {
    os << r.Q << ',' << format_double(r.psi_sum) << ',' << format_double(r.mu_series) << '\n';
  }
}

void write_hits_csv(std::ostream& os, const std::vector<HitFraction>& rows) {
  os << "Qmax,fraction,stderr\n";
  for (const auto& r : rows) {
    os << r.Q_max << ',' << format_double(r.fraction) << ',' << format_double(r.stderr_) << '\n';
  }
}

std::string certificate_to_json(const DigitMeasure& m, const Certificate& cert,
                                const ConfigEcho& config) {
  json j;
  j["measure"] = measure_json(m);
  j["measure"]["description"] = cert.measure;
  j["spectral"] = cert.spectral;
  j["thick"] = cert.thick;
  j["route"] = cert.route;
  j["k"] = cert.k;
  j["sigma"] = cert.sigma ? json(*cert.sigma) : json(nullptr);
  j["epsilon"] = cert.epsilon ? json(*cert.epsilon) : json(nullptr);
  j["delta_grid_argmax"] = cert.delta_grid_argmax;
  j["dim_H"] = cert.dim_H;
  j["dim_l2"] = cert.dim_l2;
  j["dim_R_lb"] = cert.dim_R_lb;
  j["dim_ST_lb"] = cert.dim_ST_lb;
  j["dim_l1_lb"] = cert.dim_l1_lb;
  if (cert.enclosures) {
    const CellStats& s = *cert.enclosures;
    j["enclosures"] = {{"m_lo", number_or_null(s.m_lo)},
                       {"m_hi", number_or_null(s.m_hi)},
                       {"var_hi", number_or_null(s.var_hi)},
                       {"c_hi", number_or_null(s.c_hi)},
                       {"samples_per_cell", s.samples_per_cell}};
  } else {
    j["enclosures"] = nullptr;
  }
  j["tool_version"] = kToolVersion;
  json cfg = json::object();
  for (const auto& [k, v] : config) cfg[k] = v;
  j["config"] = cfg;
  return j.dump(2) + "\n";
}

}  // namespace mdm
