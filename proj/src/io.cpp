#include "innerclt/io.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace innerclt {

using nlohmann::json;

std::string format_full(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

json blaschke_to_json(const BlaschkeProduct& f) {
  json zeros = json::array();
  for (const Complex& a : f.zeros()) zeros.push_back({a.real(), a.imag()});
  return json{{"zeros", zeros}, {"rotation", {f.rotation().real(), f.rotation().imag()}}};
}

BlaschkeProduct blaschke_from_json(const json& j, double zero_cap) {
  if (!j.contains("zeros") || !j["zeros"].is_array())
    throw ConfigError("Blaschke JSON: missing 'zeros' array");
  std::vector<Complex> zeros;
  for (const json& pair : j["zeros"]) {
    if (!pair.is_array() || pair.size() != 2)
      throw ConfigError("Blaschke JSON: each zero must be [re, im]");
    zeros.emplace_back(pair[0].get<double>(), pair[1].get<double>());
  }
  Complex rotation(1.0, 0.0);
  if (j.contains("rotation")) {
    const json& r = j["rotation"];
    if (!r.is_array() || r.size() != 2)
      throw ConfigError("Blaschke JSON: 'rotation' must be [re, im]");
    rotation = Complex(r[0].get<double>(), r[1].get<double>());
  }
  return BlaschkeProduct(std::move(zeros), rotation, zero_cap);
}

namespace {

struct TomlCursor {
  const std::string& text;
  std::size_t pos = 0;
  int line = 1;

  bool done() const { return pos >= text.size(); }
  char peek() const { return text[pos]; }
  void advance() {
    if (text[pos] == '\n') ++line;
    ++pos;
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError("TOML line " + std::to_string(line) + ": " + what);
  }
  void skip_inline_ws() {
    while (!done() && (peek() == ' ' || peek() == '\t')) advance();
  }
};

json parse_toml_value(TomlCursor& c);

json parse_toml_array(TomlCursor& c) {
  json arr = json::array();
  c.advance();  // '['
  for (;;) {
    c.skip_inline_ws();
    if (c.done()) c.fail("unterminated array");
    if (c.peek() == ']') {
      c.advance();
      return arr;
    }
    arr.push_back(parse_toml_value(c));
    c.skip_inline_ws();
    if (!c.done() && c.peek() == ',') {
      c.advance();
      continue;
    }
    if (!c.done() && c.peek() == ']') {
      c.advance();
      return arr;
    }
    c.fail("expected ',' or ']' in array");
  }
}

json parse_toml_value(TomlCursor& c) {
  c.skip_inline_ws();
  if (c.done()) c.fail("expected a value");
  const char ch = c.peek();
  if (ch == '[') return parse_toml_array(c);
  if (ch == '"') {
    c.advance();
    std::string s;
    while (!c.done() && c.peek() != '"') {
      if (c.peek() == '\n') c.fail("newline inside string");
      s.push_back(c.peek());
      c.advance();
    }
    if (c.done()) c.fail("unterminated string");
    c.advance();
    return json(s);
  }
  std::string token;
  while (!c.done() && (std::isalnum(static_cast<unsigned char>(c.peek())) ||
                       c.peek() == '+' || c.peek() == '-' || c.peek() == '.' ||
                       c.peek() == '_')) {
    if (c.peek() != '_') token.push_back(c.peek());
    c.advance();
  }
  if (token == "true") return json(true);
  if (token == "false") return json(false);
  if (token.empty()) c.fail("expected a value");
  try {
    std::size_t used = 0;
    if (token.find_first_of(".eE") == std::string::npos) {
      const std::int64_t v = std::stoll(token, &used);
      if (used != token.size()) c.fail("malformed number '" + token + "'");
      return json(v);
    }
    const double v = std::stod(token, &used);
    if (used != token.size()) c.fail("malformed number '" + token + "'");
    return json(v);
  } catch (const std::exception&) {
    c.fail("malformed number '" + token + "'");
  }
}

}  // namespace

json parse_toml_subset(const std::string& text) {
  json result = json::object();
  TomlCursor c{text};
  while (!c.done()) {
    c.skip_inline_ws();
    if (c.done()) break;
    if (c.peek() == '\n' || c.peek() == '\r') {
      c.advance();
      continue;
    }
    if (c.peek() == '#') {
      while (!c.done() && c.peek() != '\n') c.advance();
      continue;
    }
    if (c.peek() == '[')
      c.fail("tables are not supported; use flat key = value entries");

    std::string key;
    while (!c.done() && (std::isalnum(static_cast<unsigned char>(c.peek())) ||
                         c.peek() == '_' || c.peek() == '-')) {
      key.push_back(c.peek());
      c.advance();
    }
    if (key.empty()) c.fail("expected a key");
    c.skip_inline_ws();
    if (c.done() || c.peek() != '=') c.fail("expected '=' after key '" + key + "'");
    c.advance();
    result[key] = parse_toml_value(c);
    c.skip_inline_ws();
    if (!c.done() && c.peek() == '#')
      while (!c.done() && c.peek() != '\n') c.advance();
    if (!c.done() && c.peek() == '\r') c.advance();
    if (!c.done()) {
      if (c.peek() != '\n') c.fail("trailing characters after value of '" + key + "'");
      c.advance();
    }
  }
  return result;
}

namespace {

Complex complex_from_json(const json& pair, const std::string& key) {
  if (!pair.is_array() || pair.size() != 2)
    throw ConfigError("config key '" + key + "' must be [re, im]");
  return Complex(pair[0].get<double>(), pair[1].get<double>());
}

}  // namespace

ExperimentConfig config_from_json(const json& j) {
  ExperimentConfig config;
  if (!j.is_object()) throw ConfigError("config root must be a table / object");

  const double zero_cap = j.value("zero_cap", kDefaultZeroCap);
  if (j.contains("zeros")) {
    std::vector<Complex> zeros;
    for (const json& pair : j["zeros"]) zeros.push_back(complex_from_json(pair, "zeros"));
    Complex rotation(1.0, 0.0);
    if (j.contains("rotation")) rotation = complex_from_json(j["rotation"], "rotation");
    try {
      config.f = BlaschkeProduct(std::move(zeros), rotation, zero_cap);
    } catch (const std::exception& e) {
      throw ConfigError(std::string("invalid Blaschke product: ") + e.what());
    }
  }

  config.family = CoefficientFamily::parse(
      j.value("family", std::string("ones")), j.value("geometric_ratio", 0.5),
      j.value("family_seed", std::uint64_t{1}));

  if (j.contains("n_grid")) {
    config.n_grid.clear();
    for (const json& v : j["n_grid"]) config.n_grid.push_back(v.get<int>());
  }
  config.samples = j.value("samples", config.samples);
  config.seed = j.value("seed", config.seed);
  config.alpha_count = j.value("alpha_count", config.alpha_count);
  config.delta = j.value("delta", config.delta);
  config.c_user = j.value("c_user", config.c_user);
  config.clt_ks_threshold = j.value("clt_ks_threshold", config.clt_ks_threshold);
  config.tail_ks_threshold = j.value("tail_ks_threshold", config.tail_ks_threshold);
  config.rate_exponent_max = j.value("rate_exponent_max", config.rate_exponent_max);

  try {
    config.validate();
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  return config;
}

json config_to_json(const ExperimentConfig& config) {
  json j = blaschke_to_json(config.f);
  j["family"] = config.family.name();
  if (config.family.kind == CoefficientFamily::Kind::geometric)
    j["geometric_ratio"] = config.family.ratio;
  if (config.family.kind == CoefficientFamily::Kind::random)
    j["family_seed"] = config.family.seed;
  j["n_grid"] = config.n_grid;
  j["samples"] = config.samples;
  j["seed"] = config.seed;
  j["alpha_count"] = config.alpha_count;
  j["delta"] = config.delta;
  j["c_user"] = config.c_user;
  j["clt_ks_threshold"] = config.clt_ks_threshold;
  j["tail_ks_threshold"] = config.tail_ks_threshold;
  j["rate_exponent_max"] = config.rate_exponent_max;
  return j;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();

  bool is_json = path.size() > 5 && path.substr(path.size() - 5) == ".json";
  if (!is_json && !(path.size() > 5 && path.substr(path.size() - 5) == ".toml")) {
    const std::size_t first = text.find_first_not_of(" \t\r\n");
    is_json = first != std::string::npos && text[first] == '{';
  }

  if (is_json) {
    try {
      return config_from_json(json::parse(text));
    } catch (const json::exception& e) {
      throw ConfigError("JSON config '" + path + "': " + e.what());
    }
  }
  return config_from_json(parse_toml_subset(text));
}

void write_results_csv(const ExperimentReport& report, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << "N,sigma_N,rho_N,abs_b_N,ks_sup,rhs_bound,mN_est,VN2_est,weak_law_moment\n";
  for (const ReportRow& row : report.rows) {
    out << row.n << ',' << format_full(row.sigma_n) << ',' << format_full(row.rho_n)
        << ',' << format_full(row.abs_b_n) << ',' << format_full(row.ks_sup) << ','
        << format_full(row.rhs_bound) << ',' << format_full(row.m_n_est) << ','
        << format_full(row.v_n2_est) << ',' << format_full(row.weak_law_moment)
        << '\n';
  }
  if (!out) throw ConfigError("failed while writing '" + path + "'");
}

ExperimentReport read_results_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open results file '" + path + "'");
  ExperimentReport report;
  std::string line;
  if (!std::getline(in, line))
    throw ConfigError("results file '" + path + "' is empty");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string field;
    std::vector<double> fields;
    while (std::getline(ss, field, ',')) {
      try {
        fields.push_back(std::stod(field));
      } catch (const std::exception&) {
        throw ConfigError("results file '" + path + "': bad field '" + field + "'");
      }
    }
    if (fields.size() != 9)
      throw ConfigError("results file '" + path + "': expected 9 columns");
    ReportRow row;
    row.n = static_cast<long>(fields[0]);
    row.sigma_n = fields[1];
    row.rho_n = fields[2];
    row.abs_b_n = fields[3];
    row.ks_sup = fields[4];
    row.rhs_bound = fields[5];
    row.m_n_est = fields[6];
    row.v_n2_est = fields[7];
    row.weak_law_moment = fields[8];
    report.rows.push_back(row);
  }
  return report;
}

void write_metadata_json(const ExperimentReport& report, const ExperimentConfig& config,
                         const std::string& path, const TailCltResult* tail) {
  json meta;
  meta["config"] = config_to_json(config);
  meta["wall_seconds"] = report.wall_seconds;
  meta["warnings"] = report.warnings;
  meta["library_version"] = "0.1.0";
  meta["eigen_version"] = std::to_string(EIGEN_WORLD_VERSION) + "." +
                          std::to_string(EIGEN_MAJOR_VERSION) + "." +
                          std::to_string(EIGEN_MINOR_VERSION);
  if (report.fit) {
    meta["fitted_exponent"] = report.fit->exponent;
    meta["fitted_stderr"] = report.fit->stderr_;
    meta["fit_points_used"] = report.fit->points_used;
  }
  if (tail) {
    meta["tail_ks_sup"] = tail->ks_sup;
    meta["tail_sigma"] = tail->sigma_tail;
    meta["tail_discarded_ratio"] = tail->discarded_ratio;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << meta.dump(2) << '\n';
}

void write_coefficients_csv(const CoefficientSequence& a, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << "n,re_a,im_a\n";
  for (int n = 1; n <= a.length(); ++n)
    out << n << ',' << format_full(a.values[n - 1].real()) << ','
        << format_full(a.values[n - 1].imag()) << '\n';
}

CoefficientSequence read_coefficients_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open coefficients file '" + path + "'");
  std::vector<std::pair<long, Complex>> entries;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string n_str, re_str, im_str;
    if (!std::getline(ss, n_str, ',') || !std::getline(ss, re_str, ',') ||
        !std::getline(ss, im_str))
      throw ConfigError("coefficients file '" + path + "': expected n,re_a,im_a");
    if (first) {
      first = false;
      if (n_str.find_first_not_of("0123456789 \t") != std::string::npos)
        continue;  // header row
    }
    try {
      entries.emplace_back(std::stol(n_str), Complex(std::stod(re_str), std::stod(im_str)));
    } catch (const std::exception&) {
      throw ConfigError("coefficients file '" + path + "': bad row '" + line + "'");
    }
  }
  if (entries.empty())
    throw ConfigError("coefficients file '" + path + "' has no rows");
  CArray values(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const long n = entries[i].first;
    if (n < 1 || n > static_cast<long>(entries.size()))
      throw ConfigError("coefficients file '" + path + "': index " + std::to_string(n) +
                        " out of range");
    values[n - 1] = entries[i].second;
  }
  return make_coefficients(std::move(values));
}

namespace {

std::string pixel(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

}  // namespace

void write_ks_plot_svg(const ExperimentReport& report, const std::string& path) {
  if (report.rows.empty()) throw ConfigError("write_ks_plot_svg: empty report");
  constexpr double width = 640, height = 480;
  constexpr double ml = 70, mr = 20, mt = 20, mb = 50;

  double x_lo = 1e300, x_hi = -1e300, y_lo = 1e300, y_hi = -1e300;
  for (const ReportRow& row : report.rows) {
    const double x = std::log10(static_cast<double>(row.n));
    const double y = std::log10(std::max(row.ks_sup, 1e-300));
    x_lo = std::min(x_lo, x);
    x_hi = std::max(x_hi, x);
    y_lo = std::min(y_lo, y);
    y_hi = std::max(y_hi, y);
  }
  x_lo = std::floor(x_lo);
  x_hi = std::ceil(x_hi + 1e-9);
  y_lo = std::floor(y_lo);
  y_hi = std::ceil(y_hi + 1e-9);
  if (x_hi == x_lo) x_hi = x_lo + 1;
  if (y_hi == y_lo) y_hi = y_lo + 1;

  auto px = [&](double x) { return ml + (x - x_lo) / (x_hi - x_lo) * (width - ml - mr); };
  auto py = [&](double y) {
    return height - mb - (y - y_lo) / (y_hi - y_lo) * (height - mt - mb);
  };

  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  // axes
  out << "<line x1=\"" << pixel(ml) << "\" y1=\"" << pixel(height - mb) << "\" x2=\""
      << pixel(width - mr) << "\" y2=\"" << pixel(height - mb)
      << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << pixel(ml) << "\" y1=\"" << pixel(mt) << "\" x2=\"" << pixel(ml)
      << "\" y2=\"" << pixel(height - mb) << "\" stroke=\"black\"/>\n";

  for (int d = static_cast<int>(x_lo); d <= static_cast<int>(x_hi); ++d) {
    out << "<line x1=\"" << pixel(px(d)) << "\" y1=\"" << pixel(height - mb)
        << "\" x2=\"" << pixel(px(d)) << "\" y2=\"" << pixel(height - mb + 5)
        << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << pixel(px(d)) << "\" y=\"" << pixel(height - mb + 20)
        << "\" font-size=\"12\" text-anchor=\"middle\">1e" << d << "</text>\n";
  }
  for (int d = static_cast<int>(y_lo); d <= static_cast<int>(y_hi); ++d) {
    out << "<line x1=\"" << pixel(ml - 5) << "\" y1=\"" << pixel(py(d)) << "\" x2=\""
        << pixel(ml) << "\" y2=\"" << pixel(py(d)) << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << pixel(ml - 8) << "\" y=\"" << pixel(py(d) + 4)
        << "\" font-size=\"12\" text-anchor=\"end\">1e" << d << "</text>\n";
  }
  out << "<text x=\"" << pixel((ml + width - mr) / 2) << "\" y=\"" << pixel(height - 10)
      << "\" font-size=\"13\" text-anchor=\"middle\">N</text>\n";
  out << "<text x=\"15\" y=\"" << pixel((mt + height - mb) / 2)
      << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 15 "
      << pixel((mt + height - mb) / 2) << ")\">ks_sup</text>\n";

  out << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" points=\"";
  for (const ReportRow& row : report.rows)
    out << pixel(px(std::log10(static_cast<double>(row.n)))) << ','
        << pixel(py(std::log10(std::max(row.ks_sup, 1e-300)))) << ' ';
  out << "\"/>\n";
  for (const ReportRow& row : report.rows)
    out << "<circle cx=\"" << pixel(px(std::log10(static_cast<double>(row.n))))
        << "\" cy=\"" << pixel(py(std::log10(std::max(row.ks_sup, 1e-300))))
        << "\" r=\"3\" fill=\"#1f77b4\"/>\n";
  out << "</svg>\n";
}

}  // namespace innerclt
