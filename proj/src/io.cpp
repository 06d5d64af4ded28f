#include "acv/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <string_view>
#include <vector>

namespace acv {

namespace fs = std::filesystem;

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    const std::size_t start = i;
    while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

bool parse_double(std::string_view s, double& out) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

template <class Int>
bool parse_int(std::string_view s, Int& out) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

std::ifstream open_in(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string() + " for reading");
  return in;
}

std::ofstream open_out(const fs::path& path) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  return out;
}

void close_out(std::ofstream& out, const fs::path& path) {
  out.close();
  if (!out) throw IoError("failed writing " + path.string());
}

std::string where(const fs::path& path, std::size_t line) {
  return path.string() + ":" + std::to_string(line) + ": ";
}

}  // namespace

Dataset read_libsvm(const fs::path& path, Index min_features) {
  std::ifstream in = open_in(path);
  struct Entry {
    Index row, col;
    double value;
  };
  std::vector<Entry> entries;
  std::vector<double> labels;
  Index d = std::max<Index>(min_features, 0);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto tokens = split_ws(line);
    if (tokens.empty()) continue;
    double label = 0.0;
    if (!parse_double(tokens[0], label) || !std::isfinite(label))
      throw ParseError(where(path, lineno) + "malformed label '" + std::string(tokens[0]) + "'", lineno);
    const auto row = static_cast<Index>(labels.size());
    labels.push_back(label);
    for (std::size_t t = 1; t < tokens.size(); ++t) {
      const std::string_view tok = tokens[t];
      const auto colon = tok.find(':');
      long long idx = 0;
      double value = 0.0;
      if (colon == std::string_view::npos || !parse_int(tok.substr(0, colon), idx) || idx < 1 ||
          !parse_double(tok.substr(colon + 1), value) || !std::isfinite(value))
        throw ParseError(where(path, lineno) + "malformed token '" + std::string(tok) + "'", lineno);
      entries.push_back({row, static_cast<Index>(idx - 1), value});
      d = std::max<Index>(d, static_cast<Index>(idx));
    }
  }
  if (in.bad()) throw IoError("failed reading " + path.string());
  if (labels.empty()) throw ParseError(path.string() + ": no rows");
  if (d == 0) throw ParseError(path.string() + ": no features");

  Dataset out;
  out.features = Mat::Zero(static_cast<Index>(labels.size()), d);
  for (const auto& e : entries) out.features(e.row, e.col) = e.value;
  out.labels = Eigen::Map<const Vec>(labels.data(), static_cast<Index>(labels.size()));
  out.source = path.string();
  return out;
}

void write_libsvm(const Dataset& data, const fs::path& path) {
  if (data.labels.size() != data.features.rows())
    throw DimensionError("write_libsvm: one label per row required");
  std::ofstream out = open_out(path);
  for (Index i = 0; i < data.features.rows(); ++i) {
    out << fmt(data.labels[i]);
    for (Index j = 0; j < data.features.cols(); ++j)
      if (data.features(i, j) != 0.0) out << ' ' << (j + 1) << ':' << fmt(data.features(i, j));
    out << '\n';
  }
  close_out(out, path);
}

Dataset rescale_columns(Dataset data) {
  for (Index j = 0; j < data.features.cols(); ++j) {
    const double m = data.features.col(j).cwiseAbs().maxCoeff();
    if (m > 0.0) data.features.col(j) /= m;
  }
  return data;
}

Vec read_vector(const fs::path& path) {
  std::ifstream in = open_in(path);
  std::vector<double> values;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string body = line.substr(0, line.find('#'));
    for (const auto tok : split_ws(body)) {
      double v = 0.0;
      if (!parse_double(tok, v))
        throw ParseError(where(path, lineno) + "malformed number '" + std::string(tok) + "'", lineno);
      values.push_back(v);
    }
  }
  if (in.bad()) throw IoError("failed reading " + path.string());
  return Eigen::Map<const Vec>(values.data(), static_cast<Index>(values.size()));
}

void write_vector(const Vec& v, const fs::path& path) {
  std::ofstream out = open_out(path);
  for (Index i = 0; i < v.size(); ++i) out << fmt(v[i]) << '\n';
  close_out(out, path);
}

void write_convergence_csv(const ConvergenceRecord& record, const fs::path& path) {
  std::ofstream out = open_out(path);
  out << kCsvHeader << '\n';
  for (const auto& r : record.rows) {
    out << r.k << ',' << fmt(r.wall_time_s) << ',' << fmt(r.objective) << ',';
    if (r.gap_ref) out << fmt(*r.gap_ref);
    out << ',';
    if (r.pd_gap) out << fmt(*r.pd_gap);
    out << ',' << fmt(r.iterate_norm) << '\n';
  }
  close_out(out, path);
}

ConvergenceRecord read_convergence_csv(const fs::path& path) {
  std::ifstream in = open_in(path);
  std::string line;
  if (!std::getline(in, line) || trim(line) != kCsvHeader)
    throw ParseError(where(path, 1) + "expected header '" + kCsvHeader + "'", 1);
  ConvergenceRecord record;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    std::vector<std::string_view> fields;
    std::string_view rest = line;
    for (;;) {
      const auto comma = rest.find(',');
      fields.push_back(trim(rest.substr(0, comma)));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    auto bad = [&](const std::string& what) { return ParseError(where(path, lineno) + what, lineno); };
    if (fields.size() != 6) throw bad("expected 6 fields, found " + std::to_string(fields.size()));
    ConvergenceRow row;
    long long k = 0;
    if (!parse_int(fields[0], k)) throw bad("malformed k");
    row.k = static_cast<Index>(k);
    if (!parse_double(fields[1], row.wall_time_s) || !parse_double(fields[2], row.objective) ||
        !parse_double(fields[5], row.iterate_norm))
      throw bad("malformed number");
    for (int f : {3, 4}) {
      if (fields[f].empty()) continue;
      double v = 0.0;
      if (!parse_double(fields[f], v)) throw bad("malformed number");
      (f == 3 ? row.gap_ref : row.pd_gap) = v;
    }
    try {
      record.append(row);
    } catch (const UsageError& e) {
      throw bad(e.what());
    }
  }
  return record;
}

// Config --------------------------------------------------------------------------

namespace {

struct AlgorithmName {
  Algorithm algo;
  const char* name;
};
constexpr AlgorithmName kAlgorithms[] = {
    {Algorithm::AcvGeneral, "acv-general"}, {Algorithm::AcvSc, "acv-sc"},
    {Algorithm::AcvScDual, "acv-sc-dual"},  {Algorithm::AcvScSmooth, "acv-sc-smooth"},
    {Algorithm::CvBook, "cv-book"},         {Algorithm::CvTuned, "cv-tuned"},
    {Algorithm::Apgd, "apgd"},              {Algorithm::Pdhg, "pdhg"},
};

struct FamilyName {
  ProblemFamily family;
  const char* name;
};
constexpr FamilyName kFamilies[] = {
    {ProblemFamily::FusedElasticNet, "fused-elastic-net"},
    {ProblemFamily::Lasso, "lasso"},
    {ProblemFamily::Imaging, "imaging"},
};

// Each key knows how to read its value into a RunConfig and how to print it.
struct Field {
  const char* key;
  std::function<void(RunConfig&, std::string_view)> set;  // throws std::string on bad value
  std::function<std::optional<std::string>(const RunConfig&)> get;
};

template <class T>
Field number(const char* key, T RunConfig::*member) {
  return {key,
          [member](RunConfig& c, std::string_view v) {
            T out{};
            bool ok;
            if constexpr (std::is_floating_point_v<T>) ok = parse_double(v, out) && std::isfinite(out);
            else ok = parse_int(v, out);
            if (!ok) throw std::string("expected a number");
            c.*member = out;
          },
          [member](const RunConfig& c) -> std::optional<std::string> {
            if constexpr (std::is_floating_point_v<T>) return fmt(c.*member);
            else return std::to_string(c.*member);
          }};
}

template <class T>
Field optional_number(const char* key, std::optional<T> RunConfig::*member) {
  return {key,
          [member](RunConfig& c, std::string_view v) {
            T out{};
            bool ok;
            if constexpr (std::is_floating_point_v<T>) ok = parse_double(v, out) && std::isfinite(out);
            else ok = parse_int(v, out);
            if (!ok) throw std::string("expected a number");
            c.*member = out;
          },
          [member](const RunConfig& c) -> std::optional<std::string> {
            if (!(c.*member)) return std::nullopt;
            if constexpr (std::is_floating_point_v<T>) return fmt(*(c.*member));
            else return std::to_string(*(c.*member));
          }};
}

Field text(const char* key, std::string RunConfig::*member) {
  return {key, [member](RunConfig& c, std::string_view v) { c.*member = std::string(v); },
          [member](const RunConfig& c) -> std::optional<std::string> {
            if ((c.*member).empty()) return std::nullopt;
            return c.*member;
          }};
}

Field flag(const char* key, bool RunConfig::*member) {
  return {key,
          [member](RunConfig& c, std::string_view v) {
            if (v == "true" || v == "1" || v == "yes") c.*member = true;
            else if (v == "false" || v == "0" || v == "no") c.*member = false;
            else throw std::string("expected true or false");
          },
          [member](const RunConfig& c) -> std::optional<std::string> { return c.*member ? "true" : "false"; }};
}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      {"problem",
       [](RunConfig& c, std::string_view v) {
         for (const auto& f : kFamilies)
           if (v == f.name) {
             c.problem = f.family;
             return;
           }
         throw std::string("expected fused-elastic-net, lasso or imaging");
       },
       [](const RunConfig& c) -> std::optional<std::string> { return family_name(c.problem); }},
      text("data_path", &RunConfig::data_path),
      flag("rescale", &RunConfig::rescale),
      number("n_samples", &RunConfig::n_samples),
      number("n_features", &RunConfig::n_features),
      number("sparsity", &RunConfig::sparsity),
      number("noise", &RunConfig::noise),
      number("target_lipschitz", &RunConfig::target_lipschitz),
      number("lambda1", &RunConfig::lambda1),
      number("lambda2", &RunConfig::lambda2),
      number("lambda3", &RunConfig::lambda3),
      number("beta", &RunConfig::beta),
      flag("smoothed", &RunConfig::smoothed),
      number("pair_fraction", &RunConfig::pair_fraction),
      number("height", &RunConfig::height),
      number("width", &RunConfig::width),
      {"forward",
       [](RunConfig& c, std::string_view v) {
         if (v != "mask" && v != "blur" && v != "tomography") throw std::string("expected mask, blur or tomography");
         c.forward = std::string(v);
       },
       [](const RunConfig& c) -> std::optional<std::string> { return c.forward; }},
      text("observed_path", &RunConfig::observed_path),
      number("keep_fraction", &RunConfig::keep_fraction),
      number("blur_half_width", &RunConfig::blur_half_width),
      number("ct_rows_factor", &RunConfig::ct_rows_factor),
      number("ct_scale", &RunConfig::ct_scale),
      number("mu_g", &RunConfig::mu_g),
      optional_number("rho1", &RunConfig::rho1),
      {"algorithm",
       [](RunConfig& c, std::string_view v) {
         try {
           c.algorithm = parse_algorithm(std::string(v));
         } catch (const UsageError& e) {
           throw std::string(e.what());
         }
       },
       [](const RunConfig& c) -> std::optional<std::string> { return algorithm_name(c.algorithm); }},
      number("max_iters", &RunConfig::max_iters),
      number("seed", &RunConfig::seed),
      text("output_path", &RunConfig::output_path),
      optional_number("log_every", &RunConfig::log_every),
      number("reference_iters_multiplier", &RunConfig::reference_iters_multiplier),
      flag("record_timing", &RunConfig::record_timing),
      flag("pd_gap", &RunConfig::pd_gap),
      flag("check_schedule", &RunConfig::check_schedule),
      number("gap_threshold", &RunConfig::gap_threshold),
      text("tune_grid", &RunConfig::tune_grid),
      text("reference_cache_dir", &RunConfig::reference_cache_dir),
      text("x0_path", &RunConfig::x0_path),
      text("y0_path", &RunConfig::y0_path),
      optional_number("step_gamma", &RunConfig::step_gamma),
      optional_number("step_tau", &RunConfig::step_tau),
      optional_number("step_alpha", &RunConfig::step_alpha),
      optional_number("step_theta", &RunConfig::step_theta),
  };
  return table;
}

void check_config(const RunConfig& c, const std::string& origin) {
  auto fail = [&](const std::string& what) { throw ParseError(origin + ": " + what); };
  if (c.max_iters < 0) fail("max_iters must be non-negative");
  if (c.n_samples < 1 || c.n_features < 1) fail("n_samples and n_features must be positive");
  if (c.sparsity < 0.0 || c.sparsity > 1.0) fail("sparsity must lie in [0, 1]");
  if (c.noise < 0.0) fail("noise must be non-negative");
  if (c.target_lipschitz < 0.0) fail("target_lipschitz must be non-negative");
  if (c.lambda1 < 0.0 || c.lambda2 < 0.0 || c.lambda3 <= 0.0) fail("lambdas must be non-negative (lambda3 positive)");
  if (c.beta < 0.0 || c.beta > 1.0) fail("beta must lie in [0, 1]");
  if (c.pair_fraction <= 0.0 || c.pair_fraction > 1.0) fail("pair_fraction must lie in (0, 1]");
  if (c.height < 1 || c.width < 1) fail("height and width must be positive");
  if (c.keep_fraction <= 0.0 || c.keep_fraction > 1.0) fail("keep_fraction must lie in (0, 1]");
  if (c.blur_half_width < 0) fail("blur_half_width must be non-negative");
  if (c.mu_g < 0.0) fail("mu_g must be non-negative");
  if (c.rho1 && !(*c.rho1 > 0.0)) fail("rho1 must be positive");
  if (c.log_every && *c.log_every < 1) fail("log_every must be at least 1");
  if (c.reference_iters_multiplier < 1) fail("reference_iters_multiplier must be at least 1");
  if (!(c.gap_threshold > 0.0)) fail("gap_threshold must be positive");
}

}  // namespace

std::string algorithm_name(Algorithm a) {
  for (const auto& n : kAlgorithms)
    if (n.algo == a) return n.name;
  return "unknown";
}

Algorithm parse_algorithm(const std::string& name) {
  for (const auto& n : kAlgorithms)
    if (name == n.name) return n.algo;
  std::string known;
  for (const auto& n : kAlgorithms) known += std::string(known.empty() ? "" : ", ") + n.name;
  throw UsageError("unknown algorithm '" + name + "' (expected one of " + known + ")");
}

std::string family_name(ProblemFamily f) {
  for (const auto& n : kFamilies)
    if (n.family == f) return n.name;
  return "unknown";
}

Index RunConfig::effective_log_every() const {
  if (log_every) return *log_every;
  return max_iters <= 10000 ? 1 : 10;
}

double RunConfig::effective_rho1() const {
  if (rho1) return *rho1;
  return forward == "blur" ? 100.0 : 1.0;
}

RunConfig parse_config(const std::string& text, const std::string& origin) {
  RunConfig c;
  std::vector<std::string> unknown;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view body = trim(std::string_view(line).substr(0, line.find('#')));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos)
      throw ParseError(origin + ":" + std::to_string(lineno) + ": expected 'key = value'", lineno);
    const std::string key(trim(body.substr(0, eq)));
    const std::string_view value = trim(body.substr(eq + 1));
    const auto& table = fields();
    const auto it = std::find_if(table.begin(), table.end(), [&](const Field& f) { return key == f.key; });
    if (it == table.end()) {
      unknown.push_back(key + " (line " + std::to_string(lineno) + ")");
      continue;
    }
    try {
      it->set(c, value);
    } catch (const std::string& why) {
      throw ParseError(origin + ":" + std::to_string(lineno) + ": bad value '" + std::string(value) + "' for " +
                           key + ": " + why,
                       lineno);
    }
  }
  if (!unknown.empty()) {
    std::string list;
    for (const auto& u : unknown) list += (list.empty() ? "" : ", ") + u;
    throw ParseError(origin + ": unknown key" + (unknown.size() > 1 ? "s: " : ": ") + list);
  }
  check_config(c, origin);
  return c;
}

RunConfig read_config(const fs::path& path) {
  std::ifstream in = open_in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("failed reading " + path.string());
  return parse_config(buf.str(), path.string());
}

std::string format_config(const RunConfig& c) {
  std::string out;
  for (const auto& f : fields())
    if (auto v = f.get(c)) out += std::string(f.key) + " = " + *v + "\n";
  return out;
}

}  // namespace acv
