#include "chm/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>

#include "json.hpp"

namespace chm {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

constexpr double kCatalogTol = 1e-8;

[[noreturn]] void parse_error(std::size_t line, std::size_t column, const std::string& what) {
  throw Error(ErrorKind::ParseError, "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what);
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw Error(ErrorKind::IoError, "cannot read " + path.string());
  return ss.str();
}

struct Token {
  std::string_view text;
  std::size_t column;  // 1-based
};

std::vector<Token> split_spaces(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) out.push_back({line.substr(start, i - start), start + 1});
  }
  return out;
}

}  // namespace

std::string format_phase(double p) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", p);
  return buf;
}

std::string serialize_chm(const PhaseMatrix& m) {
  const Eigen::Index n = m.order();
  std::string out = "CHM1 N=" + std::to_string(n) + "\n";
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = 0; k < n; ++k) {
      if (k) out += ' ';
      out += format_phase(m(j, k));
    }
    out += '\n';
  }
  return out;
}

void write_chm(const PhaseMatrix& m, const fs::path& path) { write_file_atomic(path, serialize_chm(m)); }

LoadedChm parse_chm(std::string_view text) {
  std::vector<std::string_view> lines;
  for (std::size_t pos = 0; pos < text.size();) {
    const std::size_t nl = text.find('\n', pos);
    const std::size_t end = nl == std::string_view::npos ? text.size() : nl;
    std::string_view line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    pos = end + 1;
  }
  if (lines.empty()) parse_error(1, 1, "empty file, expected header \"CHM1 N=<n>\"");

  const std::string_view header = lines[0];
  constexpr std::string_view prefix = "CHM1 N=";
  if (header.substr(0, prefix.size()) != prefix) parse_error(1, 1, "expected header \"CHM1 N=<n>\"");
  long long n = 0;
  const char* first = header.data() + prefix.size();
  const char* last = header.data() + header.size();
  const auto [ptr, ec] = std::from_chars(first, last, n);
  if (ec != std::errc{} || ptr != last || n < 1 || n > 4096)
    parse_error(1, prefix.size() + 1, "invalid order in header");

  LoadedChm out;
  RealMatrix p(n, n);
  for (long long j = 0; j < n; ++j) {
    const auto line_no = static_cast<std::size_t>(j + 2);
    if (static_cast<std::size_t>(j + 1) >= lines.size())
      parse_error(line_no, 1, "expected " + std::to_string(n) + " rows, found " + std::to_string(j));
    const auto tokens = split_spaces(lines[static_cast<std::size_t>(j + 1)]);
    if (tokens.empty())
      parse_error(line_no, 1, "expected " + std::to_string(n) + " rows, found " + std::to_string(j));
    if (static_cast<long long>(tokens.size()) != n)
      throw Error(ErrorKind::DimensionMismatch, "line " + std::to_string(line_no) + ": expected " + std::to_string(n) +
                                                    " values, found " + std::to_string(tokens.size()));
    for (long long k = 0; k < n; ++k) {
      const Token& t = tokens[static_cast<std::size_t>(k)];
      double v = 0.0;
      const auto [vp, vec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
      if (vec != std::errc{} || vp != t.text.data() + t.text.size())
        parse_error(line_no, t.column, "not a number: \"" + std::string(t.text) + "\"");
      if (!std::isfinite(v)) parse_error(line_no, t.column, "value is not finite");
      if (v < 0.0 || v >= 1.0) out.phases_reduced = true;
      p(j, k) = v;
    }
  }
  for (std::size_t extra = static_cast<std::size_t>(n) + 1; extra < lines.size(); ++extra)
    if (!split_spaces(lines[extra]).empty()) parse_error(extra + 1, 1, "unexpected content after the last row");
  out.matrix = PhaseMatrix(p);
  return out;
}

LoadedChm read_chm(const fs::path& path) { return parse_chm(read_text(path)); }

bool ProfileReport::operator==(const ProfileReport& o) const {
  const auto& a = profile;
  const auto& b = o.profile;
  const auto& s = tolerances;
  const auto& t = o.tolerances;
  return matrix_ref == o.matrix_ref && order == o.order && a.defect == b.defect &&
         a.haagerup_card == b.haagerup_card && a.haagerup_stable == b.haagerup_stable &&
         a.butson_order == b.butson_order && a.symmetric == b.symmetric &&
         a.unitarity_residual == b.unitarity_residual && s.hadamard_tol == t.hadamard_tol &&
         s.rank_rel_tol == t.rank_rel_tol && s.phase_tol == t.phase_tol && s.butson_q_max == t.butson_q_max &&
         s.butson_tol == t.butson_tol && s.symmetry_tol == t.symmetry_tol && tool_version == o.tool_version;
}

ProfileReport make_report(std::string matrix_ref, const PhaseMatrix& m, const ProfileTolerances& tol) {
  ProfileReport r;
  r.matrix_ref = std::move(matrix_ref);
  r.order = m.order();
  r.profile = profile(m, tol);
  r.tolerances = tol;
  return r;
}

std::string serialize_report(const ProfileReport& r) {
  json j;
  j["matrix"] = r.matrix_ref;
  j["order"] = r.order;
  j["defect"] = r.profile.defect;
  j["haagerup_card"] = r.profile.haagerup_card;
  j["haagerup_stable"] = r.profile.haagerup_stable;
  j["butson_order"] = r.profile.butson_order ? json(*r.profile.butson_order) : json(nullptr);
  j["symmetric"] = r.profile.symmetric;
  j["unitarity_residual"] = r.profile.unitarity_residual;
  json tol;
  tol["hadamard_tol"] = r.tolerances.hadamard_tol;
  tol["rank_rel_tol"] = r.tolerances.rank_rel_tol;
  tol["phase_tol"] = r.tolerances.phase_tol;
  tol["butson_q_max"] = r.tolerances.butson_q_max;
  tol["butson_tol"] = r.tolerances.butson_tol;
  tol["symmetry_tol"] = r.tolerances.symmetry_tol;
  j["tolerances"] = tol;
  j["tool_version"] = r.tool_version;
  return j.dump(2) + "\n";
}

namespace {

const json& require(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw Error(ErrorKind::ParseError, std::string("missing key \"") + key + "\"");
  return j.at(key);
}

template <typename T>
T field(const json& j, const char* key) {
  const json& v = require(j, key);
  bool ok = false;
  if constexpr (std::is_same_v<T, bool>)
    ok = v.is_boolean();
  else if constexpr (std::is_integral_v<T>)
    ok = v.is_number_integer() && (std::is_signed_v<T> || v.get<long long>() >= 0);
  else if constexpr (std::is_floating_point_v<T>)
    ok = v.is_number();
  else
    ok = v.is_string();
  if (!ok) throw Error(ErrorKind::ParseError, std::string("key \"") + key + "\" has the wrong type");
  return v.get<T>();
}

}  // namespace

ProfileReport parse_report(std::string_view text) {
  json j;
  try {
    j = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::ParseError, e.what());
  }
  ProfileReport r;
  r.matrix_ref = field<std::string>(j, "matrix");
  r.order = field<Eigen::Index>(j, "order");
  r.profile.defect = field<std::size_t>(j, "defect");
  r.profile.haagerup_card = field<std::size_t>(j, "haagerup_card");
  r.profile.haagerup_stable = field<bool>(j, "haagerup_stable");
  const json& q = require(j, "butson_order");
  if (q.is_null())
    r.profile.butson_order.reset();
  else
    r.profile.butson_order = field<int>(j, "butson_order");
  r.profile.symmetric = field<bool>(j, "symmetric");
  r.profile.unitarity_residual = field<double>(j, "unitarity_residual");
  const json& tol = require(j, "tolerances");
  r.tolerances.hadamard_tol = field<double>(tol, "hadamard_tol");
  r.tolerances.rank_rel_tol = field<double>(tol, "rank_rel_tol");
  r.tolerances.phase_tol = field<double>(tol, "phase_tol");
  r.tolerances.butson_q_max = field<int>(tol, "butson_q_max");
  r.tolerances.butson_tol = field<double>(tol, "butson_tol");
  r.tolerances.symmetry_tol = field<double>(tol, "symmetry_tol");
  r.tool_version = field<std::string>(j, "tool_version");
  return r;
}

void write_report(const ProfileReport& r, const fs::path& path) { write_file_atomic(path, serialize_report(r)); }

ProfileReport read_report(const fs::path& path) { return parse_report(read_text(path)); }

void write_file_atomic(const fs::path& path, std::string_view contents) {
  std::random_device rd;
  fs::path tmp = path;
  tmp += ".tmp" + std::to_string(rd());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::IoError, "cannot write " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) {
      std::error_code ignore;
      fs::remove(tmp, ignore);
      throw Error(ErrorKind::IoError, "cannot write " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    std::error_code ignore;
    fs::remove(tmp, ignore);
    throw Error(ErrorKind::IoError, "cannot rename onto " + path.string() + ": " + ec.message());
  }
}

bool valid_catalog_name(std::string_view name) {
  if (name.empty() || name.front() == '.') return false;
  return std::all_of(name.begin(), name.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
  });
}

Catalog Catalog::from_environment(const fs::path& fallback) {
  if (const char* dir = std::getenv("CHM_CATALOG_DIR"); dir && *dir) return Catalog(dir);
  return Catalog(fallback);
}

namespace {

void require_name(const std::string& name) {
  if (!valid_catalog_name(name)) throw Error(ErrorKind::InvalidArgument, "invalid catalog name \"" + name + "\"");
}

}  // namespace

ProfileReport Catalog::put(const std::string& name, const PhaseMatrix& m, const ProfileTolerances& tol) const {
  require_name(name);
  const HadamardCheck check = is_hadamard(m, kCatalogTol);
  if (!check)
    throw Error(ErrorKind::VerificationFailed,
                name + ": residual " + format_phase(check.residual) + " exceeds " + format_phase(kCatalogTol));
  const ProfileReport report = make_report(name + ".chm", m, tol);
  std::error_code ec;
  fs::create_directories(root_, ec);
  if (ec) throw Error(ErrorKind::IoError, "cannot create " + root_.string() + ": " + ec.message());
  write_chm(m, root_ / (name + ".chm"));
  write_report(report, root_ / (name + ".report"));
  return report;
}

Catalog::Loaded Catalog::get(const std::string& name, const ProfileTolerances& tol) const {
  require_name(name);
  const fs::path chm_path = root_ / (name + ".chm");
  if (!fs::exists(chm_path)) throw Error(ErrorKind::NotFound, "no catalog entry \"" + name + "\" in " + root_.string());
  Loaded out;
  try {
    out.matrix = read_chm(chm_path).matrix;
  } catch (const Error& e) {
    throw Error(ErrorKind::VerificationFailed, name + ": " + e.what());
  }
  const HadamardCheck check = is_hadamard(out.matrix, kCatalogTol);
  if (!check)
    throw Error(ErrorKind::VerificationFailed,
                name + ": residual " + format_phase(check.residual) + " exceeds " + format_phase(kCatalogTol));
  const fs::path report_path = root_ / (name + ".report");
  try {
    out.report = read_report(report_path);
  } catch (const Error&) {
    out.report = make_report(name + ".chm", out.matrix, tol);
  }
  return out;
}

std::vector<CatalogEntry> Catalog::list(const ProfileTolerances& tol) const {
  std::vector<std::string> names;
  std::error_code ec;
  if (fs::is_directory(root_, ec)) {
    for (const auto& e : fs::directory_iterator(root_)) {
      if (!e.is_regular_file() || e.path().extension() != ".chm") continue;
      const std::string stem = e.path().stem().string();
      if (valid_catalog_name(stem)) names.push_back(stem);
    }
  }
  std::sort(names.begin(), names.end());
  std::vector<CatalogEntry> out;
  for (const std::string& name : names) {
    CatalogEntry entry{name, std::nullopt, {}};
    try {
      entry.report = get(name, tol).report;
    } catch (const Error& e) {
      entry.problem = e.what();
    }
    out.push_back(std::move(entry));
  }
  return out;
}

}  // namespace chm
