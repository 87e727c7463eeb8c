// chmtool: command-line front end for searching, constructing, profiling
// and cataloguing complex Hadamard matrices.
//
// Exit codes: 0 success, 1 verification or solve failure, 2 usage or parse error.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "chm/families.hpp"
#include "chm/io.hpp"
#include "chm/named.hpp"
#include "chm/sinkhorn.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kUsage = 2;

struct Display {
  int digits = 17;
  std::string num(double v) const {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
  }
};

std::string butson_text(const std::optional<int>& q) { return q ? std::to_string(*q) : std::string("-"); }

void print_header(const chm::ProfileTolerances& tol, const Display& d, const std::string& extra = {}) {
  std::cout << "chmtool " << chm::kToolVersion << "\n"
            << "tolerances: hadamard_tol=" << d.num(tol.hadamard_tol) << " rank_rel_tol=" << d.num(tol.rank_rel_tol)
            << " phase_tol=" << d.num(tol.phase_tol) << " butson_q_max=" << tol.butson_q_max
            << " butson_tol=" << d.num(tol.butson_tol) << " symmetry_tol=" << d.num(tol.symmetry_tol);
  if (!extra.empty()) std::cout << " " << extra;
  std::cout << "\n";
}

void print_profile(const chm::InvariantProfile& p, const Display& d) {
  std::cout << "defect: " << p.defect << "\n"
            << "haagerup_card: " << p.haagerup_card << (p.haagerup_stable ? "" : " (unstable)") << "\n"
            << "butson_order: " << butson_text(p.butson_order) << "\n"
            << "symmetric: " << (p.symmetric ? "yes" : "no") << "\n"
            << "unitarity_residual: " << d.num(p.unitarity_residual) << "\n";
}

// Columns follow the classification tables: matrix, d, #Lambda, source, comment.
struct Row {
  std::string matrix;
  std::size_t defect;
  std::size_t card;
  std::string source;
  std::string comment;
};

void print_table(const std::vector<Row>& rows) {
  std::printf("%-24s %4s %8s %-8s %s\n", "matrix", "d", "#Lambda", "source", "comment");
  for (const Row& r : rows)
    std::printf("%-24s %4zu %8zu %-8s %s\n", r.matrix.c_str(), r.defect, r.card, r.source.c_str(), r.comment.c_str());
  std::fflush(stdout);
}

void save(const fs::path& dir, const std::string& stem, const chm::PhaseMatrix& m, const chm::ProfileTolerances& tol) {
  fs::create_directories(dir);
  chm::write_chm(m, dir / (stem + ".chm"));
  chm::write_report(chm::make_report(stem + ".chm", m, tol), dir / (stem + ".report"));
}

std::string profile_stem(const std::string& prefix, const chm::InvariantProfile& p) {
  std::string s = prefix + "_d" + std::to_string(p.defect) + "_L" + std::to_string(p.haagerup_card);
  if (p.butson_order) s += "_q" + std::to_string(*p.butson_order);
  return s;
}

// ---------------------------------------------------------------------------

struct SearchOpts {
  long long n = 0;
  std::size_t seeds = 100;
  double tol = 1e-12;
  std::size_t max_iter = 100000;
  std::uint64_t rng_seed = 0;
  unsigned threads = 0;
  std::string out;
};

int cmd_search(const SearchOpts& o, const chm::ProfileTolerances& tol, const Display& d) {
  if (o.n < 2 || o.n > 64) {
    std::cerr << "error: --n must lie in [2, 64]\n";
    return kUsage;
  }
  chm::SinkhornConfig cfg;
  cfg.max_iterations = o.max_iter;
  cfg.z_tol = o.tol;
  cfg.rng_seed = o.rng_seed;
  cfg.threads = o.threads;
  print_header(tol, d, "z_tol=" + d.num(cfg.z_tol) + " max_iter=" + std::to_string(cfg.max_iterations));
  const chm::SearchResult r = chm::search(o.n, o.seeds, cfg, tol);
  std::cout << "converged " << r.outcomes.size() << " of " << r.attempted << " seeds (" << r.failed
            << " did not converge)\n";

  std::map<chm::ProfileKey, const chm::ProfiledOutcome*> first;
  for (const auto& po : r.outcomes) {
    const chm::ProfileKey key{po.profile.defect, po.profile.haagerup_card, po.profile.butson_order};
    first.try_emplace(key, &po);
  }
  std::vector<Row> rows;
  for (const auto& [key, count] : r.summary) {
    const chm::ProfiledOutcome* po = first.at(key);
    const std::string stem = profile_stem("S" + std::to_string(o.n), po->profile);
    std::string comment = "seeds=" + std::to_string(count) + " q=" + butson_text(key.butson_order);
    if (!po->profile.haagerup_stable) comment += " unstable";
    rows.push_back({stem, key.defect, key.haagerup_card, "S", comment});
    if (!o.out.empty()) save(o.out, stem, po->outcome.matrix, tol);
  }
  print_table(rows);
  return r.outcomes.empty() ? kFailure : kOk;
}

// ---------------------------------------------------------------------------

struct FamilyOpts {
  std::string name;
  long long n = 0;
  std::size_t starts = 256;
  std::uint64_t rng_seed = 0;
  unsigned threads = 0;
  bool keep_butson = false;
  bool allow_large = false;
  std::string out;
};

int cmd_family(const FamilyOpts& o, const chm::ProfileTolerances& tol, const Display& d) {
  const auto fam = chm::parse_named_family(o.name);
  if (fam != chm::NamedFamily::LN && fam != chm::NamedFamily::VN) {
    std::cerr << "error: --name must be LN or VN\n";
    return kUsage;
  }
  chm::MultistartConfig cfg;
  cfg.starts = o.starts;
  cfg.rng_seed = o.rng_seed;
  cfg.threads = o.threads;
  cfg.retain_butson = o.keep_butson;
  cfg.allow_large_order = o.allow_large;
  cfg.profile_tol = tol;
  const bool ln = fam == chm::NamedFamily::LN;
  if (ln && (o.n < 3 || (o.n - 3) % 4 != 0)) {
    std::cerr << "error: LN requires n = 3 + 4k, got " << o.n << "\n";
    return kUsage;
  }
  if (!ln && (o.n < 6 || (o.n > chm::kMaxCirculantOrder && !o.allow_large))) {
    std::cerr << "error: VN requires 6 <= n <= 64 (or --allow-large), got " << o.n << "\n";
    return kUsage;
  }
  print_header(tol, d,
               "accept_residual=" + d.num(cfg.accept_residual) + " hadamard_tol(solutions)=" + d.num(cfg.hadamard_tol));
  const chm::SolutionSet set = ln ? chm::solve_LN(static_cast<int>((o.n - 3) / 4), cfg) : chm::solve_VN(o.n, cfg);
  std::cout << "starts " << set.attempted << ", converged " << set.converged << ", not converged "
            << set.discarded_nonconverged << ", failed verification " << set.discarded_unverified
            << ", discarded Butson " << set.discarded_butson << "\n";

  std::vector<Row> rows;
  const std::string prefix = std::string(ln ? "LN" : "VN") + std::to_string(o.n);
  const auto add = [&](const chm::FamilySolution& s, const std::string& comment) {
    const std::string stem = profile_stem(prefix, s.profile);
    rows.push_back({stem, s.profile.defect, s.profile.haagerup_card, ln ? "L" : "V",
                    comment + " q=" + butson_text(s.profile.butson_order) +
                        " residual=" + d.num(s.unitarity_residual)});
    if (!o.out.empty()) save(o.out, stem, s.matrix, tol);
  };
  for (const auto& s : set.solutions) add(s, "retained");
  for (const auto& s : set.butson) add(s, "butson");
  print_table(rows);
  if (set.no_solutions()) {
    std::cout << "no solutions\n";
    return kFailure;
  }
  return kOk;
}

// ---------------------------------------------------------------------------

struct GenOpts {
  std::string name;
  long long n = 0;
  std::vector<double> params;
  std::string out;
};

int cmd_gen(const GenOpts& o, const chm::ProfileTolerances& tol, const Display& d) {
  const auto fam = chm::parse_named_family(o.name);
  if (!fam) {
    std::cerr << "error: unknown construction \"" << o.name << "\"\n";
    return kUsage;
  }
  print_header(tol, d);
  chm::FamilyId id{*fam, o.n, o.params};
  const chm::PhaseMatrix m = chm::construct_named(id);
  std::cout << "matrix: " << chm::to_string(*fam) << " order " << m.order() << "\n";
  print_profile(chm::profile(m, tol), d);
  if (!o.out.empty()) chm::write_chm(m, o.out);
  return kOk;
}

int cmd_invariants(const std::string& file, const std::string& out, const chm::ProfileTolerances& tol,
                   const Display& d) {
  print_header(tol, d);
  const chm::LoadedChm loaded = chm::read_chm(file);
  if (loaded.phases_reduced) std::cout << "warning: phases outside [0, 1) were reduced mod 1\n";
  const chm::ProfileReport r = chm::make_report(file, loaded.matrix, tol);
  print_profile(r.profile, d);
  if (!out.empty()) chm::write_report(r, out);
  return kOk;
}

int cmd_verify(const std::string& file, double hadamard_tol, const chm::ProfileTolerances& tol, const Display& d) {
  print_header(tol, d, "verify_tol=" + d.num(hadamard_tol));
  const chm::LoadedChm loaded = chm::read_chm(file);
  if (loaded.phases_reduced) std::cout << "warning: phases outside [0, 1) were reduced mod 1\n";
  const chm::HadamardCheck c = chm::is_hadamard(loaded.matrix, hadamard_tol);
  std::cout << "order: " << loaded.matrix.order() << "\nresidual (Z/N): " << d.num(c.residual) << "\n"
            << (c.accepted ? "accepted" : "rejected") << "\n";
  return c.accepted ? kOk : kFailure;
}

int cmd_catalog_put(const chm::Catalog& cat, const std::string& name, const std::string& file,
                    const chm::ProfileTolerances& tol, const Display& d) {
  print_header(tol, d, "catalog=" + cat.root().string());
  const chm::ProfileReport r = cat.put(name, chm::read_chm(file).matrix, tol);
  std::cout << "stored " << name << "\n";
  print_profile(r.profile, d);
  return kOk;
}

int cmd_catalog_get(const chm::Catalog& cat, const std::string& name, const std::string& out,
                    const chm::ProfileTolerances& tol, const Display& d) {
  print_header(tol, d, "catalog=" + cat.root().string());
  const auto loaded = cat.get(name, tol);
  std::cout << "entry " << name << " order " << loaded.matrix.order() << "\n";
  print_profile(loaded.report.profile, d);
  if (!out.empty()) chm::write_chm(loaded.matrix, out);
  return kOk;
}

int cmd_catalog_list(const chm::Catalog& cat, const chm::ProfileTolerances& tol, const Display& d) {
  print_header(tol, d, "catalog=" + cat.root().string());
  const auto entries = cat.list(tol);
  std::vector<Row> rows;
  for (const auto& e : entries) {
    if (e.report)
      rows.push_back({e.name, e.report->profile.defect, e.report->profile.haagerup_card, "catalog",
                      "N=" + std::to_string(e.report->order) + " q=" + butson_text(e.report->profile.butson_order)});
    else
      std::cout << e.name << ": " << e.problem << "\n";
  }
  print_table(rows);
  std::cout << entries.size() << " entries\n";
  return kOk;
}

int exit_code_for(chm::ErrorKind k) {
  switch (k) {
    case chm::ErrorKind::ParseError:
    case chm::ErrorKind::DimensionMismatch:
    case chm::ErrorKind::LengthMismatch:
    case chm::ErrorKind::InvalidArgument:
    case chm::ErrorKind::IoError:
      return kUsage;
    default:
      return kFailure;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Search, construct, profile and catalogue complex Hadamard matrices"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(chm::kToolVersion));

  Display display;
  chm::ProfileTolerances tol;
  app.add_option("--digits", display.digits, "Significant digits shown on screen (files keep full precision)")
      ->check(CLI::Range(1, 17));

  SearchOpts so;
  auto* search = app.add_subcommand("search", "Sinkhorn search from random Gaussian seeds");
  search->add_option("--n", so.n, "Matrix order (2..64)")->required();
  search->add_option("--seeds", so.seeds, "Number of seeds");
  search->add_option("--tol", so.tol, "Stop when Z of the unimodular iterate is at most this")->check(CLI::PositiveNumber);
  search->add_option("--max-iter", so.max_iter, "Iteration cap per seed");
  search->add_option("--rng-seed", so.rng_seed, "Base random seed");
  search->add_option("--threads", so.threads, "Worker threads (0 = all cores)");
  search->add_option("--out", so.out, "Directory for one matrix and report per distinct profile");

  FamilyOpts fo;
  auto* family = app.add_subcommand("family", "Solve the LN or VN family equations");
  family->add_option("--name", fo.name, "LN or VN")->required();
  family->add_option("--n", fo.n, "Matrix order")->required();
  family->add_option("--starts", fo.starts, "Multistart count");
  family->add_option("--rng-seed", fo.rng_seed, "Base random seed");
  family->add_option("--threads", fo.threads, "Worker threads (0 = all cores)");
  family->add_flag("--keep-butson", fo.keep_butson, "Report Butson solutions alongside the others");
  family->add_flag("--allow-large", fo.allow_large, "Permit VN orders above 64");
  family->add_option("--out", fo.out, "Directory for solutions and reports");

  GenOpts go;
  auto* gen = app.add_subcommand("gen", "Build a named matrix");
  gen->add_option("--name", go.name, "Fourier, LN, VN, C7D, V8, T8B, T8C, Y9A, Y9B, Y9C, Y10A, Y10C2, Y13")->required();
  gen->add_option("--n", go.n, "Order (Fourier, LN, VN)");
  gen->add_option("--params", go.params, "Comma-separated phases in [0, 1)")->delimiter(',');
  gen->add_option("--out", go.out, "Write the matrix to this file");

  std::string inv_file, inv_out;
  auto* inv = app.add_subcommand("invariants", "Profile a matrix file");
  inv->add_option("file", inv_file, "Matrix file")->required();
  inv->add_option("--rank-tol", tol.rank_rel_tol, "Relative rank tolerance for the defect");
  inv->add_option("--phase-tol", tol.phase_tol, "Haagerup clustering tolerance");
  inv->add_option("--qmax", tol.butson_q_max, "Largest Butson order tried");
  inv->add_option("--out", inv_out, "Write the report to this file");

  std::string ver_file;
  double ver_tol = 1e-8;
  auto* verify = app.add_subcommand("verify", "Check that a matrix file is Hadamard");
  verify->add_option("file", ver_file, "Matrix file")->required();
  verify->add_option("--tol", ver_tol, "Acceptance threshold on Z/N");

  std::string cat_dir, cat_name, cat_file, cat_out;
  auto* catalog = app.add_subcommand("catalog", "Manage a directory of verified matrices");
  catalog->add_option("--dir", cat_dir, "Catalog directory (default $CHM_CATALOG_DIR or ./catalog)");
  catalog->require_subcommand(1);
  auto* put = catalog->add_subcommand("put", "Store a matrix file under a name");
  put->add_option("name", cat_name, "Entry name")->required();
  put->add_option("file", cat_file, "Matrix file")->required();
  auto* get = catalog->add_subcommand("get", "Load and re-verify an entry");
  get->add_option("name", cat_name, "Entry name")->required();
  get->add_option("--out", cat_out, "Write the matrix to this file");
  auto* list = catalog->add_subcommand("list", "List entries with their profiles");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cout << "chmtool " << chm::kToolVersion << "\n";
    app.exit(e);
    return kUsage;
  }

  try {
    if (*search) return cmd_search(so, tol, display);
    if (*family) return cmd_family(fo, tol, display);
    if (*gen) return cmd_gen(go, tol, display);
    if (*inv) return cmd_invariants(inv_file, inv_out, tol, display);
    if (*verify) return cmd_verify(ver_file, ver_tol, tol, display);
    if (*catalog) {
      const chm::Catalog cat = cat_dir.empty() ? chm::Catalog::from_environment("catalog") : chm::Catalog(cat_dir);
      if (*put) return cmd_catalog_put(cat, cat_name, cat_file, tol, display);
      if (*get) return cmd_catalog_get(cat, cat_name, cat_out, tol, display);
      if (*list) return cmd_catalog_list(cat, tol, display);
    }
  } catch (const chm::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kUsage;
}
