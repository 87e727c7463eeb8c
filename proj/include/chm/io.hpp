#pragma once

// Text matrix files, JSON profile reports and a directory-backed catalog.
//
// Matrix file layout:
//   CHM1 N=<n>
//   <n lines of n phases, %.17g, single spaces, LF, trailing newline>

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "chm/invariants.hpp"
#include "chm/phase_matrix.hpp"

namespace chm {

inline constexpr std::string_view kToolVersion = "1.0.0";

/// Shortest-roundtrip-safe decimal for one phase (17 significant digits).
std::string format_phase(double p);

std::string serialize_chm(const PhaseMatrix& m);
void write_chm(const PhaseMatrix& m, const std::filesystem::path& path);

struct LoadedChm {
  PhaseMatrix matrix;
  bool phases_reduced = false;  // some value lay outside [0, 1) and was taken mod 1
};

/// Throws ParseError ("line L, column C: ...") for malformed text and
/// DimensionMismatch for a row with the wrong number of entries.
LoadedChm parse_chm(std::string_view text);
LoadedChm read_chm(const std::filesystem::path& path);

struct ProfileReport {
  std::string matrix_ref;
  Eigen::Index order = 0;
  InvariantProfile profile;
  ProfileTolerances tolerances;
  std::string tool_version{kToolVersion};

  bool operator==(const ProfileReport&) const;
};

ProfileReport make_report(std::string matrix_ref, const PhaseMatrix& m, const ProfileTolerances& tol = {});

std::string serialize_report(const ProfileReport& r);
/// Throws ParseError naming the first missing or mistyped key.
ProfileReport parse_report(std::string_view text);
void write_report(const ProfileReport& r, const std::filesystem::path& path);
ProfileReport read_report(const std::filesystem::path& path);

/// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

struct CatalogEntry {
  std::string name;
  std::optional<ProfileReport> report;
  std::string problem;  // set when the entry could not be loaded
};

/// `<root>/<name>.chm` next to `<root>/<name>.report`.
class Catalog {
 public:
  explicit Catalog(std::filesystem::path root) : root_(std::move(root)) {}
  /// CHM_CATALOG_DIR when set, else `fallback`.
  static Catalog from_environment(const std::filesystem::path& fallback);

  const std::filesystem::path& root() const noexcept { return root_; }

  /// Throws VerificationFailed unless m passes is_hadamard at 1e-8.
  ProfileReport put(const std::string& name, const PhaseMatrix& m, const ProfileTolerances& tol = {}) const;

  struct Loaded {
    PhaseMatrix matrix;
    ProfileReport report;
  };
  /// Re-verifies at 1e-8 on load. Throws NotFound or VerificationFailed.
  /// Entries without a readable report are profiled afresh.
  Loaded get(const std::string& name, const ProfileTolerances& tol = {}) const;

  /// Sorted by name; an empty or missing directory yields no entries.
  std::vector<CatalogEntry> list(const ProfileTolerances& tol = {}) const;

 private:
  std::filesystem::path root_;
};

/// Letters, digits, '_', '-', '.', not starting with '.'.
bool valid_catalog_name(std::string_view name);

}  // namespace chm
