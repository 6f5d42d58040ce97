#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gl2reps/clifford.hpp"
#include "gl2reps/oracle.hpp"
#include "gl2reps/table.hpp"

namespace gl2reps {

struct Certificate {
  std::uint64_t group_order = 0;
  std::uint64_t sum_dim_sq = 0;
  std::size_t irreps = 0;
  std::size_t classes = 0;
  double orthonormality = 0.0;
  double degree_defect = 0.0;  // max |chi(1) - dim|

  bool ok() const {
    return sum_dim_sq == group_order && irreps == classes && orthonormality < kTolerance && degree_defect < kTolerance;
  }
  /// Human-readable reason for failure, empty when ok().
  std::string deficit() const;
};

Certificate certify(const CharacterTable& table);

struct ClassifyOptions {
  std::size_t cap = kDefaultCap;
  OracleOptions oracle;
  /// Supplies conjugacy classes for each level; defaults to computing them.
  std::function<ClassesPtr(const SubgroupPtr&)> classes_provider;
};

struct ClassifyResult {
  CharacterTable table;
  Certificate certificate;
  std::size_t merged = 0;  // candidates dropped as duplicates at the top level
};

/// Recursive classification of Irr(G_r). A failing certificate at a lower
/// level throws std::runtime_error; at the top level it is reported.
ClassifyResult classify(const RingSpec& spec, const ClassifyOptions& options = {});

/// Characters of `prev` pulled back along G_r -> G_{r-1}.
std::vector<IrrepRecord> inflate(const CharacterTable& prev, const ClassesPtr& target);
/// lambda(det g) * chi(g) for the character `lambda` of O_r^x.
IrrepRecord twist(const IrrepRecord& rec, const UnitCharacters& units, std::size_t lambda);

/// Appends candidates not already present; returns the number merged.
std::size_t merge_unique(std::vector<IrrepRecord>& into, std::vector<IrrepRecord> candidates);

// ------------------------------------------------------------- verification

struct LyingOver {
  bool single_orbit = false;   // support of Res_{K_l} is one G_r-orbit
  bool equal_multiplicity = false;
  std::size_t orbit_size = 0;
  int multiplicity = 0;
  OrbitType type = OrbitType::scalar;  // mod p type of the orbit
};

/// Decomposition of Res_{K_l} chi over the characters psi_beta', beta' in M_2(O_l').
LyingOver lying_over(const LevelContext& ctx, const ClassFunction& chi);

struct OracleMatch {
  bool bijective = false;
  double residual = 0.0;
  std::vector<std::size_t> assignment;  // table row -> oracle row
};

/// Bottleneck bijective matching of rows; class sets may come from
/// different enumerations of the same group.
OracleMatch match_tables(const CharacterTable& table, const CharacterTable& oracle);

struct VerifyReport {
  Certificate certificate;
  double column_residual = 0.0;
  bool restriction_checked = false;
  bool restriction_ok = true;
  std::map<OrbitType, std::uint64_t> type_mass;
  std::optional<OracleMatch> oracle;

  bool ok() const;
};

VerifyReport verify(const CharacterTable& table, const CharacterTable* oracle = nullptr, bool check_restriction = true);

}  // namespace gl2reps
