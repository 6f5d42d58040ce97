#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "gl2reps/driver.hpp"

using namespace gl2reps;

namespace {

std::vector<int> sorted_dims(const CharacterTable& t) {
  std::vector<int> d;
  for (const auto& row : t.irreps) d.push_back(row.dim);
  std::sort(d.begin(), d.end());
  return d;
}

CharacterTable oracle_for(const RingSpec& spec) {
  return oracle_table(conjugacy_classes(Subgroup::whole(MatrixGroup::enumerate_serial(spec))));
}

}  // namespace

TEST_CASE("level one") {
  const ClassifyResult res = classify({Flavor::padic, 2, 1});
  CHECK(sorted_dims(res.table) == std::vector<int>{1, 1, 2});
  CHECK(res.certificate.ok());
  CHECK(res.certificate.deficit().empty());
}

TEST_CASE("GL_2(Z/4) census against the oracle") {
  const RingSpec spec{Flavor::padic, 2, 2};
  // Oracle first: dimensions and per-type mass come from the brute-force table.
  const CharacterTable oracle = oracle_for(spec);
  const std::vector<int> oracle_dims = sorted_dims(oracle);
  CHECK(oracle_dims == std::vector<int>{1, 1, 1, 1, 2, 2, 2, 2, 2, 3, 3, 3, 3, 6});
  const auto ctx = LevelContext::make(oracle.classes->group->group_ptr(), oracle.classes);
  std::map<OrbitType, std::uint64_t> oracle_mass;
  for (const auto& row : oracle.irreps) {
    const LyingOver lo = lying_over(ctx, row.chi);
    REQUIRE(lo.single_orbit);
    oracle_mass[lo.type] += static_cast<std::uint64_t>(row.dim * row.dim);
  }
  CHECK(oracle_mass[OrbitType::scalar] == 12);
  CHECK(oracle_mass[OrbitType::split_diag] == 36);
  CHECK(oracle_mass[OrbitType::cuspidal] == 12);
  CHECK(oracle_mass[OrbitType::scalar_plus_nilpotent] == 36);

  const ClassifyResult res = classify(spec);
  CHECK(res.certificate.ok());
  CHECK(sorted_dims(res.table) == oracle_dims);
  const VerifyReport report = verify(res.table, &oracle);
  CHECK(report.ok());
  CHECK(report.column_residual < 1e-8);
  CHECK(report.restriction_ok);
  REQUIRE(report.oracle.has_value());
  CHECK(report.oracle->bijective);
  CHECK(report.oracle->residual < 1e-8);
  CHECK(report.type_mass == oracle_mass);
}

TEST_CASE("both flavors at (3,2) match the oracle") {
  for (Flavor f : {Flavor::padic, Flavor::laurent}) {
    const RingSpec spec{f, 3, 2};
    const ClassifyResult res = classify(spec);
    CHECK(res.certificate.ok());
    CHECK(res.certificate.sum_dim_sq == 3888);
    const CharacterTable oracle = oracle_for(spec);
    const VerifyReport report = verify(res.table, &oracle);
    CHECK(report.ok());
    std::uint64_t total = 0;
    for (const auto& [type, mass] : report.type_mass) total += mass;
    CHECK(total == 3888);
  }
}

TEST_CASE("classification is deterministic") {
  const RingSpec spec{Flavor::laurent, 2, 3};
  const ClassifyResult a = classify(spec);
  const ClassifyResult b = classify(spec);
  CHECK(a.certificate.ok());
  REQUIRE(a.table.irreps.size() == b.table.irreps.size());
  for (std::size_t i = 0; i < a.table.irreps.size(); ++i) {
    CHECK(a.table.irreps[i].label == b.table.irreps[i].label);
    CHECK(max_abs_diff(a.table.irreps[i].chi.values, b.table.irreps[i].chi.values) == 0.0);
  }
}

TEST_CASE("inflation") {
  const CharacterTable level1 = oracle_for({Flavor::padic, 2, 1});
  const ClassesPtr target = conjugacy_classes(Subgroup::whole(MatrixGroup::enumerate({Flavor::padic, 2, 2})));
  const auto inflated = inflate(level1, target);
  REQUIRE(inflated.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(inflated[i].dim == level1.irreps[i].dim);
    CHECK(std::abs(inner(inflated[i].chi, inflated[i].chi) - 1.0) < 1e-9);
  }
  const auto trivial = std::find_if(inflated.begin(), inflated.end(), [](const IrrepRecord& r) {
    return std::all_of(r.chi.values.begin(), r.chi.values.end(), [](Complex z) { return std::abs(z - 1.0) < 1e-9; });
  });
  CHECK(trivial != inflated.end());
  CHECK(std::count_if(inflated.begin(), inflated.end(), [](const IrrepRecord& r) { return r.dim == 2; }) == 1);

  const ClassesPtr wrong = conjugacy_classes(Subgroup::whole(MatrixGroup::enumerate({Flavor::padic, 2, 3})));
  CHECK_THROWS_AS(inflate(level1, wrong), std::invalid_argument);
}

TEST_CASE("merging duplicates") {
  const CharacterTable t = oracle_for({Flavor::padic, 2, 2});
  std::vector<IrrepRecord> into(t.irreps.begin(), t.irreps.begin() + 5);
  std::vector<IrrepRecord> more(t.irreps.begin() + 3, t.irreps.end());
  CHECK(merge_unique(into, more) == 2);
  CHECK(into.size() == t.irreps.size());
}

TEST_CASE("matching across independent enumerations") {
  const RingSpec spec{Flavor::padic, 2, 2};
  const ClassifyResult res = classify(spec);
  CharacterTable oracle = oracle_for(spec);
  std::reverse(oracle.irreps.begin(), oracle.irreps.end());
  const OracleMatch m = match_tables(res.table, oracle);
  CHECK(m.bijective);
  CHECK(m.residual < 1e-8);
  std::vector<std::size_t> seen = m.assignment;
  std::sort(seen.begin(), seen.end());
  CHECK(std::adjacent_find(seen.begin(), seen.end()) == seen.end());
}

TEST_CASE("negative control") {
  const RingSpec spec{Flavor::padic, 2, 2};
  const CharacterTable oracle = oracle_for(spec);
  const ClassifyResult res = classify(spec);

  CharacterTable corrupted = res.table;
  corrupted.irreps[5].chi.values[3] += 0.1;
  CHECK_FALSE(certify(corrupted).ok());
  const VerifyReport report = verify(corrupted, &oracle);
  CHECK_FALSE(report.ok());
  REQUIRE(report.oracle.has_value());
  CHECK(report.oracle->residual > 0.05);

  CharacterTable dropped = res.table;
  dropped.irreps.pop_back();
  const Certificate c = certify(dropped);
  CHECK_FALSE(c.ok());
  CHECK(c.sum_dim_sq != c.group_order);
  CHECK_FALSE(c.deficit().empty());
}
