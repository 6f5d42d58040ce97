#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <functional>

#include "gl2reps/oracle.hpp"

using namespace gl2reps;

namespace {

ClassesPtr classes_of(RingSpec spec) { return conjugacy_classes(Subgroup::whole(MatrixGroup::enumerate(spec))); }

std::vector<int> dims(const CharacterTable& t) {
  std::vector<int> d;
  for (const auto& row : t.irreps) d.push_back(row.dim);
  return d;
}

}  // namespace

TEST_CASE("GL_2(F_2) is S_3") {
  const ClassesPtr cc = classes_of({Flavor::padic, 2, 1});
  const CharacterTable t = oracle_table(cc);
  CHECK(dims(t) == std::vector<int>{1, 1, 2});
  CHECK(row_orthonormality_residual(t) < 1e-9);
  CHECK(column_orthogonality_residual(t) < 1e-9);
  // Sign character: -1 on the class of size 3 (transpositions).
  const auto is_trivial = [](const IrrepRecord& row) {
    return std::all_of(row.chi.values.begin(), row.chi.values.end(), [](Complex z) { return std::abs(z - 1.0) < 1e-9; });
  };
  const auto& sign = is_trivial(t.irreps[0]) ? t.irreps[1] : t.irreps[0];
  for (std::size_t c = 0; c < cc->count(); ++c) {
    const double expected = cc->sizes[c] == 3 ? -1.0 : 1.0;
    CHECK(std::abs(sign.chi.values[c] - expected) < 1e-9);
  }
}

TEST_CASE("cyclic subgroup C_4") {
  const auto G = MatrixGroup::enumerate({Flavor::padic, 5, 1});
  // diag(2, 1) has order 4 in GL_2(F_5).
  const Elem g = G->index_of(mat::diag(2, 1));
  const std::array<Elem, 1> gens{g};
  const auto c4 = Subgroup::closure(G, gens);
  REQUIRE(c4->order() == 4);
  const CharacterTable t = oracle_table(conjugacy_classes(c4));
  REQUIRE(t.irreps.size() == 4);
  // Values at g are the four 4th roots of unity.
  std::vector<Complex> at_g;
  for (const auto& row : t.irreps) at_g.push_back(row.chi(g));
  for (int k = 0; k < 4; ++k)
    CHECK(std::any_of(at_g.begin(), at_g.end(), [&](Complex z) { return std::abs(z - root_of_unity(k, 4)) < 1e-9; }));
}

TEST_CASE("GL_2(Z/4) and GL_2(Z/9) tables") {
  const CharacterTable t = oracle_table(classes_of({Flavor::padic, 2, 2}));
  CHECK(t.irreps.size() == 14);
  CHECK(dims(t) == std::vector<int>{1, 1, 1, 1, 2, 2, 2, 2, 2, 3, 3, 3, 3, 6});
  CHECK(row_orthonormality_residual(t) < 1e-6);
  CHECK(column_orthogonality_residual(t) < 1e-6);

  const CharacterTable t9 = oracle_table(classes_of({Flavor::laurent, 3, 2}));
  std::uint64_t sum = 0;
  for (int d : dims(t9)) sum += static_cast<std::uint64_t>(d * d);
  CHECK(sum == 3888);
  CHECK(t9.irreps.size() == t9.classes->count());
}

TEST_CASE("oracle refuses oversized inputs") {
  OracleOptions options;
  options.max_classes = 5;
  CHECK_THROWS(oracle_table(classes_of({Flavor::padic, 2, 2}), options));
}

TEST_CASE("class algebra") {
  const ClassesPtr cc = classes_of({Flavor::padic, 2, 2});
  const ClassAlgebra a = class_algebra(*cc);
  const ClassAlgebra b = class_algebra_serial(*cc);
  CHECK(a.a == b.a);
  for (std::size_t i = 0; i < a.n; ++i)
    for (std::size_t j = 0; j < a.n; ++j) {
      std::uint64_t total = 0;
      for (std::size_t k = 0; k < a.n; ++k) {
        CHECK(a(i, j, k) >= 0);
        CHECK(a(i, j, k) == a(j, i, k));
        total += static_cast<std::uint64_t>(a(i, j, k)) * cc->sizes[k];
      }
      CHECK(total == cc->sizes[i] * cc->sizes[j]);
    }
}

TEST_CASE("orbit partition") {
  using Action = std::function<std::size_t(std::size_t)>;
  const std::vector<Action> shift{[](std::size_t x) { return (x + 2) % 10; }};
  const OrbitPartition p = orbit_partition(10, shift);
  CHECK(p.orbits.size() == 2);
  CHECK(p.orbit_of[3] == p.orbit_of[9]);
  CHECK(p.orbit_of[0] != p.orbit_of[1]);

  const std::vector<Action> none;
  CHECK(orbit_partition(4, none).orbits.size() == 4);

  const std::vector<Action> escapes{[](std::size_t x) { return x + 5; }};
  CHECK_THROWS_AS(orbit_partition(3, escapes), std::out_of_range);
}
