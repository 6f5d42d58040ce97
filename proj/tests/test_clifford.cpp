#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gl2reps/clifford.hpp"
#include "gl2reps/driver.hpp"

using namespace gl2reps;

namespace {

OrbitDescriptor first_of(const RingSpec& spec, OrbitType t) {
  for (const auto& o : orbit_reps(spec))
    if (o.type == t) return o;
  throw std::logic_error("no orbit of that type");
}

// Every row of a is within tol of a distinct row of b.
bool same_characters(const std::vector<IrrepRecord>& a, const std::vector<IrrepRecord>& b, double tol = 1e-6) {
  if (a.size() != b.size()) return false;
  std::vector<char> used(b.size(), 0);
  for (const auto& x : a) {
    bool hit = false;
    for (std::size_t j = 0; j < b.size() && !hit; ++j)
      if (!used[j] && max_abs_diff(x.chi.values, b[j].chi.values) < tol) used[j] = hit = true;
    if (!hit) return false;
  }
  return true;
}

void check_irreducible_family(const LevelContext& ctx, const OrbitDescriptor& o, const std::vector<IrrepRecord>& out) {
  for (std::size_t i = 0; i < out.size(); ++i) {
    CAPTURE(out[i].label);
    CHECK(std::abs(inner(out[i].chi, out[i].chi) - 1.0) < 1e-6);
    CHECK(std::abs(out[i].chi.at_identity() - static_cast<double>(out[i].dim)) < 1e-6);
    for (std::size_t j = 0; j < i; ++j) CHECK(std::abs(inner(out[i].chi, out[j].chi)) < 1e-6);
    const LyingOver lo = lying_over(ctx, out[i].chi);
    CHECK(lo.single_orbit);
    CHECK(lo.type == o.type);
  }
}

}  // namespace

TEST_CASE("gluing") {
  const auto G = MatrixGroup::enumerate({Flavor::padic, 2, 2});
  const auto k1 = congruence_subgroup(G, 1);
  const auto b = borel_subgroup(G);
  CHECK_THROWS_WITH_AS(glue(psi_beta(k1, 1, mat::diag(1, 0)), trivial_char(k1), k1),
                       "glue: characters disagree on the intersection", std::logic_error);
  const LinearChar glued = glue(trivial_char(b), trivial_char(k1), product(b, k1));
  CHECK(is_multiplicative(glued));
}

TEST_CASE("induced representation matrices") {
  const auto G = MatrixGroup::enumerate({Flavor::padic, 2, 2});
  const auto k1 = congruence_subgroup(G, 1);
  const auto whole = Subgroup::whole(G);
  const LinearChar chi = psi_beta(k1, 1, mat::diag(0, 1));
  const MatrixRep rho = induced_representation(chi, whole);
  CHECK(rho.dim == 6);
  CHECK(rho.homomorphism_defect() < 1e-9);
  CHECK(rho.unitarity_defect() < 1e-9);
  CHECK(max_abs_diff(rho.character().values, induce_to(chi, whole).values) < 1e-9);
}

TEST_CASE("even level outputs") {
  SUBCASE("(padic,2,2)") {
    const RingSpec spec{Flavor::padic, 2, 2};
    const auto ctx = LevelContext::make(MatrixGroup::enumerate(spec));
    const auto cusp = construct(ctx, first_of(spec, OrbitType::cuspidal));
    CHECK(cusp.size() == 3);
    for (const auto& rec : cusp) CHECK(rec.dim == 2);
    const auto split = construct(ctx, first_of(spec, OrbitType::split_diag));
    CHECK(split.size() == 1);
    CHECK(split[0].dim == 6);
    for (const auto& o : orbit_reps(spec)) check_irreducible_family(ctx, o, construct(ctx, o));
  }
  SUBCASE("(padic,3,2) split") {
    const RingSpec spec{Flavor::padic, 3, 2};
    const auto ctx = LevelContext::make(MatrixGroup::enumerate(spec));
    const auto o = first_of(spec, OrbitType::split_diag);
    const auto out = construct(ctx, o);
    CHECK(out.size() == 4);
    for (const auto& rec : out) CHECK(rec.dim == 12);
    check_irreducible_family(ctx, o, out);
  }
  SUBCASE("scalar orbits and parity are rejected") {
    const RingSpec spec{Flavor::padic, 2, 3};
    const auto ctx = LevelContext::make(MatrixGroup::enumerate(spec));
    CHECK_THROWS_WITH(even_case(ctx, first_of(spec, OrbitType::split_diag)), "even_case: wrong parity");
    CHECK_THROWS_WITH(split_form(ctx, first_of(spec, OrbitType::cuspidal)), "split_form: use odd_cuspidal");
    CHECK_THROWS_AS(construct(ctx, make_orbit(spec, OrbitType::scalar, Mat2{})), std::invalid_argument);
  }
}

TEST_CASE("odd level, split types") {
  for (Flavor f : {Flavor::padic, Flavor::laurent}) {
    const RingSpec spec{f, 2, 3};
    CAPTURE(to_string(spec));
    const auto ctx = LevelContext::make(MatrixGroup::enumerate(spec));

    const auto o = first_of(spec, OrbitType::split_diag);
    const SplitForm sf = split_form(ctx, o);
    CHECK(sf.form.size() == 16);
    CHECK(sf.form.is_alternating());
    CHECK(sf.h_isotropic);
    CHECK(sf.h_maximal);
    CHECK(sf.h_normal_in_stabilizer);
    CHECK(sf.h_image.size() == 8);
    // The radical is the image of (O[beta]^x ∩ K_l') K_l.
    const auto a = unit_algebra(ctx.group, o.beta_hat);
    const auto rad_group = product(intersection(a, ctx.k_lp), ctx.k_l);
    CHECK(sf.radical.size() * ctx.k_l->order() == rad_group->order());
    for (std::size_t v : sf.radical) CHECK(rad_group->contains(sf.form.coset_reps[v]));

    // At q = 2 the torus acts trivially mod K_l, so every extension is
    // stable; they fall into q^2 classes under K_l'.
    const auto stable = stable_extensions(ctx, o, sf);
    CHECK(stable.size() == 8);
    std::vector<Elem> gens(ctx.k_lp->generators().begin(), ctx.k_lp->generators().end());
    CHECK(conjugation_orbits(stable, gens).size() == 4);

    for (const auto& orbit : orbit_reps(spec)) {
      if (orbit.type == OrbitType::cuspidal) continue;
      CAPTURE(orbit.label());
      const auto out = construct(ctx, orbit);
      CHECK_FALSE(out.empty());
      check_irreducible_family(ctx, orbit, out);
    }
  }
}

TEST_CASE("odd split at p = 3 has q^2 stable extensions") {
  const RingSpec spec{Flavor::padic, 3, 3};
  const auto ctx = LevelContext::make(MatrixGroup::enumerate(spec, 400000));
  const auto o = first_of(spec, OrbitType::split_diag);
  const SplitForm sf = split_form(ctx, o);
  CHECK(stable_extensions(ctx, o, sf).size() == 9);
}

TEST_CASE("glued extension choice does not change the output") {
  // At q = 2 the torus lies in H_beta and there is nothing to choose.
  std::size_t compared = 0;
  for (RingSpec spec : {RingSpec{Flavor::padic, 2, 3}, RingSpec{Flavor::padic, 3, 3}}) {
    const auto ctx = LevelContext::make(MatrixGroup::enumerate(spec, 400000));
    for (const auto& o : orbit_reps(spec)) {
      if (o.type == OrbitType::cuspidal) continue;
      CAPTURE(o.label());
      const SplitForm sf = split_form(ctx, o);
      const auto a_kl = product(unit_algebra(ctx.group, o.beta_hat), ctx.k_l);
      if (a_kl->order() == intersection(sf.h_beta, a_kl)->order()) continue;
      const auto base = odd_split(ctx, o, 0);
      CHECK(same_characters(base, odd_split(ctx, o, 1)));
      CHECK(same_characters(base, odd_split(ctx, o, 2)));
      ++compared;
      if (compared >= 2) break;
    }
  }
  CHECK(compared > 0);
}

TEST_CASE("odd level, cuspidal type at (padic,2,3)") {
  const RingSpec spec{Flavor::padic, 2, 3};
  const auto ctx = LevelContext::make(MatrixGroup::enumerate(spec));
  const auto o = first_of(spec, OrbitType::cuspidal);
  const auto bases = cuspidal_base_extensions(ctx, o);
  CHECK(bases.size() == 4);

  const HeisenbergData hd = heisenberg(ctx, o, bases[0]);
  CHECK(hd.form.size() == 4);
  CHECK(hd.form.is_alternating());
  CHECK(hd.form.radical().size() == 1);
  CHECK(hd.lagrangian->order() * hd.lagrangian->order() == hd.outer->order() * hd.inner->order());
  CHECK(hd.eta.dim == 2);
  CHECK(hd.eta.homomorphism_defect() < 1e-9);
  CHECK(hd.eta.unitarity_defect() < 1e-9);
  const SubgroupChar eta = hd.eta.character();
  CHECK(std::abs(inner(eta, eta) - 1.0) < 1e-9);
  // Ind psi~ = 2 eta, so eta is the only irreducible over psi~.
  const SubgroupChar ind = induce_to(hd.psi_tilde, hd.outer);
  for (std::size_t i = 0; i < ind.values.size(); ++i) CHECK(std::abs(ind.values[i] - 2.0 * eta.values[i]) < 1e-9);

  const auto exts = cyclic_extend(hd.eta, hd.stabilizer);
  CHECK(exts.size() == 3);
  std::vector<ClassFunction> induced;
  for (const auto& e : exts) {
    CHECK(e.homomorphism_defect() < 1e-6);
    CHECK(e.unitarity_defect() < 1e-6);
    induced.push_back(induce(e.character(), ctx.classes));
  }
  for (std::size_t i = 0; i < induced.size(); ++i) {
    CHECK(std::abs(induced[i].at_identity() - 4.0) < 1e-6);
    CHECK(std::abs(inner(induced[i], induced[i]) - 1.0) < 1e-6);
    for (std::size_t j = 0; j < i; ++j) CHECK(std::abs(inner(induced[i], induced[j])) < 1e-6);
  }

  const auto out = odd_cuspidal(ctx, o);
  CHECK(out.size() == 12);
  for (const auto& rec : out) CHECK(rec.dim == 4);
  check_irreducible_family(ctx, o, out);
}

TEST_CASE("independence of lift and representative") {
  for (RingSpec spec : {RingSpec{Flavor::padic, 2, 2}, RingSpec{Flavor::laurent, 3, 2}, RingSpec{Flavor::padic, 2, 3},
                        RingSpec{Flavor::laurent, 2, 3}}) {
    CAPTURE(to_string(spec));
    const auto ctx = LevelContext::make(MatrixGroup::enumerate(spec));
    const Mat2 g{{1, 1, 0, 1}};
    for (const auto& o : orbit_reps(spec)) {
      CAPTURE(o.label());
      const auto base = construct(ctx, o);
      CHECK(same_characters(base, construct(ctx, alternative_lift(o, Mat2{{1, 0, 1, 1}}))));
      CHECK(same_characters(base, construct(ctx, conjugate_representative(o, g))));
    }
  }
}

TEST_CASE("replacing psi by psi(u.) permutes the constructed characters") {
  for (Flavor f : {Flavor::padic, Flavor::laurent}) {
    const RingSpec spec{f, 3, 2};
    const auto ctx = LevelContext::make(MatrixGroup::enumerate(spec));
    const Ring small(spec.at_level(1));
    const Residue u = 2;
    std::vector<IrrepRecord> plain, scaled;
    for (const auto& o : orbit_reps(spec)) {
      for (auto& rec : construct(ctx, o)) plain.push_back(std::move(rec));
      // psi(u Tr(beta (x - 1))) is psi_{u beta}.
      for (auto& rec : construct(ctx, make_orbit(spec, o.type, mat::scale(small, u, o.beta)))) scaled.push_back(std::move(rec));
    }
    CHECK(same_characters(plain, scaled));
  }
}
