#include "gl2reps/orbits.hpp"

#include <sstream>
#include <stdexcept>

namespace gl2reps {

std::string to_string(OrbitType t) {
  switch (t) {
    case OrbitType::scalar: return "scalar";
    case OrbitType::split_diag: return "split_diag";
    case OrbitType::cuspidal: return "cuspidal";
    case OrbitType::scalar_plus_nilpotent: return "scalar_plus_nilpotent";
  }
  return "?";
}

std::string OrbitDescriptor::label() const {
  const Ring lp(spec.at_level(LevelConstants::of(spec.r).l_prime));
  std::ostringstream os;
  os << to_string(type);
  if (type == OrbitType::split_diag)
    os << "(a=" << lp.format(a) << ",d=" << lp.format(d) << ")";
  else
    os << "(s=" << lp.format(s) << ",D=" << lp.format(delta) << ")";
  return os.str();
}

namespace {

// Roots of x^2 - s x + delta in F_p.
std::vector<Residue> roots_mod_p(const Ring& f, Residue s, Residue delta) {
  std::vector<Residue> out;
  for (Residue x = 0; x < f.size(); ++x)
    if (f.add(f.sub(f.mul(x, x), f.mul(s, x)), delta) == 0) out.push_back(x);
  return out;
}

bool is_irreducible_mod_p(const Ring& ring, Residue s, Residue delta) {
  const Ring f(ring.spec().at_level(1));
  return roots_mod_p(f, ring.reduce(s, 1), ring.reduce(delta, 1)).empty();
}

}  // namespace

OrbitType classify_mod_p(const Ring& ring, const Mat2& beta) {
  const Ring f(ring.spec().at_level(1));
  const Mat2 b = mat::reduce(ring, beta, 1);
  const Residue s = mat::trace(f, b), delta = mat::det(f, b);
  const auto roots = roots_mod_p(f, s, delta);
  if (roots.empty()) return OrbitType::cuspidal;
  if (roots.size() == 2) return OrbitType::split_diag;
  return b == mat::scalar(f, roots[0]) ? OrbitType::scalar : OrbitType::scalar_plus_nilpotent;
}

OrbitDescriptor make_orbit(const RingSpec& spec_r, OrbitType type, const Mat2& beta) {
  const Ring R(spec_r);
  OrbitDescriptor o;
  o.type = type;
  o.spec = spec_r;
  o.beta = beta;
  o.beta_hat = beta;  // the canonical section keeps residue codes unchanged
  o.frame = mat::identity(R);
  const Ring lp(spec_r.at_level(LevelConstants::of(spec_r.r).l_prime));
  if (type == OrbitType::split_diag) {
    o.a = beta.a();
    o.d = beta.d();
  } else {
    o.s = mat::trace(lp, beta);
    o.delta = mat::det(lp, beta);
  }
  return o;
}

std::vector<OrbitDescriptor> orbit_reps(const RingSpec& spec_r) {
  const int lp_level = LevelConstants::of(spec_r.r).l_prime;
  if (lp_level < 1) throw std::invalid_argument("orbit_reps: need r >= 2");
  const Ring lp(spec_r.at_level(lp_level));
  const auto p = static_cast<Residue>(spec_r.p);
  std::vector<OrbitDescriptor> out;
  for (Residue a = 0; a < lp.size(); ++a)
    for (Residue d = a + 1; d < lp.size(); ++d)
      if (a % p != d % p) out.push_back(make_orbit(spec_r, OrbitType::split_diag, mat::diag(a, d)));
  for (Residue s = 0; s < lp.size(); ++s)
    for (Residue delta = 0; delta < lp.size(); ++delta)
      if (is_irreducible_mod_p(lp, s, delta))
        out.push_back(make_orbit(spec_r, OrbitType::cuspidal, mat::companion(lp, delta, s)));
  for (Residue s = 0; s < lp.size(); s += p)
    for (Residue delta = 0; delta < lp.size(); delta += p)
      out.push_back(make_orbit(spec_r, OrbitType::scalar_plus_nilpotent, mat::companion(lp, delta, s)));
  return out;
}

namespace {

// A column of m with a unit entry.
std::array<Residue, 2> unimodular_column(const Ring& R, const Mat2& m) {
  if (R.is_unit(m.a()) || R.is_unit(m.c())) return {m.a(), m.c()};
  if (R.is_unit(m.b()) || R.is_unit(m.d())) return {m.b(), m.d()};
  throw std::logic_error("canonicalize: no unimodular column");
}

// P = [w; w beta] with w a standard row vector making P invertible, so that
// P beta P^-1 is the companion matrix of beta.
Mat2 cyclic_basis(const Ring& R, const Mat2& beta) {
  const Residue one = R.from_int(1);
  const Mat2 first{{one, 0, beta.a(), beta.b()}};
  if (mat::is_invertible(R, first)) return first;
  const Mat2 second{{0, one, beta.c(), beta.d()}};
  if (mat::is_invertible(R, second)) return second;
  throw std::logic_error("canonicalize: beta has no cyclic vector");
}

}  // namespace

Canonical canonicalize(const RingSpec& spec_r, const Mat2& beta) {
  const int lp_level = LevelConstants::of(spec_r.r).l_prime;
  if (lp_level < 1) throw std::invalid_argument("canonicalize: need r >= 2");
  const Ring R(spec_r.at_level(lp_level));
  const Ring f(spec_r.at_level(1));
  Canonical out;
  out.mod_p_type = classify_mod_p(R, beta);
  out.conjugator = mat::identity(R);

  const Residue s = mat::trace(R, beta), delta = mat::det(R, beta);
  switch (out.mod_p_type) {
    case OrbitType::scalar: {
      out.twist = R.reduce(beta.a(), 1);
      out.reduced_beta = mat::sub(R, beta, mat::scalar(R, out.twist));
      return out;
    }
    case OrbitType::split_diag: {
      // Hensel: each simple root mod p lifts uniquely; search O_{l'} directly.
      Residue a = 0;
      bool found = false;
      for (Residue x = 0; x < R.size() && !found; ++x)
        if (R.add(R.sub(R.mul(x, x), R.mul(s, x)), delta) == 0) {
          a = x;
          found = true;
        }
      if (!found) throw std::logic_error("canonicalize: split polynomial without root");
      Residue d = R.sub(s, a);
      if (a > d) std::swap(a, d);
      // Columns of beta - d lie in ker(beta - a) by Cayley-Hamilton.
      const auto va = unimodular_column(R, mat::sub(R, beta, mat::scalar(R, d)));
      const auto vd = unimodular_column(R, mat::sub(R, beta, mat::scalar(R, a)));
      const Mat2 P{{va[0], vd[0], va[1], vd[1]}};
      out.conjugator = mat::inverse(R, P);
      out.reduced_beta = mat::mul(R, mat::mul(R, out.conjugator, beta), P);
      if (out.reduced_beta != mat::diag(a, d)) throw std::logic_error("canonicalize: diagonalization failed");
      out.reduced = make_orbit(spec_r, OrbitType::split_diag, out.reduced_beta);
      return out;
    }
    case OrbitType::cuspidal:
    case OrbitType::scalar_plus_nilpotent: {
      Mat2 shifted = beta;
      if (out.mod_p_type == OrbitType::scalar_plus_nilpotent) {
        const auto roots = roots_mod_p(f, R.reduce(s, 1), R.reduce(delta, 1));
        out.twist = roots.front();
        shifted = mat::sub(R, beta, mat::scalar(R, out.twist));
      }
      const Mat2 P = cyclic_basis(R, shifted);
      out.conjugator = P;
      out.reduced_beta = mat::mul(R, mat::mul(R, P, shifted), mat::inverse(R, P));
      const Mat2 target = mat::companion(R, mat::det(R, shifted), mat::trace(R, shifted));
      if (out.reduced_beta != target) throw std::logic_error("canonicalize: companion normalization failed");
      out.reduced = make_orbit(spec_r, out.mod_p_type, out.reduced_beta);
      return out;
    }
  }
  return out;
}

LevelContext LevelContext::make(const GroupPtr& group, ClassesPtr classes) {
  const int r = group->spec().r;
  if (r < 2) throw std::invalid_argument("LevelContext: need r >= 2");
  LevelContext ctx;
  ctx.group = group;
  ctx.whole = Subgroup::whole(group);
  ctx.classes = classes ? std::move(classes) : conjugacy_classes(ctx.whole);
  ctx.levels = LevelConstants::of(r);
  ctx.k_l = congruence_subgroup(group, ctx.levels.l);
  ctx.k_lp = congruence_subgroup(group, ctx.levels.l_prime);
  ctx.k_1 = congruence_subgroup(group, 1);
  ctx.borel = borel_subgroup(group);
  return ctx;
}

SubgroupPtr unit_algebra(const GroupPtr& group, const Mat2& beta_hat) {
  const Ring& R = group->ring();
  std::vector<Elem> elems;
  for (Residue x = 0; x < R.size(); ++x)
    for (Residue y = 0; y < R.size(); ++y) {
      const Mat2 m = mat::add(R, mat::scalar(R, x), mat::scale(R, y, beta_hat));
      if (mat::is_invertible(R, m)) elems.push_back(group->index_of(m));
    }
  return Subgroup::from_elements(group, std::move(elems));
}

LinearChar orbit_character(const LevelContext& ctx, const OrbitDescriptor& orbit) {
  return psi_beta(ctx.k_l, ctx.levels.l, orbit.beta_hat);
}

SubgroupPtr stabilizer(const LevelContext& ctx, const OrbitDescriptor& orbit) {
  return product(unit_algebra(ctx.group, orbit.beta_hat), ctx.k_lp);
}

SubgroupPtr stabilizer_bruteforce(const LevelContext& ctx, const OrbitDescriptor& orbit) {
  const LinearChar psi = orbit_character(ctx, orbit);
  const MatrixGroup& G = *ctx.group;
  std::vector<Elem> elems;
  // Both sides are characters of K_l, so agreement on generators suffices.
  for (Elem g = 0; g < G.order(); ++g) {
    bool fixes = true;
    for (Elem x : ctx.k_l->generators()) {
      if (std::abs(psi(G.conj(G.inv(g), x)) - psi(x)) > kTolerance) {
        fixes = false;
        break;
      }
    }
    if (fixes) elems.push_back(g);
  }
  return Subgroup::from_elements(ctx.group, std::move(elems));
}

OrbitDescriptor alternative_lift(const OrbitDescriptor& orbit, const Mat2& shift) {
  const Ring R(orbit.spec);
  OrbitDescriptor out = orbit;
  const Residue unif = R.uniformizer_power(LevelConstants::of(orbit.spec.r).l_prime);
  out.beta_hat = mat::add(R, orbit.beta_hat, mat::scale(R, unif, shift));
  return out;
}

OrbitDescriptor conjugate_representative(const OrbitDescriptor& orbit, const Mat2& g) {
  const Ring R(orbit.spec);
  const int lp = LevelConstants::of(orbit.spec.r).l_prime;
  OrbitDescriptor out = orbit;
  out.beta_hat = mat::mul(R, mat::mul(R, g, orbit.beta_hat), mat::inverse(R, g));
  out.beta = mat::reduce(R, out.beta_hat, lp);
  out.frame = mat::mul(R, g, orbit.frame);
  return out;
}

}  // namespace gl2reps
