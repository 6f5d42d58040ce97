#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gl2reps/charfun.hpp"
#include "gl2reps/matgroup.hpp"

namespace gl2reps {

/// l = floor((r+1)/2), l' = floor(r/2).
struct LevelConstants {
  int l = 1;
  int l_prime = 0;

  static LevelConstants of(int r) { return LevelConstants{(r + 1) / 2, r / 2}; }
};

/// Conjugacy type of beta mod p.
enum class OrbitType { scalar, split_diag, cuspidal, scalar_plus_nilpotent };

std::string to_string(OrbitType t);

/// An orbit representative beta in M_2(O_{l'}) together with the data the
/// constructions need. Reduced types are split_diag (diag(a,d), a != d mod p),
/// cuspidal and scalar_plus_nilpotent (both companion matrices, the latter
/// with s, delta in p).
struct OrbitDescriptor {
  OrbitType type = OrbitType::split_diag;
  RingSpec spec;    // the level r of G_r
  Mat2 beta;        // over O_{l'}
  Mat2 beta_hat;    // lift to O_r
  Mat2 frame;       // over O_r; the flag used for H_beta is frame B_r frame^-1
  Residue a = 0, d = 0, s = 0, delta = 0;

  std::string label() const;
};

/// Type of beta mod p; beta may live over any O_k, k >= 1.
OrbitType classify_mod_p(const Ring& ring, const Mat2& beta);

/// Descriptor with the canonical lift (same digits, zero top digits).
OrbitDescriptor make_orbit(const RingSpec& spec_r, OrbitType type, const Mat2& beta);

/// All representatives of reduced types for G_r, in the order
/// split_diag, cuspidal, scalar_plus_nilpotent. Requires r >= 2.
std::vector<OrbitDescriptor> orbit_reps(const RingSpec& spec_r);

/// Result of normalizing an arbitrary beta in M_2(O_{l'}).
struct Canonical {
  OrbitType mod_p_type = OrbitType::scalar;
  Mat2 conjugator;        // g in GL_2(O_{l'})
  Residue twist = 0;      // scalar c: g (beta - c) g^-1 is the reduced representative
  Mat2 reduced_beta;      // g (beta - c) g^-1
  /// Absent for the scalar type: after twisting, the representation factors
  /// through G_{r-1}.
  std::optional<OrbitDescriptor> reduced;
};

Canonical canonicalize(const RingSpec& spec_r, const Mat2& beta);

/// Groups and subgroups of G_r shared by every orbit construction.
struct LevelContext {
  GroupPtr group;
  SubgroupPtr whole;
  ClassesPtr classes;
  LevelConstants levels;
  SubgroupPtr k_l;        // K_l
  SubgroupPtr k_lp;       // K_{l'}
  SubgroupPtr k_1;        // K_1
  SubgroupPtr borel;      // upper-triangular B_r

  static LevelContext make(const GroupPtr& group, ClassesPtr classes = nullptr);
  int r() const { return group->spec().r; }
  int q() const { return group->spec().p; }
};

/// O_r[beta_hat]^x = {x + y beta_hat invertible}.
SubgroupPtr unit_algebra(const GroupPtr& group, const Mat2& beta_hat);

/// psi_beta on K_l.
LinearChar orbit_character(const LevelContext& ctx, const OrbitDescriptor& orbit);

/// T(psi_beta) = O_r[beta_hat]^x K_{l'}.
SubgroupPtr stabilizer(const LevelContext& ctx, const OrbitDescriptor& orbit);
/// {g : psi_beta(g^-1 x g) = psi_beta(x) for all x in K_l}, by exhaustion.
SubgroupPtr stabilizer_bruteforce(const LevelContext& ctx, const OrbitDescriptor& orbit);

/// Same beta, lift beta_hat + uniformizer^{l'} * shift.
OrbitDescriptor alternative_lift(const OrbitDescriptor& orbit, const Mat2& shift);
/// Representative g beta g^-1 with lift g beta_hat g^-1 and transported frame.
OrbitDescriptor conjugate_representative(const OrbitDescriptor& orbit, const Mat2& g);

}  // namespace gl2reps
