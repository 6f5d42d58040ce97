#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "gl2reps/charfun.hpp"
#include "gl2reps/orbits.hpp"
#include "gl2reps/table.hpp"

namespace gl2reps {

/// Alternating form on an elementary abelian p-group V, values in F_p.
/// For the commutator form h_chi the stored value j stands for exp(2 pi i j / p).
struct BilinearFormTable {
  int p = 2;
  std::vector<Elem> coset_reps;  // one group element per vector of V
  std::vector<int> values;       // size() x size(), row-major

  std::size_t size() const noexcept { return coset_reps.size(); }
  int at(std::size_t v, std::size_t w) const { return values[v * size() + w]; }
  bool is_alternating() const;
  /// Indices v with form(v, w) = 0 for every w.
  std::vector<std::size_t> radical() const;
};

/// Explicit matrices for a representation of a subgroup.
struct MatrixRep {
  SubgroupPtr domain;
  int dim = 0;
  std::vector<Eigen::MatrixXcd> mats;  // indexed by position in domain

  const Eigen::MatrixXcd& operator()(Elem g) const { return mats[domain->position(g)]; }
  SubgroupChar character() const;
  /// max ||rho(x s) - rho(x) rho(s)|| over x in domain and generators s.
  double homomorphism_defect() const;
  double unitarity_defect() const;
};

/// Monomial induced representation of a linear character.
MatrixRep induced_representation(const LinearChar& chi, const SubgroupPtr& target);

/// chi1(x) chi2(y) on the product group xy, checked on every factorization.
/// Throws std::logic_error if the two characters disagree on the overlap.
LinearChar glue(const LinearChar& chi1, const LinearChar& chi2, const SubgroupPtr& product_group);

// ---------------------------------------------------------------- even r

/// Induce theta psi_beta from O_r[beta_hat]^x K_l for every admissible theta.
std::vector<IrrepRecord> even_case(const LevelContext& ctx, const OrbitDescriptor& orbit);

// ----------------------------------------------------------- odd r, split

struct SplitForm {
  BilinearFormTable form;            // <.,.>_beta on K_{l'}/K_l, values in k
  std::vector<std::size_t> radical;  // computed by kernel search
  SubgroupPtr h_beta;                // K_l (B ∩ K_{l'}) for the orbit's flag
  std::vector<std::size_t> h_image;  // vectors of V lying in H_beta/K_l
  bool h_isotropic = false;
  bool h_maximal = false;
  bool h_normal_in_stabilizer = false;
};

SplitForm split_form(const LevelContext& ctx, const OrbitDescriptor& orbit);

/// Extensions of psi_beta to H_beta that are stable under O_r[beta_hat]^x.
std::vector<LinearChar> stable_extensions(const LevelContext& ctx, const OrbitDescriptor& orbit, const SplitForm& sf);
/// Orbits of `chars` under conjugation by the group generated by `gens`; the
/// set must be closed under that action.
std::vector<std::vector<std::size_t>> conjugation_orbits(const std::vector<LinearChar>& chars, std::span<const Elem> gens);

/// One output per K_l'-orbit of stable extensions and character of
/// O_r[beta_hat]^x H_beta / H_beta. Throws std::logic_error on more than q^2 orbits.
/// `extension_choice` picks which extension to O_r[beta_hat]^x K_l is glued in;
/// the resulting set of characters does not depend on it.
std::vector<IrrepRecord> odd_split(const LevelContext& ctx, const OrbitDescriptor& orbit,
                                   std::size_t extension_choice = 0);

// -------------------------------------------------------- odd r, cuspidal

struct HeisenbergData {
  SubgroupPtr z1;          // O_r[beta_hat]^x ∩ K_1
  SubgroupPtr inner;       // Z^1 K_l
  SubgroupPtr outer;       // Z^1 K_{l'}
  SubgroupPtr stabilizer;  // T(psi_beta)
  LinearChar psi_tilde;    // extension of psi_beta to Z^1 K_l
  BilinearFormTable form;  // h on outer/inner
  SubgroupPtr lagrangian;  // preimage of a maximal isotropic subgroup
  MatrixRep eta;
};

/// All extensions of psi_beta to Z^1 K_l.
std::vector<LinearChar> cuspidal_base_extensions(const LevelContext& ctx, const OrbitDescriptor& orbit);
/// Heisenberg lift over one extension. Throws std::logic_error on a degenerate form.
HeisenbergData heisenberg(const LevelContext& ctx, const OrbitDescriptor& orbit, const LinearChar& psi_tilde);

/// All |T/U| extensions of a T-stable irreducible eta of U to T, T/U cyclic.
std::vector<MatrixRep> cyclic_extend(const MatrixRep& eta, const SubgroupPtr& t, std::uint64_t seed = 7u);

std::vector<IrrepRecord> odd_cuspidal(const LevelContext& ctx, const OrbitDescriptor& orbit);

/// Dispatch on parity and type.
std::vector<IrrepRecord> construct(const LevelContext& ctx, const OrbitDescriptor& orbit);

}  // namespace gl2reps
