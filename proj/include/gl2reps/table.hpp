#pragma once

#include <string>
#include <vector>

#include "gl2reps/charfun.hpp"

namespace gl2reps {

/// One irreducible character with its provenance.
struct IrrepRecord {
  std::string label;
  int dim = 0;
  ClassFunction chi;
};

struct CharacterTable {
  RingSpec spec;
  ClassesPtr classes;
  std::vector<IrrepRecord> irreps;

  std::size_t group_order() const { return classes->group->order(); }
};

/// Max |<chi_i, chi_j> - delta_ij| over all pairs of rows.
double row_orthonormality_residual(const CharacterTable& table);
/// Max |sum_chi chi(g_a) conj(chi(g_b)) - delta_ab |G|/|C_a|| over class pairs, scaled by |C_a|/|G|.
double column_orthogonality_residual(const CharacterTable& table);

/// dim rounded to the nearest integer; throws if chi(1) is not close to one.
int integral_degree(const ClassFunction& chi, double tol = kTolerance);

}  // namespace gl2reps
