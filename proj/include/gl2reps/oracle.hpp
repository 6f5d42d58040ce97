#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "gl2reps/matgroup.hpp"
#include "gl2reps/table.hpp"

// Brute-force character tables. This module must stay independent of the
// orbit constructions it is used to check: it depends on matgroup, charfun
// and table only.

namespace gl2reps {

/// Structure constants a_ijk of the class algebra, C_i C_j = sum_k a_ijk C_k.
struct ClassAlgebra {
  std::size_t n = 0;
  std::vector<std::int32_t> a;

  std::int32_t operator()(std::size_t i, std::size_t j, std::size_t k) const { return a[(i * n + j) * n + k]; }
};

/// OpenMP-parallel across classes.
ClassAlgebra class_algebra(const ConjClasses& classes);
/// Single-threaded reference.
ClassAlgebra class_algebra_serial(const ConjClasses& classes);

struct OracleOptions {
  std::uint64_t seed = 20061u;
  int max_attempts = 8;
  std::size_t max_classes = 200;
};

/// Character table by simultaneous diagonalization of a random combination
/// of class-sum matrices. Rows are sorted by degree.
CharacterTable oracle_table(const ClassesPtr& classes, const OracleOptions& options = {});

struct OrbitPartition {
  std::vector<std::vector<std::size_t>> orbits;
  std::vector<std::size_t> orbit_of;
};

/// Orbits of the group generated by `actions` on {0..n-1}; each action must
/// be a permutation.
OrbitPartition orbit_partition(std::size_t n, std::span<const std::function<std::size_t(std::size_t)>> actions);

}  // namespace gl2reps
