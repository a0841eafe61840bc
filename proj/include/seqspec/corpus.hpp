#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "seqspec/sequence.hpp"

namespace seqspec {

enum class CorpusFamily { vanishing, single_mode, two_mode, mode_plus_decay };

const char* to_string(CorpusFamily f) noexcept;

struct CorpusMember {
  std::string name;
  CorpusFamily family;
  ModesPlusDecay spec;
  bool expect_vanishing = false;
  /// The sequence's only mode, when it has exactly one.
  std::optional<Complex> single_theta;
};

/// Seeded constructed sequences cycling through the four families. Modes have
/// amplitude in [0.5, 2] and pairwise separation of at least 0.5 rad; decays
/// are geometric with ratio in [0.5, 0.95] or power-law with exponent in [1, 2].
std::vector<CorpusMember> sequence_corpus(std::uint64_t seed, std::size_t horizon = 16384, std::size_t count = 30);

/// Seeded matrix A = V D V^{-1}: D has entries of modulus in [0.1, 2], V is a
/// unitary times a diagonal with entries in [1, sqrt(max_cond)], so cond(V) <= max_cond.
CMatrix random_diagonalizable(std::size_t dim, std::uint64_t seed, double max_cond = 10.0,
                              std::vector<Complex>* eigenvalues = nullptr);

/// Seeded unitary from the QR factorization of a Gaussian matrix.
CMatrix random_unitary(std::size_t dim, std::uint64_t seed);

/// Seeded matrix with entries uniform in the unit disk.
CMatrix random_disk_matrix(std::size_t dim, std::uint64_t seed);

}  // namespace seqspec
