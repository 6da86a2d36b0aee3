#pragma once

#include "ronmf/types.hpp"

#include <cstdint>

namespace ronmf {

/// Adds N(0, (sigma_scale·range)²) noise to ⌊ratio·d·n⌋ entries chosen
/// uniformly without replacement, clamping results to ≥ 0. range is
/// max(X) − min(X). "X% noise" throughout this library means the fraction of
/// matrix entries touched.
DataMatrix gaussian_corrupt(const DataMatrix& data, double ratio, double sigma_scale,
                            std::uint64_t seed);

/// Sets ⌊density·d·n⌋ entries to min(X) or max(X) with probability ½ each.
DataMatrix salt_pepper_corrupt(const DataMatrix& data, double density, std::uint64_t seed);

/// Replaces each entry x by Poisson(scale·x)/scale; zeros stay zero.
DataMatrix poisson_corrupt(const DataMatrix& data, double scale, std::uint64_t seed);

}  // namespace ronmf
