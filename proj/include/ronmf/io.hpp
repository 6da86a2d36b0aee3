#pragma once

#include "ronmf/types.hpp"

#include <cstdint>
#include <filesystem>

namespace ronmf {

/// Thrown for malformed or unreadable dataset files; message carries the
/// offending position.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class MatrixFormat { Csv, RawF64 };

MatrixFormat matrix_format_from_string(const std::string& name);

/// Guess the format from the extension (.csv vs anything else → rawf64).
MatrixFormat matrix_format_from_path(const std::filesystem::path& path);

/// CSV: numeric cells, one sample per column; an optional final row whose
/// first cell is the literal `labels` carries per-sample integer labels
/// (−1 = unlabeled).
///
/// rawf64: 16-byte header — magic "RONM", u32 LE d, u32 LE n, u32 LE
/// labels-present flag — then d·n LE doubles in column-major order, then,
/// when flagged, n LE i32 labels (−1 = unlabeled).
DataMatrix load_matrix(const std::filesystem::path& path, MatrixFormat format);

void save_matrix(const DataMatrix& data, const std::filesystem::path& path, MatrixFormat format);

/// c Gaussian blobs over the columns: class j gets a mean with value
/// `separation` on its block of ⌊d/c⌋ coordinates, unit within-class noise,
/// entries clamped to ≥ 0. Ground-truth labels attached.
DataMatrix generate_synthetic(int classes, int per_class, int dim, double separation,
                              std::uint64_t seed);

}  // namespace ronmf
