// Copyright The mnepv Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef MNEPV_IO_HPP
#define MNEPV_IO_HPP

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>

#include "mnepv/apps.hpp"
#include "mnepv/problem.hpp"
#include "mnepv/sampling.hpp"

namespace mnepv::io {

enum class MmFormat { Coordinate, Array };
enum class MmField { Real, Integer, Complex, Pattern };
enum class MmSymmetry { General, Symmetric, Hermitian, SkewSymmetric };

/// Dense contents of a Matrix Market file with symmetry classes expanded.
struct MatrixMarket {
  Matrix values;
  MmFormat format = MmFormat::Coordinate;
  MmField field = MmField::Real;
  MmSymmetry symmetry = MmSymmetry::General;

  bool is_real() const { return field != MmField::Complex; }
  /// Throws ValidationError unless the matrix is Hermitian to roundoff.
  HermitianMatrix hermitian() const;
  /// Real part; throws ValidationError for complex data with nonzero
  /// imaginary parts.
  RealMatrix real() const;
};

MatrixMarket parse_matrix_market(std::istream& in);
MatrixMarket read_matrix_market(const std::filesystem::path& path);

/// Writes a coordinate file. For symmetric, hermitian and skew-symmetric
/// output only the lower triangle is stored (strictly lower for skew).
void write_matrix_market(std::ostream& out, const Matrix& m, MmSymmetry symmetry,
                         bool complex_field);
void write_matrix_market(const std::filesystem::path& path, const Matrix& m,
                         MmSymmetry symmetry = MmSymmetry::General, bool complex_field = false);

/// Tensor COO text: header "n m nnz", then nnz lines "i j k value", 1-based.
/// Lines starting with '%' or '#' are comments.
TensorPS3 parse_tensor_coo(std::istream& in);
TensorPS3 read_tensor_coo(const std::filesystem::path& path);
void write_tensor_coo(std::ostream& out, const TensorPS3& t);
void write_tensor_coo(const std::filesystem::path& path, const TensorPS3& t);

/// Shortest decimal string that parses back to exactly `v`.
std::string format_double(double v);

/// Supporting-point trace as CSV. Columns: theta (m = 2), eta,theta (m = 3)
/// or v1..vm (otherwise), then y1..ym, lambda_v.
void write_boundary(std::ostream& out, std::span<const SupportingPoint> points);
void write_boundary(const std::filesystem::path& path, std::span<const SupportingPoint> points);

}  // namespace mnepv::io

#endif  // MNEPV_IO_HPP
