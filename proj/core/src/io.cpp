// Copyright The mnepv Authors
// SPDX-License-Identifier: Apache-2.0

#include "mnepv/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "mnepv/errors.hpp"
#include "text.hpp"

namespace mnepv::io {

namespace {

using PK = ParseError::Kind;

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream ss(line);
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

bool blank(const std::string& line) {
  return std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); });
}

// Line reader that skips blanks and comment lines and tracks 1-based numbers.
class Lines {
 public:
  Lines(std::istream& in, std::string comments) : in_(in), comments_(std::move(comments)) {}

  bool next(std::string& line) {
    while (std::getline(in_, line)) {
      ++number_;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (blank(line)) continue;
      const auto first = line.find_first_not_of(" \t");
      if (comments_.find(line[first]) != std::string::npos) continue;
      return true;
    }
    return false;
  }

  bool raw(std::string& line) {
    if (!std::getline(in_, line)) return false;
    ++number_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  }

  std::size_t number() const { return number_; }

 private:
  std::istream& in_;
  std::string comments_;
  std::size_t number_ = 0;
};

double number(const std::string& tok, std::size_t line) {
  const auto v = detail::parse_double(tok);
  if (!v) throw ParseError(PK::BadToken, line, "expected a number, got '" + tok + "'");
  if (!std::isfinite(*v)) throw ParseError(PK::NonFinite, line, "non-finite value '" + tok + "'");
  return *v;
}

long long integer(const std::string& tok, std::size_t line) {
  const auto v = detail::parse_int(tok);
  if (!v) throw ParseError(PK::BadToken, line, "expected an integer, got '" + tok + "'");
  return *v;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  return out;
}

void finish_write(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

}  // namespace

std::string format_double(double v) { return detail::shortest(v); }

// ---------------------------------------------------------------------------
// Matrix Market

HermitianMatrix MatrixMarket::hermitian() const { return HermitianMatrix(values); }

RealMatrix MatrixMarket::real() const {
  if (!(values.imag().array() == 0.0).all()) {
    throw ValidationError("matrix has nonzero imaginary parts");
  }
  return values.real();
}

MatrixMarket parse_matrix_market(std::istream& in) {
  Lines lines(in, "%");
  std::string line;
  if (!lines.raw(line)) throw ParseError(PK::TruncatedInput, 1, "empty input");
  const auto head = split(line);
  if (head.size() != 5 || lower(head[0]) != "%%matrixmarket") {
    throw ParseError(PK::MalformedHeader, 1, "expected '%%MatrixMarket matrix <format> <field> <symmetry>'");
  }
  if (lower(head[1]) != "matrix") {
    throw ParseError(PK::UnsupportedFormat, 1, "unsupported object '" + head[1] + "'");
  }
  MatrixMarket mm;
  const std::string fmt = lower(head[2]);
  const std::string field = lower(head[3]);
  const std::string sym = lower(head[4]);
  if (fmt == "coordinate") mm.format = MmFormat::Coordinate;
  else if (fmt == "array") mm.format = MmFormat::Array;
  else throw ParseError(PK::UnsupportedFormat, 1, "unsupported format '" + head[2] + "'");
  if (field == "real") mm.field = MmField::Real;
  else if (field == "integer") mm.field = MmField::Integer;
  else if (field == "complex") mm.field = MmField::Complex;
  else if (field == "pattern") mm.field = MmField::Pattern;
  else throw ParseError(PK::UnsupportedFormat, 1, "unsupported field '" + head[3] + "'");
  if (sym == "general") mm.symmetry = MmSymmetry::General;
  else if (sym == "symmetric") mm.symmetry = MmSymmetry::Symmetric;
  else if (sym == "hermitian") mm.symmetry = MmSymmetry::Hermitian;
  else if (sym == "skew-symmetric") mm.symmetry = MmSymmetry::SkewSymmetric;
  else throw ParseError(PK::UnsupportedFormat, 1, "unsupported symmetry '" + head[4] + "'");
  if (mm.field == MmField::Pattern && mm.format == MmFormat::Array) {
    throw ParseError(PK::UnsupportedFormat, 1, "pattern field requires coordinate format");
  }
  if (mm.symmetry == MmSymmetry::Hermitian && mm.field != MmField::Complex) {
    throw ParseError(PK::UnsupportedFormat, 1, "hermitian symmetry requires the complex field");
  }

  if (!lines.next(line)) throw ParseError(PK::TruncatedInput, lines.number(), "missing size line");
  const auto size = split(line);
  const std::size_t want = mm.format == MmFormat::Coordinate ? 3 : 2;
  if (size.size() != want) {
    throw ParseError(PK::MalformedHeader, lines.number(), "size line needs " + std::to_string(want) + " integers");
  }
  const long long rows = integer(size[0], lines.number());
  const long long cols = integer(size[1], lines.number());
  if (rows <= 0 || cols <= 0) {
    throw ParseError(PK::MalformedHeader, lines.number(), "dimensions must be positive");
  }
  if (mm.symmetry != MmSymmetry::General && rows != cols) {
    throw ParseError(PK::MalformedHeader, lines.number(), "symmetric storage needs a square matrix");
  }
  mm.values = Matrix::Zero(rows, cols);

  const std::size_t value_tokens =
      mm.field == MmField::Complex ? 2 : (mm.field == MmField::Pattern ? 0 : 1);
  auto read_value = [&](const std::vector<std::string>& tok, std::size_t at) -> Complex {
    if (mm.field == MmField::Pattern) return 1.0;
    if (mm.field == MmField::Integer) {
      return static_cast<double>(integer(tok[at], lines.number()));
    }
    const double re = number(tok[at], lines.number());
    const double im = mm.field == MmField::Complex ? number(tok[at + 1], lines.number()) : 0.0;
    return {re, im};
  };
  auto place = [&](Index i, Index j, Complex v) {
    mm.values(i, j) += v;
    if (i == j) return;
    switch (mm.symmetry) {
      case MmSymmetry::General: break;
      case MmSymmetry::Symmetric: mm.values(j, i) += v; break;
      case MmSymmetry::Hermitian: mm.values(j, i) += std::conj(v); break;
      case MmSymmetry::SkewSymmetric: mm.values(j, i) -= v; break;
    }
  };

  if (mm.format == MmFormat::Coordinate) {
    const long long nnz = integer(size[2], lines.number());
    if (nnz < 0) throw ParseError(PK::MalformedHeader, lines.number(), "negative entry count");
    for (long long e = 0; e < nnz; ++e) {
      if (!lines.next(line)) {
        throw ParseError(PK::TruncatedInput, lines.number(),
                         "expected " + std::to_string(nnz) + " entries, found " + std::to_string(e));
      }
      const auto tok = split(line);
      if (tok.size() != 2 + value_tokens) {
        throw ParseError(PK::BadToken, lines.number(),
                         "entry needs " + std::to_string(2 + value_tokens) + " fields");
      }
      const long long i = integer(tok[0], lines.number());
      const long long j = integer(tok[1], lines.number());
      if (i < 1 || i > rows || j < 1 || j > cols) {
        throw ParseError(PK::IndexOutOfBounds, lines.number(),
                         "entry (" + tok[0] + ", " + tok[1] + ") outside " + std::to_string(rows) +
                             "x" + std::to_string(cols));
      }
      if (mm.symmetry != MmSymmetry::General && i < j) {
        throw ParseError(PK::IndexOutOfBounds, lines.number(),
                         "symmetric storage holds the lower triangle only");
      }
      if (mm.symmetry == MmSymmetry::SkewSymmetric && i == j) {
        throw ParseError(PK::IndexOutOfBounds, lines.number(), "skew-symmetric diagonal must be empty");
      }
      place(static_cast<Index>(i - 1), static_cast<Index>(j - 1), read_value(tok, 2));
    }
  } else {
    for (long long j = 0; j < cols; ++j) {
      long long start = 0;
      if (mm.symmetry == MmSymmetry::SkewSymmetric) start = j + 1;
      else if (mm.symmetry != MmSymmetry::General) start = j;
      for (long long i = start; i < rows; ++i) {
        if (!lines.next(line)) throw ParseError(PK::TruncatedInput, lines.number(), "array data ends early");
        const auto tok = split(line);
        if (tok.size() != value_tokens) {
          throw ParseError(PK::BadToken, lines.number(),
                           "array entry needs " + std::to_string(value_tokens) + " fields");
        }
        place(static_cast<Index>(i), static_cast<Index>(j), read_value(tok, 0));
      }
    }
  }
  if (lines.next(line)) throw ParseError(PK::BadToken, lines.number(), "unexpected data after the last entry");
  if (mm.symmetry == MmSymmetry::Hermitian) {
    for (Index i = 0; i < rows; ++i) {
      if (mm.values(i, i).imag() != 0.0) {
        throw ParseError(PK::BadToken, 0, "hermitian diagonal entry has a nonzero imaginary part");
      }
    }
  }
  return mm;
}

MatrixMarket read_matrix_market(const std::filesystem::path& path) {
  std::ifstream in = open_in(path);
  return parse_matrix_market(in);
}

void write_matrix_market(std::ostream& out, const Matrix& m, MmSymmetry symmetry,
                         bool complex_field) {
  if (!complex_field && !(m.imag().array() == 0.0).all()) {
    throw ValidationError("complex matrix written with the real field");
  }
  if (symmetry == MmSymmetry::Hermitian && !complex_field) {
    throw ValidationError("hermitian symmetry requires the complex field");
  }
  if (symmetry != MmSymmetry::General && m.rows() != m.cols()) {
    throw DimensionError("symmetric storage needs a square matrix");
  }
  const char* sym = symmetry == MmSymmetry::General     ? "general"
                    : symmetry == MmSymmetry::Symmetric ? "symmetric"
                    : symmetry == MmSymmetry::Hermitian ? "hermitian"
                                                        : "skew-symmetric";
  struct Entry {
    Index i, j;
    Complex v;
  };
  std::vector<Entry> entries;
  for (Index j = 0; j < m.cols(); ++j) {
    for (Index i = 0; i < m.rows(); ++i) {
      if (symmetry == MmSymmetry::SkewSymmetric && i <= j) continue;
      if (symmetry != MmSymmetry::General && i < j) continue;
      if (m(i, j) != Complex(0.0, 0.0)) entries.push_back({i, j, m(i, j)});
    }
  }
  out << "%%MatrixMarket matrix coordinate " << (complex_field ? "complex" : "real") << ' ' << sym
      << '\n';
  out << m.rows() << ' ' << m.cols() << ' ' << entries.size() << '\n';
  for (const auto& e : entries) {
    out << e.i + 1 << ' ' << e.j + 1 << ' ' << format_double(e.v.real());
    if (complex_field) out << ' ' << format_double(e.v.imag());
    out << '\n';
  }
}

void write_matrix_market(const std::filesystem::path& path, const Matrix& m, MmSymmetry symmetry,
                         bool complex_field) {
  std::ofstream out = open_out(path);
  write_matrix_market(out, m, symmetry, complex_field);
  finish_write(out, path);
}

// ---------------------------------------------------------------------------
// Tensor COO

TensorPS3 parse_tensor_coo(std::istream& in) {
  Lines lines(in, "%#");
  std::string line;
  if (!lines.next(line)) throw ParseError(PK::TruncatedInput, lines.number(), "missing header 'n m nnz'");
  const auto head = split(line);
  if (head.size() != 3) throw ParseError(PK::MalformedHeader, lines.number(), "header must be 'n m nnz'");
  const long long n = integer(head[0], lines.number());
  const long long m = integer(head[1], lines.number());
  const long long nnz = integer(head[2], lines.number());
  if (n <= 0 || m <= 0 || nnz < 0) {
    throw ParseError(PK::MalformedHeader, lines.number(), "header values out of range");
  }
  std::vector<TensorEntry> entries;
  entries.reserve(static_cast<std::size_t>(nnz));
  for (long long e = 0; e < nnz; ++e) {
    if (!lines.next(line)) {
      throw ParseError(PK::TruncatedInput, lines.number(),
                       "expected " + std::to_string(nnz) + " entries, found " + std::to_string(e));
    }
    const auto tok = split(line);
    if (tok.size() != 4) throw ParseError(PK::BadToken, lines.number(), "entry must be 'i j k value'");
    const long long i = integer(tok[0], lines.number());
    const long long j = integer(tok[1], lines.number());
    const long long k = integer(tok[2], lines.number());
    if (i < 1 || i > n || j < 1 || j > n || k < 1 || k > m) {
      throw ParseError(PK::IndexOutOfBounds, lines.number(), "entry index outside the declared shape");
    }
    entries.push_back({static_cast<Index>(i - 1), static_cast<Index>(j - 1),
                       static_cast<Index>(k - 1), number(tok[3], lines.number())});
  }
  if (lines.next(line)) throw ParseError(PK::BadToken, lines.number(), "unexpected data after the last entry");
  return TensorPS3(static_cast<Index>(n), static_cast<Index>(m), entries);
}

TensorPS3 read_tensor_coo(const std::filesystem::path& path) {
  std::ifstream in = open_in(path);
  return parse_tensor_coo(in);
}

void write_tensor_coo(std::ostream& out, const TensorPS3& t) {
  const auto entries = t.expanded_entries();
  out << t.n() << ' ' << t.m() << ' ' << entries.size() << '\n';
  for (const auto& e : entries) {
    out << e.i + 1 << ' ' << e.j + 1 << ' ' << e.k + 1 << ' ' << format_double(e.value) << '\n';
  }
}

void write_tensor_coo(const std::filesystem::path& path, const TensorPS3& t) {
  std::ofstream out = open_out(path);
  write_tensor_coo(out, t);
  finish_write(out, path);
}

// ---------------------------------------------------------------------------
// Supporting-point traces

void write_boundary(std::ostream& out, std::span<const SupportingPoint> points) {
  if (points.empty()) return;
  const Index m = points.front().v.size();
  if (m == 2) out << "theta";
  else if (m == 3) out << "eta,theta";
  else {
    for (Index i = 0; i < m; ++i) out << (i ? "," : "") << 'v' << i + 1;
  }
  for (Index i = 0; i < m; ++i) out << ",y" << i + 1;
  out << ",lambda_v\n";
  for (const auto& p : points) {
    if (p.v.size() != m) throw DimensionError("supporting points differ in dimension");
    if (m == 2) {
      out << format_double(std::atan2(p.v(1), p.v(0)));
    } else if (m == 3) {
      out << format_double(std::acos(std::clamp(p.v(2) / p.v.norm(), -1.0, 1.0))) << ','
          << format_double(std::atan2(p.v(1), p.v(0)));
    } else {
      for (Index i = 0; i < m; ++i) out << (i ? "," : "") << format_double(p.v(i));
    }
    for (Index i = 0; i < m; ++i) out << ',' << format_double(p.y_v(i));
    out << ',' << format_double(p.lambda_v) << '\n';
  }
}

void write_boundary(const std::filesystem::path& path, std::span<const SupportingPoint> points) {
  std::ofstream out = open_out(path);
  write_boundary(out, points);
  finish_write(out, path);
}

}  // namespace mnepv::io
