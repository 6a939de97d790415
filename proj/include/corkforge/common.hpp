#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace corkforge {

using i64 = std::int64_t;

// Every recoverable failure in the library throws this.  The CLI maps it to
// exit code 2 (bad input) vs 1 (internal); the distinction lives there, not here.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <class... Ts>
std::string cat(Ts&&... xs) {
  std::ostringstream o;
  (o << ... << xs);
  return o.str();
}

[[noreturn]] inline void fail(const std::string& msg) { throw Error(msg); }

// A move that declines to apply (e.g. a slide across a symbolic twist box).
// Distinct from Error so search loops can skip a refused move without masking
// genuine invariant violations.
struct Refused : Error {
  using Error::Error;
};

[[noreturn]] inline void refuse(const std::string& msg) { throw Refused(msg); }

inline void require(bool cond, const std::string& msg) {
  if (!cond) fail(msg);
}

// Checked int64 arithmetic.  Diagram surgery is all small numbers, but the
// group-theory reductions can blow up on adversarial input; we refuse loudly
// instead of wrapping.
inline i64 add_ck(i64 a, i64 b) {
  i64 r;
  if (__builtin_add_overflow(a, b, &r)) fail("int64 overflow in add");
  return r;
}

inline i64 sub_ck(i64 a, i64 b) {
  i64 r;
  if (__builtin_sub_overflow(a, b, &r)) fail("int64 overflow in sub");
  return r;
}

inline i64 mul_ck(i64 a, i64 b) {
  i64 r;
  if (__builtin_mul_overflow(a, b, &r)) fail("int64 overflow in mul");
  return r;
}

inline i64 abs_ck(i64 a) {
  if (a == INT64_MIN) fail("int64 overflow in abs");
  return a < 0 ? -a : a;
}

// Dense row-major integer matrix.  Small and dumb on purpose.
struct IMat {
  int rows = 0, cols = 0;
  std::vector<i64> a;

  IMat() = default;
  IMat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, 0) {}

  i64& at(int r, int c) { return a[static_cast<size_t>(r) * cols + c]; }
  i64 at(int r, int c) const { return a[static_cast<size_t>(r) * cols + c]; }

  bool operator==(const IMat&) const = default;
};

inline void swap_rows(IMat& m, int i, int j) {
  if (i == j) return;
  for (int c = 0; c < m.cols; ++c) std::swap(m.at(i, c), m.at(j, c));
}

inline void swap_cols(IMat& m, int i, int j) {
  if (i == j) return;
  for (int r = 0; r < m.rows; ++r) std::swap(m.at(r, i), m.at(r, j));
}

// row dst += k * row src
inline void row_axpy(IMat& m, int dst, int src, i64 k) {
  for (int c = 0; c < m.cols; ++c)
    m.at(dst, c) = add_ck(m.at(dst, c), mul_ck(k, m.at(src, c)));
}

// col dst += k * col src
inline void col_axpy(IMat& m, int dst, int src, i64 k) {
  for (int r = 0; r < m.rows; ++r)
    m.at(r, dst) = add_ck(m.at(r, dst), mul_ck(k, m.at(r, src)));
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(cat("cannot open file: ", path));
  std::ostringstream o;
  o << in.rdbuf();
  return o.str();
}

inline void write_file(const std::string& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(cat("cannot write file: ", path));
  out << data;
  if (!out) fail(cat("short write: ", path));
}

}  // namespace corkforge
