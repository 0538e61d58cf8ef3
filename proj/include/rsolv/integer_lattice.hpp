#pragma once

// Exact integer matrix algebra over arbitrary-precision integers: column
// Hermite normal form, Smith normal form with transforms, finitely generated
// abelian groups and sublattices of Z^r.

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "rsolv/error.hpp"

namespace rsolv {

using BigInt = boost::multiprecision::cpp_int;
using IntVector = std::vector<std::int64_t>;

inline std::int64_t to_int64(BigInt const& v) {
  if (v > std::numeric_limits<std::int64_t>::max() ||
      v < std::numeric_limits<std::int64_t>::min()) {
    fail(ErrorKind::Overflow, "integer " + v.str() + " does not fit in 64 bits");
  }
  return static_cast<std::int64_t>(v);
}

// Floor division for a positive divisor.
inline BigInt floor_div(BigInt const& a, BigInt const& b) {
  BigInt q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

inline std::int64_t mod_floor(std::int64_t a, std::int64_t m) {
  std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

struct ExtGcd {
  BigInt g, x, y;  // x*a + y*b = g >= 0
};

// When a divides b the result is (|a|, sign(a), 0), so elimination steps never
// swap an already-dividing pivot away.
inline ExtGcd ext_gcd(BigInt const& a, BigInt const& b) {
  if (a != 0 && b % a == 0) return {abs(a), a < 0 ? -1 : 1, 0};
  BigInt old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    BigInt q = old_r / r;
    BigInt tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * s;
    old_s = s;
    s = tmp;
    tmp = old_t - q * t;
    old_t = t;
    t = tmp;
  }
  if (old_r < 0) return {-old_r, -old_s, -old_t};
  return {old_r, old_s, old_t};
}

class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  IntMatrix(std::initializer_list<std::initializer_list<long long>> init) {
    rows_ = init.size();
    cols_ = rows_ ? init.begin()->size() : 0;
    for (auto const& row : init) {
      if (row.size() != cols_) fail(ErrorKind::InvalidArgument, "ragged matrix literal");
      for (auto v : row) data_.emplace_back(v);
    }
  }

  static IntMatrix identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  // columns given as vectors of equal length `rows`
  static IntMatrix from_columns(std::size_t rows, std::vector<std::vector<BigInt>> const& cols) {
    IntMatrix m(rows, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
      if (cols[j].size() != rows) fail(ErrorKind::InvalidArgument, "column length mismatch");
      for (std::size_t i = 0; i < rows; ++i) m(i, j) = cols[j][i];
    }
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  BigInt& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  BigInt const& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::vector<BigInt> column(std::size_t j) const {
    std::vector<BigInt> c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }

  bool is_zero_column(std::size_t j) const {
    for (std::size_t i = 0; i < rows_; ++i)
      if ((*this)(i, j) != 0) return false;
    return true;
  }

  IntMatrix transpose() const {
    IntMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  friend IntMatrix operator*(IntMatrix const& a, IntMatrix const& b) {
    if (a.cols_ != b.rows_) fail(ErrorKind::InvalidArgument, "matrix dimension mismatch");
    IntMatrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        if (a(i, k) == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += a(i, k) * b(k, j);
      }
    return c;
  }

  friend bool operator==(IntMatrix const& a, IntMatrix const& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  std::vector<BigInt> apply(std::vector<BigInt> const& v) const {
    if (v.size() != cols_) fail(ErrorKind::InvalidArgument, "vector length mismatch");
    std::vector<BigInt> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) out[i] += (*this)(i, j) * v[j];
    return out;
  }

  // elementary operations
  void swap_rows(std::size_t a, std::size_t b) {
    for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
  }
  void swap_cols(std::size_t a, std::size_t b) {
    for (std::size_t i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
  }
  void negate_row(std::size_t a) {
    for (std::size_t j = 0; j < cols_; ++j) (*this)(a, j) = -(*this)(a, j);
  }
  void negate_col(std::size_t a) {
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, a) = -(*this)(i, a);
  }
  // row a += k * row b
  void add_row(std::size_t a, std::size_t b, BigInt const& k) {
    for (std::size_t j = 0; j < cols_; ++j) (*this)(a, j) += k * (*this)(b, j);
  }
  // col a += k * col b
  void add_col(std::size_t a, std::size_t b, BigInt const& k) {
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, a) += k * (*this)(i, b);
  }
  // (row a, row b) <- (p*a + q*b, r*a + s*b)
  void mix_rows(std::size_t a, std::size_t b, BigInt const& p, BigInt const& q, BigInt const& r,
                BigInt const& s) {
    for (std::size_t j = 0; j < cols_; ++j) {
      BigInt x = (*this)(a, j), y = (*this)(b, j);
      (*this)(a, j) = p * x + q * y;
      (*this)(b, j) = r * x + s * y;
    }
  }
  // (col a, col b) <- (p*a + q*b, r*a + s*b)
  void mix_cols(std::size_t a, std::size_t b, BigInt const& p, BigInt const& q, BigInt const& r,
                BigInt const& s) {
    for (std::size_t i = 0; i < rows_; ++i) {
      BigInt x = (*this)(i, a), y = (*this)(i, b);
      (*this)(i, a) = p * x + q * y;
      (*this)(i, b) = r * x + s * y;
    }
  }

  std::string str() const {
    std::string s = "[";
    for (std::size_t i = 0; i < rows_; ++i) {
      if (i) s += ",";
      s += "[";
      for (std::size_t j = 0; j < cols_; ++j) {
        if (j) s += ",";
        s += (*this)(i, j).str();
      }
      s += "]";
    }
    return s + "]";
  }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<BigInt> data_;
};

// Column Hermite normal form: M * transform = H.
//
// H is lower-triangular in the column-echelon sense: nonzero columns come
// first, the first nonzero row (pivot) of each column strictly increases,
// pivots are positive and every entry left of a pivot lies in [0, pivot).
// Zero columns trail. The column space of M is preserved and H is unique.
struct HermiteForm {
  IntMatrix H;
  IntMatrix transform;  // unimodular, cols x cols
  std::vector<std::size_t> pivot_rows;

  std::size_t rank() const noexcept { return pivot_rows.size(); }
};

inline HermiteForm hnf(IntMatrix const& M) {
  HermiteForm out{M, IntMatrix::identity(M.cols()), {}};
  IntMatrix& H = out.H;
  IntMatrix& U = out.transform;
  std::size_t pc = 0;
  for (std::size_t r = 0; r < H.rows() && pc < H.cols(); ++r) {
    for (std::size_t j = pc + 1; j < H.cols(); ++j) {
      if (H(r, j) == 0) continue;
      BigInt a = H(r, pc), b = H(r, j);
      auto [g, x, y] = ext_gcd(a, b);
      BigInt bg = b / g, ag = a / g;
      H.mix_cols(pc, j, x, y, -bg, ag);
      U.mix_cols(pc, j, x, y, -bg, ag);
    }
    if (H(r, pc) == 0) continue;
    if (H(r, pc) < 0) {
      H.negate_col(pc);
      U.negate_col(pc);
    }
    BigInt p = H(r, pc);
    for (std::size_t k = 0; k < pc; ++k) {
      BigInt q = floor_div(H(r, k), p);
      if (q != 0) {
        H.add_col(k, pc, -q);
        U.add_col(k, pc, -q);
      }
    }
    out.pivot_rows.push_back(r);
    ++pc;
  }
  return out;
}

// U * M * V = D with U, V unimodular and D rectangular-diagonal with
// d_1 | d_2 | ... | d_k > 0 followed by zeros.
struct SmithForm {
  IntMatrix U;
  IntMatrix D;
  IntMatrix V;
  IntMatrix U_inverse;
  std::vector<BigInt> invariant_factors;  // the nonzero diagonal, including 1s
};

inline SmithForm snf(IntMatrix const& M) {
  std::size_t m = M.rows(), n = M.cols();
  SmithForm out{IntMatrix::identity(m), M, IntMatrix::identity(n), IntMatrix::identity(m), {}};
  IntMatrix& D = out.D;
  IntMatrix& U = out.U;
  IntMatrix& V = out.V;
  IntMatrix& Ui = out.U_inverse;

  // (row a, row b) <- E (row a, row b), E = [[p,q],[r,s]] with det 1;
  // U_inverse picks up E^-1 = [[s,-q],[-r,p]] on the right.
  auto row_op = [&](std::size_t a, std::size_t b, BigInt const& p, BigInt const& q,
                    BigInt const& r, BigInt const& s) {
    D.mix_rows(a, b, p, q, r, s);
    U.mix_rows(a, b, p, q, r, s);
    Ui.mix_cols(a, b, s, -r, -q, p);
  };
  auto col_op = [&](std::size_t a, std::size_t b, BigInt const& p, BigInt const& q,
                    BigInt const& r, BigInt const& s) {
    D.mix_cols(a, b, p, q, r, s);
    V.mix_cols(a, b, p, q, r, s);
  };

  for (std::size_t t = 0; t < std::min(m, n); ++t) {
    // smallest nonzero entry of the trailing block moves to (t, t)
    std::optional<std::pair<std::size_t, std::size_t>> best;
    for (std::size_t i = t; i < m; ++i)
      for (std::size_t j = t; j < n; ++j)
        if (D(i, j) != 0 && (!best || abs(D(i, j)) < abs(D(best->first, best->second)))) {
          best = {i, j};
        }
    if (!best) break;
    if (best->first != t) {
      D.swap_rows(t, best->first);
      U.swap_rows(t, best->first);
      Ui.swap_cols(t, best->first);
    }
    if (best->second != t) {
      D.swap_cols(t, best->second);
      V.swap_cols(t, best->second);
    }
    while (true) {
      for (std::size_t i = t + 1; i < m; ++i) {
        if (D(i, t) == 0) continue;
        BigInt a = D(t, t), b = D(i, t);
        auto [g, x, y] = ext_gcd(a, b);
        row_op(t, i, x, y, -(b / g), a / g);
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (D(t, j) == 0) continue;
        BigInt a = D(t, t), b = D(t, j);
        auto [g, x, y] = ext_gcd(a, b);
        col_op(t, j, x, y, -(b / g), a / g);
      }
      bool clear = true;
      for (std::size_t i = t + 1; i < m && clear; ++i) clear = D(i, t) == 0;
      if (!clear) continue;
      // divisibility: fold an offending row into row t and repeat
      std::optional<std::size_t> bad;
      for (std::size_t i = t + 1; i < m && !bad; ++i)
        for (std::size_t j = t + 1; j < n && !bad; ++j)
          if (D(i, j) % D(t, t) != 0) bad = i;
      if (!bad) break;
      row_op(t, *bad, 1, 1, 0, 1);
    }
    if (D(t, t) < 0) {
      D.negate_row(t);
      U.negate_row(t);
      Ui.negate_col(t);
    }
    out.invariant_factors.push_back(D(t, t));
  }
  return out;
}

// Integer solutions of M x = b, if any.
inline std::optional<std::vector<BigInt>> solve_integer(IntMatrix const& M,
                                                        std::vector<BigInt> const& b) {
  if (b.size() != M.rows()) fail(ErrorKind::InvalidArgument, "right-hand side length mismatch");
  auto hf = hnf(M);
  std::vector<BigInt> rest = b;
  std::vector<BigInt> y(M.cols());
  for (std::size_t j = 0; j < hf.rank(); ++j) {
    std::size_t r = hf.pivot_rows[j];
    // rows above r are already zero in `rest`
    if (rest[r] % hf.H(r, j) != 0) return std::nullopt;
    y[j] = rest[r] / hf.H(r, j);
    for (std::size_t i = r; i < M.rows(); ++i) rest[i] -= y[j] * hf.H(i, j);
  }
  for (auto const& v : rest)
    if (v != 0) return std::nullopt;
  return hf.transform.apply(y);
}

// Basis (as columns) of {x : M x = 0}.
inline IntMatrix integer_kernel(IntMatrix const& M) {
  auto hf = hnf(M);
  std::vector<std::vector<BigInt>> cols;
  for (std::size_t j = hf.rank(); j < M.cols(); ++j) cols.push_back(hf.transform.column(j));
  return IntMatrix::from_columns(M.cols(), cols);
}

// ---------------------------------------------------------------------------
// Finitely generated abelian groups

// Z^free_rank (+) Z/d_1 (+) ... (+) Z/d_t with d_1 | ... | d_t, all d_i > 1.
// Elements are coordinate vectors, free part first; torsion coordinates are
// kept reduced into [0, d_i).
struct FGAbelian {
  std::size_t free_rank = 0;
  std::vector<std::int64_t> torsion;

  FGAbelian() = default;
  FGAbelian(std::size_t rank, std::vector<std::int64_t> invariants)
      : free_rank(rank), torsion(std::move(invariants)) {
    for (std::size_t i = 0; i < torsion.size(); ++i) {
      if (torsion[i] <= 1) fail(ErrorKind::InvalidArgument, "torsion invariants must be > 1");
      if (i && torsion[i] % torsion[i - 1] != 0) {
        fail(ErrorKind::InvalidArgument, "torsion invariants must form a divisibility chain");
      }
    }
  }

  std::size_t width() const noexcept { return free_rank + torsion.size(); }
  bool is_torsion_free() const noexcept { return torsion.empty(); }
  bool is_trivial() const noexcept { return free_rank == 0 && torsion.empty(); }
  bool is_finite() const noexcept { return free_rank == 0; }

  // 0 encodes "infinite"
  std::int64_t modulus(std::size_t coord) const noexcept {
    return coord < free_rank ? 0 : torsion[coord - free_rank];
  }

  IntVector zero() const { return IntVector(width(), 0); }

  bool contains(IntVector const& x) const {
    if (x.size() != width()) return false;
    for (std::size_t i = free_rank; i < width(); ++i)
      if (x[i] < 0 || x[i] >= modulus(i)) return false;
    return true;
  }

  IntVector normalize(IntVector x) const {
    for (std::size_t i = free_rank; i < width(); ++i) x[i] = mod_floor(x[i], modulus(i));
    return x;
  }

  IntVector add(IntVector const& a, IntVector const& b) const {
    IntVector r(width());
    for (std::size_t i = 0; i < width(); ++i) {
      if (__builtin_add_overflow(a[i], b[i], &r[i])) fail(ErrorKind::Overflow, "coordinate overflow");
    }
    return normalize(std::move(r));
  }

  IntVector negate(IntVector const& a) const {
    IntVector r(width());
    for (std::size_t i = 0; i < width(); ++i) r[i] = -a[i];
    return normalize(std::move(r));
  }

  IntVector scale(IntVector const& a, std::int64_t k) const {
    IntVector r(width());
    for (std::size_t i = 0; i < width(); ++i) {
      if (__builtin_mul_overflow(a[i], k, &r[i])) fail(ErrorKind::Overflow, "coordinate overflow");
    }
    return normalize(std::move(r));
  }

  // standard generator e_i
  IntVector basis(std::size_t i) const {
    IntVector e = zero();
    e[i] = 1;
    return e;
  }

  std::string describe() const {
    std::string s;
    if (free_rank) s = "Z^" + std::to_string(free_rank);
    for (auto d : torsion) s += (s.empty() ? "" : " x ") + std::string("Z/") + std::to_string(d);
    return s.empty() ? "1" : s;
  }

  friend bool operator==(FGAbelian const&, FGAbelian const&) = default;
};

inline std::string vector_label(IntVector const& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + ")";
}

// An abelian group from a presentation, together with the coordinates of each
// presentation generator in the normalised group.
struct PresentedAbelian {
  FGAbelian group;
  std::vector<IntVector> generator_images;
};

// Relators are exponent vectors (rows); the group is Z^ngens / rowspace.
inline PresentedAbelian present_abelian(std::size_t ngens, std::vector<IntVector> const& relators) {
  IntMatrix R(relators.size(), ngens);
  for (std::size_t i = 0; i < relators.size(); ++i) {
    if (relators[i].size() != ngens) {
      fail(ErrorKind::InvalidArgument, "relator length does not match generator count");
    }
    for (std::size_t j = 0; j < ngens; ++j) R(i, j) = relators[i][j];
  }
  // U R V = D, so x -> x V carries rowspace(R) onto rowspace(D).
  auto s = snf(R);
  std::size_t rank = s.invariant_factors.size();
  std::vector<std::size_t> torsion_coords;
  std::vector<std::int64_t> torsion;
  for (std::size_t i = 0; i < rank; ++i)
    if (s.invariant_factors[i] > 1) {
      torsion_coords.push_back(i);
      torsion.push_back(to_int64(s.invariant_factors[i]));
    }
  FGAbelian group(ngens - rank, torsion);
  std::vector<IntVector> images;
  for (std::size_t j = 0; j < ngens; ++j) {
    IntVector x;
    for (std::size_t i = rank; i < ngens; ++i) x.push_back(to_int64(s.V(j, i)));
    for (std::size_t c : torsion_coords) x.push_back(to_int64(s.V(j, c) % s.D(c, c)));
    images.push_back(group.normalize(std::move(x)));
  }
  return {group, images};
}

inline FGAbelian abelianization_from_presentation(std::size_t ngens,
                                                  std::vector<IntVector> const& relators) {
  return present_abelian(ngens, relators).group;
}

// Sublattice of Z^r spanned by the columns of `generators`.
struct LatticeSubgroup {
  std::size_t ambient_rank = 0;
  IntMatrix generators;

  LatticeSubgroup() = default;
  LatticeSubgroup(std::size_t r, IntMatrix gens) : ambient_rank(r), generators(std::move(gens)) {
    if (generators.rows() != r && !(generators.cols() == 0)) {
      fail(ErrorKind::InvalidArgument, "generator columns must have length r");
    }
    if (generators.cols() == 0) generators = IntMatrix(r, 0);
  }

  // nonzero HNF columns
  IntMatrix basis() const {
    auto hf = hnf(generators);
    std::vector<std::vector<BigInt>> cols;
    for (std::size_t j = 0; j < hf.rank(); ++j) cols.push_back(hf.H.column(j));
    return IntMatrix::from_columns(ambient_rank, cols);
  }

  std::size_t rank() const { return hnf(generators).rank(); }

  // Canonical representative of v modulo the lattice: each pivot coordinate
  // reduced into [0, pivot).
  std::vector<BigInt> reduce(std::vector<BigInt> v) const {
    auto hf = hnf(generators);
    for (std::size_t j = 0; j < hf.rank(); ++j) {
      std::size_t r = hf.pivot_rows[j];
      BigInt q = floor_div(v[r], hf.H(r, j));
      if (q != 0)
        for (std::size_t i = r; i < ambient_rank; ++i) v[i] -= q * hf.H(i, j);
    }
    return v;
  }

  bool contains(std::vector<BigInt> const& v) const {
    auto r = reduce(v);
    return std::all_of(r.begin(), r.end(), [](BigInt const& x) { return x == 0; });
  }

  bool same_span(LatticeSubgroup const& other) const {
    return basis() == other.basis();
  }
};

// A_1 = C (+) H of finite index in Z^r, described in a new basis f_1..f_r
// (the columns of basis_change) with C = <d_1 f_1, ..., d_k f_k> and
// H = <f_{k+1}, ..., f_r>.
struct IndexSplit {
  std::size_t ambient_rank = 0;
  IntMatrix basis_change;          // columns f_i
  IntMatrix basis_change_inverse;  // coordinates in the f-basis
  std::vector<BigInt> divisors;    // d_1 | ... | d_k
  IntMatrix c_basis;               // columns d_i f_i
  IntMatrix h_basis;               // columns f_{k+1}..f_r
  BigInt index;
  std::vector<std::vector<BigInt>> coset_reps;

  // Coordinates of v in A/A_1 = Z/d_1 x ... x Z/d_k (including d_i = 1).
  std::vector<BigInt> quotient_coordinates(std::vector<BigInt> const& v) const {
    auto w = basis_change_inverse.apply(v);
    std::vector<BigInt> out;
    for (std::size_t i = 0; i < divisors.size(); ++i) {
      BigInt r = w[i] % divisors[i];
      if (r < 0) r += divisors[i];
      out.push_back(r);
    }
    return out;
  }
};

inline IndexSplit finite_index_split(std::size_t r, LatticeSubgroup const& C,
                                     std::size_t max_index = 5000) {
  if (C.ambient_rank != r) fail(ErrorKind::InvalidArgument, "lattice rank mismatch");
  IntMatrix B = C.basis();
  std::size_t k = B.cols();
  IndexSplit out;
  out.ambient_rank = r;
  auto s = snf(B);
  out.basis_change = s.U_inverse;
  out.basis_change_inverse = s.U;
  out.divisors = s.invariant_factors;
  std::vector<std::vector<BigInt>> cc, hc;
  for (std::size_t i = 0; i < k; ++i) {
    auto f = out.basis_change.column(i);
    for (auto& x : f) x *= out.divisors[i];
    cc.push_back(f);
  }
  for (std::size_t i = k; i < r; ++i) hc.push_back(out.basis_change.column(i));
  out.c_basis = IntMatrix::from_columns(r, cc);
  out.h_basis = IntMatrix::from_columns(r, hc);
  out.index = 1;
  for (auto const& d : out.divisors) out.index *= d;
  if (out.index > max_index) {
    fail(ErrorKind::ClosureCapExceeded,
         "index " + out.index.str() + " exceeds cap " + std::to_string(max_index));
  }
  // mixed-radix digits in the f-basis, first coordinate most significant
  std::vector<BigInt> digits(r, 0);
  while (true) {
    out.coset_reps.push_back(out.basis_change.apply(digits));
    std::size_t i = k;
    while (i > 0) {
      --i;
      if (++digits[i] < out.divisors[i]) break;
      digits[i] = 0;
      if (i == 0) {
        i = static_cast<std::size_t>(-1);
        break;
      }
    }
    if (k == 0 || i == static_cast<std::size_t>(-1)) break;
  }
  return out;
}

}  // namespace rsolv
