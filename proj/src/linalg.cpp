#include "lipsel/linalg.hpp"

#include <cassert>

namespace lipsel {

Rat dot(const Vec& a, const Vec& b) {
  assert(a.size() == b.size());
  Rat s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Vec vadd(const Vec& a, const Vec& b) {
  assert(a.size() == b.size());
  Vec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

Vec vsub(const Vec& a, const Vec& b) {
  assert(a.size() == b.size());
  Vec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

Vec vscale(const Vec& a, const Rat& s) {
  Vec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] * s;
  return r;
}

bool is_zero_vec(const Vec& a) {
  for (const auto& x : a)
    if (x != 0) return false;
  return true;
}

int lex_cmp(const Vec& a, const Vec& b) {
  size_t n = std::min(a.size(), b.size());
  for (size_t i = 0; i < n; ++i) {
    int c = cmp(a[i], b[i]);
    if (c != 0) return c;
  }
  if (a.size() == b.size()) return 0;
  return a.size() < b.size() ? -1 : 1;
}

int rref(Mat& m) {
  if (m.empty()) return 0;
  size_t rows = m.size(), cols = m[0].size();
  size_t lead = 0;
  int rank = 0;
  for (size_t col = 0; col < cols && lead < rows; ++col) {
    size_t piv = lead;
    while (piv < rows && m[piv][col] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(m[lead], m[piv]);
    Rat inv = 1 / m[lead][col];
    for (size_t j = col; j < cols; ++j) m[lead][j] *= inv;
    for (size_t i = 0; i < rows; ++i) {
      if (i == lead || m[i][col] == 0) continue;
      Rat f = m[i][col];
      for (size_t j = col; j < cols; ++j) m[i][j] -= f * m[lead][j];
    }
    ++lead;
    ++rank;
  }
  return rank;
}

int rank_of(Mat m) { return rref(m); }

std::vector<Vec> nullspace(const Mat& m_in, int ncols) {
  Mat m = m_in;
  for (auto& row : m) row.resize(ncols, Rat(0));
  rref(m);
  // Identify pivot columns.
  std::vector<int> pivot_col_of_row;
  std::vector<bool> is_pivot(ncols, false);
  for (const auto& row : m) {
    int p = -1;
    for (int j = 0; j < ncols; ++j)
      if (row[j] != 0) {
        p = j;
        break;
      }
    if (p >= 0) {
      pivot_col_of_row.push_back(p);
      is_pivot[p] = true;
    }
  }
  std::vector<Vec> basis;
  for (int free = 0; free < ncols; ++free) {
    if (is_pivot[free]) continue;
    Vec v(ncols, Rat(0));
    v[free] = 1;
    for (size_t r = 0; r < pivot_col_of_row.size(); ++r)
      v[pivot_col_of_row[r]] = -m[r][free];
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<Vec> solve_unique(const Mat& a, const Vec& b) {
  if (a.empty()) return std::nullopt;
  size_t rows = a.size(), cols = a[0].size();
  Mat aug = a;
  for (size_t i = 0; i < rows; ++i) aug[i].push_back(b[i]);
  rref(aug);
  Vec x(cols, Rat(0));
  size_t seen_pivots = 0;
  for (size_t i = 0; i < rows; ++i) {
    int p = -1;
    for (size_t j = 0; j < cols; ++j)
      if (aug[i][j] != 0) {
        p = static_cast<int>(j);
        break;
      }
    if (p < 0) {
      if (aug[i][cols] != 0) return std::nullopt;  // inconsistent
      continue;
    }
    ++seen_pivots;
    x[p] = aug[i][cols];
  }
  if (seen_pivots != cols) return std::nullopt;  // underdetermined
  return x;
}

std::optional<Mat> invert(const Mat& a) {
  size_t n = a.size();
  Mat aug = a;
  for (size_t i = 0; i < n; ++i) {
    aug[i].resize(2 * n, Rat(0));
    aug[i][n + i] = 1;
  }
  rref(aug);
  for (size_t i = 0; i < n; ++i)
    if (aug[i][i] != 1) return std::nullopt;
  Mat inv(n, Vec(n));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) inv[i][j] = aug[i][n + j];
  return inv;
}

Rat det(Mat a) {
  size_t n = a.size();
  Rat d = 1;
  for (size_t col = 0; col < n; ++col) {
    size_t piv = col;
    while (piv < n && a[piv][col] == 0) ++piv;
    if (piv == n) return Rat(0);
    if (piv != col) {
      std::swap(a[piv], a[col]);
      d = -d;
    }
    d *= a[col][col];
    Rat inv = 1 / a[col][col];
    for (size_t i = col + 1; i < n; ++i) {
      if (a[i][col] == 0) continue;
      Rat f = a[i][col] * inv;
      for (size_t j = col; j < n; ++j) a[i][j] -= f * a[col][j];
    }
  }
  return d;
}

}  // namespace lipsel
