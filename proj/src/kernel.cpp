#include "pvpatch/kernel.hpp"

#include <omp.h>

#include <atomic>
#include <cstddef>

namespace pvp::kernel {

namespace {
std::atomic<bool> g_parallel{true};
}

bool parallel_enabled() { return g_parallel.load(); }
void set_parallel(bool on) { g_parallel.store(on); }

QVec convolve_serial(const QVec& a, const QVec& b) {
  if (a.empty() || b.empty()) return {};
  QVec c(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (rat_is_zero(a[i])) continue;
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (rat_is_zero(b[j])) continue;
      c[i + j] += a[i] * b[j];
    }
  }
  return c;
}

QVec convolve_omp(const QVec& a, const QVec& b) {
  if (a.empty() || b.empty()) return {};
  const long n = static_cast<long>(a.size() + b.size() - 1);
  QVec c(static_cast<std::size_t>(n));
#pragma omp parallel for schedule(static)
  for (long k = 0; k < n; ++k) {
    Rational acc;
    const long ilo = std::max<long>(0, k - static_cast<long>(b.size()) + 1);
    const long ihi = std::min<long>(k, static_cast<long>(a.size()) - 1);
    for (long i = ilo; i <= ihi; ++i) {
      if (rat_is_zero(a[i]) || rat_is_zero(b[k - i])) continue;
      acc += a[i] * b[k - i];
    }
    c[k] = acc;
  }
  return c;
}

QVec convolve(const QVec& a, const QVec& b) {
  return parallel_enabled() ? convolve_omp(a, b) : convolve_serial(a, b);
}

namespace {

template <bool Parallel>
RrefResult rref_impl(QMat& m) {
  RrefResult res;
  if (m.empty()) return res;
  const long rows = static_cast<long>(m.size());
  const long cols = static_cast<long>(m[0].size());
  long r = 0;
  for (long c = 0; c < cols && r < rows; ++c) {
    long piv = -1;
    for (long i = r; i < rows; ++i) {
      if (!rat_is_zero(m[i][c])) { piv = i; break; }
    }
    if (piv < 0) continue;
    std::swap(m[r], m[piv]);
    const Rational inv = 1 / m[r][c];
    for (long j = c; j < cols; ++j) m[r][j] *= inv;
    if constexpr (Parallel) {
#pragma omp parallel for schedule(dynamic, 8)
      for (long i = 0; i < rows; ++i) {
        if (i == r || rat_is_zero(m[i][c])) continue;
        const Rational f = m[i][c];
        for (long j = c; j < cols; ++j) {
          if (!rat_is_zero(m[r][j])) m[i][j] -= f * m[r][j];
        }
      }
    } else {
      for (long i = 0; i < rows; ++i) {
        if (i == r || rat_is_zero(m[i][c])) continue;
        const Rational f = m[i][c];
        for (long j = c; j < cols; ++j) {
          if (!rat_is_zero(m[r][j])) m[i][j] -= f * m[r][j];
        }
      }
    }
    res.pivot_cols.push_back(static_cast<int>(c));
    ++r;
  }
  res.rank = static_cast<int>(r);
  return res;
}

} // namespace

RrefResult rref_serial(QMat& m) { return rref_impl<false>(m); }
RrefResult rref_omp(QMat& m) { return rref_impl<true>(m); }
RrefResult rref(QMat& m) { return parallel_enabled() ? rref_omp(m) : rref_serial(m); }

QMat nullspace(QMat m) {
  if (m.empty()) return {};
  const int cols = static_cast<int>(m[0].size());
  RrefResult r = rref(m);
  std::vector<bool> is_pivot(cols, false);
  for (int c : r.pivot_cols) is_pivot[c] = true;
  QMat basis;
  for (int fc = 0; fc < cols; ++fc) {
    if (is_pivot[fc]) continue;
    QVec v(cols);
    v[fc] = 1;
    for (int pr = 0; pr < r.rank; ++pr) {
      const int pc = r.pivot_cols[pr];
      v[pc] = -m[pr][fc];
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

QMat sparse_nullspace(std::vector<SparseRow> rows, int ncols) {
  // bucket rows by leading column; eliminate column by column
  std::vector<std::vector<int>> bucket(ncols);
  auto place = [&](int idx) {
    if (!rows[idx].empty()) bucket[rows[idx].front().first].push_back(idx);
  };
  for (std::size_t i = 0; i < rows.size(); ++i) place(static_cast<int>(i));

  std::vector<int> pivot_row(ncols, -1);
  std::vector<int> pivot_cols;
  SparseRow tmp;
  for (int c = 0; c < ncols; ++c) {
    auto& cand = bucket[c];
    if (cand.empty()) continue;
    int piv = cand[0];
    for (int idx : cand) {
      if (rows[idx].size() < rows[piv].size() || (rows[idx].size() == rows[piv].size() && idx < piv))
        piv = idx;
    }
    const Rational inv = 1 / rows[piv].front().second;
    for (auto& [col, val] : rows[piv]) val *= inv;
    for (int idx : cand) {
      if (idx == piv) continue;
      const Rational f = rows[idx].front().second;
      // rows[idx] -= f * rows[piv], merging sorted column lists
      tmp.clear();
      auto a = rows[idx].begin(), ae = rows[idx].end();
      auto b = rows[piv].begin(), be = rows[piv].end();
      while (a != ae || b != be) {
        if (b == be || (a != ae && a->first < b->first)) {
          tmp.push_back(*a++);
        } else if (a == ae || b->first < a->first) {
          tmp.emplace_back(b->first, -f * b->second);
          ++b;
        } else {
          Rational v = a->second - f * b->second;
          if (!rat_is_zero(v)) tmp.emplace_back(a->first, std::move(v));
          ++a;
          ++b;
        }
      }
      rows[idx].swap(tmp);
      place(idx);
    }
    pivot_row[c] = piv;
    pivot_cols.push_back(c);
    cand.clear();
  }

  QMat basis;
  for (int fc = 0; fc < ncols; ++fc) {
    if (pivot_row[fc] >= 0) continue;
    QVec v(ncols, Rational(0));
    v[fc] = 1;
    for (auto it = pivot_cols.rbegin(); it != pivot_cols.rend(); ++it) {
      const int pc = *it;
      const SparseRow& row = rows[pivot_row[pc]];
      Rational acc;
      for (std::size_t k = 1; k < row.size(); ++k) {
        if (!rat_is_zero(v[row[k].first])) acc += row[k].second * v[row[k].first];
      }
      v[pc] = -acc;
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

bool solve(QMat m, QVec rhs, QVec& x) {
  if (m.empty()) {
    for (const auto& v : rhs)
      if (!rat_is_zero(v)) return false;
    x.clear();
    return true;
  }
  const std::size_t cols = m[0].size();
  for (std::size_t i = 0; i < m.size(); ++i) m[i].push_back(rhs[i]);
  RrefResult r = rref(m);
  // inconsistent iff a pivot lands in the rhs column
  if (!r.pivot_cols.empty() && r.pivot_cols.back() == static_cast<int>(cols)) return false;
  x.assign(cols, Rational(0));
  for (int pr = 0; pr < r.rank; ++pr) x[r.pivot_cols[pr]] = m[pr][cols];
  return true;
}

} // namespace pvp::kernel
