#pragma once
#include <vector>

#include "pvpatch/rational.hpp"

// Exact-arithmetic compute kernels. Each kernel has a serial reference
// implementation and an OpenMP variant; both produce identical exact results
// (pure rational arithmetic, deterministic pivoting), so the parallel path is
// used by default and the serial one is kept for testing and benchmarking.
namespace pvp::kernel {

using QVec = std::vector<Rational>;
using QMat = std::vector<std::vector<Rational>>;

bool parallel_enabled();
void set_parallel(bool on);

// c[k] = sum_i a[i] * b[k - i], size |a| + |b| - 1 (empty if either is empty)
QVec convolve_serial(const QVec& a, const QVec& b);
QVec convolve_omp(const QVec& a, const QVec& b);
QVec convolve(const QVec& a, const QVec& b);

struct RrefResult {
  int rank = 0;
  std::vector<int> pivot_cols;
};

// Reduced row echelon form in place. Pivot choice is deterministic (first row
// with a nonzero entry in the current column), so serial and parallel agree.
RrefResult rref_serial(QMat& m);
RrefResult rref_omp(QMat& m);
RrefResult rref(QMat& m);

// Basis of { v : M v = 0 }, one vector per free column, deterministic order.
QMat nullspace(QMat m);

// Solve M x = rhs exactly; returns false if inconsistent. Any free variables
// are set to zero (particular solution).
bool solve(QMat m, QVec rhs, QVec& x);

// Sparse row: (column, value) pairs sorted by column, values nonzero.
using SparseRow = std::vector<std::pair<int, Rational>>;

// Nullspace basis of a sparse homogeneous system, dense output vectors.
// Pivoting is deterministic (per column: sparsest row, then lowest index),
// so results are byte-stable across runs and thread counts.
QMat sparse_nullspace(std::vector<SparseRow> rows, int ncols);

} // namespace pvp::kernel
