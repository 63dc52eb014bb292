#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <tuple>
#include <vector>

#include "fvsolid/core.hpp"

namespace fvsolid {

/// Sparse symmetric matrix with the strict upper triangle stored once.
/// Entries are kept sorted by (row, col) with duplicates merged; finalize()
/// builds the per-column access used by the incomplete factorisation.
struct SparseSymmetricMatrix {
    int rowCount = 0;
    std::vector<double> diag;
    std::vector<int> row;  // upper-triangle entries, row < col
    std::vector<int> col;
    std::vector<double> value;

    // column-major view: colStart[c]..colStart[c+1] indexes entries with col == c
    std::vector<int> colStart;
    std::vector<int> colEntry;
    // row-major view over the upper triangle
    std::vector<int> rowStart;
    std::vector<int> rowEntry;

    void finalize() {
        std::vector<int> order(row.size());
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            return std::tie(row[a], col[a]) < std::tie(row[b], col[b]);
        });
        std::vector<int> r2, c2;
        std::vector<double> v2;
        r2.reserve(row.size());
        c2.reserve(row.size());
        v2.reserve(row.size());
        for (int idx : order) {
            if (row[idx] < 0 || row[idx] >= rowCount || col[idx] < 0 || col[idx] >= rowCount)
                throw InvalidArgumentError("sparse matrix entry index out of range");
            if (!(row[idx] < col[idx]))
                throw InvalidArgumentError("sparse matrix entries must have row < col");
            if (!r2.empty() && r2.back() == row[idx] && c2.back() == col[idx])
                v2.back() += value[idx];
            else {
                r2.push_back(row[idx]);
                c2.push_back(col[idx]);
                v2.push_back(value[idx]);
            }
        }
        row = std::move(r2);
        col = std::move(c2);
        value = std::move(v2);

        const int nnz = static_cast<int>(row.size());
        colStart.assign(rowCount + 1, 0);
        rowStart.assign(rowCount + 1, 0);
        for (int e = 0; e < nnz; ++e) {
            ++colStart[col[e] + 1];
            ++rowStart[row[e] + 1];
        }
        for (int c = 0; c < rowCount; ++c) {
            colStart[c + 1] += colStart[c];
            rowStart[c + 1] += rowStart[c];
        }
        colEntry.resize(nnz);
        rowEntry.resize(nnz);
        std::vector<int> cfill(colStart.begin(), colStart.end() - 1);
        std::vector<int> rfill(rowStart.begin(), rowStart.end() - 1);
        for (int e = 0; e < nnz; ++e) {
            colEntry[cfill[col[e]]++] = e;
            rowEntry[rfill[row[e]]++] = e;
        }
    }
};

inline SparseSymmetricMatrix makeSparseSymmetric(int n, std::vector<double> diag,
                                                 std::vector<int> row, std::vector<int> col,
                                                 std::vector<double> value) {
    SparseSymmetricMatrix a;
    a.rowCount = n;
    a.diag = std::move(diag);
    if (static_cast<int>(a.diag.size()) != n)
        throw InvalidArgumentError("sparse matrix diagonal length does not match row count");
    a.row = std::move(row);
    a.col = std::move(col);
    a.value = std::move(value);
    a.finalize();
    return a;
}

inline void matVec(const SparseSymmetricMatrix& a, const std::vector<double>& x,
                   std::vector<double>& y) {
    const int n = a.rowCount;
    y.assign(n, 0.0);
    for (int i = 0; i < n; ++i) y[i] = a.diag[i] * x[i];
    const int nnz = static_cast<int>(a.row.size());
    for (int e = 0; e < nnz; ++e) {
        y[a.row[e]] += a.value[e] * x[a.col[e]];
        y[a.col[e]] += a.value[e] * x[a.row[e]];
    }
}

inline std::vector<double> matVec(const SparseSymmetricMatrix& a, const std::vector<double>& x) {
    std::vector<double> y;
    matVec(a, x, y);
    return y;
}

enum class Norm { l1, l2 };

inline double vectorNorm(const std::vector<double>& v, Norm norm) {
    if (norm == Norm::l1) {
        double s = 0.0;
        for (double x : v) s += std::abs(x);
        return s;
    }
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

/// ||b - A x|| in the chosen norm.
inline double residualNorm(const SparseSymmetricMatrix& a, const std::vector<double>& x,
                           const std::vector<double>& b, Norm norm) {
    std::vector<double> r = matVec(a, x);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = b[i] - r[i];
    return vectorNorm(r, norm);
}

enum class Preconditioner { jacobi, incompleteCholesky };

struct SolveStats {
    int iterations = 0;
    double initialResidualNorm = 0.0;
    double finalResidualNorm = 0.0;
    bool converged = false;
    bool usedIncompleteCholeskyFallback = false;  // IC(0) broke down, fell back to Jacobi
};

namespace detail {

/// Zero-fill incomplete Cholesky A ~ L L^T on A's own sparsity pattern.
/// ok == false signals a non-positive pivot.
struct IncompleteCholesky {
    bool ok = false;
    std::vector<double> ldiag;
    std::vector<double> lvalue;  // per upper entry (r,c): L(c,r)

    void factor(const SparseSymmetricMatrix& a) {
        const int n = a.rowCount;
        ldiag.assign(n, 0.0);
        lvalue.assign(a.value.size(), 0.0);
        ok = true;
        for (int i = 0; i < n; ++i) {
            double s = a.diag[i];
            for (int p = a.colStart[i]; p < a.colStart[i + 1]; ++p) {
                const double l = lvalue[a.colEntry[p]];
                s -= l * l;
            }
            if (!(s > 0.0)) {
                ok = false;
                return;
            }
            ldiag[i] = std::sqrt(s);
            // compute L(j,i) for every stored entry (i,j), j > i
            for (int p = a.rowStart[i]; p < a.rowStart[i + 1]; ++p) {
                const int e = a.rowEntry[p];
                const int j = a.col[e];
                double sum = a.value[e];
                // subtract sum_k L(i,k) L(j,k) over shared earlier columns;
                // both entry lists are sorted by row index k
                int pi = a.colStart[i], pj = a.colStart[j];
                while (pi < a.colStart[i + 1] && pj < a.colStart[j + 1]) {
                    const int ki = a.row[a.colEntry[pi]];
                    const int kj = a.row[a.colEntry[pj]];
                    if (ki == kj) {
                        sum -= lvalue[a.colEntry[pi]] * lvalue[a.colEntry[pj]];
                        ++pi;
                        ++pj;
                    } else if (ki < kj) {
                        ++pi;
                    } else {
                        ++pj;
                    }
                }
                lvalue[e] = sum / ldiag[i];
            }
        }
    }

    void solve(const SparseSymmetricMatrix& a, const std::vector<double>& r,
               std::vector<double>& z, std::vector<double>& work) const {
        const int n = a.rowCount;
        work.assign(n, 0.0);
        for (int i = 0; i < n; ++i) {
            double s = r[i];
            for (int p = a.colStart[i]; p < a.colStart[i + 1]; ++p) {
                const int e = a.colEntry[p];
                s -= lvalue[e] * work[a.row[e]];
            }
            work[i] = s / ldiag[i];
        }
        z.assign(n, 0.0);
        for (int i = n - 1; i >= 0; --i) {
            double s = work[i];
            for (int p = a.rowStart[i]; p < a.rowStart[i + 1]; ++p) {
                const int e = a.rowEntry[p];
                s -= lvalue[e] * z[a.col[e]];
            }
            z[i] = s / ldiag[i];
        }
    }
};

}  // namespace detail

/// Preconditioned conjugate gradient on a symmetric positive-(semi)definite
/// system. x holds the initial guess on entry and the solution on return.
/// Convergence: ||b - A x||_2 <= relTol ||b - A x0||_2. A zero initial
/// residual returns immediately. IC(0) breakdown falls back to Jacobi and is
/// flagged in the stats.
inline SolveStats cgSolve(const SparseSymmetricMatrix& a, const std::vector<double>& b,
                          std::vector<double>& x, double relTol, int maxIter,
                          Preconditioner precond) {
    const int n = a.rowCount;
    if (static_cast<int>(b.size()) != n || static_cast<int>(x.size()) != n)
        throw InvalidArgumentError("cgSolve: vector lengths do not match the matrix");
    for (int i = 0; i < n; ++i)
        if (!(a.diag[i] > 0.0))
            throw InvalidArgumentError("cgSolve: non-positive diagonal at row " + std::to_string(i));

    SolveStats stats;

    detail::IncompleteCholesky ic;
    bool useIc = precond == Preconditioner::incompleteCholesky;
    if (useIc) {
        ic.factor(a);
        if (!ic.ok) {
            useIc = false;
            stats.usedIncompleteCholeskyFallback = true;
            logDebug("cgSolve: incomplete Cholesky breakdown, falling back to Jacobi");
        }
    }

    std::vector<double> r = matVec(a, x);
    for (int i = 0; i < n; ++i) r[i] = b[i] - r[i];
    stats.initialResidualNorm = vectorNorm(r, Norm::l2);
    stats.finalResidualNorm = stats.initialResidualNorm;
    if (stats.initialResidualNorm == 0.0) {
        stats.converged = true;
        return stats;
    }
    const double target = relTol * stats.initialResidualNorm;

    std::vector<double> z(n), p(n), q(n), work;
    const auto applyPrecond = [&](const std::vector<double>& in, std::vector<double>& out) {
        if (useIc) {
            ic.solve(a, in, out, work);
        } else {
            out.resize(n);
            for (int i = 0; i < n; ++i) out[i] = in[i] / a.diag[i];
        }
    };

    applyPrecond(r, z);
    p = z;
    double rz = 0.0;
    for (int i = 0; i < n; ++i) rz += r[i] * z[i];

    for (int it = 1; it <= maxIter; ++it) {
        matVec(a, p, q);
        double pq = 0.0;
        for (int i = 0; i < n; ++i) pq += p[i] * q[i];
        if (!(pq > 0.0)) break;  // semi-definite breakdown; residual decides below
        const double alpha = rz / pq;
        for (int i = 0; i < n; ++i) {
            x[i] += alpha * p[i];
            r[i] -= alpha * q[i];
        }
        stats.iterations = it;
        stats.finalResidualNorm = vectorNorm(r, Norm::l2);
        if (stats.finalResidualNorm <= target) {
            stats.converged = true;
            return stats;
        }
        applyPrecond(r, z);
        double rzNew = 0.0;
        for (int i = 0; i < n; ++i) rzNew += r[i] * z[i];
        const double beta = rzNew / rz;
        rz = rzNew;
        for (int i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    }

    stats.converged = stats.finalResidualNorm <= target;
    return stats;
}

}  // namespace fvsolid
