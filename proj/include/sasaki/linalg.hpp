#pragma once

#include <Eigen/Cholesky>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <vector>

#include "sasaki/jet.hpp"

namespace sasaki {

// Result of a generalized symmetric eigenproblem H v = mu v with H
// self-adjoint with respect to an SPD metric g.  Eigenvalues ascending,
// eigenvectors g-orthonormal.
struct EigenPairSet {
    VecXd eigenvalues;
    MatXd eigenvectors; // columns
};

// Metric Gram-Schmidt.  Columns of `vectors` are orthonormalized against the
// SPD metric g; the first output stays parallel to the first input.  Throws
// RankError when a pivot falls below tol (relative to the incoming norm).
inline MatXd gram_schmidt(const MatXd& vectors, const MatXd& g, double tol = 1e-10) {
    const Eigen::Index n = vectors.rows();
    const Eigen::Index k = vectors.cols();
    if (g.rows() != n || g.cols() != n)
        throw DomainError("gram_schmidt: metric dimension mismatch");
    MatXd out(n, k);
    for (Eigen::Index j = 0; j < k; ++j) {
        VecXd v = vectors.col(j);
        const double in_norm = std::sqrt(std::max(0.0, v.dot(g * v)));
        for (Eigen::Index i = 0; i < j; ++i)
            v -= out.col(i).dot(g * v) * out.col(i);
        // second pass for numerical orthogonality
        for (Eigen::Index i = 0; i < j; ++i)
            v -= out.col(i).dot(g * v) * out.col(i);
        const double norm = std::sqrt(std::max(0.0, v.dot(g * v)));
        if (norm <= tol * std::max(1.0, in_norm))
            throw RankError("gram_schmidt: dependent input (pivot below tolerance)");
        out.col(j) = v / norm;
    }
    return out;
}

namespace detail {

// Cyclic Jacobi rotations on a symmetric matrix.  Dimensions here are <= 9,
// so robustness beats asymptotics.  Returns eigenvalues in `d` and
// accumulates rotations into `V` (columns = eigenvectors).
inline void jacobi_eigen(MatXd C, VecXd& d, MatXd& V) {
    const Eigen::Index n = C.rows();
    V = MatXd::Identity(n, n);
    const double scale = std::max(C.cwiseAbs().maxCoeff(), 1e-300);
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0.0;
        for (Eigen::Index p = 0; p < n; ++p)
            for (Eigen::Index q = p + 1; q < n; ++q)
                off = std::max(off, std::abs(C(p, q)));
        if (off <= 1e-15 * scale)
            break;
        for (Eigen::Index p = 0; p < n; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                if (std::abs(C(p, q)) <= 1e-18 * scale)
                    continue;
                const double theta = (C(q, q) - C(p, p)) / (2.0 * C(p, q));
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                Eigen::JacobiRotation<double> rot(c, -s);
                C.applyOnTheLeft(p, q, rot.adjoint());
                C.applyOnTheRight(p, q, rot);
                V.applyOnTheRight(p, q, rot);
            }
        }
    }
    d = C.diagonal();
}

} // namespace detail

// Generalized symmetric eigenproblem for an operator H self-adjoint with
// respect to SPD g (i.e. gH symmetric).  Reduction: g = LL^T, then the
// ordinary symmetric problem L^{-1}(gH)L^{-T} is solved by cyclic Jacobi
// rotations; eigenvectors are mapped back and come out g-orthonormal.
inline EigenPairSet sym_eigen_pair(const MatXd& H, const MatXd& g, double tol = 1e-8) {
    const Eigen::Index n = H.rows();
    if (H.cols() != n || g.rows() != n || g.cols() != n)
        throw DomainError("sym_eigen_pair: dimension mismatch");
    const MatXd A = g * H;
    const double scale = std::max({A.cwiseAbs().maxCoeff(), g.cwiseAbs().maxCoeff(), 1.0});
    if ((A - A.transpose()).cwiseAbs().maxCoeff() > tol * scale)
        throw SymmetryError("sym_eigen_pair: gH is not symmetric (H not g-self-adjoint)");

    Eigen::LLT<MatXd> llt(g);
    if (llt.info() != Eigen::Success)
        throw NumericError("sym_eigen_pair: metric is not positive definite");
    const MatXd L = llt.matrixL();

    // C = L^{-1} A L^{-T}, symmetrized against roundoff.
    MatXd C = L.triangularView<Eigen::Lower>().solve(A.transpose());
    C = L.triangularView<Eigen::Lower>().solve(C.transpose());
    C = 0.5 * (C + C.transpose());

    VecXd d;
    MatXd Y;
    detail::jacobi_eigen(C, d, Y);

    std::vector<Eigen::Index> order(static_cast<size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i)
        order[static_cast<size_t>(i)] = i;
    std::sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) { return d[i] < d[j]; });

    EigenPairSet out;
    out.eigenvalues.resize(n);
    out.eigenvectors.resize(n, n);
    const MatXd V = L.transpose().triangularView<Eigen::Upper>().solve(Y);
    for (Eigen::Index i = 0; i < n; ++i) {
        out.eigenvalues[i] = d[order[static_cast<size_t>(i)]];
        out.eigenvectors.col(i) = V.col(order[static_cast<size_t>(i)]);
    }
    return out;
}

// Numerical rank: singular values above tol * sigma_max.
inline int matrix_rank(const MatXd& M, double tol = 1e-8) {
    if (M.size() == 0)
        return 0;
    Eigen::JacobiSVD<MatXd> svd(M);
    const VecXd s = svd.singularValues();
    if (s.size() == 0 || s[0] == 0.0)
        return 0;
    int r = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s[i] > tol * s[0])
            ++r;
    return r;
}

// --- scalar-generic dense kernels (work on double and Jet2) ---------------

// Gaussian elimination with partial pivoting on the value part.  Solves
// A X = B for small dense systems; jets ride along through the arithmetic.
template <typename S>
Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic> solve_dense(
    Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic> A,
    Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic> B) {
    const Eigen::Index n = A.rows();
    if (A.cols() != n || B.rows() != n)
        throw DomainError("solve_dense: dimension mismatch");
    for (Eigen::Index col = 0; col < n; ++col) {
        Eigen::Index piv = col;
        double best = std::abs(value_of(A(col, col)));
        for (Eigen::Index r = col + 1; r < n; ++r) {
            const double cand = std::abs(value_of(A(r, col)));
            if (cand > best) {
                best = cand;
                piv = r;
            }
        }
        if (best < 1e-300)
            throw NumericError("solve_dense: singular matrix");
        if (piv != col) {
            A.row(piv).swap(A.row(col));
            B.row(piv).swap(B.row(col));
        }
        for (Eigen::Index r = col + 1; r < n; ++r) {
            S f = A(r, col) / A(col, col);
            for (Eigen::Index c = col; c < n; ++c)
                A(r, c) -= f * A(col, c);
            for (Eigen::Index c = 0; c < B.cols(); ++c)
                B(r, c) -= f * B(col, c);
        }
    }
    Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic> X(n, B.cols());
    for (Eigen::Index col = n - 1; col >= 0; --col) {
        for (Eigen::Index c = 0; c < B.cols(); ++c) {
            S acc = B(col, c);
            for (Eigen::Index k = col + 1; k < n; ++k)
                acc -= A(col, k) * X(k, c);
            X(col, c) = acc / A(col, col);
        }
    }
    return X;
}

template <typename S>
Eigen::Matrix<S, Eigen::Dynamic, 1> solve_dense(
    const Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>& A,
    const Eigen::Matrix<S, Eigen::Dynamic, 1>& b) {
    Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic> B = b;
    return solve_dense<S>(A, B).col(0);
}

template <typename S>
S det_small(const Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>& M);

// Covector annihilating the column span of an m x (m-1) matrix B:
// w_j = (-1)^j det(B with row j removed).  w(B e_k) = det of a matrix with a
// repeated column = 0, so w kills every column.  Vanishes identically iff B
// is rank deficient, which callers detect by the norm of w.
template <typename S>
Eigen::Matrix<S, Eigen::Dynamic, 1> cofactor_normal_covector(
    const Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>& B) {
    const Eigen::Index m = B.rows();
    if (B.cols() != m - 1)
        throw DomainError("cofactor_normal_covector: expected m x (m-1) input");
    Eigen::Matrix<S, Eigen::Dynamic, 1> w(m);
    double sign = 1.0;
    for (Eigen::Index j = 0; j < m; ++j) {
        Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic> sub(m - 1, m - 1);
        Eigen::Index rr = 0;
        for (Eigen::Index r = 0; r < m; ++r) {
            if (r == j)
                continue;
            sub.row(rr++) = B.row(r);
        }
        w[j] = S(sign) * det_small<S>(sub);
        sign = -sign;
    }
    return w;
}

// Determinant by cofactor expansion; used only for sizes <= 4.
template <typename S>
S det_small(const Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>& M) {
    const Eigen::Index n = M.rows();
    if (n == 0)
        return S(1.0);
    if (n == 1)
        return M(0, 0);
    if (n == 2)
        return M(0, 0) * M(1, 1) - M(0, 1) * M(1, 0);
    if (n == 3)
        return M(0, 0) * (M(1, 1) * M(2, 2) - M(1, 2) * M(2, 1)) -
               M(0, 1) * (M(1, 0) * M(2, 2) - M(1, 2) * M(2, 0)) +
               M(0, 2) * (M(1, 0) * M(2, 1) - M(1, 1) * M(2, 0));
    S acc(0.0);
    double sign = 1.0;
    for (Eigen::Index j = 0; j < n; ++j) {
        Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic> sub(n - 1, n - 1);
        for (Eigen::Index r = 1; r < n; ++r) {
            Eigen::Index cc = 0;
            for (Eigen::Index c = 0; c < n; ++c) {
                if (c == j)
                    continue;
                sub(r - 1, cc++) = M(r, c);
            }
        }
        acc += S(sign) * M(0, j) * det_small<S>(sub);
        sign = -sign;
    }
    return acc;
}

} // namespace sasaki
