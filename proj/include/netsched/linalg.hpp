/*
 Copyright 2026 The netsched Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/
#ifndef NETSCHED_LINALG_HPP
#define NETSCHED_LINALG_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>

namespace netsched {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Numerical margins for the strict inequalities used throughout the library.
namespace tol {
/// Schur stability margin on the spectral radius: stable iff rho < 1 - spectral.
inline constexpr double spectral = 1e-9;
/// Rank threshold relative to the largest singular value.
inline constexpr double rank = 1e-9;
/// Relative symmetry tolerance.
inline constexpr double symmetry = 1e-12;
/// Relative tolerance on eigenvalue band checks.
inline constexpr double pd = 1e-10;
/// Negative-definiteness margin factor; the margin is nd * (1 + ||Pbar||_F).
inline constexpr double nd = 1e-9;
}  // namespace tol

class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

inline std::string shape_of(const Matrix& m) {
    return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

inline void require_square(const Matrix& m, const char* what) {
    if (m.rows() != m.cols() || m.rows() == 0)
        throw DimensionError(std::string(what) + " must be square and non-empty, got " + shape_of(m));
}

inline void require_same_shape(const Matrix& a, const Matrix& b, const char* what) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw DimensionError(std::string(what) + ": shape mismatch " + shape_of(a) + " vs " + shape_of(b));
}

inline bool all_finite(const Matrix& m) { return m.allFinite(); }

/// Largest eigenvalue modulus of a general real square matrix.
inline double spectral_radius(const Matrix& m) {
    require_square(m, "spectral radius argument");
    if (m.rows() == 1) return std::abs(m(0, 0));
    Eigen::EigenSolver<Matrix> es(m, /*computeEigenvectors=*/false);
    if (es.info() != Eigen::Success) throw std::runtime_error("eigenvalue computation did not converge");
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

/// Dense Kronecker product, entry (i*rb + k, j*cb + l) = a(i,j) * b(k,l).
inline Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

inline Matrix symmetrize(const Matrix& m) { return 0.5 * (m + m.transpose()); }

inline bool is_symmetric(const Matrix& m, double rel_tol = tol::symmetry) {
    if (m.rows() != m.cols()) return false;
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    return (m - m.transpose()).cwiseAbs().maxCoeff() <= rel_tol * scale;
}

/// Extreme eigenvalues of the symmetric part of m.
struct EigenRange {
    double min;
    double max;
};

inline EigenRange eigen_range(const Matrix& m) {
    require_square(m, "symmetric eigenvalue argument");
    Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(m), Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw std::runtime_error("symmetric eigenvalue computation failed");
    return {es.eigenvalues().minCoeff(), es.eigenvalues().maxCoeff()};
}

inline double lambda_max(const Matrix& m) { return eigen_range(m).max; }
inline double lambda_min(const Matrix& m) { return eigen_range(m).min; }

/// Column-major vectorization, matching vec(X P Y) = (Y^T kron X) vec(P).
inline Vector vec(const Matrix& m) { return Eigen::Map<const Vector>(m.data(), m.size()); }

inline Matrix unvec(const Vector& v, Eigen::Index rows, Eigen::Index cols) {
    return Eigen::Map<const Matrix>(v.data(), rows, cols);
}

/// Solves lhs * x = rhs; std::nullopt when lhs is numerically singular.
inline std::optional<Matrix> solve_linear(const Matrix& lhs, const Matrix& rhs) {
    Eigen::FullPivLU<Matrix> lu(lhs);
    lu.setThreshold(1e-13);
    if (!lu.isInvertible()) return std::nullopt;
    Matrix x = lu.solve(rhs);
    if (!x.allFinite()) return std::nullopt;
    return x;
}

/// Inverse of a symmetric positive definite matrix via Cholesky; nullopt if not PD.
inline std::optional<Matrix> spd_inverse(const Matrix& m) {
    Eigen::LLT<Matrix> llt(symmetrize(m));
    if (llt.info() != Eigen::Success) return std::nullopt;
    Matrix inv = llt.solve(Matrix::Identity(m.rows(), m.cols()));
    return symmetrize(inv);
}

/// Moore-Penrose pseudo-inverse with singular values below rank * sigma_max dropped.
inline Matrix pseudo_inverse(const Matrix& m) {
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& s = svd.singularValues();
    const double cutoff = s.size() > 0 ? tol::rank * s(0) : 0.0;
    Vector inv_s = Vector::Zero(s.size());
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s(i) > cutoff && s(i) > 0.0) inv_s(i) = 1.0 / s(i);
    return svd.matrixV() * inv_s.asDiagonal() * svd.matrixU().transpose();
}

/// Numerical rank using the relative singular-value threshold.
inline Eigen::Index numerical_rank(const Matrix& m) {
    if (m.size() == 0) return 0;
    Eigen::JacobiSVD<Matrix> svd(m);
    const auto& s = svd.singularValues();
    if (s.size() == 0 || s(0) == 0.0) return 0;
    Eigen::Index r = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s(i) > tol::rank * s(0)) ++r;
    return r;
}

/**
 * Solves the discrete Stein equation  scale * A^T P A - P = -Q  for P.
 * Returns nullopt if the vectorized operator is singular.
 */
inline std::optional<Matrix> solve_stein(const Matrix& a, double scale, const Matrix& q) {
    require_square(a, "Stein matrix");
    require_same_shape(a, q, "Stein right-hand side");
    const Eigen::Index d = a.rows();
    const Matrix at = a.transpose();
    Matrix op = Matrix::Identity(d * d, d * d) - scale * kron(at, at);
    auto x = solve_linear(op, vec(q));
    if (!x) return std::nullopt;
    return symmetrize(unvec(*x, d, d));
}

}  // namespace netsched

#endif  // NETSCHED_LINALG_HPP
