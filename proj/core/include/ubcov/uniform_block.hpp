#pragma once

#include <vector>

#include <Eigen/Core>

#include "ubcov/dense.hpp"
#include "ubcov/partition.hpp"

namespace ubcov {

/// Compressed representation of a p x p uniform-block matrix
///
///   N(A, B, p) = A o I(p) + B o J(p),
///
/// i.e. the (k,k) block is a_kk I + b_kk J and the (k,k') block is the
/// constant b_kk'. A is diagonal (stored as a vector), B is symmetric.
/// Storage is O(K^2) regardless of p; all production arithmetic stays in
/// these coordinates.
class UniformBlockCoords {
public:
    /// Validates dimensions and stores (B + B^T)/2. No definiteness check.
    UniformBlockCoords(Eigen::VectorXd a, const Eigen::MatrixXd& b, PartitionVector partition);

    static UniformBlockCoords identity(const PartitionVector& partition);
    static UniformBlockCoords zero(const PartitionVector& partition);

    const Eigen::VectorXd& a() const noexcept { return a_; }
    const Eigen::MatrixXd& b() const noexcept { return b_; }
    const PartitionVector& partition() const noexcept { return partition_; }
    std::size_t communities() const noexcept { return partition_.communities(); }
    std::size_t dim() const noexcept { return partition_.total(); }

    /// Entry (i, j) of the expanded matrix without materializing it.
    double entry(std::size_t i, std::size_t j) const;

    bool operator==(const UniformBlockCoords& other) const;

private:
    Eigen::VectorXd a_;
    Eigen::MatrixXd b_;
    PartitionVector partition_;
};

/// Same as the constructor; mirrors the free-function style of the rest of the API.
UniformBlockCoords make_uniform_block(Eigen::VectorXd a, const Eigen::MatrixXd& b,
                                      PartitionVector partition);

/// Dense p x p matrix (tests and oracles only).
DenseSymMatrix expand(const UniformBlockCoords& m);

UniformBlockCoords add(const UniformBlockCoords& x, const UniformBlockCoords& y);
UniformBlockCoords subtract(const UniformBlockCoords& x, const UniformBlockCoords& y);
UniformBlockCoords scale(const UniformBlockCoords& x, double factor);

/// Product of two uniform-block matrices in general coordinates. A product
/// of symmetric matrices need not be symmetric, so B is kept unsymmetrized
/// here:  A* = A1 A2,  B* = A1 B2 + B1 A2 + B1 P B2.
struct BlockProduct {
    Eigen::VectorXd a;
    Eigen::MatrixXd b;
    PartitionVector partition;
    /// Largest magnitude among the three terms of B*; cancellation is
    /// measured against it.
    double term_scale = 0.0;

    /// Dense p x p matrix of the (possibly non-symmetric) product.
    Eigen::MatrixXd expand() const;
    /// max |b - b^T| relative to term_scale.
    double asymmetry() const;
};

BlockProduct multiply_general(const UniformBlockCoords& x, const UniformBlockCoords& y);

/// Product that stays inside the symmetric family. Valid whenever x and y
/// commute (powers, polynomials, m * inverse(m)); throws
/// NonSymmetricProductError if the relative asymmetry of B* exceeds
/// `symmetry_tolerance`.
UniformBlockCoords multiply(const UniformBlockCoords& x, const UniformBlockCoords& y,
                            double symmetry_tolerance = 1e-9);

/// N^2 via A^2 and AB + BA + BPB.
UniformBlockCoords square(const UniformBlockCoords& m);

/// Delta = A + B P. Similar to the symmetric A + P^{1/2} B P^{1/2}, so its
/// spectrum is real.
struct DeltaMatrix {
    Eigen::MatrixXd delta;

    /// A + P^{1/2} B P^{1/2}.
    Eigen::MatrixXd symmetric_form;
};

DeltaMatrix delta_matrix(const UniformBlockCoords& m);

/// The K community-level eigenvalues (ascending), taken from the symmetric form.
Eigen::VectorXd delta_eigenvalues(const UniformBlockCoords& m);

/// All p eigenvalues in ascending order: a_kk repeated p_k - 1 times plus
/// the spectrum of Delta.
std::vector<double> eigenvalues(const UniformBlockCoords& m);

struct EigenvalueGroup {
    double value = 0.0;
    std::size_t multiplicity = 0;
    /// -1 for a Delta eigenvalue, otherwise the community index k.
    long community = -1;
};

/// Same spectrum as eigenvalues() without repetition: K entries for A and
/// K for Delta.
std::vector<EigenvalueGroup> eigenvalue_groups(const UniformBlockCoords& m);

struct PdReport {
    bool is_pd = false;
    double min_eigenvalue = 0.0;
    double min_a = 0.0;
    double min_delta = 0.0;
};

/// PD iff every a_kk > 0 and every eigenvalue of Delta > 0.
PdReport is_positive_definite(const UniformBlockCoords& m);

/// 2-norm condition number of Delta.
double delta_condition(const UniformBlockCoords& m);

/// Coordinates of N^{-1}: (A^{-1}, -Delta^{-1} B A^{-1}). Throws
/// SingularMatrixError when some |a_kk| < 1e-12 max|a| or cond(Delta) > 1e12.
UniformBlockCoords inverse(const UniformBlockCoords& m);

}  // namespace ubcov
