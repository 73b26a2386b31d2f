#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <cstdint>

namespace plates {

using SparseMatrix = Eigen::SparseMatrix<double>;

enum class EigenStrategy {
    Auto,    // dense below `dense_threshold` free dofs, Krylov otherwise
    Dense,
    Krylov,  // shift-invert block Krylov with Rayleigh-Ritz
};

struct EigenOptions {
    EigenStrategy strategy = EigenStrategy::Auto;
    int dense_threshold = 400;
    int block_size = 4;
    int max_basis = 900;
    double tolerance = 1e-10;  // relative Ritz residual
    std::uint64_t seed = 0x5eed;
};

struct EigenPairs {
    Eigen::VectorXd values;   // ascending
    Eigen::MatrixXd vectors;  // columns normalized against the pencil's positive-definite side
    double shift = 0.0;
    bool dense = false;
};

/// The `count` algebraically smallest eigenpairs of K x = lambda M x, M positive definite.
/// K may be indefinite. Vectors satisfy x' M x = 1.
EigenPairs smallest_eigenpairs(const SparseMatrix& K, const SparseMatrix& M, int count, const EigenOptions& opts = {});

/// The `count` smallest positive lambda of K x = lambda G x with K positive definite.
/// Fewer values are returned when the pencil has fewer positive eigenvalues. Vectors satisfy x' K x = 1.
EigenPairs smallest_positive_buckling(const SparseMatrix& K, const SparseMatrix& G, int count,
                                      const EigenOptions& opts = {});

/// Dense references used by the tests and by the Auto strategy.
EigenPairs dense_smallest_eigenpairs(const Eigen::MatrixXd& K, const Eigen::MatrixXd& M, int count);
EigenPairs dense_smallest_positive_buckling(const Eigen::MatrixXd& K, const Eigen::MatrixXd& G, int count);

}  // namespace plates
