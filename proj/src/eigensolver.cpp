#include "plates/eigensolver.hpp"

#include "plates/errors.hpp"

#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

namespace plates {

namespace {

using Block = Eigen::MatrixXd;
using BlockOp = std::function<void(const Block&, Block&)>;

struct RitzPairs {
    Eigen::VectorXd theta;  // descending
    Eigen::MatrixXd x;
};

// B-orthonormal block Krylov space of a B-self-adjoint operator with explicit
// Rayleigh-Ritz; returns the `count` algebraically largest Ritz pairs.
class BlockKrylov {
public:
    BlockKrylov(int n, BlockOp op, BlockOp bmul, const EigenOptions& opts)
        : n_(n), op_(std::move(op)), bmul_(std::move(bmul)), opts_(opts), rng_(opts.seed) {}

    RitzPairs largest(int count) {
        const int p = std::max(1, std::min(opts_.block_size, n_));
        const int cap = std::min(n_, std::max(opts_.max_basis, count + 2 * p));
        v_.resize(n_, 0);
        bv_.resize(n_, 0);
        w_.resize(n_, 0);

        Block next = random_block(p);
        int last_check = 0;
        while (true) {
            Block fresh = orthonormalize(next);
            if (fresh.cols() == 0) break;  // invariant subspace exhausted the space
            append(fresh);
            next = w_.rightCols(fresh.cols());

            const int m = static_cast<int>(v_.cols());
            const bool full = m >= cap;
            const bool due = m >= count + p && (m - last_check >= std::max(p, m / 8) || full);
            if (!due) continue;
            last_check = m;
            RitzPairs r = ritz(count);
            if (r_converged_ || full) {
                if (!r_converged_ && m < n_)
                    fail(ErrorKind::Numeric, "Krylov eigensolver did not converge within the basis limit");
                return r;
            }
        }
        return ritz(count);
    }

private:
    Block random_block(int cols) {
        std::normal_distribution<double> dist;
        Block x(n_, cols);
        for (Eigen::Index j = 0; j < x.cols(); ++j)
            for (Eigen::Index i = 0; i < x.rows(); ++i) x(i, j) = dist(rng_);
        return x;
    }

    void project_out(Eigen::Ref<Eigen::VectorXd> x) const {
        if (v_.cols() == 0) return;
        for (int pass = 0; pass < 2; ++pass) x -= v_ * (bv_.transpose() * x);
    }

    // B-orthonormalizes the columns of x against the basis and each other.
    Block orthonormalize(Block x) {
        std::vector<Eigen::VectorXd> accepted;
        std::vector<Eigen::VectorXd> accepted_b;
        Block bx(n_, 1);
        for (Eigen::Index j = 0; j < x.cols(); ++j) {
            Eigen::VectorXd col = x.col(j);
            for (int attempt = 0; attempt < 3; ++attempt) {
                const double before = col.norm();
                for (int pass = 0; pass < 2; ++pass) {
                    project_out(col);
                    for (std::size_t k = 0; k < accepted.size(); ++k) col -= accepted[k] * accepted_b[k].dot(col);
                }
                bmul_(col, bx);
                const double bnorm2 = col.dot(bx.col(0));
                if (bnorm2 > 0.0 && col.norm() > 1e-10 * before) {
                    const double s = 1.0 / std::sqrt(bnorm2);
                    accepted.push_back(col * s);
                    accepted_b.push_back(bx.col(0) * s);
                    break;
                }
                if (static_cast<int>(v_.cols() + accepted.size()) >= n_) break;
                col = random_block(1).col(0);
            }
            if (static_cast<int>(v_.cols() + accepted.size()) >= n_) break;
        }
        Block out(n_, static_cast<Eigen::Index>(accepted.size()));
        pending_b_.resize(n_, out.cols());
        for (std::size_t k = 0; k < accepted.size(); ++k) {
            out.col(k) = accepted[k];
            pending_b_.col(k) = accepted_b[k];
        }
        return out;
    }

    void append(const Block& fresh) {
        Block w(n_, fresh.cols());
        op_(fresh, w);
        const auto m = v_.cols();
        v_.conservativeResize(Eigen::NoChange, m + fresh.cols());
        bv_.conservativeResize(Eigen::NoChange, m + fresh.cols());
        w_.conservativeResize(Eigen::NoChange, m + fresh.cols());
        v_.rightCols(fresh.cols()) = fresh;
        bv_.rightCols(fresh.cols()) = pending_b_;
        w_.rightCols(fresh.cols()) = w;
    }

    RitzPairs ritz(int count) {
        Eigen::MatrixXd h = bv_.transpose() * w_;
        h = 0.5 * (h + h.transpose()).eval();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
        const int m = static_cast<int>(h.rows());
        const int k = std::min(count, m);
        RitzPairs r;
        r.theta.resize(k);
        r.x.resize(n_, k);
        const double top = es.eigenvalues().cwiseAbs().maxCoeff();
        r_converged_ = true;
        for (int i = 0; i < k; ++i) {
            const int idx = m - 1 - i;
            const double theta = es.eigenvalues()(idx);
            const Eigen::VectorXd y = es.eigenvectors().col(idx);
            Eigen::VectorXd x = v_ * y;
            const Eigen::VectorXd res = w_ * y - theta * x;
            const double scale = std::max(std::abs(theta), 1e-8 * top);
            if (res.norm() > opts_.tolerance * scale * x.norm()) r_converged_ = false;
            r.theta(i) = theta;
            r.x.col(i) = std::move(x);
        }
        return r;
    }

    int n_;
    BlockOp op_;
    BlockOp bmul_;
    EigenOptions opts_;
    std::mt19937_64 rng_;
    Eigen::MatrixXd v_, bv_, w_, pending_b_;
    bool r_converged_ = false;
};

bool use_dense(const EigenOptions& opts, Eigen::Index n) {
    if (opts.strategy == EigenStrategy::Dense) return true;
    if (opts.strategy == EigenStrategy::Krylov) return false;
    return n < opts.dense_threshold;
}

using Ldlt = Eigen::SimplicialLDLT<SparseMatrix, Eigen::Lower, Eigen::AMDOrdering<int>>;

bool positive_definite(const Ldlt& f) {
    if (f.info() != Eigen::Success) return false;
    const Eigen::VectorXd d = f.vectorD();
    return d.minCoeff() > 1e-14 * d.cwiseAbs().maxCoeff();
}

}  // namespace

EigenPairs dense_smallest_eigenpairs(const Eigen::MatrixXd& K, const Eigen::MatrixXd& M, int count) {
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(K, M);
    if (es.info() != Eigen::Success) fail(ErrorKind::Numeric, "dense generalized eigensolve failed (mass not positive definite?)");
    const int k = std::min<int>(count, static_cast<int>(K.rows()));
    EigenPairs out;
    out.dense = true;
    out.values = es.eigenvalues().head(k);
    out.vectors = es.eigenvectors().leftCols(k);
    return out;
}

EigenPairs dense_smallest_positive_buckling(const Eigen::MatrixXd& K, const Eigen::MatrixXd& G, int count) {
    // G x = mu K x, lambda = 1/mu for the largest positive mu
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(G, K);
    if (es.info() != Eigen::Success) fail(ErrorKind::Numeric, "dense buckling eigensolve failed (stiffness not positive definite?)");
    const auto& mu = es.eigenvalues();
    const double cutoff = 1e-12 * mu.cwiseAbs().maxCoeff();
    std::vector<int> keep;
    for (int i = static_cast<int>(mu.size()) - 1; i >= 0 && static_cast<int>(keep.size()) < count; --i)
        if (mu(i) > cutoff) keep.push_back(i);
    EigenPairs out;
    out.dense = true;
    out.values.resize(static_cast<Eigen::Index>(keep.size()));
    out.vectors.resize(K.rows(), static_cast<Eigen::Index>(keep.size()));
    for (std::size_t j = 0; j < keep.size(); ++j) {
        out.values(j) = 1.0 / mu(keep[j]);
        out.vectors.col(j) = es.eigenvectors().col(keep[j]);
    }
    return out;
}

EigenPairs smallest_eigenpairs(const SparseMatrix& K, const SparseMatrix& M, int count, const EigenOptions& opts) {
    if (count < 1) fail(ErrorKind::Config, "number of requested modes must be >= 1");
    const int n = static_cast<int>(K.rows());
    if (use_dense(opts, n)) return dense_smallest_eigenpairs(Eigen::MatrixXd(K), Eigen::MatrixXd(M), count);

    // shift below the whole spectrum so that the wanted modes are the largest of (K - sM)^-1 M
    Ldlt factor;
    double shift = 0.0;
    factor.compute(K);
    if (!positive_definite(factor)) {
        const double ratio = K.diagonal().sum() / M.diagonal().sum();
        double tau = 1e-8 * ratio;
        bool ok = false;
        for (int attempt = 0; attempt < 24 && !ok; ++attempt, tau *= 10.0) {
            shift = -tau;
            factor.compute(K - shift * M);
            ok = positive_definite(factor);
        }
        if (!ok) fail(ErrorKind::Numeric, "could not find a shift below the spectrum");
    }

    BlockOp op = [&](const Block& x, Block& y) { y = factor.solve(M * x); };
    BlockOp bmul = [&](const Block& x, Block& y) { y = M * x; };
    BlockKrylov krylov(n, op, bmul, opts);
    const RitzPairs r = krylov.largest(count);

    EigenPairs out;
    out.shift = shift;
    const int k = static_cast<int>(r.theta.size());
    out.values.resize(k);
    out.vectors = r.x;
    for (int i = 0; i < k; ++i) out.values(i) = shift + 1.0 / r.theta(i);
    return out;
}

EigenPairs smallest_positive_buckling(const SparseMatrix& K, const SparseMatrix& G, int count, const EigenOptions& opts) {
    if (count < 1) fail(ErrorKind::Config, "number of requested modes must be >= 1");
    const int n = static_cast<int>(K.rows());
    if (use_dense(opts, n)) return dense_smallest_positive_buckling(Eigen::MatrixXd(K), Eigen::MatrixXd(G), count);

    Ldlt factor(K);
    if (!positive_definite(factor)) fail(ErrorKind::Numeric, "stiffness matrix is not positive definite");
    BlockOp op = [&](const Block& x, Block& y) { y = factor.solve(G * x); };
    BlockOp bmul = [&](const Block& x, Block& y) { y = K * x; };
    BlockKrylov krylov(n, op, bmul, opts);
    const RitzPairs r = krylov.largest(count);

    // Ritz values only see the top of the spectrum; a tension-only G leaves roundoff there, so the
    // cutoff also scales with the diagonal Rayleigh quotients, a lower bound of the spectral radius
    double scale = r.theta.cwiseAbs().maxCoeff();
    for (int i = 0; i < n; ++i)
        if (K.coeff(i, i) > 0.0) scale = std::max(scale, std::abs(G.coeff(i, i)) / K.coeff(i, i));
    const double cutoff = 1e-12 * scale;
    std::vector<int> keep;
    for (int i = 0; i < r.theta.size(); ++i)
        if (r.theta(i) > cutoff) keep.push_back(i);
    EigenPairs out;
    out.values.resize(static_cast<Eigen::Index>(keep.size()));
    out.vectors.resize(n, static_cast<Eigen::Index>(keep.size()));
    for (std::size_t j = 0; j < keep.size(); ++j) {
        out.values(j) = 1.0 / r.theta(keep[j]);
        out.vectors.col(j) = r.x.col(keep[j]);
    }
    return out;
}

}  // namespace plates
