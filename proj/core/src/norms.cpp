#include "ubcov/norms.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace ubcov {

double frobenius_ub_squared(const UniformBlockCoords& x, const UniformBlockCoords& y) {
    const UniformBlockCoords d = subtract(x, y);
    const auto& p = d.partition();
    double total = 0.0;
    for (std::size_t k = 0; k < p.communities(); ++k) {
        const auto ki = static_cast<Eigen::Index>(k);
        const double pk = static_cast<double>(p.size(k));
        const double diag = d.a()(ki) + d.b()(ki, ki);
        total += pk * diag * diag;
        total += pk * (pk - 1.0) * d.b()(ki, ki) * d.b()(ki, ki);
        for (std::size_t l = 0; l < p.communities(); ++l) {
            if (l == k) continue;
            const double v = d.b()(ki, static_cast<Eigen::Index>(l));
            total += pk * static_cast<double>(p.size(l)) * v * v;
        }
    }
    return total;
}

double frobenius_ub(const UniformBlockCoords& x, const UniformBlockCoords& y) {
    return std::sqrt(frobenius_ub_squared(x, y));
}

double spectral_ub(const UniformBlockCoords& x, const UniformBlockCoords& y) {
    const UniformBlockCoords d = subtract(x, y);
    const double from_a = d.a().cwiseAbs().maxCoeff();
    const double from_delta = delta_eigenvalues(d).cwiseAbs().maxCoeff();
    return std::max(from_a, from_delta);
}

double frobenius_dense(const Eigen::MatrixXd& m) { return m.norm(); }

double spectral_dense_sym(const Eigen::MatrixXd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace ubcov
