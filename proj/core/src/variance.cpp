#include "ubcov/variance.hpp"

#include <utility>

#include "ubcov/error.hpp"
#include "ubcov/estimate.hpp"

namespace ubcov {

namespace {

using Index = Eigen::Index;
Index idx(std::size_t i) { return static_cast<Index>(i); }

// Parameter slot in psi / theta: either a diagonal-mean alpha_kk or a block
// mean beta_kl with k <= l.
struct Slot {
    bool is_alpha;
    std::size_t k;
    std::size_t l;
};

std::vector<Slot> slots(std::size_t communities) {
    std::vector<Slot> out;
    for (std::size_t k = 0; k < communities; ++k) out.push_back({true, k, k});
    for (std::size_t k = 0; k < communities; ++k) {
        for (std::size_t l = k; l < communities; ++l) out.push_back({false, k, l});
    }
    return out;
}

class CaseTable {
public:
    CaseTable(const UniformBlockCoords& theta, double dof)
        : a_(theta.a()), b_(theta.b()), p_(theta.partition().diagonal()), nu_(dof) {}

    double operator()(const Slot& x, const Slot& y) const {
        if (x.is_alpha && y.is_alpha) return alpha_alpha(x.k, y.k);
        if (x.is_alpha) return alpha_beta(x.k, y);
        if (y.is_alpha) return alpha_beta(y.k, x);
        if (x.k == x.l && y.k == y.l) return beta_diag_beta_diag(x.k, y.k);
        if (x.k == x.l) return beta_diag_beta_off(x.k, y.k, y.l);
        if (y.k == y.l) return beta_diag_beta_off(y.k, x.k, x.l);
        return beta_off_beta_off(x.k, x.l, y.k, y.l);
    }

private:
    double a(std::size_t k) const { return a_(idx(k)); }
    double b(std::size_t k, std::size_t l) const { return b_(idx(k), idx(l)); }
    double p(std::size_t k) const { return p_(idx(k)); }
    // a_kk + p_k b_kk
    double c(std::size_t k) const { return a(k) + p(k) * b(k, k); }

    double alpha_alpha(std::size_t k, std::size_t kp) const {
        if (k == kp) {
            return 2.0 / (nu_ * p(k)) * (a(k) * a(k) + 2.0 * a(k) * b(k, k) + p(k) * b(k, k) * b(k, k));
        }
        return 2.0 / nu_ * b(k, kp) * b(kp, k);
    }

    double alpha_beta(std::size_t k, const Slot& y) const {
        if (y.k == y.l) {
            const std::size_t kp = y.k;
            if (k == kp) return 2.0 / (nu_ * p(k) * p(k)) * c(k) * c(k);
            return 2.0 / nu_ * b(k, kp) * b(kp, k);
        }
        const std::size_t k1 = y.k;
        const std::size_t k2 = y.l;
        const double pre = 1.0 / (nu_ * p(k1) * p(k2));
        if (k != k1 && k != k2) {
            return pre * p(k1) * p(k2) * (b(k1, k) * b(k, k2) + b(k2, k) * b(k, k1));
        }
        if (k == k1) return pre * p(k2) * (b(k1, k2) + b(k2, k1)) * c(k);
        return pre * p(k1) * (b(k1, k2) + b(k2, k1)) * c(k);
    }

    double beta_diag_beta_diag(std::size_t k, std::size_t kp) const {
        if (k == kp) return 2.0 / (nu_ * p(k) * p(k)) * c(k) * c(k);
        return 2.0 / nu_ * b(k, kp) * b(kp, k);
    }

    double beta_diag_beta_off(std::size_t k, std::size_t k1, std::size_t k2) const {
        const double pre = 1.0 / (nu_ * p(k));
        if (k != k1 && k != k2) {
            return pre * p(k) * (b(k1, k) * b(k, k2) + b(k2, k) * b(k, k1));
        }
        return pre * c(k) * (b(k1, k2) + b(k2, k1));
    }

    // cov(beta_{k1 k2}, beta_{l1 l2}) with k1 != k2 and l1 != l2. The
    // 1 / (2 nu) prefactor multiplies the whole bracket, including the
    // a_kk / p_l correction terms of the one-shared-index cases.
    double beta_off_beta_off(std::size_t k1, std::size_t k2, std::size_t l1,
                             std::size_t l2) const {
        const double pre = 1.0 / (2.0 * nu_);
        const double four = b(l1, k1) * b(k2, l2) + b(l2, k1) * b(k2, l1) +
                            b(l1, k2) * b(k1, l2) + b(l2, k2) * b(k1, l1);
        const bool k1_free = k1 != l1 && k1 != l2;
        const bool k2_free = k2 != l1 && k2 != l2;
        if (k1_free && k2_free) return pre * four;  // (1-1)
        if (k1_free && k2 == l1) {                  // (1-2)
            return pre * ((a(k2) * b(l2, k1) + a(k2) * b(k1, l2)) / p(l1) + four);
        }
        if (k1_free && k2 == l2) {  // (1-3)
            return pre * ((a(k2) * b(l1, k1) + a(k2) * b(k1, l1)) / p(l2) + four);
        }
        if (k1 == l1 && k2_free) {  // (2-1)
            return pre * ((a(k1) * b(l2, k2) + a(k1) * b(k2, l2)) / p(l1) + four);
        }
        if (k1 == l2 && k2_free) {  // (3-1)
            return pre * ((a(k1) * b(l1, k2) + a(k1) * b(k2, l1)) / p(l2) + four);
        }
        // (2-2) and (3-2): same unordered pair.
        return pre * (b(l1, l2) * b(l1, l2) + b(l2, l1) * b(l2, l1) +
                      2.0 / (p(l1) * p(l2)) * c(l1) * c(l2));
    }

    const Eigen::VectorXd& a_;
    const Eigen::MatrixXd& b_;
    Eigen::VectorXd p_;
    double nu_;
};

double dof_of(SampleSize size) {
    if (size.dof < 1) {
        throw DimensionError("exact variance formulas need at least one degree of freedom");
    }
    return static_cast<double>(size.dof);
}

}  // namespace

Eigen::VectorXd exact_variance_theta(const UniformBlockCoords& theta, SampleSize size) {
    const double nu = dof_of(size);
    const auto& part = theta.partition();
    const std::size_t kk = part.communities();
    const Eigen::VectorXd& a = theta.a();
    const Eigen::MatrixXd& b = theta.b();
    Eigen::VectorXd var(idx(part.parameter_count()));
    Index pos = 0;
    for (std::size_t k = 0; k < kk; ++k) {
        const double pk = static_cast<double>(part.size(k));
        var(pos++) = 2.0 * a(idx(k)) * a(idx(k)) / (nu * (pk - 1.0));
    }
    for (std::size_t k = 0; k < kk; ++k) {
        const double pk = static_cast<double>(part.size(k));
        const double ak = a(idx(k));
        const double bkk = b(idx(k), idx(k));
        const double ck = ak + pk * bkk;
        for (std::size_t l = k; l < kk; ++l) {
            if (l == k) {
                var(pos++) = 2.0 / (nu * pk * (pk - 1.0)) * (ck * ck - (2.0 * ak + pk * bkk) * bkk);
                continue;
            }
            const double pl = static_cast<double>(part.size(l));
            const double cl = a(idx(l)) + pl * b(idx(l), idx(l));
            const double bkl = b(idx(k), idx(l));
            const double blk = b(idx(l), idx(k));
            var(pos++) = 1.0 / (2.0 * nu * pk * pl) * (pk * pl * (bkl * bkl + blk * blk) + 2.0 * ck * cl);
        }
    }
    return var;
}

Eigen::VectorXd exact_variance_theta(const UniformBlockCoords& theta, std::size_t n) {
    return exact_variance_theta(theta, SampleSize::centered(n));
}

Eigen::MatrixXd block_mean_covariance(const UniformBlockCoords& theta, SampleSize size) {
    const CaseTable table(theta, dof_of(size));
    const std::vector<Slot> s = slots(theta.communities());
    const auto q = idx(s.size());
    Eigen::MatrixXd cov(q, q);
    for (Index i = 0; i < q; ++i) {
        for (Index j = i; j < q; ++j) {
            const double v = table(s[static_cast<std::size_t>(i)], s[static_cast<std::size_t>(j)]);
            cov(i, j) = v;
            cov(j, i) = v;
        }
    }
    return cov;
}

Eigen::MatrixXd moment_transform(const PartitionVector& p) {
    const std::size_t kk = p.communities();
    const auto q = idx(p.parameter_count());
    Eigen::MatrixXd phi = Eigen::MatrixXd::Zero(q, q);
    for (std::size_t k = 0; k < kk; ++k) {
        const double pk = static_cast<double>(p.size(k));
        const Index a_row = idx(k);
        const Index diag_beta = idx(theta_index_b(kk, k, k));
        phi(a_row, a_row) = pk / (pk - 1.0);
        phi(a_row, diag_beta) = -pk / (pk - 1.0);
        phi(diag_beta, a_row) = -1.0 / (pk - 1.0);
        phi(diag_beta, diag_beta) = pk / (pk - 1.0);
        for (std::size_t l = k + 1; l < kk; ++l) {
            const Index off = idx(theta_index_b(kk, k, l));
            phi(off, off) = 1.0;
        }
    }
    return phi;
}

Eigen::MatrixXd exact_covariance_matrix(const UniformBlockCoords& theta, SampleSize size) {
    const Eigen::MatrixXd phi = moment_transform(theta.partition());
    Eigen::MatrixXd cov = phi * block_mean_covariance(theta, size) * phi.transpose();
    return 0.5 * (cov + cov.transpose());
}

Eigen::MatrixXd exact_covariance_matrix(const UniformBlockCoords& theta, std::size_t n) {
    return exact_covariance_matrix(theta, SampleSize::centered(n));
}

Eigen::VectorXd block_mean_vector(const UniformBlockCoords& theta) {
    const std::size_t kk = theta.communities();
    const Eigen::VectorXd pd = theta.partition().diagonal();
    Eigen::VectorXd psi(idx(theta.partition().parameter_count()));
    Index pos = 0;
    for (std::size_t k = 0; k < kk; ++k) psi(pos++) = theta.a()(idx(k)) + theta.b()(idx(k), idx(k));
    for (std::size_t k = 0; k < kk; ++k) {
        for (std::size_t l = k; l < kk; ++l) {
            double v = theta.b()(idx(k), idx(l));
            if (k == l) v += theta.a()(idx(k)) / pd(idx(k));
            psi(pos++) = v;
        }
    }
    return psi;
}

}  // namespace ubcov
