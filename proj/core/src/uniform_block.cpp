#include "ubcov/uniform_block.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

#include "ubcov/error.hpp"

namespace ubcov {

namespace {

using Index = Eigen::Index;

Index idx(std::size_t i) { return static_cast<Index>(i); }

// Community index of a global row/column.
std::size_t community_of(const PartitionVector& p, std::size_t i) {
    const auto offsets_end = p.communities();
    std::size_t lo = 0;
    std::size_t hi = offsets_end;
    while (hi - lo > 1) {
        const std::size_t mid = (lo + hi) / 2;
        if (p.offset(mid) <= i) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return lo;
}

constexpr double kSingularA = 1e-12;
constexpr double kSingularDelta = 1e12;

}  // namespace

UniformBlockCoords::UniformBlockCoords(Eigen::VectorXd a, const Eigen::MatrixXd& b,
                                       PartitionVector partition)
    : a_(std::move(a)), partition_(std::move(partition)) {
    const auto k = idx(partition_.communities());
    if (a_.size() != k || b.rows() != k || b.cols() != k) {
        std::ostringstream msg;
        msg << "uniform-block coordinates: expected a of length " << k << " and b of size " << k
            << "x" << k << ", got " << a_.size() << " and " << b.rows() << "x" << b.cols();
        throw DimensionError(msg.str());
    }
    b_ = 0.5 * (b + b.transpose());
}

UniformBlockCoords UniformBlockCoords::identity(const PartitionVector& partition) {
    const auto k = idx(partition.communities());
    return {Eigen::VectorXd::Ones(k), Eigen::MatrixXd::Zero(k, k), partition};
}

UniformBlockCoords UniformBlockCoords::zero(const PartitionVector& partition) {
    const auto k = idx(partition.communities());
    return {Eigen::VectorXd::Zero(k), Eigen::MatrixXd::Zero(k, k), partition};
}

double UniformBlockCoords::entry(std::size_t i, std::size_t j) const {
    const std::size_t ki = community_of(partition_, i);
    const std::size_t kj = community_of(partition_, j);
    double v = b_(idx(ki), idx(kj));
    if (i == j) {
        v += a_(idx(ki));
    }
    return v;
}

bool UniformBlockCoords::operator==(const UniformBlockCoords& other) const {
    return partition_ == other.partition_ && a_ == other.a_ && b_ == other.b_;
}

UniformBlockCoords make_uniform_block(Eigen::VectorXd a, const Eigen::MatrixXd& b,
                                      PartitionVector partition) {
    return {std::move(a), b, std::move(partition)};
}

DenseSymMatrix expand(const UniformBlockCoords& m) {
    const auto& p = m.partition();
    const auto n = idx(p.total());
    Eigen::MatrixXd out(n, n);
    for (std::size_t k = 0; k < p.communities(); ++k) {
        for (std::size_t l = 0; l < p.communities(); ++l) {
            out.block(idx(p.offset(k)), idx(p.offset(l)), idx(p.size(k)), idx(p.size(l)))
                .setConstant(m.b()(idx(k), idx(l)));
        }
        for (std::size_t i = p.offset(k); i < p.offset(k) + p.size(k); ++i) {
            out(idx(i), idx(i)) += m.a()(idx(k));
        }
    }
    return DenseSymMatrix(out);
}

UniformBlockCoords add(const UniformBlockCoords& x, const UniformBlockCoords& y) {
    require_same_partition(x.partition(), y.partition(), "add");
    return {x.a() + y.a(), x.b() + y.b(), x.partition()};
}

UniformBlockCoords subtract(const UniformBlockCoords& x, const UniformBlockCoords& y) {
    require_same_partition(x.partition(), y.partition(), "subtract");
    return {x.a() - y.a(), x.b() - y.b(), x.partition()};
}

UniformBlockCoords scale(const UniformBlockCoords& x, double factor) {
    return {factor * x.a(), factor * x.b(), x.partition()};
}

Eigen::MatrixXd BlockProduct::expand() const {
    const auto n = idx(partition.total());
    Eigen::MatrixXd out(n, n);
    for (std::size_t k = 0; k < partition.communities(); ++k) {
        for (std::size_t l = 0; l < partition.communities(); ++l) {
            out.block(idx(partition.offset(k)), idx(partition.offset(l)), idx(partition.size(k)),
                      idx(partition.size(l)))
                .setConstant(b(idx(k), idx(l)));
        }
        for (std::size_t i = partition.offset(k); i < partition.offset(k) + partition.size(k);
             ++i) {
            out(idx(i), idx(i)) += a(idx(k));
        }
    }
    return out;
}

double BlockProduct::asymmetry() const {
    const double skew = (b - b.transpose()).cwiseAbs().maxCoeff();
    if (skew == 0.0) {
        return 0.0;
    }
    return term_scale > 0.0 ? skew / term_scale : std::numeric_limits<double>::infinity();
}

BlockProduct multiply_general(const UniformBlockCoords& x, const UniformBlockCoords& y) {
    require_same_partition(x.partition(), y.partition(), "multiply");
    const Eigen::VectorXd pd = x.partition().diagonal();
    const Eigen::MatrixXd t1 = x.a().asDiagonal() * y.b();
    const Eigen::MatrixXd t2 = x.b() * y.a().asDiagonal();
    const Eigen::MatrixXd t3 = x.b() * pd.asDiagonal() * y.b();
    BlockProduct out{x.a().cwiseProduct(y.a()), t1 + t2 + t3, x.partition(), 0.0};
    out.term_scale = std::max({t1.cwiseAbs().maxCoeff(), t2.cwiseAbs().maxCoeff(),
                               t3.cwiseAbs().maxCoeff()});
    return out;
}

UniformBlockCoords multiply(const UniformBlockCoords& x, const UniformBlockCoords& y,
                            double symmetry_tolerance) {
    BlockProduct prod = multiply_general(x, y);
    const double asym = prod.asymmetry();
    if (asym > symmetry_tolerance) {
        std::ostringstream msg;
        msg << "multiply: product is not symmetric (relative asymmetry " << asym
            << "); the factors do not commute, use multiply_general";
        throw NonSymmetricProductError(msg.str());
    }
    return {std::move(prod.a), prod.b, std::move(prod.partition)};
}

UniformBlockCoords square(const UniformBlockCoords& m) {
    const Eigen::VectorXd pd = m.partition().diagonal();
    const Eigen::MatrixXd ab = m.a().asDiagonal() * m.b();
    Eigen::MatrixXd b = ab + ab.transpose() + m.b() * pd.asDiagonal() * m.b();
    return {m.a().cwiseAbs2(), b, m.partition()};
}

DeltaMatrix delta_matrix(const UniformBlockCoords& m) {
    const Eigen::VectorXd pd = m.partition().diagonal();
    const Eigen::VectorXd root = pd.cwiseSqrt();
    DeltaMatrix out;
    out.delta = m.b() * pd.asDiagonal();
    out.delta.diagonal() += m.a();
    out.symmetric_form = root.asDiagonal() * m.b() * root.asDiagonal();
    out.symmetric_form.diagonal() += m.a();
    // Exact symmetry of the similarity transform keeps the eigensolver honest.
    out.symmetric_form = 0.5 * (out.symmetric_form + out.symmetric_form.transpose()).eval();
    return out;
}

Eigen::VectorXd delta_eigenvalues(const UniformBlockCoords& m) {
    const DeltaMatrix d = delta_matrix(m);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(d.symmetric_form,
                                                          Eigen::EigenvaluesOnly);
    return solver.eigenvalues();
}

std::vector<double> eigenvalues(const UniformBlockCoords& m) {
    const auto& p = m.partition();
    std::vector<double> out;
    out.reserve(p.total());
    for (std::size_t k = 0; k < p.communities(); ++k) {
        out.insert(out.end(), p.size(k) - 1, m.a()(idx(k)));
    }
    const Eigen::VectorXd de = delta_eigenvalues(m);
    out.insert(out.end(), de.begin(), de.end());
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<EigenvalueGroup> eigenvalue_groups(const UniformBlockCoords& m) {
    const auto& p = m.partition();
    std::vector<EigenvalueGroup> out;
    out.reserve(2 * p.communities());
    for (std::size_t k = 0; k < p.communities(); ++k) {
        out.push_back({m.a()(idx(k)), p.size(k) - 1, static_cast<long>(k)});
    }
    const Eigen::VectorXd de = delta_eigenvalues(m);
    for (double v : de) {
        out.push_back({v, 1, -1});
    }
    return out;
}

PdReport is_positive_definite(const UniformBlockCoords& m) {
    PdReport r;
    r.min_a = m.a().minCoeff();
    r.min_delta = delta_eigenvalues(m).minCoeff();
    r.min_eigenvalue = std::min(r.min_a, r.min_delta);
    r.is_pd = r.min_a > 0.0 && r.min_delta > 0.0;
    return r;
}

double delta_condition(const UniformBlockCoords& m) {
    const DeltaMatrix d = delta_matrix(m);
    Eigen::BDCSVD<Eigen::MatrixXd> svd(d.delta);
    const auto& s = svd.singularValues();
    const double smin = s(s.size() - 1);
    if (smin == 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    return s(0) / smin;
}

UniformBlockCoords inverse(const UniformBlockCoords& m) {
    const double amax = m.a().cwiseAbs().maxCoeff();
    for (Index k = 0; k < m.a().size(); ++k) {
        if (!(std::abs(m.a()(k)) >= kSingularA * amax) || amax == 0.0) {
            std::ostringstream msg;
            msg << "inverse: A is singular (a_" << k + 1 << k + 1 << " = " << m.a()(k) << ")";
            throw SingularMatrixError(msg.str());
        }
    }
    const double cond = delta_condition(m);
    if (!(cond <= kSingularDelta)) {
        std::ostringstream msg;
        msg << "inverse: Delta = A + BP is singular (condition estimate " << cond << ")";
        throw SingularMatrixError(msg.str());
    }
    const Eigen::VectorXd a_inv = m.a().cwiseInverse();
    const DeltaMatrix d = delta_matrix(m);
    const Eigen::MatrixXd rhs = m.b() * a_inv.asDiagonal();
    Eigen::MatrixXd b_inv = -d.delta.fullPivLu().solve(rhs);
    return {a_inv, b_inv, m.partition()};
}

}  // namespace ubcov
