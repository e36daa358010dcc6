#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace ubcov {

/// Community sizes p = (p_1, ..., p_K). Every community holds at least two
/// features, which is what makes the (A, B) coordinates identifiable.
class PartitionVector {
public:
    explicit PartitionVector(std::vector<std::size_t> sizes);
    PartitionVector(std::initializer_list<std::size_t> sizes);

    /// K copies of the same size.
    static PartitionVector uniform(std::size_t communities, std::size_t size);

    std::size_t communities() const noexcept { return sizes_.size(); }
    std::size_t total() const noexcept { return offsets_.back(); }
    std::size_t size(std::size_t k) const { return sizes_[k]; }
    std::size_t offset(std::size_t k) const { return offsets_[k]; }
    std::span<const std::size_t> sizes() const noexcept { return sizes_; }

    /// Diagonal of P = diag(p_1, ..., p_K) as doubles.
    Eigen::VectorXd diagonal() const;

    /// Number of free parameters q = K + K(K+1)/2.
    std::size_t parameter_count() const noexcept;

    bool operator==(const PartitionVector&) const = default;

private:
    std::vector<std::size_t> sizes_;
    std::vector<std::size_t> offsets_;
};

/// Throws DimensionError unless both partitions are identical.
void require_same_partition(const PartitionVector& x, const PartitionVector& y,
                            const char* context);

}  // namespace ubcov
