#include "ubcov/partition.hpp"

#include <string>

#include "ubcov/error.hpp"

namespace ubcov {

PartitionVector::PartitionVector(std::vector<std::size_t> sizes) : sizes_(std::move(sizes)) {
    if (sizes_.empty()) {
        throw DimensionError("partition must contain at least one community");
    }
    offsets_.reserve(sizes_.size() + 1);
    offsets_.push_back(0);
    for (std::size_t k = 0; k < sizes_.size(); ++k) {
        if (sizes_[k] < 2) {
            throw DimensionError("community " + std::to_string(k + 1) + " has size " +
                                 std::to_string(sizes_[k]) + "; every community needs p_k >= 2");
        }
        offsets_.push_back(offsets_.back() + sizes_[k]);
    }
}

PartitionVector::PartitionVector(std::initializer_list<std::size_t> sizes)
    : PartitionVector(std::vector<std::size_t>(sizes)) {}

PartitionVector PartitionVector::uniform(std::size_t communities, std::size_t size) {
    return PartitionVector(std::vector<std::size_t>(communities, size));
}

Eigen::VectorXd PartitionVector::diagonal() const {
    Eigen::VectorXd d(static_cast<Eigen::Index>(sizes_.size()));
    for (std::size_t k = 0; k < sizes_.size(); ++k) {
        d(static_cast<Eigen::Index>(k)) = static_cast<double>(sizes_[k]);
    }
    return d;
}

std::size_t PartitionVector::parameter_count() const noexcept {
    const std::size_t k = sizes_.size();
    return k + k * (k + 1) / 2;
}

void require_same_partition(const PartitionVector& x, const PartitionVector& y,
                            const char* context) {
    if (!(x == y)) {
        throw DimensionError(std::string(context) + ": partitions differ");
    }
}

}  // namespace ubcov
