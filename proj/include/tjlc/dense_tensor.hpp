#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace tjlc {

/// Dense real tensor of arbitrary order with a fixed flat element order:
/// the first index varies fastest (generalized column-major), so an
/// order-2 tensor maps directly onto a column-major matrix.
///
/// Mode numbers in the public API are 1-based (n = 1..N); element indices
/// passed to at() are 0-based. Index-map conversions to the 1-based
/// unfolding formulas live in tensor_ops.
class DenseTensor {
public:
    DenseTensor() = default;

    /// Zero tensor with the given extents.
    explicit DenseTensor(std::vector<std::size_t> dims);

    DenseTensor(std::vector<std::size_t> dims, std::vector<double> data);

    static DenseTensor zeros(std::vector<std::size_t> dims) {
        return DenseTensor(std::move(dims));
    }

    const std::vector<std::size_t>& dims() const { return dims_; }
    std::size_t order() const { return dims_.size(); }
    std::size_t dim(std::size_t axis) const { return dims_[axis]; }
    std::size_t size() const { return data_.size(); }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    std::vector<double>& values() { return data_; }
    const std::vector<double>& values() const { return data_; }

    double& operator[](std::size_t flat) { return data_[flat]; }
    double operator[](std::size_t flat) const { return data_[flat]; }

    /// Element by 0-based multi-index.
    double at(std::span<const std::size_t> idx) const { return data_[flat_index(idx)]; }
    double& at(std::span<const std::size_t> idx) { return data_[flat_index(idx)]; }
    double at(std::initializer_list<std::size_t> idx) const {
        return at(std::span<const std::size_t>(idx.begin(), idx.size()));
    }
    double& at(std::initializer_list<std::size_t> idx) {
        return at(std::span<const std::size_t>(idx.begin(), idx.size()));
    }

    std::size_t flat_index(std::span<const std::size_t> idx) const;

    bool same_dims(const DenseTensor& other) const { return dims_ == other.dims_; }

    /// Same data, new extents; total element count must be unchanged.
    DenseTensor reshaped(std::vector<std::size_t> dims) const;

private:
    std::vector<std::size_t> dims_;
    std::vector<double> data_;
};

/// Observation set: a boolean mask congruent with a DenseTensor's flat
/// element order.
class IndexSet {
public:
    IndexSet() = default;

    /// All-unobserved mask with the given extents.
    explicit IndexSet(std::vector<std::size_t> dims);

    IndexSet(std::vector<std::size_t> dims, std::vector<std::uint8_t> mask);

    const std::vector<std::size_t>& dims() const { return dims_; }
    std::size_t order() const { return dims_.size(); }
    std::size_t size() const { return mask_.size(); }

    std::vector<std::uint8_t>& mask() { return mask_; }
    const std::vector<std::uint8_t>& mask() const { return mask_; }

    bool observed(std::size_t flat) const { return mask_[flat] != 0; }
    std::size_t observed_count() const;

    IndexSet complement() const;

private:
    std::vector<std::size_t> dims_;
    std::vector<std::uint8_t> mask_;
};

}  // namespace tjlc
