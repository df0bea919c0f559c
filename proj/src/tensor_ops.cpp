#include "tjlc/tensor_ops.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace tjlc {

namespace {

std::size_t checked_total(const std::vector<std::size_t>& dims) {
    if (dims.empty()) {
        throw std::invalid_argument("tensor order must be at least 1");
    }
    std::size_t total = 1;
    for (std::size_t e : dims) {
        if (e == 0) {
            throw std::invalid_argument("tensor extents must be positive");
        }
        total *= e;
    }
    return total;
}

}  // namespace

DenseTensor::DenseTensor(std::vector<std::size_t> dims)
    : dims_(std::move(dims)), data_(checked_total(dims_), 0.0) {}

DenseTensor::DenseTensor(std::vector<std::size_t> dims, std::vector<double> data)
    : dims_(std::move(dims)), data_(std::move(data)) {
    if (checked_total(dims_) != data_.size()) {
        throw std::invalid_argument("element count does not match extents");
    }
}

std::size_t DenseTensor::flat_index(std::span<const std::size_t> idx) const {
    if (idx.size() != dims_.size()) {
        throw std::invalid_argument("index order does not match tensor order");
    }
    std::size_t flat = 0;
    std::size_t stride = 1;
    for (std::size_t k = 0; k < dims_.size(); ++k) {
        if (idx[k] >= dims_[k]) {
            throw std::out_of_range("tensor index out of range");
        }
        flat += idx[k] * stride;
        stride *= dims_[k];
    }
    return flat;
}

DenseTensor DenseTensor::reshaped(std::vector<std::size_t> dims) const {
    if (checked_total(dims) != data_.size()) {
        throw std::invalid_argument("reshape changes the element count");
    }
    return DenseTensor(std::move(dims), data_);
}

IndexSet::IndexSet(std::vector<std::size_t> dims)
    : dims_(std::move(dims)), mask_(checked_total(dims_), 0) {}

IndexSet::IndexSet(std::vector<std::size_t> dims, std::vector<std::uint8_t> mask)
    : dims_(std::move(dims)), mask_(std::move(mask)) {
    if (checked_total(dims_) != mask_.size()) {
        throw std::invalid_argument("mask length does not match extents");
    }
}

std::size_t IndexSet::observed_count() const {
    std::size_t n = 0;
    for (std::uint8_t b : mask_) n += (b != 0);
    return n;
}

IndexSet IndexSet::complement() const {
    std::vector<std::uint8_t> flipped(mask_.size());
    for (std::size_t i = 0; i < mask_.size(); ++i) flipped[i] = mask_[i] ? 0 : 1;
    return IndexSet(dims_, std::move(flipped));
}

std::vector<ModePair> mode_pairs(std::size_t order) {
    std::vector<ModePair> pairs;
    pairs.reserve(order * (order + 1) / 2);
    for (std::size_t l1 = 1; l1 <= order; ++l1) {
        for (std::size_t l2 = l1; l2 <= order; ++l2) {
            pairs.push_back({l1, l2});
        }
    }
    return pairs;
}

double frobenius_norm(const DenseTensor& x) { return std::sqrt(squared_norm(x)); }

double squared_norm(const DenseTensor& x) {
    double sum = 0.0;
    for (double v : x.values()) sum += v * v;
    return sum;
}

namespace {

// Column strides J_k = prod_{m < k, m != axis} I_m for every non-axis mode
// (0-based axes throughout).
std::vector<std::size_t> column_strides(const std::vector<std::size_t>& dims,
                                        std::size_t axis) {
    std::vector<std::size_t> jw(dims.size(), 0);
    std::size_t acc = 1;
    for (std::size_t k = 0; k < dims.size(); ++k) {
        if (k == axis) continue;
        jw[k] = acc;
        acc *= dims[k];
    }
    return jw;
}

std::vector<std::size_t> pair_strides(const std::vector<std::size_t>& dims,
                                      std::size_t a1, std::size_t a2) {
    std::vector<std::size_t> jw(dims.size(), 0);
    std::size_t acc = 1;
    for (std::size_t s = 0; s < dims.size(); ++s) {
        if (s == a1 || s == a2) continue;
        jw[s] = acc;
        acc *= dims[s];
    }
    return jw;
}

template <typename Fn>
void for_each_multi_index(const std::vector<std::size_t>& dims, Fn&& fn) {
    std::vector<std::size_t> idx(dims.size(), 0);
    std::size_t total = 1;
    for (std::size_t e : dims) total *= e;
    for (std::size_t p = 0; p < total; ++p) {
        fn(p, idx);
        for (std::size_t k = 0; k < dims.size(); ++k) {
            if (++idx[k] < dims[k]) break;
            idx[k] = 0;
        }
    }
}

std::size_t checked_mode(const DenseTensor& x, std::size_t n) {
    if (n < 1 || n > x.order()) {
        throw std::invalid_argument("mode index out of range");
    }
    return n - 1;
}

}  // namespace

DenseTensor unfold_mode_n(const DenseTensor& x, std::size_t n) {
    const std::size_t axis = checked_mode(x, n);
    const auto& dims = x.dims();
    const std::size_t rows = dims[axis];
    const std::size_t cols = x.size() / rows;
    const auto jw = column_strides(dims, axis);

    DenseTensor out({rows, cols});
    const double* src = x.data();
    double* dst = out.data();
    for_each_multi_index(dims, [&](std::size_t p, const std::vector<std::size_t>& idx) {
        std::size_t col = 0;
        for (std::size_t k = 0; k < dims.size(); ++k) col += idx[k] * jw[k];
        dst[idx[axis] + col * rows] = src[p];
    });
    return out;
}

DenseTensor fold_mode_n(const DenseTensor& m, const std::vector<std::size_t>& dims,
                        std::size_t n) {
    if (m.order() != 2) {
        throw std::invalid_argument("fold_mode_n expects an order-2 tensor");
    }
    if (n < 1 || n > dims.size()) {
        throw std::invalid_argument("mode index out of range");
    }
    const std::size_t axis = n - 1;
    std::size_t total = 1;
    for (std::size_t e : dims) total *= e;
    if (m.dim(0) != dims[axis] || m.size() != total) {
        throw std::invalid_argument("matrix extents inconsistent with target dims");
    }
    const auto jw = column_strides(dims, axis);
    const std::size_t rows = dims[axis];

    DenseTensor out(dims);
    const double* src = m.data();
    double* dst = out.data();
    for_each_multi_index(dims, [&](std::size_t p, const std::vector<std::size_t>& idx) {
        std::size_t col = 0;
        for (std::size_t k = 0; k < dims.size(); ++k) col += idx[k] * jw[k];
        dst[p] = src[idx[axis] + col * rows];
    });
    return out;
}

DenseTensor unfold_pair(const DenseTensor& x, std::size_t l1, std::size_t l2) {
    if (l1 > l2) {
        throw std::invalid_argument("mode pair requires l1 <= l2");
    }
    if (l1 == l2) {
        return unfold_mode_n(x, l1);
    }
    const std::size_t a1 = checked_mode(x, l1);
    const std::size_t a2 = checked_mode(x, l2);
    const auto& dims = x.dims();
    const std::size_t d1 = dims[a1];
    const std::size_t d2 = dims[a2];
    const std::size_t rest = x.size() / (d1 * d2);
    const auto jw = pair_strides(dims, a1, a2);

    DenseTensor out({d1, d2, rest});
    const double* src = x.data();
    double* dst = out.data();
    for_each_multi_index(dims, [&](std::size_t p, const std::vector<std::size_t>& idx) {
        std::size_t j = 0;
        for (std::size_t s = 0; s < dims.size(); ++s) j += idx[s] * jw[s];
        dst[idx[a1] + idx[a2] * d1 + j * d1 * d2] = src[p];
    });
    return out;
}

DenseTensor fold_pair(const DenseTensor& y, const std::vector<std::size_t>& dims,
                      std::size_t l1, std::size_t l2) {
    if (l1 > l2) {
        throw std::invalid_argument("mode pair requires l1 <= l2");
    }
    if (l1 == l2) {
        return fold_mode_n(y, dims, l1);
    }
    if (l1 < 1 || l2 > dims.size()) {
        throw std::invalid_argument("mode index out of range");
    }
    const std::size_t a1 = l1 - 1;
    const std::size_t a2 = l2 - 1;
    std::size_t total = 1;
    for (std::size_t e : dims) total *= e;
    const std::size_t d1 = dims[a1];
    const std::size_t d2 = dims[a2];
    if (y.order() != 3 || y.dim(0) != d1 || y.dim(1) != d2 || y.size() != total) {
        throw std::invalid_argument("unfolded extents inconsistent with target dims");
    }
    const auto jw = pair_strides(dims, a1, a2);

    DenseTensor out(dims);
    const double* src = y.data();
    double* dst = out.data();
    for_each_multi_index(dims, [&](std::size_t p, const std::vector<std::size_t>& idx) {
        std::size_t j = 0;
        for (std::size_t s = 0; s < dims.size(); ++s) j += idx[s] * jw[s];
        dst[p] = src[idx[a1] + idx[a2] * d1 + j * d1 * d2];
    });
    return out;
}

DenseTensor project(const DenseTensor& x, const IndexSet& omega) {
    if (x.dims() != omega.dims()) {
        throw std::invalid_argument("tensor and observation set extents differ");
    }
    DenseTensor out(x.dims());
    const auto& mask = omega.mask();
    for (std::size_t i = 0; i < x.size(); ++i) {
        out[i] = mask[i] ? x[i] : 0.0;
    }
    return out;
}

double missing_rate(const IndexSet& omega) {
    const double total = static_cast<double>(omega.size());
    return (1.0 - static_cast<double>(omega.observed_count()) / total) * 100.0;
}

}  // namespace tjlc
