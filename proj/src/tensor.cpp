#include "finsler/tensor.hpp"

#include <algorithm>

namespace finsler {

Tensor Tensor::identity(int dim) {
    Tensor t(dim, {Variance::upper, Variance::lower});
    for (int i = 0; i < dim; ++i) t(i, i) = 1.0;
    return t;
}

std::size_t Tensor::component_count(int dim, int rank) {
    std::size_t count = 1;
    for (int r = 0; r < rank; ++r) count *= static_cast<std::size_t>(dim);
    return count;
}

std::size_t Tensor::offset(std::span<const int> idx) const {
    if (static_cast<int>(idx.size()) != rank()) {
        throw InvalidParameter("tensor of rank " + std::to_string(rank()) + " indexed with " +
                               std::to_string(idx.size()) + " indices");
    }
    std::size_t off = 0;
    for (int i : idx) {
        if (i < 0 || i >= dim_) throw InvalidParameter("tensor index out of range");
        off = off * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(i);
    }
    return off;
}

double Tensor::max_abs() const noexcept {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
}

namespace {

template <class Combine>
double pair_defect(const Tensor& t, int a, int b, Combine combine) {
    const int r = t.rank();
    if (a < 0 || b < 0 || a >= r || b >= r) throw InvalidParameter("slot out of range");
    std::vector<int> idx(static_cast<std::size_t>(r), 0);
    std::vector<int> swapped(idx);
    double m = 0.0;
    for (std::size_t flat = 0; flat < t.size(); ++flat) {
        std::size_t rem = flat;
        for (int s = r - 1; s >= 0; --s) {
            idx[static_cast<std::size_t>(s)] = static_cast<int>(rem % static_cast<std::size_t>(t.dim()));
            rem /= static_cast<std::size_t>(t.dim());
        }
        swapped = idx;
        std::swap(swapped[static_cast<std::size_t>(a)], swapped[static_cast<std::size_t>(b)]);
        m = std::max(m, std::abs(combine(t.at(idx), t.at(swapped))));
    }
    return m;
}

}  // namespace

double Tensor::symmetry_defect(int slot_a, int slot_b) const {
    return pair_defect(*this, slot_a, slot_b, [](double u, double v) { return u - v; });
}

double Tensor::antisymmetry_defect(int slot_a, int slot_b) const {
    return pair_defect(*this, slot_a, slot_b, [](double u, double v) { return u + v; });
}

void Tensor::require_same_shape(const Tensor& rhs) const {
    if (dim_ != rhs.dim_ || rank() != rhs.rank()) {
        throw InvalidParameter("tensor shapes differ");
    }
}

Tensor& Tensor::operator+=(const Tensor& rhs) {
    require_same_shape(rhs);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += rhs.data_[i];
    return *this;
}

Tensor& Tensor::operator-=(const Tensor& rhs) {
    require_same_shape(rhs);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= rhs.data_[i];
    return *this;
}

Tensor& Tensor::operator*=(double s) {
    for (double& v : data_) v *= s;
    return *this;
}

double max_abs_diff(const Tensor& a, const Tensor& b) {
    a.require_same_shape(b);
    double m = 0.0;
    for (std::size_t i = 0; i < a.data_.size(); ++i) {
        m = std::max(m, std::abs(a.data_[i] - b.data_[i]));
    }
    return m;
}

}  // namespace finsler
