#pragma once

#include <cmath>
#include <concepts>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "finsler/errors.hpp"

namespace finsler {

enum class Variance { upper, lower };

/// Dense components of an indexed quantity at a point. Slot 0 is the slowest
/// index, so T(i, j, k) is stored at (i * n + j) * n + k.
class Tensor {
public:
    Tensor() = default;
    Tensor(int dim, std::vector<Variance> slots)
        : dim_(dim), slots_(std::move(slots)), data_(component_count(dim_, rank()), 0.0) {}

    static Tensor vector(int dim) { return Tensor(dim, {Variance::upper}); }
    static Tensor covector(int dim) { return Tensor(dim, {Variance::lower}); }
    static Tensor identity(int dim);

    int dim() const noexcept { return dim_; }
    int rank() const noexcept { return static_cast<int>(slots_.size()); }
    const std::vector<Variance>& variance() const noexcept { return slots_; }
    std::size_t size() const noexcept { return data_.size(); }

    std::span<double> data() noexcept { return data_; }
    std::span<const double> data() const noexcept { return data_; }

    template <std::integral... I>
    double& operator()(I... idx) {
        return data_[offset({static_cast<int>(idx)...})];
    }
    template <std::integral... I>
    double operator()(I... idx) const {
        return data_[offset({static_cast<int>(idx)...})];
    }
    double& at(std::span<const int> idx) { return data_[offset(idx)]; }
    double at(std::span<const int> idx) const { return data_[offset(idx)]; }

    /// Largest absolute component.
    double max_abs() const noexcept;
    /// Largest |T(..a..b..) - T(..b..a..)| over the two given slots.
    double symmetry_defect(int slot_a, int slot_b) const;
    /// Same for T(..a..b..) + T(..b..a..).
    double antisymmetry_defect(int slot_a, int slot_b) const;

    Tensor& operator+=(const Tensor& rhs);
    Tensor& operator-=(const Tensor& rhs);
    Tensor& operator*=(double s);
    friend Tensor operator+(Tensor a, const Tensor& b) { return a += b; }
    friend Tensor operator-(Tensor a, const Tensor& b) { return a -= b; }
    friend Tensor operator*(Tensor a, double s) { return a *= s; }
    friend Tensor operator*(double s, Tensor a) { return a *= s; }

    /// Sup-norm distance.
    friend double max_abs_diff(const Tensor& a, const Tensor& b);

private:
    static std::size_t component_count(int dim, int rank);
    std::size_t offset(std::span<const int> idx) const;
    std::size_t offset(std::initializer_list<int> idx) const {
        return offset(std::span<const int>(idx.begin(), idx.size()));
    }
    void require_same_shape(const Tensor& rhs) const;

    int dim_ = 0;
    std::vector<Variance> slots_;
    std::vector<double> data_;
};

}  // namespace finsler
