#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "finsler/errors.hpp"
#include "finsler/jet.hpp"

namespace finsler {

/// Scalar type of a span argument passed to a generic function body.
template <class Span>
using element_t = std::remove_cv_t<typename std::remove_cvref_t<Span>::element_type>;

/// A smooth real function on R^m that can be evaluated on plain doubles and
/// on jets. Built from one generic callable so both paths share a definition.
class Function {
public:
    using ValueFn = std::function<double(std::span<const double>)>;
    using JetFn = std::function<Jet(std::span<const Jet>)>;

    Function() = default;
    Function(int arity, ValueFn value, JetFn jet)
        : arity_(arity), value_(std::move(value)), jet_(std::move(jet)) {}

    /// `f` must be callable with std::span<const double> and std::span<const Jet>.
    template <class Generic>
    static Function from_generic(int arity, Generic f) {
        auto shared = std::make_shared<Generic>(std::move(f));
        return Function(
            arity, [shared](std::span<const double> z) -> double { return (*shared)(z); },
            [shared](std::span<const Jet> z) -> Jet { return Jet((*shared)(z)); });
    }

    static Function constant(int arity, double c) {
        return Function(
            arity, [c](std::span<const double>) { return c; },
            [c](std::span<const Jet>) { return Jet(c); });
    }

    int arity() const noexcept { return arity_; }
    explicit operator bool() const noexcept { return static_cast<bool>(value_); }

    double operator()(std::span<const double> z) const {
        check_arity(z.size());
        const double v = value_(z);
        if (!std::isfinite(v)) throw DomainError("function undefined at evaluation point");
        return v;
    }

    Jet operator()(std::span<const Jet> z) const {
        check_arity(z.size());
        return jet_(z);
    }

    double operator()(const std::vector<double>& z) const {
        return (*this)(std::span<const double>(z));
    }
    Jet operator()(const std::vector<Jet>& z) const { return (*this)(std::span<const Jet>(z)); }

private:
    void check_arity(std::size_t got) const {
        if (static_cast<int>(got) != arity_) {
            throw InvalidParameter("function of arity " + std::to_string(arity_) +
                                   " called with " + std::to_string(got) + " arguments");
        }
    }

    int arity_ = 0;
    ValueFn value_;
    JetFn jet_;
};

}  // namespace finsler
