#pragma once

// Shared numerical substrate: Gauss-Legendre quadrature with refinement,
// principal-value integration by symmetric excision, centered finite
// differences, bisection, the principal complex square root and
// compensated summation. Everything here is deterministic.

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <thread>
#include <type_traits>
#include <utility>
#include <vector>

#include "wgqed/errors.hpp"
#include "wgqed/types.hpp"

namespace wgqed::numerics {

struct QuadratureSpec {
    int order = 8;             // starting number of Gauss points per panel
    double tolerance = 1e-12;  // relative to the integral of |f|
    int max_refinements = 10;
    double abs_floor = 0.0;    // also converged when the change is below this
};

template <class T>
struct Integral {
    T value{};
    double error = 0.0;  // magnitude of the last change between refinements
    int evaluations = 0;
};

struct GaussRule {
    std::vector<double> nodes;    // on [-1, 1]
    std::vector<double> weights;
};

/// Gauss-Legendre rule with n points. Cached per thread.
const GaussRule& gauss_legendre(int n);

/// Neumaier-compensated running sum.
template <class T>
class CompensatedSum {
public:
    void add(T x) {
        if constexpr (std::is_same_v<T, Complex>) {
            re_.add(x.real());
            im_.add(x.imag());
        } else {
            const T t = sum_ + x;
            if (std::abs(sum_) >= std::abs(x)) {
                comp_ += (sum_ - t) + x;
            } else {
                comp_ += (x - t) + sum_;
            }
            sum_ = t;
        }
    }
    T value() const {
        if constexpr (std::is_same_v<T, Complex>) {
            return {re_.value(), im_.value()};
        } else {
            return sum_ + comp_;
        }
    }

private:
    struct Empty {};
    T sum_{};
    T comp_{};
    std::conditional_t<std::is_same_v<T, Complex>, CompensatedSum<double>, Empty> re_{};
    std::conditional_t<std::is_same_v<T, Complex>, CompensatedSum<double>, Empty> im_{};
};

template <class T>
T compensated_sum(std::span<const T> xs) {
    CompensatedSum<T> acc;
    for (const T& x : xs) acc.add(x);
    return acc.value();
}

/// Fixed composite Gauss-Legendre rule: `panels` equal panels of `order` points.
/// Returns {integral of f, integral of |f|}.
template <class F>
auto integrate_fixed(F&& f, double lo, double hi, int order, int panels) {
    using R = std::decay_t<decltype(f(lo))>;
    const GaussRule& rule = gauss_legendre(order);
    const double width = (hi - lo) / panels;
    CompensatedSum<R> acc;
    CompensatedSum<double> abs_acc;
    for (int p = 0; p < panels; ++p) {
        const double mid = lo + (p + 0.5) * width;
        const double half = 0.5 * width;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            const R v = f(mid + half * rule.nodes[i]);
            acc.add(half * rule.weights[i] * v);
            abs_acc.add(half * rule.weights[i] * std::abs(v));
        }
    }
    return std::pair<R, double>{acc.value(), abs_acc.value()};
}

/// Gauss-Legendre with successive refinement. The order doubles up to 256
/// points, after which the number of panels doubles. Converged when the change
/// between two refinements is below tolerance times the integral of |f|.
template <class F>
auto integrate(F&& f, double lo, double hi, const QuadratureSpec& spec = {}) {
    using R = std::decay_t<decltype(f(lo))>;
    if (spec.order < 2 || !(spec.tolerance > 0.0)) {
        throw DomainError("integrate: order must be >= 2 and tolerance > 0");
    }
    Integral<R> out;
    if (lo == hi) return out;
    int order = spec.order;
    int panels = 1;
    R prev = integrate_fixed(f, lo, hi, order, panels).first;
    R last = prev;
    out.evaluations += order * panels;
    for (int k = 0; k < spec.max_refinements; ++k) {
        if (order < 256) {
            order *= 2;
        } else {
            panels *= 2;
        }
        auto [cur, cur_abs] = integrate_fixed(f, lo, hi, order, panels);
        out.evaluations += order * panels;
        const double change = std::abs(cur - prev);
        if (change <= std::max(spec.tolerance * cur_abs, spec.abs_floor) || change == 0.0) {
            out.value = cur;
            out.error = change;
            return out;
        }
        last = prev;
        prev = cur;
    }
    throw ConvergenceError("integrate: refinement budget exhausted",
                           {std::real(last), std::real(prev)});
}

struct PVSpec {
    double lo = 0.0;
    double hi = 0.0;
    double half_width = 1e-2;  // initial excision radius around the pole
    double tolerance = 1e-10;
    int max_refinements = 8;   // excision halvings
    QuadratureSpec inner{};
};

template <class T>
struct PVResult {
    T value{};
    std::vector<T> trace;  // value after each excision halving
};

/// Cauchy principal value of int n(x) / (x - pole) dx over [lo, hi] for a
/// smooth numerator n. The excised interval [pole-d, pole+d] is folded,
/// int_0^d (n(pole+s) - n(pole-s)) / s ds, which is regular and never forms
/// the difference x - pole near the pole; d is halved until the total changes
/// by less than the tolerance.
template <class F>
auto pv_integrate(F&& n, double pole, const PVSpec& spec) {
    using R = std::decay_t<decltype(n(pole))>;
    auto f = [&](double x) { return n(x) / (x - pole); };
    if (!(spec.half_width > 0.0)) throw DomainError("pv_integrate: half_width must be > 0");
    if (!(pole > spec.lo && pole < spec.hi)) {
        throw DomainError("pv_integrate: pole must lie strictly inside the window");
    }
    double d = std::min({spec.half_width, 0.5 * (pole - spec.lo), 0.5 * (spec.hi - pole)});
    // Pieces next to the pole behave like 1/x; a geometric partition keeps
    // each panel at a bounded ratio of distances.
    auto graded = [&](double near, double far) {
        CompensatedSum<R> acc;
        double abs_sum = 0.0;
        const double dir = far > near ? 1.0 : -1.0;
        double inner = std::abs(near - pole);
        const double outer = std::abs(far - pole);
        while (inner < outer) {
            const double next = std::min(4.0 * inner, outer);
            const double a = pole + dir * inner;
            const double b = next == outer ? far : pole + dir * next;
            auto piece = integrate(f, std::min(a, b), std::max(a, b), spec.inner);
            acc.add(piece.value);
            abs_sum += std::abs(piece.value);
            inner = next;
        }
        return std::pair<R, double>{acc.value(), abs_sum};
    };
    auto evaluate = [&](double width) {
        auto [left, left_abs] = graded(pole - width, spec.lo);
        auto [right, right_abs] = graded(pole + width, spec.hi);
        auto folded = integrate([&](double s) { return (n(pole + s) - n(pole - s)) / s; }, 0.0,
                                width, spec.inner);
        const double scale = left_abs + right_abs + std::abs(folded.value);
        return std::pair<R, double>{left + right + folded.value, scale};
    };
    PVResult<R> out;
    R prev = evaluate(d).first;
    out.trace.push_back(prev);
    for (int k = 0; k < spec.max_refinements; ++k) {
        d *= 0.5;
        auto [cur, cur_scale] = evaluate(d);
        out.trace.push_back(cur);
        if (std::abs(cur - prev) <= spec.tolerance * std::max(cur_scale, 1e-300)) {
            out.value = cur;
            return out;
        }
        prev = cur;
    }
    std::vector<double> trace;
    for (const R& v : out.trace) trace.push_back(std::real(v));
    throw ConvergenceError("pv_integrate: excision refinement did not converge", trace);
}

/// Square root with non-negative real part; Re = 0 ties resolved to Im >= 0.
Complex principal_csqrt(Complex w);

/// Bisection on a sign-changing bracket to `rel_tol` relative bracket width.
double find_root(const std::function<double(double)>& g, double lo, double hi,
                 double rel_tol = 1e-12);

/// (f(x+h) - 2 f(x) + f(x-h)) / h^2
template <class F>
auto second_difference(F&& f, double x, double h) {
    return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
}

/// (f(x+h) - f(x-h)) / (2h)
template <class F>
auto first_difference(F&& f, double x, double h) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

/// Runs body(i) for i in [0, n) across hardware threads. Each index is
/// written by exactly one worker, so results are independent of scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

/// Uniformly spaced samples, inclusive of both ends (count >= 1).
std::vector<double> linspace(double lo, double hi, std::size_t count);

}  // namespace wgqed::numerics
