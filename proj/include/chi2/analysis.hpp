#pragma once

#include "chi2/errors.hpp"
#include "chi2/model.hpp"
#include "chi2/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

namespace chi2 {

/// Receives non-fatal diagnostics. An empty sink discards them.
using WarningSink = std::function<void(std::string_view)>;

inline void warn(const WarningSink& sink, std::string_view message) {
    if (sink)
        sink(message);
}

struct LipschitzConstants {
    double L11 = 0.0;
    double L12 = 0.0;
    double L21 = 0.0;
    double L22 = 0.0;

    double max() const noexcept { return std::max(std::max(L11, L21), std::max(L12, L22)); }
};

/// Lipschitz constants of f1, f2 over the box |φ| ≤ M, |ψ| ≤ M*.
inline LipschitzConstants lipschitz(const SystemParams& params, const Bounds& bounds) {
    validate(bounds);
    const double ar = std::abs(params.r());
    const double as = std::abs(params.s());
    return {
        (1.0 + bounds.Mstar) / ar,
        bounds.M / ar,
        (bounds.M + bounds.M) / (2.0 * as),
        params.alpha() / as,
    };
}

namespace detail {

// Bracket shared by the invariance and equicontinuity estimates:
// sup|f1| + sup|f2| over the bounding box.
inline double forcing_bound(const SystemParams& params, const Bounds& b) noexcept {
    return (b.M + b.M * b.Mstar) / std::abs(params.r()) +
           (params.alpha() * b.Mstar + 0.5 * b.M * b.M) / std::abs(params.s());
}

} // namespace detail

/// Largest interval length for which the integral operator maps the
/// ball ‖φ‖ + ‖ψ‖ ≤ M + M* into itself.
inline double existence_interval_bound(const SystemParams& params, const Bounds& bounds) {
    validate(bounds);
    const double ar = std::abs(params.r());
    const double as = std::abs(params.s());
    const double M = bounds.M;
    const double Ms = bounds.Mstar;
    const double denominator = as * (M + M * Ms) + ar * (params.alpha() * Ms + 0.5 * M * M);
    if (!(denominator > 0.0))
        throw DegenerateBoundsError("existence bound undefined for M = M* = 0");
    return std::cbrt(8.0 * ar * as * (M + Ms) / denominator);
}

inline double uniqueness_constant(const SystemParams& params, double length, const Bounds& bounds) {
    if (!(length >= 0.0))
        throw DomainError("interval length must be nonnegative");
    return length * length / 8.0 * lipschitz(params, bounds).max();
}

inline double uniqueness_constant(const SystemParams& params, const Domain& domain,
                                  const Bounds& bounds) {
    return uniqueness_constant(params, domain.length(), bounds);
}

/// Lipschitz constant in x of the image T(φ, ψ).
inline double equicontinuity_constant(const SystemParams& params, double length,
                                      const Bounds& bounds) {
    validate(bounds);
    return length * length / 8.0 * detail::forcing_bound(params, bounds);
}

struct Certificate {
    SystemParams params;
    double length = 0.0;
    Bounds bounds;
    LipschitzConstants lipschitz;
    double L_max = 0.0;
    double A = 0.0;
    double K = 0.0;
    bool exists_ok = false;
    bool unique_ok = false;
};

inline Certificate certify(const SystemParams& params, double length, const Bounds& bounds) {
    if (!(length >= 0.0) || !std::isfinite(length))
        throw DomainError("interval length must be finite and nonnegative");
    Certificate c{params, length, bounds, lipschitz(params, bounds)};
    c.L_max = existence_interval_bound(params, bounds);
    c.A = uniqueness_constant(params, length, bounds);
    c.K = equicontinuity_constant(params, length, bounds);
    c.exists_ok = length <= c.L_max;
    c.unique_ok = c.A < 1.0;
    return c;
}

inline Certificate certify(const SystemParams& params, const Domain& domain, const Bounds& bounds) {
    return certify(params, domain.length(), bounds);
}

/// Nonnegative Dirichlet kernel for u'' on [a, b]. The solution of u'' = g,
/// u(a) = u(b) = 0 is u(x) = −∫ G(x, y) g(y) dy.
inline double green_function(double a, double b, double x, double y) {
    if (!(a < b))
        throw DomainError("green_function requires a < b");
    if (x < a || x > b || y < a || y > b)
        throw DomainError("green_function arguments outside [a, b]");
    if (x <= y)
        return (x - a) * (b - y) / (b - a);
    return (y - a) * (b - x) / (b - a);
}

/// max over nodes x of ∫ |G(x, y)| dy, each row split at its kink y = x.
inline double green_row_integral_max(const Grid& grid, Quadrature q) {
    const double a = grid.domain().l1();
    const double b = grid.domain().l2();
    const double h = grid.spacing();
    const std::size_t n = grid.size();
    std::vector<double> row(n);
    double best = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t j = 0; j < n; ++j)
            row[j] = std::abs(green_function(a, b, grid[k], grid[j]));
        const std::span<const double> all(row);
        const double left = cumulative_integral(all.first(k + 1), h, q).back();
        const double right = cumulative_integral(all.subspan(k), h, q).back();
        best = std::max(best, left + right);
    }
    return best;
}

/// u = −∫ G(·, y) g(y) dy at every node, in O(n) via two running integrals.
inline std::vector<double> apply_green(const Grid& grid, std::span<const double> g, Quadrature q) {
    check_dimensions(grid, g, "green integrand");
    const double a = grid.domain().l1();
    const double b = grid.domain().l2();
    const double h = grid.spacing();
    const std::size_t n = grid.size();
    std::vector<double> left_weighted(n), right_weighted(n);
    for (std::size_t j = 0; j < n; ++j) {
        left_weighted[j] = (grid[j] - a) * g[j];
        right_weighted[j] = (b - grid[j]) * g[j];
    }
    const auto left = cumulative_integral(left_weighted, h, q);
    const auto right = cumulative_integral(right_weighted, h, q);
    const double right_total = right.back();
    std::vector<double> u(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double x = grid[k];
        u[k] = -((b - x) * left[k] + (x - a) * (right_total - right[k])) / (b - a);
    }
    u.front() = 0.0;
    u.back() = 0.0;
    return u;
}

/// Derivative samples: central differences inside, second-order one-sided at the ends.
inline std::vector<double> derivative(const Grid& grid, std::span<const double> u) {
    check_dimensions(grid, u, "u");
    const std::size_t n = grid.size();
    const double h = grid.spacing();
    std::vector<double> du(n);
    du[0] = (-3.0 * u[0] + 4.0 * u[1] - u[2]) / (2.0 * h);
    du[n - 1] = (3.0 * u[n - 1] - 4.0 * u[n - 2] + u[n - 3]) / (2.0 * h);
    for (std::size_t k = 1; k + 1 < n; ++k)
        du[k] = (u[k + 1] - u[k - 1]) / (2.0 * h);
    return du;
}

namespace detail {

inline double integral_of_square(const Grid& grid, std::span<const double> u, Quadrature q) {
    std::vector<double> sq(u.size());
    std::transform(u.begin(), u.end(), sq.begin(), [](double v) { return v * v; });
    return integrate(sq, grid.spacing(), q);
}

// ∫u², ∫u'² on the grid.
struct H1Parts {
    double value = 0.0;
    double slope = 0.0;
    double total() const noexcept { return value + slope; }
};

inline H1Parts h1_parts(const Grid& grid, std::span<const double> u, Quadrature q) {
    return {integral_of_square(grid, u, q), integral_of_square(grid, derivative(grid, u), q)};
}

inline void warn_if_not_unit_coefficients(const SystemParams& params, const WarningSink& sink) {
    if (params.r() != 1.0 || params.s() != 1.0)
        warn(sink, "energy identity is derived for r = s = 1; evaluating as a diagnostic only");
}

} // namespace detail

inline double sobolev_h1_norm(const Grid& grid, std::span<const double> u,
                              Quadrature q = Quadrature::simpson, const WarningSink& sink = {}) {
    check_dimensions(grid, u, "u");
    constexpr double boundary_tol = 1e-8;
    if (std::abs(u.front()) > boundary_tol || std::abs(u.back()) > boundary_tol)
        warn(sink, "H1_0 norm evaluated on a function that does not vanish at the endpoints");
    return std::sqrt(detail::h1_parts(grid, u, q).total());
}

/// |LHS − RHS| / max(LHS, RHS) for ∫φ² + ∫φ'² = 2α∫ψ² + 2∫ψ'².
inline double energy_identity_residual(const SystemParams& params, const Grid& grid,
                                       const FieldPair& fields, Quadrature q = Quadrature::simpson,
                                       const WarningSink& sink = {}) {
    check_dimensions(grid, fields);
    detail::warn_if_not_unit_coefficients(params, sink);
    const auto phi = detail::h1_parts(grid, fields.phi, q);
    const auto psi = detail::h1_parts(grid, fields.psi, q);
    const double lhs = phi.total();
    const double rhs = 2.0 * params.alpha() * psi.value + 2.0 * psi.slope;
    const double scale = std::max({lhs, rhs, std::numeric_limits<double>::min()});
    return std::abs(lhs - rhs) / scale;
}

enum class NormOrdering { less, equal, greater };

inline std::string_view to_string(NormOrdering o) noexcept {
    switch (o) {
    case NormOrdering::less: return "less";
    case NormOrdering::equal: return "equal";
    case NormOrdering::greater: return "greater";
    }
    return "?";
}

/// Compares ‖φ‖₁ with √2 ‖ψ‖₁; within 1e-6 relative counts as equal.
inline NormOrdering norm_ordering(const SystemParams& params, const Grid& grid,
                                  const FieldPair& fields, Quadrature q = Quadrature::simpson,
                                  const WarningSink& sink = {}) {
    check_dimensions(grid, fields);
    detail::warn_if_not_unit_coefficients(params, sink);
    constexpr double equal_band = 1e-6;
    const double lhs = std::sqrt(detail::h1_parts(grid, fields.phi, q).total());
    const double rhs = std::numbers::sqrt2 * std::sqrt(detail::h1_parts(grid, fields.psi, q).total());
    if (std::abs(lhs - rhs) <= equal_band * std::max(lhs, rhs))
        return NormOrdering::equal;
    return lhs < rhs ? NormOrdering::less : NormOrdering::greater;
}

} // namespace chi2
