#pragma once

#include "chi2/errors.hpp"
#include "chi2/model.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <string_view>
#include <variant>

namespace chi2 {

struct ProfileValue {
    double phi = 0.0;
    double psi = 0.0;
};

/// Translation constant of the α = 1 solution; the first integral is fixed at c1 = 0.
struct ExactSolutionParams {
    double c2 = 0.0;
};

/// Truncation of the bright/dark asymptotic series in inverse powers of α.
struct SeriesParams {
    double alpha = 1.0;
    double s = 1.0;
    int order = 0; ///< correction terms kept beyond the leading one, 0 or 1
};

inline void validate(const ExactSolutionParams& p) {
    if (!std::isfinite(p.c2))
        throw ConfigError("c2 must be finite");
}

inline void validate(const SeriesParams& p) {
    if (!(p.alpha > 0.0) || !std::isfinite(p.alpha))
        throw ConfigError("series requires a finite alpha > 0");
    if (!std::isfinite(p.s))
        throw ConfigError("series requires finite s");
    if (p.order != 0 && p.order != 1)
        throw ConfigError("series order must be 0 or 1, got " + std::to_string(p.order));
}

namespace detail {

inline double sech(double u) noexcept { return 1.0 / std::cosh(u); }

} // namespace detail

/// Decoupled α = 1 solution (r = s = 1): ψ = (3/2) sech²((x + c2)/2), φ = √2 ψ.
///
/// The component assignment follows φ = √2 ψ, which is what both equations of
/// the system require. 1 − tanh² is evaluated as sech² to keep the tails accurate.
inline ProfileValue exact_alpha1(double x, const ExactSolutionParams& p = {}) noexcept {
    const double sech_u = detail::sech(0.5 * (x + p.c2));
    const double psi = 1.5 * sech_u * sech_u;
    return {std::numbers::sqrt2 * psi, psi};
}

/// Values with analytic first and second derivatives in x.
struct ExactJet {
    double phi, dphi, d2phi;
    double psi, dpsi, d2psi;
};

inline ExactJet exact_alpha1_jet(double x, const ExactSolutionParams& p = {}) noexcept {
    const double u = 0.5 * (x + p.c2);
    const double S = detail::sech(u);
    const double T = std::tanh(u);
    const double S2 = S * S;
    const double psi = 1.5 * S2;
    const double dpsi = -1.5 * S2 * T;
    const double d2psi = 0.75 * S2 * (2.0 * T * T - S2);
    constexpr double k = std::numbers::sqrt2;
    return {k * psi, k * dpsi, k * d2psi, psi, dpsi, d2psi};
}

/// Bright (r = +1) series through the printed α^{-1/2} / α^{-1} corrections.
inline ProfileValue bright_series(double x, const SeriesParams& p) {
    validate(p);
    const double S = detail::sech(x);
    const double T = std::tanh(x);
    const double S2 = S * S;
    const double root_alpha = std::sqrt(p.alpha);
    ProfileValue v{2.0 * root_alpha * S, 2.0 * S2};
    if (p.order >= 1) {
        v.phi += 4.0 * p.s / root_alpha * T * T * S;
        v.psi += p.s / p.alpha * (16.0 * S2 - 20.0 * S2 * S2);
    }
    return v;
}

/// Dark (r = −1) series in τ = x/√2. Both correction terms carry s α^{-1/2}.
// The operator between the two leading φ terms is missing in print; read as '+'.
inline ProfileValue dark_series(double x, const SeriesParams& p) {
    validate(p);
    const double tau = x / std::numbers::sqrt2;
    const double S = detail::sech(tau);
    const double T = std::tanh(tau);
    const double S2 = S * S;
    const double root_alpha = std::sqrt(p.alpha);
    ProfileValue v{std::numbers::sqrt2 * root_alpha * T, T * T};
    if (p.order >= 1) {
        v.phi += std::numbers::sqrt2 * p.s / root_alpha * (tau * S2 - T * S2);
        v.psi += p.s / root_alpha * (2.0 * tau * T * S2 - 4.0 * S2 + 5.0 * S2 * S2);
    }
    return v;
}

enum class ClosedFormKind { exact, bright, dark };

inline std::string_view to_string(ClosedFormKind k) noexcept {
    switch (k) {
    case ClosedFormKind::exact: return "exact";
    case ClosedFormKind::bright: return "bright";
    case ClosedFormKind::dark: return "dark";
    }
    return "?";
}

inline ClosedFormKind parse_closed_form_kind(std::string_view name) {
    if (name == "exact")
        return ClosedFormKind::exact;
    if (name == "bright")
        return ClosedFormKind::bright;
    if (name == "dark")
        return ClosedFormKind::dark;
    throw ConfigError("unknown closed form '" + std::string(name) + "'");
}

using ClosedFormParams = std::variant<ExactSolutionParams, SeriesParams>;

inline FieldPair sample_closed_form(ClosedFormKind kind, const Grid& grid,
                                    const ClosedFormParams& params) {
    const bool wants_exact = kind == ClosedFormKind::exact;
    if (wants_exact != std::holds_alternative<ExactSolutionParams>(params))
        throw ConfigError("parameters do not match closed form '" + std::string(to_string(kind)) + "'");

    FieldPair out = FieldPair::zeros(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) {
        ProfileValue v;
        switch (kind) {
        case ClosedFormKind::exact: v = exact_alpha1(grid[k], std::get<ExactSolutionParams>(params)); break;
        case ClosedFormKind::bright: v = bright_series(grid[k], std::get<SeriesParams>(params)); break;
        case ClosedFormKind::dark: v = dark_series(grid[k], std::get<SeriesParams>(params)); break;
        }
        out.phi[k] = v.phi;
        out.psi[k] = v.psi;
    }
    return out;
}

} // namespace chi2
