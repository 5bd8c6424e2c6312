#pragma once

#include "chi2/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace chi2 {

/// Coefficients of the stationary two-wave system
///
///     r φ'' − φ + φψ = 0,
///     s ψ'' − α ψ + φ²/2 = 0.
class SystemParams {
public:
    SystemParams(double r, double s, double alpha) : r_(r), s_(s), alpha_(alpha) {
        if (!std::isfinite(r) || !std::isfinite(s) || !std::isfinite(alpha))
            throw ConfigError("system parameters must be finite");
        if (r == 0.0)
            throw ConfigError("r must be nonzero");
        if (s == 0.0)
            throw ConfigError("s must be nonzero");
        if (!(alpha > 0.0))
            throw ConfigError("alpha must be positive, got " + std::to_string(alpha));
    }

    double r() const noexcept { return r_; }
    double s() const noexcept { return s_; }
    double alpha() const noexcept { return alpha_; }

private:
    double r_;
    double s_;
    double alpha_;
};

/// Closed interval [l1, l2] carrying the Dirichlet conditions.
class Domain {
public:
    Domain(double l1, double l2) : l1_(l1), l2_(l2) {
        if (!std::isfinite(l1) || !std::isfinite(l2))
            throw ConfigError("domain endpoints must be finite");
        if (!(l2 > l1))
            throw ConfigError("domain requires l2 > l1");
    }

    double l1() const noexcept { return l1_; }
    double l2() const noexcept { return l2_; }
    double length() const noexcept { return l2_ - l1_; }

private:
    double l1_;
    double l2_;
};

/// Uniform sampling of a Domain with n ≥ 3 nodes, endpoints hit exactly.
class Grid {
public:
    Grid(Domain domain, std::size_t n) : domain_(domain), nodes_(n) {
        if (n < 3)
            throw ConfigError("grid needs at least 3 nodes, got " + std::to_string(n));
        const double step = domain.length() / static_cast<double>(n - 1);
        for (std::size_t k = 0; k < n; ++k)
            nodes_[k] = domain.l1() + static_cast<double>(k) * step;
        nodes_.front() = domain.l1();
        nodes_.back() = domain.l2();
    }

    const Domain& domain() const noexcept { return domain_; }
    std::size_t size() const noexcept { return nodes_.size(); }
    double spacing() const noexcept {
        return domain_.length() / static_cast<double>(nodes_.size() - 1);
    }
    std::span<const double> nodes() const noexcept { return nodes_; }
    double operator[](std::size_t k) const noexcept { return nodes_[k]; }

private:
    Domain domain_;
    std::vector<double> nodes_;
};

/// Sampled fundamental (φ) and second-harmonic (ψ) profiles.
struct FieldPair {
    std::vector<double> phi;
    std::vector<double> psi;

    static FieldPair zeros(std::size_t n) { return {std::vector<double>(n), std::vector<double>(n)}; }

    std::size_t size() const noexcept { return phi.size(); }
};

/// Sup bounds |φ| ≤ M, |ψ| ≤ M*.
struct Bounds {
    double M = 0.0;
    double Mstar = 0.0;
};

inline void validate(const Bounds& b) {
    if (!(b.M >= 0.0) || !(b.Mstar >= 0.0) || !std::isfinite(b.M) || !std::isfinite(b.Mstar))
        throw ConfigError("bounds must be finite and nonnegative");
}

inline void check_dimensions(const Grid& grid, std::span<const double> u, const char* what) {
    if (u.size() != grid.size())
        throw DimensionError(std::string(what) + " has " + std::to_string(u.size()) +
                             " entries, grid has " + std::to_string(grid.size()));
}

inline void check_dimensions(const Grid& grid, const FieldPair& fields) {
    check_dimensions(grid, fields.phi, "phi");
    check_dimensions(grid, fields.psi, "psi");
}

inline bool all_finite(const FieldPair& fields) {
    auto finite = [](double v) { return std::isfinite(v); };
    return std::all_of(fields.phi.begin(), fields.phi.end(), finite) &&
           std::all_of(fields.psi.begin(), fields.psi.end(), finite);
}

inline double eval_f1(const SystemParams& p, double phi, double psi) noexcept {
    return (phi - phi * psi) / p.r();
}

inline double eval_f2(const SystemParams& p, double phi, double psi) noexcept {
    return (p.alpha() * psi - 0.5 * phi * phi) / p.s();
}

// f(φ + dφ, ψ + dψ) − f(φ, ψ), expanded so no nearly equal values are subtracted.
inline double eval_f1_increment(const SystemParams& p, double phi, double psi, double dphi,
                                double dpsi) noexcept {
    return (dphi - (dphi * (psi + dpsi) + phi * dpsi)) / p.r();
}

inline double eval_f2_increment(const SystemParams& p, double phi, double /*psi*/, double dphi,
                                double dpsi) noexcept {
    return (p.alpha() * dpsi - 0.5 * (2.0 * phi + dphi) * dphi) / p.s();
}

inline double sup_norm(std::span<const double> u) noexcept {
    double m = 0.0;
    for (double v : u)
        m = std::max(m, std::abs(v));
    return m;
}

inline Bounds sup_norms(const FieldPair& fields) noexcept {
    return {sup_norm(fields.phi), sup_norm(fields.psi)};
}

struct Residuals {
    std::vector<double> phi;
    std::vector<double> psi;

    double max_phi() const noexcept { return sup_norm(phi); }
    double max_psi() const noexcept { return sup_norm(psi); }
};

/// Central-difference residuals D²u − f(φ, ψ) at interior nodes; endpoints are zero.
inline Residuals residual(const SystemParams& params, const Grid& grid, const FieldPair& fields) {
    check_dimensions(grid, fields);
    const std::size_t n = grid.size();
    const double inv_h2 = 1.0 / (grid.spacing() * grid.spacing());
    Residuals out{std::vector<double>(n), std::vector<double>(n)};
    const auto& phi = fields.phi;
    const auto& psi = fields.psi;
    for (std::size_t k = 1; k + 1 < n; ++k) {
        const double d2phi = (phi[k - 1] - 2.0 * phi[k] + phi[k + 1]) * inv_h2;
        const double d2psi = (psi[k - 1] - 2.0 * psi[k] + psi[k + 1]) * inv_h2;
        out.phi[k] = d2phi - eval_f1(params, phi[k], psi[k]);
        out.psi[k] = d2psi - eval_f2(params, phi[k], psi[k]);
    }
    return out;
}

} // namespace chi2
