#pragma once

#include "chi2/errors.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace chi2 {

enum class Quadrature { trapezoid, simpson };

inline std::string_view to_string(Quadrature q) noexcept {
    return q == Quadrature::simpson ? "simpson" : "trapezoid";
}

inline Quadrature parse_quadrature(std::string_view name) {
    if (name == "simpson")
        return Quadrature::simpson;
    if (name == "trapezoid")
        return Quadrature::trapezoid;
    throw ConfigError("unknown quadrature '" + std::string(name) + "'");
}

inline void require_compatible(Quadrature q, std::size_t n) {
    if (n < 2)
        throw ConfigError("quadrature needs at least 2 samples");
    if (q == Quadrature::simpson && n % 2 == 0)
        throw ConfigError("simpson quadrature requires an odd node count, got " + std::to_string(n));
}

/// Integral of uniformly spaced samples over the whole range.
inline double integrate(std::span<const double> f, double h, Quadrature q) {
    require_compatible(q, f.size());
    const std::size_t last = f.size() - 1;
    double sum = 0.0;
    if (q == Quadrature::trapezoid) {
        sum = 0.5 * (f[0] + f[last]);
        for (std::size_t k = 1; k < last; ++k)
            sum += f[k];
        return sum * h;
    }
    sum = f[0] + f[last];
    for (std::size_t k = 1; k < last; ++k)
        sum += (k % 2 == 1 ? 4.0 : 2.0) * f[k];
    return sum * h / 3.0;
}

/// Running integrals F[k] = ∫_{x_0}^{x_k} f.
///
/// The simpson variant is exact for cubics at every node: composite Simpson
/// on even k, Simpson up to k−3 followed by the 3/8 rule on odd k ≥ 3, and
/// the integrated cubic interpolant through x_0..x_3 on the first panel.
/// It accepts any node count; the odd-count restriction applies to `integrate`.
inline std::vector<double> cumulative_integral(std::span<const double> f, double h, Quadrature q) {
    const std::size_t n = f.size();
    std::vector<double> out(n, 0.0);
    if (n < 2)
        return out;
    if (q == Quadrature::trapezoid) {
        for (std::size_t k = 1; k < n; ++k)
            out[k] = out[k - 1] + 0.5 * h * (f[k - 1] + f[k]);
        return out;
    }
    if (n == 2) {
        out[1] = 0.5 * h * (f[0] + f[1]);
        return out;
    }
    if (n >= 4)
        out[1] = h / 24.0 * (9.0 * f[0] + 19.0 * f[1] - 5.0 * f[2] + f[3]);
    else
        out[1] = h / 12.0 * (5.0 * f[0] + 8.0 * f[1] - f[2]);
    for (std::size_t k = 2; k < n; ++k) {
        if (k % 2 == 0)
            out[k] = out[k - 2] + h / 3.0 * (f[k - 2] + 4.0 * f[k - 1] + f[k]);
        else
            out[k] = out[k - 3] + 3.0 * h / 8.0 * (f[k - 3] + 3.0 * f[k - 2] + 3.0 * f[k - 1] + f[k]);
    }
    return out;
}

} // namespace chi2
