#pragma once

#include "chi2/analysis.hpp"
#include "chi2/closed_form.hpp"
#include "chi2/errors.hpp"
#include "chi2/model.hpp"
#include "chi2/quadrature.hpp"

#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace chi2 {

/// Left-endpoint slopes β = φ'(l1), γ = ψ'(l1).
struct MatchingConstants {
    double beta = 0.0;
    double gamma = 0.0;
};

struct IterConfig {
    std::size_t max_iter = 100;
    double tol = 1e-12;
    Quadrature quadrature = Quadrature::simpson;
};

inline void validate(const IterConfig& cfg, const Grid& grid) {
    if (cfg.max_iter < 1)
        throw ConfigError("max_iter must be at least 1");
    if (!(cfg.tol > 0.0))
        throw ConfigError("tol must be positive");
    require_compatible(cfg.quadrature, grid.size());
}

/// sup|f1|, sup|f2| over a bounding box; they drive the factorial bound.
struct ConvergenceBound {
    double K1 = 0.0;
    double K2 = 0.0;

    static ConvergenceBound from(const SystemParams& params, const Bounds& b) {
        validate(b);
        return {(b.M + b.M * b.Mstar) / std::abs(params.r()),
                (params.alpha() * b.Mstar + 0.5 * b.M * b.M) / std::abs(params.s())};
    }
};

/// (K1^{n+1} L^{n+2} / (n+2)!, K2^{n+1} L^{n+2} / (n+2)!), formed as a running product.
inline std::pair<double, double> convergence_bound(const ConvergenceBound& bound, double L,
                                                   std::size_t n) {
    if (!(L > 0.0))
        throw DomainError("convergence bound needs L > 0");
    double phi = L;
    double psi = L;
    for (std::size_t j = 1; j <= n + 1; ++j) {
        const double denom = static_cast<double>(j + 1);
        phi *= bound.K1 * L / denom;
        psi *= bound.K2 * L / denom;
    }
    return {phi, psi};
}

/// One line of the iteration trace: differences between iterates n+1 and n.
struct PicardRecord {
    std::size_t iteration = 0; ///< n
    double diff_phi = 0.0;
    double diff_psi = 0.0;
    double bound_phi = 0.0;
    double bound_psi = 0.0;
    bool bound_applicable = true;
    double endpoint_phi = 0.0; ///< φ_{n+1}(l2)
    double endpoint_psi = 0.0;
};

struct PicardState {
    std::size_t n = 0;
    FieldPair fields;
    MatchingConstants constants;
    std::vector<PicardRecord> trace; ///< one entry per completed step
    FieldPair increment;             ///< φ_n − φ_{n−1}; empty while n = 0
    Bounds running;                  ///< sup norms over all iterates so far

    double endpoint_residual() const noexcept {
        return std::abs(fields.phi.back()) + std::abs(fields.psi.back());
    }
};

/// Non-finite values appeared during iteration.
class DivergenceError : public SolverError {
public:
    DivergenceError(std::size_t iteration, std::vector<PicardRecord> trace)
        : SolverError("iteration diverged at step " + std::to_string(iteration)),
          iteration_(iteration), trace_(std::move(trace)) {}

    std::size_t iteration() const noexcept { return iteration_; }
    const std::vector<PicardRecord>& trace() const noexcept { return trace_; }

private:
    std::size_t iteration_;
    std::vector<PicardRecord> trace_;
};

/// Endpoint matching did not reach the residual target.
class MatchingError : public SolverError {
public:
    MatchingError(double residual, MatchingConstants last, std::vector<PicardRecord> trace)
        : SolverError("endpoint matching failed, residual " + std::to_string(residual)),
          residual_(residual), last_(last), trace_(std::move(trace)) {}

    double residual() const noexcept { return residual_; }
    MatchingConstants last() const noexcept { return last_; }
    const std::vector<PicardRecord>& trace() const noexcept { return trace_; }

private:
    double residual_;
    MatchingConstants last_;
    std::vector<PicardRecord> trace_;
};

/// φ0 = β(x − l1), ψ0 = γ(x − l1).
inline PicardState initial_state(const Grid& grid, MatchingConstants consts) {
    PicardState state;
    state.constants = consts;
    state.fields = FieldPair::zeros(grid.size());
    const double l1 = grid.domain().l1();
    for (std::size_t k = 0; k < grid.size(); ++k) {
        state.fields.phi[k] = consts.beta * (grid[k] - l1);
        state.fields.psi[k] = consts.gamma * (grid[k] - l1);
    }
    state.running = sup_norms(state.fields);
    return state;
}

/// Start from arbitrary fields (n = 0) with the given slopes.
inline PicardState state_from_fields(FieldPair fields, MatchingConstants consts) {
    PicardState state;
    state.constants = consts;
    state.running = sup_norms(fields);
    state.fields = std::move(fields);
    return state;
}

namespace detail {

// ∫_{l1}^{x_k} (x_k − t) g(t) dt at every node, as τ·∫g − ∫τg with τ = t − l1.
inline std::vector<double> volterra_convolution(const Grid& grid, std::span<const double> g,
                                                Quadrature q) {
    const std::size_t n = grid.size();
    const double l1 = grid.domain().l1();
    const double h = grid.spacing();
    std::vector<double> weighted(n);
    for (std::size_t k = 0; k < n; ++k)
        weighted[k] = (grid[k] - l1) * g[k];
    const auto plain = cumulative_integral(g, h, q);
    const auto moment = cumulative_integral(weighted, h, q);
    std::vector<double> out(n);
    for (std::size_t k = 0; k < n; ++k)
        out[k] = (grid[k] - l1) * plain[k] - moment[k];
    return out;
}

} // namespace detail

/// Advances the Volterra recursion by one step.
///
/// The increment δ_n = φ_{n+1} − φ_n is integrated directly from
/// f(φ_n, ψ_n) − f(φ_{n−1}, ψ_{n−1}), so difference norms stay accurate far
/// below the rounding level of the fields themselves. When `supplied` bounds
/// are given, K1, K2 come from them and the record flags whether the iterates
/// stayed inside; otherwise the running sup norms are used.
inline PicardState picard_step(const SystemParams& params, const Grid& grid, PicardState state,
                               const IterConfig& cfg, const std::optional<Bounds>& supplied = {}) {
    check_dimensions(grid, state.fields);
    const std::size_t n = grid.size();
    const double l1 = grid.domain().l1();
    std::vector<double> g1(n), g2(n);
    FieldPair delta = FieldPair::zeros(n);

    if (state.n == 0) {
        for (std::size_t k = 0; k < n; ++k) {
            g1[k] = eval_f1(params, state.fields.phi[k], state.fields.psi[k]);
            g2[k] = eval_f2(params, state.fields.phi[k], state.fields.psi[k]);
        }
        const auto c1 = detail::volterra_convolution(grid, g1, cfg.quadrature);
        const auto c2 = detail::volterra_convolution(grid, g2, cfg.quadrature);
        for (std::size_t k = 0; k < n; ++k) {
            const double tau = grid[k] - l1;
            delta.phi[k] = (state.constants.beta * tau - state.fields.phi[k]) + c1[k];
            delta.psi[k] = (state.constants.gamma * tau - state.fields.psi[k]) + c2[k];
        }
    } else {
        const FieldPair& prev = state.increment;
        for (std::size_t k = 0; k < n; ++k) {
            // previous iterate = current − increment
            const double phi_old = state.fields.phi[k] - prev.phi[k];
            const double psi_old = state.fields.psi[k] - prev.psi[k];
            g1[k] = eval_f1_increment(params, phi_old, psi_old, prev.phi[k], prev.psi[k]);
            g2[k] = eval_f2_increment(params, phi_old, psi_old, prev.phi[k], prev.psi[k]);
        }
        delta.phi = detail::volterra_convolution(grid, g1, cfg.quadrature);
        delta.psi = detail::volterra_convolution(grid, g2, cfg.quadrature);
    }

    for (std::size_t k = 0; k < n; ++k) {
        state.fields.phi[k] += delta.phi[k];
        state.fields.psi[k] += delta.psi[k];
    }
    if (!all_finite(state.fields) || !all_finite(delta))
        throw DivergenceError(state.n + 1, state.trace);

    const Bounds now = sup_norms(state.fields);
    state.running.M = std::max(state.running.M, now.M);
    state.running.Mstar = std::max(state.running.Mstar, now.Mstar);

    PicardRecord rec;
    rec.iteration = state.n;
    rec.diff_phi = sup_norm(delta.phi);
    rec.diff_psi = sup_norm(delta.psi);
    const Bounds& box = supplied ? *supplied : state.running;
    rec.bound_applicable = !supplied || (state.running.M <= supplied->M &&
                                         state.running.Mstar <= supplied->Mstar);
    const auto [bphi, bpsi] =
        convergence_bound(ConvergenceBound::from(params, box), grid.domain().length(), state.n);
    rec.bound_phi = bphi;
    rec.bound_psi = bpsi;
    rec.endpoint_phi = state.fields.phi.back();
    rec.endpoint_psi = state.fields.psi.back();

    state.trace.push_back(rec);
    state.increment = std::move(delta);
    ++state.n;
    return state;
}

/// Which closed form of the first iterate to use.
///
/// `printed` keeps the commonly quoted coefficients 1/4! on the quartic terms;
/// `scheme` uses 1/12, which is what the recursion actually produces from
/// linear starting functions.
enum class FirstIterateForm { printed, scheme };

namespace detail {

inline double quartic_coefficient(FirstIterateForm form) noexcept {
    return form == FirstIterateForm::printed ? 1.0 / 24.0 : 1.0 / 12.0;
}

} // namespace detail

inline ProfileValue first_iterate(const SystemParams& params, const Domain& domain,
                                  MatchingConstants c, double x,
                                  FirstIterateForm form = FirstIterateForm::printed) {
    if (x < domain.l1() || x > domain.l2())
        throw DomainError("first_iterate evaluated outside the domain");
    const double t = x - domain.l1();
    const double t3 = t * t * t;
    const double t4 = t3 * t;
    const double q = detail::quartic_coefficient(form);
    const double b = c.beta;
    const double g = c.gamma;
    return {b * t + (b * t3 / 6.0 - q * b * g * t4) / params.r(),
            g * t + (params.alpha() * g * t3 / 6.0 - q * 0.5 * b * b * t4) / params.s()};
}

enum class BetaSign { positive, negative };

struct MatchingOptions {
    FirstIterateForm form = FirstIterateForm::printed;
    BetaSign sign = BetaSign::positive;
    /// Use the commonly quoted β bracket [1 + L²/(6s)]; elimination gives [1 + L²/(6r)].
    bool printed_beta_bracket = false;
};

/// β² for the order-1 matching equations; negative means no real root.
inline double order1_beta_radicand(const SystemParams& params, const Domain& domain,
                                   const MatchingOptions& opt = {}) {
    const double L = domain.length();
    const double L2 = L * L;
    const double L6 = L2 * L2 * L2;
    const double q = detail::quartic_coefficient(opt.form);
    const double first = 1.0 + L2 / (6.0 * (opt.printed_beta_bracket ? params.s() : params.r()));
    const double second = 1.0 + params.alpha() * L2 / (6.0 * params.s());
    return 2.0 * params.r() * params.s() * first * second / (q * q * L6);
}

/// Nontrivial root of φ1(l2) = ψ1(l2) = 0 for the closed-form first iterate.
inline MatchingConstants match_constants_order1(const SystemParams& params, const Domain& domain,
                                                const MatchingOptions& opt = {}) {
    const double L = domain.length();
    const double q = detail::quartic_coefficient(opt.form);
    const double gamma = params.r() * (1.0 + L * L / (6.0 * params.r())) / (q * L * L * L);
    const double radicand = order1_beta_radicand(params, domain, opt);
    if (!(radicand >= 0.0))
        throw NoRealSolutionError("order-1 matching has no real solution, beta^2 = " +
                                      std::to_string(radicand),
                                  radicand);
    const double beta = std::sqrt(radicand);
    return {opt.sign == BetaSign::positive ? beta : -beta, gamma};
}

struct SolveOptions {
    /// Skip matching and iterate with these slopes.
    std::optional<MatchingConstants> fixed_constants;
    MatchingOptions matching;
    std::optional<Bounds> bounds;
    std::size_t newton_max_iter = 60;
    double endpoint_tol = 1e-10;
};

namespace detail {

inline PicardState run_picard(const SystemParams& params, const Grid& grid, const IterConfig& cfg,
                              std::size_t order, MatchingConstants c,
                              const std::optional<Bounds>& bounds) {
    PicardState state = initial_state(grid, c);
    const std::size_t steps = std::min(order, cfg.max_iter);
    for (std::size_t i = 0; i < steps; ++i) {
        state = picard_step(params, grid, std::move(state), cfg, bounds);
        const auto& last = state.trace.back();
        if (std::max(last.diff_phi, last.diff_psi) < cfg.tol)
            break;
    }
    return state;
}

inline std::array<double, 2> endpoint_map(const SystemParams& params, const Grid& grid,
                                          const IterConfig& cfg, std::size_t order,
                                          MatchingConstants c) {
    const auto s = run_picard(params, grid, cfg, order, c, std::nullopt);
    return {s.fields.phi.back(), s.fields.psi.back()};
}

// Damped Newton on (β, γ) ↦ (φ_order(l2), ψ_order(l2)) with a forward-difference Jacobian.
// (β, γ) = (0, 0) always matches, so the map is deflated by 1 + |seed|²/|c|² to keep
// the iteration from sliding into the trivial root.
inline MatchingConstants newton_match(const SystemParams& params, const Grid& grid,
                                      const IterConfig& cfg, std::size_t order,
                                      MatchingConstants seed, const SolveOptions& opt) {
    constexpr double rel_step = 1e-6;
    constexpr double polish_tol = 1e-13;
    auto norm1 = [](const std::array<double, 2>& v) { return std::abs(v[0]) + std::abs(v[1]); };
    const double seed_sq = std::max(seed.beta * seed.beta + seed.gamma * seed.gamma, 1e-300);
    auto deflated = [&](MatchingConstants c, std::array<double, 2>& raw) {
        raw = endpoint_map(params, grid, cfg, order, c);
        const double m = 1.0 + seed_sq / (c.beta * c.beta + c.gamma * c.gamma);
        return std::array<double, 2>{m * raw[0], m * raw[1]};
    };

    MatchingConstants x = seed;
    std::array<double, 2> F;
    auto G = deflated(x, F);
    for (std::size_t it = 0; it < opt.newton_max_iter && norm1(F) > polish_tol; ++it) {
        const double hb = rel_step * std::max(1.0, std::abs(x.beta));
        const double hg = rel_step * std::max(1.0, std::abs(x.gamma));
        std::array<double, 2> unused;
        const auto Gb = deflated({x.beta + hb, x.gamma}, unused);
        const auto Gg = deflated({x.beta, x.gamma + hg}, unused);
        const double j11 = (Gb[0] - G[0]) / hb, j12 = (Gg[0] - G[0]) / hg;
        const double j21 = (Gb[1] - G[1]) / hb, j22 = (Gg[1] - G[1]) / hg;
        const double det = j11 * j22 - j12 * j21;
        if (!std::isfinite(det) || det == 0.0)
            break;
        const double db = -(j22 * G[0] - j12 * G[1]) / det;
        const double dg = -(-j21 * G[0] + j11 * G[1]) / det;

        bool improved = false;
        for (double lambda = 1.0; lambda > 1e-6; lambda *= 0.5) {
            const MatchingConstants trial{x.beta + lambda * db, x.gamma + lambda * dg};
            std::array<double, 2> Ft, Gt;
            try {
                Gt = deflated(trial, Ft);
            } catch (const DivergenceError&) {
                continue;
            }
            if (norm1(Gt) < norm1(G)) {
                x = trial;
                F = Ft;
                G = Gt;
                improved = true;
                break;
            }
        }
        if (!improved)
            break;
    }
    const double res = norm1(F);
    if (!(res <= opt.endpoint_tol)) {
        const auto s = run_picard(params, grid, cfg, order, x, std::nullopt);
        throw MatchingError(res, x, s.trace);
    }
    return x;
}

} // namespace detail

/// Picard solution of the BVP at the given truncation order.
///
/// Unless slopes are fixed, (β, γ) are re-matched at each order 1..order by
/// Newton continuation, starting from the closed-form order-1 constants of the
/// recursion. The returned state has |φ(l2)| + |ψ(l2)| ≤ endpoint_tol.
inline PicardState solve_picard(const SystemParams& params, const Grid& grid, const IterConfig& cfg,
                                std::size_t order, const SolveOptions& opt = {}) {
    validate(cfg, grid);
    if (order < 1)
        throw ConfigError("picard order must be at least 1");
    if (opt.fixed_constants)
        return detail::run_picard(params, grid, cfg, order, *opt.fixed_constants, opt.bounds);

    MatchingOptions seed_opt = opt.matching;
    seed_opt.form = FirstIterateForm::scheme;
    MatchingConstants c = match_constants_order1(params, grid.domain(), seed_opt);
    for (std::size_t k = 1; k <= order; ++k)
        c = detail::newton_match(params, grid, cfg, k, c, opt);
    return detail::run_picard(params, grid, cfg, order, c, opt.bounds);
}

struct GreenRecord {
    std::size_t iteration = 0;
    double diff_phi = 0.0;
    double diff_psi = 0.0;

    double combined() const noexcept { return diff_phi + diff_psi; }
};

struct GreenResult {
    FieldPair fields;
    std::vector<GreenRecord> trace;
    bool converged = false;
};

/// Fixed-point iteration (φ, ψ) ← (T1(φ, ψ), T2(φ, ψ)) with the Dirichlet kernel.
inline GreenResult green_kernel_iterate(const SystemParams& params, const Grid& grid,
                                        FieldPair start, const IterConfig& cfg) {
    validate(cfg, grid);
    check_dimensions(grid, start);
    const std::size_t n = grid.size();
    GreenResult out{std::move(start), {}, false};
    std::vector<double> g1(n), g2(n);
    for (std::size_t it = 0; it < cfg.max_iter; ++it) {
        for (std::size_t k = 0; k < n; ++k) {
            g1[k] = eval_f1(params, out.fields.phi[k], out.fields.psi[k]);
            g2[k] = eval_f2(params, out.fields.phi[k], out.fields.psi[k]);
        }
        FieldPair next{apply_green(grid, g1, cfg.quadrature), apply_green(grid, g2, cfg.quadrature)};
        if (!all_finite(next))
            throw DivergenceError(it + 1, {});
        GreenRecord rec{it, 0.0, 0.0};
        for (std::size_t k = 0; k < n; ++k) {
            rec.diff_phi = std::max(rec.diff_phi, std::abs(next.phi[k] - out.fields.phi[k]));
            rec.diff_psi = std::max(rec.diff_psi, std::abs(next.psi[k] - out.fields.psi[k]));
        }
        out.fields = std::move(next);
        out.trace.push_back(rec);
        if (std::max(rec.diff_phi, rec.diff_psi) < cfg.tol) {
            out.converged = true;
            break;
        }
    }
    return out;
}

} // namespace chi2
