#pragma once

// Command layer behind the chi2soliton CLI. Each command turns a RunConfig
// into text outputs; the executable only parses flags and writes files.

#include "chi2/analysis.hpp"
#include "chi2/closed_form.hpp"
#include "chi2/errors.hpp"
#include "chi2/fixedpoint.hpp"
#include "chi2/io.hpp"
#include "chi2/model.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace chi2 {

enum class OutputFormat { csv, json };

struct RunConfig {
    double r = 1.0;
    double s = 1.0;
    double alpha = 1.0;
    double l1 = -10.0;
    double l2 = 10.0;
    std::size_t n = 2001;
    double c2 = 0.0;
    int series_order = 0;
    std::size_t picard_order = 1;
    std::size_t max_iter = 100;
    double tol = 1e-12;
    std::string quadrature = "simpson";
    std::string method = "picard";
    std::string beta_sign = "+";
    bool printed_beta_formula = false;
    std::string format = "csv";
    std::string out;
    std::string trace;
    std::string input;
    double M = 1.0;
    double Mstar = 1.0;
    std::string green_start = "random";
    std::uint64_t seed = 0;

    SystemParams params() const { return {r, s, alpha}; }
    Domain domain() const { return {l1, l2}; }
    Grid grid() const { return {domain(), n}; }
    IterConfig iter() const { return {max_iter, tol, parse_quadrature(quadrature)}; }
    Bounds bounds() const {
        Bounds b{M, Mstar};
        validate(b);
        return b;
    }
    OutputFormat output_format() const {
        if (format == "csv")
            return OutputFormat::csv;
        if (format == "json")
            return OutputFormat::json;
        throw ConfigError("unknown format '" + format + "'");
    }
    BetaSign sign() const {
        if (beta_sign == "+")
            return BetaSign::positive;
        if (beta_sign == "-")
            return BetaSign::negative;
        throw ConfigError("beta sign must be '+' or '-'");
    }
};

/// Overlays the fields present in a JSON config document; unknown keys are rejected.
inline void apply_config(RunConfig& cfg, const json& doc) {
    if (!doc.is_object())
        throw ConfigError("config must be a JSON object");
    try {
        for (const auto& [key, value] : doc.items()) {
            if (key == "r") cfg.r = value.get<double>();
            else if (key == "s") cfg.s = value.get<double>();
            else if (key == "alpha") cfg.alpha = value.get<double>();
            else if (key == "l1") cfg.l1 = value.get<double>();
            else if (key == "l2") cfg.l2 = value.get<double>();
            else if (key == "n") cfg.n = value.get<std::size_t>();
            else if (key == "c2") cfg.c2 = value.get<double>();
            else if (key == "order") cfg.series_order = value.get<int>();
            else if (key == "picard_order") cfg.picard_order = value.get<std::size_t>();
            else if (key == "max_iter") cfg.max_iter = value.get<std::size_t>();
            else if (key == "tol") cfg.tol = value.get<double>();
            else if (key == "quadrature") cfg.quadrature = value.get<std::string>();
            else if (key == "method") cfg.method = value.get<std::string>();
            else if (key == "beta_sign") cfg.beta_sign = value.get<std::string>();
            else if (key == "printed_beta_formula") cfg.printed_beta_formula = value.get<bool>();
            else if (key == "format") cfg.format = value.get<std::string>();
            else if (key == "out") cfg.out = value.get<std::string>();
            else if (key == "trace") cfg.trace = value.get<std::string>();
            else if (key == "input") cfg.input = value.get<std::string>();
            else if (key == "M") cfg.M = value.get<double>();
            else if (key == "Mstar") cfg.Mstar = value.get<double>();
            else if (key == "green_start") cfg.green_start = value.get<std::string>();
            else if (key == "seed") cfg.seed = value.get<std::uint64_t>();
            else throw ConfigError("unknown config key '" + key + "'");
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config value has wrong type: ") + e.what());
    }
}

struct CommandOutput {
    std::string primary;
    std::string sidecar; ///< empty when the command has none
    std::vector<std::string> notes;
};

namespace detail {

inline std::string render_profile(const RunConfig& cfg, const Grid& grid, const FieldPair& fields) {
    if (cfg.output_format() == OutputFormat::json)
        return profile_to_json(grid, fields).dump(2) + "\n";
    return to_csv(grid, fields);
}

inline WarningSink collect_into(std::vector<std::string>& notes) {
    return [&notes](std::string_view msg) { notes.emplace_back("warning: " + std::string(msg)); };
}

inline FieldPair green_start_fields(const RunConfig& cfg, const Grid& grid) {
    FieldPair start = FieldPair::zeros(grid.size());
    if (cfg.green_start == "zero")
        return start;
    if (cfg.green_start != "random")
        throw ConfigError("green start must be 'random' or 'zero'");
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (std::size_t k = 1; k + 1 < grid.size(); ++k) {
        start.phi[k] = unit(rng);
        start.psi[k] = unit(rng);
    }
    return start;
}

} // namespace detail

inline CommandOutput cmd_exact(const RunConfig& cfg) {
    const Grid grid = cfg.grid();
    const ExactSolutionParams p{cfg.c2};
    validate(p);
    CommandOutput out;
    out.primary = detail::render_profile(cfg, grid, sample_closed_form(ClosedFormKind::exact, grid, p));
    out.notes.emplace_back(
        "note: components are assigned so that phi = sqrt(2)*psi (peak phi = 3/sqrt(2), "
        "peak psi = 3/2); the commonly quoted closed form lists the two amplitudes the other "
        "way round, which does not satisfy the system");
    if (cfg.r != 1.0 || cfg.s != 1.0 || cfg.alpha != 1.0)
        out.notes.emplace_back("note: the exact profile is the r = s = alpha = 1 solution; "
                               "the supplied coefficients are not used");
    return out;
}

inline CommandOutput cmd_series(const RunConfig& cfg, ClosedFormKind kind) {
    if (kind == ClosedFormKind::exact)
        throw ConfigError("series kind must be 'bright' or 'dark'");
    const Grid grid = cfg.grid();
    const SeriesParams p{cfg.alpha, cfg.s, cfg.series_order};
    validate(p);
    CommandOutput out;
    out.primary = detail::render_profile(cfg, grid, sample_closed_form(kind, grid, p));
    return out;
}

inline CommandOutput cmd_solve(const RunConfig& cfg) {
    const SystemParams params = cfg.params();
    const Grid grid = cfg.grid();
    const IterConfig iter = cfg.iter();
    CommandOutput out;
    json side;

    if (cfg.method == "green") {
        auto result = green_kernel_iterate(params, grid, detail::green_start_fields(cfg, grid), iter);
        out.primary = detail::render_profile(cfg, grid, result.fields);
        side = {{"method", "green"},
                {"converged", result.converged},
                {"iterations", result.trace.size()},
                {"endpoint_residual", std::abs(result.fields.phi.back()) + std::abs(result.fields.psi.back())},
                {"trace", to_json(result.trace)}};
        if (!result.converged)
            out.notes.emplace_back("warning: green iteration stopped at max_iter without reaching tol");
    } else if (cfg.method == "picard") {
        SolveOptions opt;
        opt.matching.sign = cfg.sign();
        opt.matching.printed_beta_bracket = cfg.printed_beta_formula;
        const PicardState state = solve_picard(params, grid, iter, cfg.picard_order, opt);
        out.primary = detail::render_profile(cfg, grid, state.fields);
        side = {{"method", "picard"},
                {"order", cfg.picard_order},
                {"beta", state.constants.beta},
                {"gamma", state.constants.gamma},
                {"endpoint_residual", state.endpoint_residual()},
                {"trace", to_json(state.trace)}};
        MatchingOptions printed = opt.matching;
        printed.form = FirstIterateForm::printed;
        const auto c = match_constants_order1(params, grid.domain(), printed);
        side["order1_printed_closed_form"] = {{"beta", c.beta}, {"gamma", c.gamma}};
    } else {
        throw ConfigError("method must be 'picard' or 'green'");
    }
    out.sidecar = side.dump(2) + "\n";
    return out;
}

inline CommandOutput cmd_certify(const RunConfig& cfg) {
    const Certificate c = certify(cfg.params(), cfg.domain(), cfg.bounds());
    CommandOutput out;
    out.primary = to_json(c).dump(2) + "\n";
    return out;
}

inline CommandOutput cmd_verify(const RunConfig& cfg, std::string_view profile_text) {
    const SystemParams params = cfg.params();
    const Profile profile = parse_csv_profile(profile_text);
    const Quadrature q = parse_quadrature(cfg.quadrature);
    require_compatible(q, profile.grid.size());

    CommandOutput out;
    const WarningSink sink = detail::collect_into(out.notes);
    const Residuals res = residual(params, profile.grid, profile.fields);
    const double energy = energy_identity_residual(params, profile.grid, profile.fields, q, sink);
    const NormOrdering ordering = norm_ordering(params, profile.grid, profile.fields, q);
    const json report{
        {"params", to_json(params)},
        {"n", profile.grid.size()},
        {"l1", profile.grid.domain().l1()},
        {"l2", profile.grid.domain().l2()},
        {"max_residual_phi", res.max_phi()},
        {"max_residual_psi", res.max_psi()},
        {"boundary_phi", {profile.fields.phi.front(), profile.fields.phi.back()}},
        {"boundary_psi", {profile.fields.psi.front(), profile.fields.psi.back()}},
        {"energy_identity_residual", energy},
        {"norm_ordering", to_string(ordering)},
    };
    out.primary = report.dump(2) + "\n";
    return out;
}

} // namespace chi2
