#include "chi2/chi2.hpp"

#include <CLI11.hpp>

#include <functional>
#include <iostream>
#include <string>
#include <vector>

namespace {

struct Override {
    CLI::Option* option;
    std::function<void(chi2::RunConfig&)> apply;
};

// Binds a flag to a staging config; the value is copied onto the final config
// only when the flag was given, so flags override the config file.
template <typename T>
void add_flag(CLI::App& app, std::vector<Override>& table, chi2::RunConfig& staged,
              const std::string& name, T chi2::RunConfig::*field, const std::string& help) {
    CLI::Option* opt = app.add_option(name, staged.*field, help);
    table.push_back({opt, [&staged, field](chi2::RunConfig& cfg) { cfg.*field = staged.*field; }});
}

void emit(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-")
        std::cout << content;
    else
        chi2::write_file(path, content);
}

void print_trace(const std::vector<chi2::PicardRecord>& trace) {
    if (!trace.empty())
        std::cerr << "trace: " << chi2::to_json(trace).dump() << "\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-wave chi(2) soliton solver: closed forms, Picard and Green iteration, "
                 "existence/uniqueness certificates"};
    app.require_subcommand(1);
    app.fallthrough();

    chi2::RunConfig staged;
    std::vector<Override> table;
    std::string config_path;
    bool printed_beta = false;

    app.add_option("--config", config_path, "JSON config file; flags override its fields");
    add_flag(app, table, staged, "--r", &chi2::RunConfig::r, "coefficient r");
    add_flag(app, table, staged, "--s", &chi2::RunConfig::s, "coefficient s");
    add_flag(app, table, staged, "--alpha", &chi2::RunConfig::alpha, "soliton parameter alpha > 0");
    add_flag(app, table, staged, "--l1", &chi2::RunConfig::l1, "left endpoint");
    add_flag(app, table, staged, "--l2", &chi2::RunConfig::l2, "right endpoint");
    add_flag(app, table, staged, "--n", &chi2::RunConfig::n, "grid node count");
    add_flag(app, table, staged, "--c2", &chi2::RunConfig::c2, "translation constant of the exact solution");
    add_flag(app, table, staged, "--order", &chi2::RunConfig::series_order, "series truncation order (0 or 1)");
    add_flag(app, table, staged, "--picard-order", &chi2::RunConfig::picard_order, "Picard iteration order");
    add_flag(app, table, staged, "--max-iter", &chi2::RunConfig::max_iter, "iteration cap");
    add_flag(app, table, staged, "--tol", &chi2::RunConfig::tol, "successive-difference tolerance");
    add_flag(app, table, staged, "--quadrature", &chi2::RunConfig::quadrature, "trapezoid | simpson");
    add_flag(app, table, staged, "--method", &chi2::RunConfig::method, "picard | green");
    add_flag(app, table, staged, "--beta-sign", &chi2::RunConfig::beta_sign, "+ | -");
    add_flag(app, table, staged, "--format", &chi2::RunConfig::format, "csv | json");
    add_flag(app, table, staged, "--out", &chi2::RunConfig::out, "output path (default stdout)");
    add_flag(app, table, staged, "--trace", &chi2::RunConfig::trace, "solve: sidecar JSON path");
    add_flag(app, table, staged, "--M", &chi2::RunConfig::M, "certify: sup bound for |phi|");
    add_flag(app, table, staged, "--Mstar", &chi2::RunConfig::Mstar, "certify: sup bound for |psi|");
    add_flag(app, table, staged, "--green-start", &chi2::RunConfig::green_start, "green: random | zero");
    add_flag(app, table, staged, "--seed", &chi2::RunConfig::seed, "green: seed of the random start");
    CLI::Option* printed_opt = app.add_flag("--printed-beta-formula", printed_beta,
                                            "use the commonly quoted beta bracket [1 + L^2/(6s)]");

    auto* exact = app.add_subcommand("exact", "sample the exact alpha = 1 solution");
    auto* series = app.add_subcommand("series", "sample the bright or dark asymptotic series");
    std::string series_kind;
    series->add_option("kind", series_kind, "bright | dark")->required();
    auto* solve = app.add_subcommand("solve", "solve the boundary value problem");
    auto* certify = app.add_subcommand("certify", "existence/uniqueness certificate");
    auto* verify = app.add_subcommand("verify", "check a profile against the system");
    std::string input_path;
    verify->add_option("input", input_path, "profile CSV (x,phi,psi)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        chi2::RunConfig cfg;
        if (!config_path.empty()) {
            chi2::json doc;
            try {
                doc = chi2::json::parse(chi2::read_file(config_path));
            } catch (const chi2::json::parse_error& e) {
                throw chi2::ParseError(std::string("config is not valid JSON: ") + e.what(), 1);
            }
            chi2::apply_config(cfg, doc);
        }
        for (const auto& o : table)
            if (o.option->count() > 0)
                o.apply(cfg);
        if (printed_opt->count() > 0)
            cfg.printed_beta_formula = printed_beta;

        chi2::CommandOutput result;
        if (exact->parsed()) {
            result = chi2::cmd_exact(cfg);
        } else if (series->parsed()) {
            const auto kind = chi2::parse_closed_form_kind(series_kind);
            result = chi2::cmd_series(cfg, kind);
        } else if (solve->parsed()) {
            result = chi2::cmd_solve(cfg);
        } else if (certify->parsed()) {
            result = chi2::cmd_certify(cfg);
        } else if (verify->parsed()) {
            result = chi2::cmd_verify(cfg, chi2::read_file(input_path));
        }

        for (const auto& note : result.notes)
            std::cerr << note << "\n";
        emit(cfg.out, result.primary);
        if (!result.sidecar.empty()) {
            if (!cfg.trace.empty())
                chi2::write_file(cfg.trace, result.sidecar);
            else if (!cfg.out.empty() && cfg.out != "-")
                chi2::write_file(cfg.out + ".trace.json", result.sidecar);
        }
        return 0;
    } catch (const chi2::DivergenceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        print_trace(e.trace());
        return chi2::exit_code(e.kind());
    } catch (const chi2::MatchingError& e) {
        std::cerr << "error: " << e.what() << " (beta " << e.last().beta << ", gamma "
                  << e.last().gamma << ")\n";
        print_trace(e.trace());
        return chi2::exit_code(e.kind());
    } catch (const chi2::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return chi2::exit_code(e.kind());
    }
}
