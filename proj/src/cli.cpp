#include "pftg/cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "pftg/experiments.hpp"

namespace pftg {

namespace {

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        out.push_back(std::stod(item));
    }
    return out;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

int cmd_run(const std::string& config_path, const std::string& resume) {
    RunConfig cfg = load_config(config_path);
    std::optional<State> resume_state;
    if (!resume.empty()) resume_state = read_snapshot(resume, cfg.make_grid());
    auto result = run_relaxation(cfg, resume_state);
    std::cout << "steps: " << result.steps_taken << "\n"
              << "t: " << fmt(result.final_state.t) << "\n"
              << "mass: " << fmt(result.final_record.mass) << "\n"
              << "energy_gamma: " << fmt(result.final_record.energy_gamma) << "\n"
              << "energy_violations: " << result.energy_violations << "\n"
              << "steady_detected: " << (result.steady_detected ? "true" : "false") << "\n";
    if (result.steady_detected) std::cout << "t_detected: " << fmt(result.t_detected) << "\n";
    std::cout << "output: " << result.output_dir << "\n";
    return 0;
}

int cmd_steady(const std::string& config_path, double mu_s) {
    RunConfig cfg = load_config(config_path);
    StationaryProblem prob;
    prob.mu_s = mu_s;
    prob.potential = cfg.solver.potential;
    prob.grid = cfg.make_grid();
    prob.initial_guess = build_initial_state(cfg).u;
    Field u = solve_stationary(prob, cfg.solver.tol_newton);

    State s(prob.grid);
    for (double& v : s.mu.values) v = mu_s;
    s.u = u;
    std::filesystem::create_directories(cfg.output_dir);
    std::string path = cfg.output_dir + "/steady.snap";
    write_snapshot(s, path);
    auto ind = steady_indicators(s, cfg.solver);
    std::cout << "steady_residual_u: " << fmt(ind.steady_residual_u) << "\n"
              << "u_min: " << fmt(*std::min_element(u.values.begin(), u.values.end())) << "\n"
              << "u_max: " << fmt(*std::max_element(u.values.begin(), u.values.end())) << "\n"
              << "wrote: " << path << "\n";
    return 0;
}

int cmd_sweep_alpha(const std::string& config_path, const std::string& alphas_str) {
    RunConfig cfg = load_config(config_path);
    auto alphas = parse_list(alphas_str);
    auto rep = sweep_alpha(cfg, alphas);

    std::filesystem::create_directories(cfg.output_dir);
    std::ofstream out(cfg.output_dir + "/alpha_sweep.csv", std::ios::trunc);
    std::istringstream cfg_lines(rep.config_text);
    for (std::string line; std::getline(cfg_lines, line);) out << "# " << line << "\n";
    out << "alpha,d_u,d_sigma,grad_mu_l2l2,u_linf_v,w_eps_u_linf_l1,sigma_linf_h,grad_sigma_l2l2\n";
    auto row = [&](double a, double du, double ds, const AprioriNormReport& n) {
        auto au = n.alpha_uniform();
        out << fmt(a) << "," << fmt(du) << "," << fmt(ds);
        for (double v : au) out << "," << fmt(v);
        out << "\n";
    };
    for (std::size_t i = 0; i < rep.alphas.size(); ++i)
        row(rep.alphas[i], rep.d_u[i], rep.d_sigma[i], rep.norms[i]);
    row(0.0, 0.0, 0.0, rep.norms.back());

    std::cout << "d_u:";
    for (double d : rep.d_u) std::cout << " " << fmt(d);
    std::cout << "\nlimit_residual_max_l2: " << fmt(rep.limit_residual_max_l2)
              << "\nd_monotone_within_slack: " << (rep.d_monotone_within_slack ? "true" : "false")
              << "\nalpha_uniform_ratio: " << fmt(rep.alpha_uniform_ratio) << "\n";
    return rep.d_monotone_within_slack ? 0 : 1;
}

int cmd_sweep_eps(const std::string& kind, double kappa, const std::string& eps_str,
                  const std::string& points_str) {
    PotentialSpec base;
    if (kind == "quartic")
        base.kind = PotentialKind::Quartic;
    else if (kind == "logarithmic")
        base.kind = PotentialKind::Logarithmic;
    else if (kind == "double_obstacle")
        base.kind = PotentialKind::DoubleObstacle;
    else
        throw ValidationError("--potential must be quartic, logarithmic or double_obstacle");
    base.kappa = kappa;
    auto rep = sweep_eps(base, parse_list(eps_str), parse_list(points_str));

    std::cout << "r,beta_hat";
    for (double e : rep.eps) std::cout << ",eps=" << fmt(e);
    std::cout << "\n";
    for (std::size_t j = 0; j < rep.points.size(); ++j) {
        std::cout << fmt(rep.points[j]) << "," << fmt(rep.beta_hat_values[j]);
        for (std::size_t i = 0; i < rep.eps.size(); ++i) std::cout << "," << fmt(rep.moreau[i][j]);
        std::cout << "\n";
    }
    std::cout << "monotone: " << (rep.monotone ? "true" : "false")
              << "\nbounded: " << (rep.bounded ? "true" : "false") << "\n";
    return (rep.monotone && rep.bounded) ? 0 : 1;
}

int cmd_probe_dependence(const std::string& config_path, const std::string& deltas_str) {
    RunConfig cfg = load_config(config_path);
    auto rep = probe_continuous_dependence(cfg, parse_list(deltas_str));
    for (std::size_t i = 0; i < rep.deltas.size(); ++i)
        std::cout << "delta " << fmt(rep.deltas[i]) << ": K = " << fmt(rep.amplification[i])
                  << "\n";
    for (double r : rep.ratios) std::cout << "ratio: " << fmt(r) << "\n";
    std::cout << "ratios_within_factor_2: " << (rep.ratios_within_factor_2 ? "true" : "false")
              << "\n";
    return rep.ratios_within_factor_2 ? 0 : 1;
}

int cmd_validate(const std::string& config_path) {
    RunConfig cfg = load_config(config_path);
    const SolverConfig& scfg = cfg.solver;
    bool all_pass = true;
    auto report = [&](bool pass, const std::string& name, const std::string& detail) {
        std::cout << (pass ? "PASS " : "FAIL ") << name << " (" << detail << ")\n";
        if (!pass) all_pass = false;
    };

    // short trajectory
    const std::size_t steps =
        std::min<std::size_t>(100, std::size_t(std::llround(cfg.t_end / scfg.dt)));
    State s = build_initial_state(cfg);
    double m0 = mass(s, scfg);
    double e_prev = energy_gamma(s, scfg);
    double slack = std::max(1e-10, 5.0 * scfg.dt * scfg.dt * std::abs(e_prev));
    double mass_drift = 0;
    long violations = 0;
    for (std::size_t k = 0; k < steps; ++k) {
        s = (scfg.alpha > 0 ? step_viscous(s, scfg) : step_limit(s, scfg)).first;
        mass_drift = std::max(mass_drift, std::abs(mass(s, scfg) - m0));
        double e = energy_gamma(s, scfg);
        if (e > e_prev + slack) ++violations;
        e_prev = e;
    }
    double mass_bound = 100.0 * double(steps) * scfg.tol_lin * (1.0 + std::abs(m0));
    report(mass_drift <= mass_bound, "mass-conservation",
           "max drift " + fmt(mass_drift) + " bound " + fmt(mass_bound));
    report(violations <= long(steps / 100), "energy-dissipation",
           std::to_string(violations) + " violations in " + std::to_string(steps) + " steps");

    bool finite = true;
    for (const auto* f : {&s.mu, &s.u, &s.sigma})
        for (double v : f->values)
            if (!std::isfinite(v)) finite = false;
    report(finite, "fields-finite", "final state");

    // operator identities on the config grid
    Grid g = cfg.make_grid();
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    auto random_field = [&] {
        Field f(g);
        for (double& v : f.values) v = unif(rng);
        return f;
    };
    double sym_worst = 0, semi_worst = 0, sbp_worst = 0;
    for (int rep_i = 0; rep_i < 20; ++rep_i) {
        Field f = random_field(), q = random_field();
        Field lf = laplacian_neumann(f), lq = laplacian_neumann(q);
        Field fg(g), gf(g), ff(g);
        for (std::size_t i = 0; i < f.size(); ++i) {
            fg.values[i] = f.values[i] * lq.values[i];
            gf.values[i] = q.values[i] * lf.values[i];
            ff.values[i] = f.values[i] * lf.values[i];
        }
        double nf = l2_norm(f), nq = l2_norm(q);
        sym_worst = std::max(sym_worst,
                             std::abs(integrate(fg) - integrate(gf)) / (1e-300 + nf * nq));
        semi_worst = std::max(semi_worst, integrate(ff) / (1e-300 + nf * nf));
        double gs = grad_sq_integral(f);
        sbp_worst = std::max(sbp_worst, std::abs(-integrate(ff) - gs) / std::max(1.0, gs));
    }
    report(sym_worst <= 1e-12, "laplacian-symmetry", "worst " + fmt(sym_worst));
    report(semi_worst <= 1e-12, "laplacian-semidefinite", "worst " + fmt(semi_worst));
    report(sbp_worst <= 1e-12, "summation-by-parts", "worst " + fmt(sbp_worst));
    Field c = Field::constant(g, 3.25);
    report(max_abs(laplacian_neumann(c)) == 0.0, "null-space", "laplacian of a constant");

    // snapshot round trip
    std::filesystem::create_directories(cfg.output_dir);
    std::string snap = cfg.output_dir + "/validate_roundtrip.snap";
    write_snapshot(s, snap);
    State back = read_snapshot(snap, g);
    bool bitexact = back.t == s.t && back.mu.values == s.mu.values &&
                    back.u.values == s.u.values && back.sigma.values == s.sigma.values;
    report(bitexact, "snapshot-roundtrip", snap);

    if (scfg.potential.kind == PotentialKind::DoubleObstacle) {
        double overshoot = 0;
        for (double u : s.u.values) overshoot = std::max(overshoot, std::abs(u) - 1.0);
        if (overshoot > 10.0 * scfg.potential.eps)
            std::cout << "WARN obstacle-overshoot (|u|-1 reaches " << fmt(overshoot) << ")\n";
    }
    return all_pass ? 0 : 1;
}

} // namespace

int cli_main(int argc, const char* const* argv) {
    CLI::App app{"Viscous Cahn-Hilliard tumor-growth solver"};
    app.require_subcommand(1);

    std::string config_path, resume, alphas_str, eps_str, points_str, deltas_str, kind;
    double mu_s = 0, kappa = 0;

    auto* run = app.add_subcommand("run", "advance the configured system to t_end");
    run->add_option("--config", config_path)->required();
    run->add_option("--resume", resume);

    auto* steady = app.add_subcommand("steady", "solve the stationary problem for a given mu_s");
    steady->add_option("--config", config_path)->required();
    steady->add_option("--mu-s", mu_s)->required();

    auto* sa = app.add_subcommand("sweep-alpha", "viscosity sweep against the alpha = 0 limit");
    sa->add_option("--config", config_path)->required();
    sa->add_option("--alphas", alphas_str)->required();

    auto* se = app.add_subcommand("sweep-eps", "Moreau envelope table over eps");
    se->add_option("--potential", kind)->required();
    se->add_option("--eps", eps_str)->required();
    se->add_option("--points", points_str)->required();
    se->add_option("--kappa", kappa);

    auto* val = app.add_subcommand("validate", "run the invariant suite on a short trajectory");
    val->add_option("--config", config_path)->required();

    auto* pd = app.add_subcommand("probe-dependence", "perturbation amplification probe");
    pd->add_option("--config", config_path)->required();
    pd->add_option("--deltas", deltas_str)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (run->parsed()) return cmd_run(config_path, resume);
        if (steady->parsed()) return cmd_steady(config_path, mu_s);
        if (sa->parsed()) return cmd_sweep_alpha(config_path, alphas_str);
        if (se->parsed()) return cmd_sweep_eps(kind, kappa, eps_str, points_str);
        if (val->parsed()) return cmd_validate(config_path);
        if (pd->parsed()) return cmd_probe_dependence(config_path, deltas_str);
    } catch (const ParseError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const ValidationError& e) {
        std::cerr << "invalid config: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

} // namespace pftg
