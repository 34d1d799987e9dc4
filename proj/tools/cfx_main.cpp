// cfx: reproducible experiment harness for continued fraction digit
// extremes. Subcommands: exceedance, rate-sweep, maxima, pointprocess,
// bounds, verify. Exit codes: 0 success, 1 invalid configuration,
// 2 verification failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "cfx/cli_commands.hpp"

namespace {

struct CommonOpts {
    std::optional<std::uint64_t> n;
    std::string n_grid;
    std::optional<double> u;
    std::string u_grid;
    std::uint64_t k = 1;
    std::uint64_t trials = 10000;
    std::uint64_t seed = 1;
    double delta = 1.0;
    double C = 2.0;
    double theta = 3.29;
    int workers = 0;
    std::string out_path;
    std::string format = "csv";
    std::optional<std::uint64_t> initial_bits;
    std::optional<std::uint64_t> max_bits;
    bool quick = false;
};

void attach_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--n", o.n, "sequence length n");
    cmd->add_option("--n-grid", o.n_grid, "geometric n grid lo:hi:count");
    cmd->add_option("--u", o.u, "exceedance level u");
    cmd->add_option("--u-grid", o.u_grid, "linear u grid lo:hi:count");
    cmd->add_option("--k", o.k, "order of the maxima (1 = maximum)");
    cmd->add_option("--trials", o.trials, "Monte Carlo trials per grid cell");
    cmd->add_option("--seed", o.seed, "base seed; trial i uses (seed, i)");
    cmd->add_option("--delta", o.delta, "lower endpoint of the u range for bounds");
    cmd->add_option("--C", o.C, "mixing constant C in psi(g) = C theta^-g");
    cmd->add_option("--theta", o.theta, "mixing rate theta in psi(g) = C theta^-g");
    cmd->add_option("--workers", o.workers,
                    "worker threads (0: CF_EXTREMES_WORKERS env, then hardware)");
    cmd->add_option("--out", o.out_path, "output path (default stdout)");
    cmd->add_option("--format", o.format, "output format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--initial-bits", o.initial_bits, "refinement policy initial bit budget");
    cmd->add_option("--max-bits", o.max_bits, "refinement policy bit budget cap");
}

cfx::ExperimentConfig to_config(const CommonOpts& o) {
    cfx::ExperimentConfig cfg;
    if (!o.n_grid.empty())
        cfg.n_values = cfx::parse_n_grid(o.n_grid);
    else if (o.n)
        cfg.n_values = {*o.n};
    if (!o.u_grid.empty())
        cfg.u_values = cfx::parse_u_grid(o.u_grid);
    else if (o.u)
        cfg.u_values = {*o.u};
    cfg.k = o.k;
    cfg.trials = o.trials;
    cfg.seed = o.seed;
    cfg.delta = o.delta;
    cfg.mixing.C = o.C;
    cfg.mixing.theta = o.theta;
    cfg.workers = o.workers;
    cfg.initial_bits = o.initial_bits;
    cfg.max_bits = o.max_bits;
    cfg.quick = o.quick;
    return cfg;
}

int emit(const cfx::Report& rep, const CommonOpts& o) {
    std::string text = o.format == "json" ? rep.to_json() : rep.to_csv();
    if (o.out_path.empty()) {
        std::cout << text;
        return 0;
    }
    std::ofstream f(o.out_path, std::ios::binary);
    if (!f) {
        std::cerr << "error: cannot open output path " << o.out_path << "\n";
        return 1;
    }
    f << text;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"continued fraction digit extremes: exact sampling, exceedance statistics,"
                 " Poisson approximation bounds"};
    app.require_subcommand(1);

    CommonOpts o;
    auto* c_exc = app.add_subcommand("exceedance", "exceedance-count law vs Poisson limits");
    auto* c_rate = app.add_subcommand("rate-sweep", "TV convergence rate over an n grid");
    auto* c_max = app.add_subcommand("maxima", "k-th maxima CDF vs its limit");
    auto* c_pp = app.add_subcommand("pointprocess", "extremal point process checks");
    auto* c_bnd = app.add_subcommand("bounds", "bound evaluations (no sampling)");
    auto* c_ver = app.add_subcommand("verify", "oracle vs Monte Carlo verification");
    for (auto* c : {c_exc, c_rate, c_max, c_pp, c_bnd, c_ver}) attach_common(c, o);
    c_ver->add_flag("--quick", o.quick, "reduced trial count (1e5 instead of 1e6)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 1;  // help/version exit 0; bad flags exit 1
    }

    try {
        cfx::ExperimentConfig cfg = to_config(o);
        if (c_exc->parsed()) return emit(cfx::cmd_exceedance(cfg), o);
        if (c_rate->parsed()) return emit(cfx::cmd_rate_sweep(cfg), o);
        if (c_max->parsed()) return emit(cfx::cmd_maxima(cfg), o);
        if (c_pp->parsed()) return emit(cfx::cmd_pointprocess(cfg), o);
        if (c_bnd->parsed()) return emit(cfx::cmd_bounds(cfg), o);
        if (c_ver->parsed()) {
            cfx::VerifyOutcome v = cfx::cmd_verify(cfg);
            int rc = emit(v.report, o);
            if (rc != 0) return rc;
            return v.passed ? 0 : 2;
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
