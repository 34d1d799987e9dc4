#include "cfx/cli_commands.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cfx/digit_law.hpp"
#include "cfx/distributions.hpp"
#include "cfx/oracle.hpp"
#include "cfx/point_process.hpp"

namespace cfx {

BatchConfig ExperimentConfig::batch_for(std::uint64_t n) const {
    BatchConfig b;
    b.seed = seed;
    b.trials = trials;
    b.n_digits = n;
    b.workers = workers;
    if (initial_bits || max_bits) {
        RefinementPolicy pol = RefinementPolicy::for_digit_count(n);
        if (initial_bits) pol.initial_bits = *initial_bits;
        if (max_bits) pol.max_bits = std::max(*max_bits, pol.initial_bits);
        b.policy = pol;
    }
    return b;
}

void ExperimentConfig::validate() const {
    if (n_values.empty()) throw std::invalid_argument("config: need at least one n");
    for (auto n : n_values)
        if (n == 0) throw std::invalid_argument("config: n must be >= 1");
    if (u_values.empty()) throw std::invalid_argument("config: need at least one u");
    for (auto u : u_values)
        if (!(u > 0.0)) throw std::invalid_argument("config: u must be > 0");
    if (trials == 0) throw std::invalid_argument("config: trials must be >= 1");
    if (k == 0) throw std::invalid_argument("config: k must be >= 1");
    if (!(delta > 0.0)) throw std::invalid_argument("config: delta must be > 0");
    mixing.validate();
    if (initial_bits && *initial_bits < 2)
        throw std::invalid_argument("config: initial-bits must be >= 2");
}

std::vector<std::pair<std::string, std::string>> ExperimentConfig::echo() const {
    std::vector<std::pair<std::string, std::string>> out;
    std::string ns, us;
    for (auto n : n_values) ns += (ns.empty() ? "" : " ") + format_u64(n);
    for (auto u : u_values) us += (us.empty() ? "" : " ") + format_double(u);
    out.emplace_back("n", ns);
    out.emplace_back("u", us);
    out.emplace_back("k", format_u64(k));
    out.emplace_back("trials", format_u64(trials));
    out.emplace_back("seed", format_u64(seed));
    out.emplace_back("delta", format_double(delta));
    out.emplace_back("C", format_double(mixing.C));
    out.emplace_back("theta", format_double(mixing.theta));
    if (initial_bits) out.emplace_back("initial_bits", format_u64(*initial_bits));
    if (max_bits) out.emplace_back("max_bits", format_u64(*max_bits));
    return out;
}

namespace {

// one pass over trials serving every u in the grid: histogram of the
// exceedance count per u
struct MultiUAccum {
    std::vector<std::uint64_t> thresholds;  // per u
    std::vector<EmpiricalDist> laws;
    std::uint64_t discarded = 0;

    void consume(const TrialDigest& d) {
        if (d.discarded) {
            ++discarded;
            return;
        }
        for (std::size_t i = 0; i < thresholds.size(); ++i) {
            std::uint64_t count = 0;
            for (auto v : d.exceeders) count += (v >= thresholds[i]);
            laws[i].add(count);
        }
    }
    void merge(const MultiUAccum& o) {
        discarded += o.discarded;
        for (std::size_t i = 0; i < laws.size(); ++i) laws[i].merge(o.laws[i]);
    }
};

MultiUAccum run_multi_u(const ExperimentConfig& cfg, std::uint64_t n) {
    MultiUAccum proto;
    std::uint64_t keep = UINT64_MAX;
    for (double u : cfg.u_values) {
        std::uint64_t m = scaled_threshold(n, u);
        proto.thresholds.push_back(m);
        keep = std::min(keep, m);
    }
    proto.laws.resize(proto.thresholds.size());
    return run_batch(cfg.batch_for(n), keep, 0, proto);
}

}  // namespace

Report cmd_exceedance(const ExperimentConfig& cfg) {
    cfg.validate();
    Report rep;
    rep.command = "exceedance";
    rep.config = cfg.echo();
    rep.columns = {"n",          "u",        "threshold_m",  "trials",   "discarded",
                   "tv_to_limit", "tv_to_finite_mean", "noise_floor", "rate_bound",
                   "b1_bound",   "b2_bound", "b3_bound",     "cs_total", "seed",
                   "config_hash"};
    const std::string hash = format_u64(rep.config_hash());
    for (auto n : cfg.n_values) {
        MultiUAccum acc = run_multi_u(cfg, n);
        for (std::size_t i = 0; i < cfg.u_values.size(); ++i) {
            double u = cfg.u_values[i];
            std::uint64_t m = acc.thresholds[i];
            PoissonLaw limit(1.0 / u);
            PoissonLaw finite(static_cast<double>(n) * digit_tail_prob(m));
            TvResult tl = tv_distance(acc.laws[i], limit);
            TvResult tf = tv_distance(acc.laws[i], finite);
            ChenSteinBounds cs = analytic_bounds_cf(n, u, cfg.mixing);
            rep.rows.push_back({format_u64(n), format_double(u), format_u64(m),
                                format_u64(acc.laws[i].total_trials), format_u64(acc.discarded),
                                format_double(tl.distance), format_double(tf.distance),
                                format_double(tv_noise_floor(limit, acc.laws[i].total_trials)),
                                format_double(rate_bound(n, u, cfg.mixing)),
                                format_double(cs.b1), format_double(cs.b2), format_double(cs.b3),
                                format_double(cs.total), format_u64(cfg.seed), hash});
        }
    }
    return rep;
}

namespace {

struct OlsFit {
    double slope = 0.0;
    double stderr_ = 0.0;
    double intercept = 0.0;
};

OlsFit ols(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    OlsFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double sse = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double r = y[i] - (fit.intercept + fit.slope * x[i]);
        sse += r * r;
    }
    if (n > 2) fit.stderr_ = std::sqrt(sse / static_cast<double>(n - 2) / sxx);
    return fit;
}

}  // namespace

RateSweepData rate_sweep_data(const ExperimentConfig& cfg) {
    cfg.validate();
    if (cfg.n_values.size() < 4)
        throw std::invalid_argument("rate-sweep: n-grid too small, need at least 4 points");
    RateSweepData out;
    std::vector<double> xs, ys;
    std::size_t weak_points = 0;
    for (auto n : cfg.n_values) {
        MultiUAccum acc = run_multi_u(cfg, n);
        RateSweepData::Cell cell;
        cell.n = n;
        cell.arg_u = cfg.u_values.front();
        cell.discarded = acc.discarded;
        double deconv_floor_at_arg = 0.0;
        for (std::size_t i = 0; i < cfg.u_values.size(); ++i) {
            PoissonLaw limit(1.0 / cfg.u_values[i]);
            double tv = tv_distance(acc.laws[i], limit).distance;
            double fl = tv_noise_floor(limit, acc.laws[i].total_trials);
            if (tv > cell.sup_tv) {
                cell.sup_tv = tv;
                cell.arg_u = cfg.u_values[i];
                cell.noise_floor = fl;
            }
            double deconv = tv_deconvolved(acc.laws[i], limit);
            if (deconv > cell.sup_corrected) {
                cell.sup_corrected = deconv;
                deconv_floor_at_arg = tv_deconvolved_floor(limit, acc.laws[i].total_trials);
            }
        }
        // the deconvolved value estimates the true distance; when it falls
        // within a few multiples of its own residual resolution the cell
        // carries no usable rate signal
        cell.weak_signal = cell.sup_corrected < 3.0 * deconv_floor_at_arg;
        weak_points += cell.weak_signal;
        xs.push_back(std::log(static_cast<double>(n)));
        ys.push_back(std::log(std::max(cell.sup_corrected, 1e-7)));
        out.cells.push_back(cell);
    }
    if (weak_points * 2 >= cfg.n_values.size()) {
        out.slope_refused = true;  // noise floor exceeds signal on most cells
        return out;
    }
    OlsFit fit = ols(xs, ys);
    out.slope = fit.slope;
    out.slope_stderr = fit.stderr_;
    return out;
}

Report cmd_rate_sweep(const ExperimentConfig& cfg) {
    RateSweepData data = rate_sweep_data(cfg);
    Report rep;
    rep.command = "rate-sweep";
    rep.config = cfg.echo();
    rep.columns = {"n",        "sup_tv",    "arg_u",      "noise_floor", "sup_tv_corrected",
                   "weak_signal", "discarded", "trials",  "seed",        "config_hash"};
    const std::string hash = format_u64(rep.config_hash());
    for (const auto& c : data.cells) {
        rep.rows.push_back({format_u64(c.n), format_double(c.sup_tv), format_double(c.arg_u),
                            format_double(c.noise_floor), format_double(c.sup_corrected),
                            c.weak_signal ? "1" : "0", format_u64(c.discarded),
                            format_u64(cfg.trials), format_u64(cfg.seed), hash});
    }
    if (data.slope_refused) {
        rep.rows.push_back({"slope", "refused:noise_floor_dominates", "", "", "", "", "", "",
                            format_u64(cfg.seed), hash});
    } else {
        rep.rows.push_back({"slope", format_double(data.slope), "stderr",
                            format_double(data.slope_stderr), "", "", "", "",
                            format_u64(cfg.seed), hash});
    }
    return rep;
}

Report cmd_maxima(const ExperimentConfig& cfg) {
    cfg.validate();
    Report rep;
    rep.command = "maxima";
    rep.config = cfg.echo();
    rep.columns = {"n",      "u",      "k",         "trials", "discarded", "empirical",
                   "limit",  "abs_err", "stderr",   "rate_bound", "seed",  "config_hash"};
    const std::string hash = format_u64(rep.config_hash());
    for (auto n : cfg.n_values) {
        for (double u : cfg.u_values) {
            for (std::uint64_t kk = 1; kk <= cfg.k; ++kk) {
                KthMaxResult r = kth_max_cdf_empirical(n, u, kk, cfg.trials, cfg.seed,
                                                       cfg.batch_for(n));
                double limit = limit_kth_max_cdf(u, kk);
                double se = r.trials
                                ? std::sqrt(r.probability * (1.0 - r.probability) /
                                            static_cast<double>(r.trials))
                                : 0.0;
                rep.rows.push_back({format_u64(n), format_double(u), format_u64(kk),
                                    format_u64(r.trials), format_u64(r.discarded),
                                    format_double(r.probability), format_double(limit),
                                    format_double(std::abs(r.probability - limit)),
                                    format_double(se),
                                    format_double(rate_bound(n, u, cfg.mixing)),
                                    format_u64(cfg.seed), hash});
            }
        }
    }
    return rep;
}

Report cmd_pointprocess(const ExperimentConfig& cfg) {
    cfg.validate();
    if (cfg.u_values.size() < 1)
        throw std::invalid_argument("pointprocess: need at least one u");
    std::vector<double> us = cfg.u_values;
    std::sort(us.begin(), us.end());
    Report rep;
    rep.command = "pointprocess";
    rep.config = cfg.echo();
    rep.columns = {"n",     "check", "interval", "empirical", "expected_finite_n",
                   "expected_limit", "stderr",  "discarded", "seed", "config_hash"};
    const std::string hash = format_u64(rep.config_hash());
    for (auto n : cfg.n_values) {
        std::vector<ScaledInterval> parts;
        for (std::size_t i = 0; i < us.size(); ++i) {
            ScaledInterval iv{us[i], i + 1 < us.size() ? std::optional<double>(us[i + 1])
                                                       : std::nullopt};
            parts.push_back(iv);
            MeanMeasureResult m = mean_measure_check(n, iv, cfg.trials, cfg.seed,
                                                     cfg.batch_for(n));
            std::string ivs = "(" + format_double(iv.lo) + "," +
                              (iv.hi ? format_double(*iv.hi) : std::string("inf")) + "]";
            rep.rows.push_back({format_u64(n), "mean_measure", ivs,
                                format_double(m.empirical_mean),
                                format_double(m.expected_finite_n),
                                format_double(m.expected_limit), format_double(m.stderr_),
                                format_u64(m.discarded), format_u64(cfg.seed), hash});
        }
        AvoidanceResult a = avoidance_probability_check(n, IntervalUnion(parts), cfg.trials,
                                                        cfg.seed, cfg.batch_for(n));
        rep.rows.push_back({format_u64(n), "avoidance", "union", format_double(a.empirical),
                            format_double(a.expected_finite_n),
                            format_double(a.expected_limit), format_double(a.stderr_),
                            format_u64(a.discarded), format_u64(cfg.seed), hash});
    }
    return rep;
}

Report cmd_bounds(const ExperimentConfig& cfg) {
    cfg.validate();
    Report rep;
    rep.command = "bounds";
    rep.config = cfg.echo();
    rep.columns = {"n",     "delta", "C",     "theta",     "window_radius", "b1_bound",
                   "b2_bound", "b3_bound", "cs_total", "mean_gap_bound", "kappa",
                   "rate_bound", "seed", "config_hash"};
    const std::string hash = format_u64(rep.config_hash());
    for (auto n : cfg.n_values) {
        ChenSteinBounds cs = analytic_bounds_cf(n, cfg.delta, cfg.mixing);
        rep.rows.push_back({format_u64(n), format_double(cfg.delta), format_double(cfg.mixing.C),
                            format_double(cfg.mixing.theta),
                            format_double(solve_window_radius(cfg.mixing.theta, n)),
                            format_double(cs.b1), format_double(cs.b2), format_double(cs.b3),
                            format_double(cs.total),
                            format_double(poisson_mean_gap_bound(n, cfg.delta)),
                            format_double(rate_constant(cfg.mixing)),
                            format_double(rate_bound(n, cfg.delta, cfg.mixing)),
                            format_u64(cfg.seed), hash});
    }
    return rep;
}

VerifyOutcome cmd_verify(const ExperimentConfig& cfg) {
    cfg.validate();
    VerifyOutcome out;
    out.report.command = "verify";
    out.report.config = cfg.echo();
    out.report.columns = {"check", "cell",   "atom",  "expected", "observed",
                          "sigma", "zscore", "pass",  "seed",     "config_hash"};
    const std::string hash = format_u64(out.report.config_hash());
    const std::uint64_t trials = cfg.quick ? 100000 : 1000000;

    auto push = [&](const std::string& check, const std::string& cell, const std::string& atom,
                    double expected, double observed, double sigma) {
        double z = sigma > 0.0 ? (observed - expected) / sigma : 0.0;
        bool pass = std::abs(observed - expected) <= 4.0 * sigma + 1e-12;
        if (!pass) out.passed = false;
        out.report.rows.push_back({check, cell, atom, format_double(expected),
                                   format_double(observed), format_double(sigma),
                                   format_double(z), pass ? "1" : "0", format_u64(cfg.seed),
                                   hash});
    };

    // exact small-n exceedance laws vs Monte Carlo
    for (std::uint64_t n : {1ULL, 2ULL, 3ULL}) {
        for (double u : {0.5, 1.0, 2.0}) {
            oracle::ExactLaw law = oracle::exact_exceedance_distribution(n, u);
            BatchConfig base = cfg.batch_for(n);
            ExceedanceLawResult mc = estimate_exceedance_law(n, u, trials, cfg.seed, base);
            std::string cell = "n=" + format_u64(n) + ",u=" + format_double(u);
            for (std::uint64_t kk = 0; kk <= n; ++kk) {
                double p = law.probabilities[kk];
                double sigma =
                    std::sqrt(std::max(p * (1.0 - p), 1e-12) /
                              static_cast<double>(mc.law.total_trials)) +
                    law.error_bound;
                push("oracle_vs_mc", cell, "count=" + format_u64(kk), p,
                     mc.law.probability(kk), sigma);
            }
        }
    }

    // first-digit marginal vs the digit law
    {
        DigitFrequencyResult f = first_digit_frequencies(trials, cfg.seed);
        for (std::uint64_t d = 1; d <= 5; ++d) {
            double p = digit_pmf(d);
            double sigma = std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
            push("first_digit", "n=1", "digit=" + format_u64(d), p,
                 f.frequencies.probability(d), sigma);
        }
    }

    // cylinder measures vs the pmf (deterministic; sigma 0 means exact)
    for (std::uint64_t a = 1; a <= 50; ++a) {
        auto c = oracle::cylinder_interval(std::vector<std::uint64_t>{a});
        double measured = oracle::gauss_measure_of_interval(c.first, c.second);
        push("cylinder_pmf", "depth=1", "digit=" + format_u64(a), digit_pmf(a), measured,
             2.5e-13);
    }
    return out;
}

}  // namespace cfx
