#include "shocklab/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <ostream>
#include <sstream>

#include "shocklab/harness.hpp"
#include "shocklab/interface.hpp"
#include "shocklab/lpp.hpp"
#include "shocklab/scaling.hpp"
#include "shocklab/stationary.hpp"
#include "shocklab/stats.hpp"
#include "shocklab/tasep.hpp"
#include "shocklab/tw.hpp"

namespace shocklab::accept {

namespace {

using Clock = std::chrono::steady_clock;

std::string fmt(double x, int prec = 4) {
    std::ostringstream os;
    os.precision(prec);
    os << x;
    return os.str();
}

struct Context {
    Options opts;
    // shock sample sets cached across criteria, keyed by (lambda, rho, t, replicas)
    std::map<std::string, mc::SampleSet> cache;
    tw::DistTable goe;
    tw::DistTable gue;

    const mc::SampleSet& shock_run(double lambda, double rho, double t, i64 replicas) {
        std::ostringstream key;
        key.precision(17);
        key << lambda << '|' << rho << '|' << t << '|' << replicas;
        auto it = cache.find(key.str());
        if (it != cache.end()) return it->second;
        mc::ExperimentConfig cfg;
        cfg.lambda = lambda;
        cfg.rho = rho;
        cfg.t = t;
        cfg.replicas = replicas;
        cfg.master_seed = opts.master_seed;
        cfg.workers = opts.workers;
        return cache.emplace(key.str(), mc::run_shock_experiment(cfg)).first->second;
    }
};

CriterionResult c1_lpp_tasep_equality(Context& ctx) {
    CriterionResult r{1, "pathwise TASEP/LPP event equality", true, "", 0};
    const i64 seeds = ctx.opts.quick ? 20 : 100;
    std::vector<double> t_grid;
    for (int t = 1; t <= 20; ++t) t_grid.push_back(t);
    i64 checks = 0;
    for (i64 s = 0; s < seeds; ++s) {
        WeightField f;
        f.seed = SeedSpec{ctx.opts.master_seed, 0}.for_replica(s);
        const auto rep = tasep::verify_lpp_coupling(f, 30, 30, t_grid);
        checks += rep.checks;
        if (!rep.ok) {
            r.pass = false;
            r.detail = "seed " + std::to_string(s) + ": " + rep.first_failure;
            return r;
        }
    }
    r.detail = std::to_string(checks) + " events over " + std::to_string(seeds) +
               " seeds, exact";
    return r;
}

CriterionResult c2_interface_equality(Context& ctx) {
    CriterionResult r{2, "second-class trajectory = time-changed interface", true, "", 0};
    const i64 seeds = ctx.opts.quick ? 25 : 100;
    const double horizon = ctx.opts.quick ? 30.0 : 50.0;
    std::vector<i64> offsets;
    for (i64 s = 0; s < seeds; ++s) {
        WeightField f;
        f.seed = SeedSpec{ctx.opts.master_seed, 0}.for_replica(s);
        const auto traj = tasep::run_second_class_weighted(f, 0.25, 0.75, horizon);
        const auto path = compint::competition_interface_until(f, 0.25, 0.75, horizon);
        std::vector<double> probes = traj.times;
        for (double t = 0.0; t < horizon; t += 0.25) probes.push_back(t);
        i64 offset = path.position_at(0.0) - traj.position_at(0.0);
        for (double t : probes) {
            if (t >= horizon) continue;
            const i64 d = path.position_at(t) - traj.position_at(t);
            if (d != offset) {
                r.pass = false;
                r.detail = "offset not constant at seed " + std::to_string(s);
                return r;
            }
            if (path.step_count_until(t) != traj.steps_until(t)) {
                r.pass = false;
                r.detail = "step counts differ at seed " + std::to_string(s);
                return r;
            }
        }
        offsets.push_back(offset);
    }
    for (i64 o : offsets)
        if (o != offsets[0]) {
            r.pass = false;
            r.detail = "offset differs across seeds";
            return r;
        }
    r.detail = "constant offset " + std::to_string(offsets[0]) + " over " +
               std::to_string(seeds) + " seeds";
    r.pass = r.pass && offsets[0] == 0;
    return r;
}

CriterionResult c3_shock_speed(Context& ctx) {
    CriterionResult r{3, "shock speed 1 - lambda - rho", true, "", 0};
    const double t = ctx.opts.quick ? 250.0 : 1000.0;
    const i64 reps = ctx.opts.quick ? 600 : 4000;
    std::ostringstream detail;
    for (const auto& [lambda, rho] : std::vector<std::pair<double, double>>{{0.25, 0.75},
                                                                            {0.2, 0.6}}) {
        const auto& set = ctx.shock_run(lambda, rho, t, reps);
        double mean = 0.0;
        for (const auto& s : set.samples) mean += static_cast<double>(s.x_t);
        mean /= static_cast<double>(set.samples.size()) * t;
        const double v = 1.0 - lambda - rho;
        detail << "(" << lambda << "," << rho << "): mean/t=" << fmt(mean) << " vs " << v
               << "  ";
        if (std::fabs(mean - v) > 0.01) r.pass = false;
    }
    r.detail = detail.str();
    return r;
}

CriterionResult c4_fluctuation_exponent(Context& ctx) {
    CriterionResult r{4, "t^(1/3) fluctuation scale", true, "", 0};
    const std::vector<double> ts =
        ctx.opts.quick ? std::vector<double>{100, 200, 400} : std::vector<double>{250, 500, 1000, 2000};
    const i64 reps = ctx.opts.quick ? 600 : 4000;
    std::vector<std::vector<double>> samples;
    for (double t : ts) {
        const auto& set = ctx.shock_run(0.25, 0.75, t, reps);
        std::vector<double> xs;
        for (const auto& s : set.samples) xs.push_back(static_cast<double>(s.x_t));
        samples.push_back(std::move(xs));
    }
    const auto fit = mc::scaling_exponent_fit(ts, samples, 200,
                                              SeedSpec{ctx.opts.master_seed, 0}.with_tag(5));
    r.pass = fit.slope >= 0.5 && fit.slope <= 0.85;
    r.detail = "slope of log var(X_t) = " + fmt(fit.slope) + "  CI [" + fmt(fit.ci_lo) + ", " +
               fmt(fit.ci_hi) + "], admissible [0.5, 0.85]";
    return r;
}

CriterionResult c5_limit_law(Context& ctx) {
    CriterionResult r{5, "limit laws of the position and the jump count", true, "", 0};
    const double t1 = ctx.opts.quick ? 250.0 : 1000.0;
    const double t2 = ctx.opts.quick ? 500.0 : 2000.0;
    const i64 reps = ctx.opts.quick ? 600 : 4000;
    const ShockConstants sc = shock_constants(0.25, 0.75);
    const tw::DistTable law_x = tw::limit_law_cdf(tw::LimitLaw::kPosition, sc, ctx.goe);
    const tw::DistTable law_n = tw::limit_law_cdf(tw::LimitLaw::kJumpCount, sc, ctx.goe);

    auto ks_of = [&](double t, const tw::DistTable& law, bool use_x) {
        const auto& set = ctx.shock_run(0.25, 0.75, t, reps);
        std::vector<double> xs = use_x ? set.x_rescaled() : set.n_rescaled();
        std::sort(xs.begin(), xs.end());
        return mc::ks_statistic(xs, [&](double s) { return law.cdf_at(s); });
    };
    const double kx1 = ks_of(t1, law_x, true), kx2 = ks_of(t2, law_x, true);
    const double kn1 = ks_of(t1, law_n, false), kn2 = ks_of(t2, law_n, false);
    r.pass = kx1 <= 0.10 && kx2 <= kx1 && kn1 <= 0.10 && kn2 <= kn1;
    r.detail = "KS(X)@t1=" + fmt(kx1) + " @t2=" + fmt(kx2) + "  KS(N)@t1=" + fmt(kn1) +
               " @t2=" + fmt(kn2) + " (need <= 0.10 and nonincreasing)";
    return r;
}

CriterionResult c6_goe_one_point(Context& ctx) {
    CriterionResult r{6, "GOE one-point laws and asymptotic independence", true, "", 0};
    const i64 N = ctx.opts.quick ? 300 : 1000;
    const i64 reps = ctx.opts.quick ? 800 : 5000;
    const ShockConstants sc = shock_constants(0.25, 0.75);
    const auto pairs =
        one_point_samples(N, reps, sc, SeedSpec{ctx.opts.master_seed, 0}.with_tag(1));
    const double two23 = std::pow(2.0, 2.0 / 3.0);
    std::vector<double> a, b;
    for (const auto& p : pairs) {
        a.push_back(p.chi_lambda);
        b.push_back(p.chi_rho);
    }
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double ks_l =
        mc::ks_statistic(a, [&](double s) { return ctx.goe.cdf_at(two23 * s / sc.sigma1); });
    const double ks_r =
        mc::ks_statistic(b, [&](double s) { return ctx.goe.cdf_at(two23 * s / sc.sigma2); });
    const auto rep = independence_report(pairs);
    r.pass = ks_l <= 0.05 && ks_r <= 0.05 && std::fabs(rep.correlation) <= 0.05;
    r.detail = "KS(lambda)=" + fmt(ks_l) + " KS(rho)=" + fmt(ks_r) +
               " corr=" + fmt(rep.correlation) + " jointSup=" + fmt(rep.joint_product_sup);
    return r;
}

CriterionResult c7_gue_point_to_point(Context& ctx) {
    CriterionResult r{7, "GUE point-to-point law", true, "", 0};
    const i64 N = ctx.opts.quick ? 300 : 1000;
    const i64 reps = ctx.opts.quick ? 800 : 5000;
    const PtPointScaling ps = pt_point_scaling(1.0);
    const double n13 = std::cbrt(static_cast<double>(N));
    std::vector<double> xs(reps);
#pragma omp parallel for schedule(dynamic)
    for (i64 rep = 0; rep < reps; ++rep) {
        WeightField f;
        f.seed = SeedSpec{ctx.opts.master_seed, 0}.with_tag(2).for_replica(rep);
        const auto out = lpp::lpp_point_to_point(f, {0, 0}, {N, N});
        xs[rep] = (out.value - ps.mu_pp * static_cast<double>(N)) / (ps.sigma_eta * n13);
    }
    std::sort(xs.begin(), xs.end());
    const double ks = mc::ks_statistic(xs, [&](double s) { return ctx.gue.cdf_at(s); });
    r.pass = ks <= 0.05;
    r.detail = "KS vs GUE = " + fmt(ks) + " at N=" + std::to_string(N);
    return r;
}

CriterionResult c8_stationarity(Context& ctx) {
    CriterionResult r{8, "stationary increments and exit translation invariance", true, "", 0};
    const i64 N = ctx.opts.quick ? 150 : 500;
    const i64 inc_reps = ctx.opts.quick ? 30 : 100;
    const i64 per_rep = 100;
    const double lambda_line = 0.25, varrho = 0.4;

    std::vector<double> incs;
    std::vector<double> lag_prev, lag_cur;
    for (i64 rep = 0; rep < inc_reps; ++rep) {
        const SeedSpec rs = SeedSpec{ctx.opts.master_seed, 0}.with_tag(3).for_replica(rep);
        WeightField bulk;
        bulk.seed = rs;
        stat::StationaryModel model{lambda_line, varrho, rs};
        std::vector<Point> targets;
        for (i64 i = 0; i <= per_rep; ++i) targets.push_back({N + i, N});
        const auto out = model.solve(bulk, targets);
        for (i64 i = 1; i <= per_rep; ++i) {
            incs.push_back(out[i].value - out[i - 1].value);
            if (i >= 2) {
                lag_prev.push_back(out[i - 1].value - out[i - 2].value);
                lag_cur.push_back(out[i].value - out[i - 1].value);
            }
        }
    }
    std::sort(incs.begin(), incs.end());
    const double ks_inc = mc::ks_statistic(
        incs, [&](double x) { return x <= 0.0 ? 0.0 : 1.0 - std::exp(-(1.0 - varrho) * x); });
    const double lag1 = mc::pearson(lag_prev, lag_cur);

    // translation invariance on the half-density line, exits measured in the
    // x-coordinate of the exit point; disjoint replica groups
    const i64 tr_reps = ctx.opts.quick ? 1500 : 10000;
    const i64 x_shift = static_cast<i64>(std::llround(2.0 * std::cbrt(static_cast<double>(N))));
    std::vector<double> shifted(tr_reps), base(tr_reps);
#pragma omp parallel for schedule(dynamic)
    for (i64 rep = 0; rep < tr_reps; ++rep) {
        {
            const SeedSpec rs =
                SeedSpec{ctx.opts.master_seed, 0}.with_tag(4).for_replica(2 * rep);
            WeightField bulk;
            bulk.seed = rs;
            stat::StationaryModel model{0.5, 0.5, rs};
            const auto out = model.solve(bulk, {{N + x_shift, N - x_shift}});
            shifted[rep] = static_cast<double>(-out[0].exit_k) - static_cast<double>(x_shift);
        }
        {
            const SeedSpec rs =
                SeedSpec{ctx.opts.master_seed, 0}.with_tag(4).for_replica(2 * rep + 1);
            WeightField bulk;
            bulk.seed = rs;
            stat::StationaryModel model{0.5, 0.5, rs};
            const auto out = model.solve(bulk, {{N, N}});
            base[rep] = static_cast<double>(-out[0].exit_k);
        }
    }
    std::sort(shifted.begin(), shifted.end());
    std::sort(base.begin(), base.end());
    // two-sample KS via the pooled evaluation
    double ks_tr = 0.0;
    {
        size_t i = 0, j = 0;
        while (i < shifted.size() && j < base.size()) {
            const double d = std::fabs(static_cast<double>(i) / shifted.size() -
                                       static_cast<double>(j) / base.size());
            ks_tr = std::max(ks_tr, d);
            if (shifted[i] <= base[j])
                ++i;
            else
                ++j;
        }
    }
    r.pass = ks_inc <= 0.02 && std::fabs(lag1) <= 0.03 && ks_tr <= 0.03;
    r.detail = "KS(incr vs Exp(1-varrho))=" + fmt(ks_inc) + " lag1=" + fmt(lag1) +
               " KS(translation)=" + fmt(ks_tr);
    return r;
}

CriterionResult c9_coupling_lemma(Context& ctx) {
    CriterionResult r{9, "stationary comparison inequalities", true, "", 0};
    const i64 N = ctx.opts.quick ? 200 : 500;
    const i64 instances = ctx.opts.quick ? 200 : 1000;
    const double n13 = std::cbrt(static_cast<double>(N));
    i64 premises = 0, violations = 0;
    for (i64 inst = 0; inst < instances; ++inst) {
        const SeedSpec rs = SeedSpec{ctx.opts.master_seed, 0}.with_tag(5).for_replica(inst);
        WeightField bulk;
        bulk.seed = rs;
        const double sign = inst % 2 == 0 ? 1.0 : -1.0;
        stat::StationaryModel model{0.25, 0.25 + sign * 1.0 / n13, rs};
        const i64 x1 = 1 + static_cast<i64>(rs.block(0).first % static_cast<u64>(n13 * 2));
        const i64 x2 = x1 + 1 + static_cast<i64>(rs.block(1).first % static_cast<u64>(n13 * 2));
        const auto c = stat::coupling_inequality_check(bulk, model, N, x1, x2);
        if (c.premise_up) {
            ++premises;
            if (!c.holds_up) ++violations;
        }
        if (c.premise_down) {
            ++premises;
            if (!c.holds_down) ++violations;
        }
    }
    r.pass = violations == 0 && premises > 0;
    r.detail = std::to_string(premises) + " held premises, " + std::to_string(violations) +
               " violations";
    return r;
}

CriterionResult c10_exit_tails_and_good_event(Context& ctx) {
    CriterionResult r{10, "exit-point tails and the exit-ordering event", true, "", 0};
    const i64 N = ctx.opts.quick ? 200 : 500;
    const i64 reps_stat = ctx.opts.quick ? 3000 : 20000;
    const i64 reps_plain = ctx.opts.quick ? 2000 : 5000;
    const std::vector<double> m_grid = ctx.opts.quick
                                           ? std::vector<double>{0.25, 0.4, 0.55, 0.7, 0.9}
                                           : std::vector<double>{0.4, 0.6, 0.8, 1.0, 1.25, 1.5};
    std::ostringstream detail;

    auto gaussian_fit = [&](const std::vector<stat::TailPoint>& prof, i64 reps,
                            const char* name) {
        std::vector<double> xs, ys;
        for (const auto& tp : prof) {
            if (tp.probability * static_cast<double>(reps) >= 10 && tp.probability <= 0.95) {
                xs.push_back(tp.m * tp.m);
                ys.push_back(std::log(tp.probability));
            }
        }
        if (xs.size() < 3) {
            r.pass = false;
            detail << name << ": too few estimable levels  ";
            return;
        }
        const double n = static_cast<double>(xs.size());
        double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
        for (size_t i = 0; i < xs.size(); ++i) {
            sx += xs[i];
            sy += ys[i];
            sxx += xs[i] * xs[i];
            sxy += xs[i] * ys[i];
            syy += ys[i] * ys[i];
        }
        const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        const double r2 = (n * sxy - sx * sy) * (n * sxy - sx * sy) /
                          ((n * sxx - sx * sx) * (n * syy - sy * sy));
        detail << name << ": slope=" << fmt(slope) << " R2=" << fmt(r2) << "  ";
        if (!(slope < 0.0 && r2 >= 0.8)) r.pass = false;
    };

    const SeedSpec seed{ctx.opts.master_seed, 0};
    gaussian_fit(stat::exit_tail_profile(N, 0.25, 0.5, 1.0, m_grid, reps_stat,
                                         seed.with_tag(1)),
                 reps_stat, "stationary");
    gaussian_fit(stat::exit_tail_profile_plain(N, 0.25, 0.75, 1.0, m_grid, reps_plain,
                                               seed.with_tag(2)),
                 reps_plain, "plain");

    // exit-ordering event: N is chosen so lambda +- r N^(-1/3) stays in (0,1)
    // at the largest r of the grid
    const i64 ge_N = ctx.opts.quick ? 1100 : 4200;
    const std::vector<double> r_grid =
        ctx.opts.quick ? std::vector<double>{1.0, 2.0} : std::vector<double>{1.0, 2.0, 4.0, 8.0};
    const i64 ge_reps = ctx.opts.quick ? 120 : 500;
    std::vector<double> comp;
    for (double rr : r_grid)
        comp.push_back(stat::good_event_complement(ge_N, rr, 2.0, 0.5, 0.75, ge_reps,
                                                   seed.with_tag(3)));
    detail << "complement:";
    for (double c : comp) detail << " " << fmt(c);
    for (size_t i = 1; i < comp.size(); ++i)
        if (comp[i] > comp[i - 1]) r.pass = false;
    if (comp.back() > 0.05) r.pass = false;
    r.detail = detail.str();
    return r;
}

CriterionResult c11_tightness_trend(Context& ctx) {
    CriterionResult r{11, "modulus of the rescaled process shrinks with N", true, "", 0};
    const i64 n_small = ctx.opts.quick ? 200 : 500;
    const i64 n_large = ctx.opts.quick ? 1000 : 4000;
    const i64 reps = ctx.opts.quick ? 300 : 2000;
    const ShockConstants sc = shock_constants(0.25, 0.75);
    const SeedSpec seed = SeedSpec{ctx.opts.master_seed, 0}.with_tag(6);
    const i64 corridor = static_cast<i64>(
        std::ceil(14.0 * std::pow(static_cast<double>(n_large), 2.0 / 3.0)));
    auto med = [](std::vector<double> v) {
        std::sort(v.begin(), v.end());
        return v[v.size() / 2];
    };
    const double m_small = med(modulus_samples(n_small, 2.0, 5, reps, sc, seed, 0));
    const double m_large = med(modulus_samples(n_large, 2.0, 5, reps, sc, seed, corridor));
    r.pass = m_large < m_small;
    r.detail = "median sup-increment: N=" + std::to_string(n_small) + ": " + fmt(m_small) +
               "  N=" + std::to_string(n_large) + ": " + fmt(m_large);
    return r;
}

CriterionResult c12_tracy_widom_numerics(Context& ctx) {
    CriterionResult r{12, "Tracy-Widom tables", true, "", 0};
    std::ostringstream detail;
    double worst = 0.0;
    for (double s = -10.0; s <= 7.0 + 1e-9; s += 0.02) {
        worst = std::max(worst, std::fabs(tw::f_gue_cdf(s, 64) - tw::f_gue_cdf(s, 128)));
        worst = std::max(worst, std::fabs(tw::f_goe_cdf(s, 64) - tw::f_goe_cdf(s, 128)));
    }
    detail << "order64 vs order128: " << fmt(worst, 3) << "  ";
    if (worst >= 1e-8) r.pass = false;

    const double gue_mean = ctx.gue.mean();
    const double goe_mean = ctx.goe.mean();
    const double goe_var = ctx.goe.variance();
    detail << "GUE mean " << fmt(gue_mean, 6) << "  GOE mean " << fmt(goe_mean, 6) << " var "
           << fmt(goe_var, 6);
    if (std::fabs(gue_mean + 1.771) > 0.001) r.pass = false;
    if (std::fabs(goe_mean + 1.2065) > 0.002) r.pass = false;
    if (std::fabs(goe_var - 1.608) > 0.005) r.pass = false;

    for (const tw::DistTable* t : {&ctx.gue, &ctx.goe}) {
        for (size_t i = 1; i < t->cdf.size(); ++i)
            if (t->cdf[i] < t->cdf[i - 1]) r.pass = false;
        if (t->cdf.front() > 1e-6 || 1.0 - t->cdf.back() > 1e-6) r.pass = false;
    }
    r.detail = detail.str();
    return r;
}

CriterionResult c13_determinism(Context& ctx) {
    CriterionResult r{13, "byte-identical outputs across worker counts", true, "", 0};
    mc::ExperimentConfig cfg;
    cfg.t = 100.0;
    cfg.replicas = 200;
    cfg.master_seed = ctx.opts.master_seed;
    cfg.workers = 1;
    const std::string csv1 = mc::samples_to_csv(mc::run_shock_experiment(cfg));
    cfg.workers = 8;
    const std::string csv8 = mc::samples_to_csv(mc::run_shock_experiment(cfg));
    r.pass = csv1 == csv8;
    r.detail = r.pass ? "CSV bytes equal at workers 1 and 8"
                      : "CSV outputs differ between worker counts";
    return r;
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const Options& opts, std::ostream& progress) {
    Context ctx;
    ctx.opts = opts;
    ctx.goe = tw::tabulate_goe(64);
    ctx.gue = tw::tabulate_gue(64);

    using Fn = CriterionResult (*)(Context&);
    const Fn criteria[] = {c1_lpp_tasep_equality, c2_interface_equality, c3_shock_speed,
                           c4_fluctuation_exponent, c5_limit_law, c6_goe_one_point,
                           c7_gue_point_to_point, c8_stationarity, c9_coupling_lemma,
                           c10_exit_tails_and_good_event, c11_tightness_trend,
                           c12_tracy_widom_numerics, c13_determinism};

    std::vector<CriterionResult> results;
    for (int i = 0; i < 13; ++i) {
        if (!opts.only.empty() &&
            std::find(opts.only.begin(), opts.only.end(), i + 1) == opts.only.end())
            continue;
        const auto t0 = Clock::now();
        CriterionResult res = criteria[i](ctx);
        res.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
        progress << "[" << (res.number < 10 ? " " : "") << res.number << "] "
                 << (res.pass ? "PASS " : "FAIL ") << res.name << " -- " << res.detail << " ("
                 << fmt(res.seconds, 3) << "s)" << std::endl;
        results.push_back(std::move(res));
    }
    return results;
}

bool all_pass(const std::vector<CriterionResult>& results) {
    for (const auto& r : results)
        if (!r.pass) return false;
    return !results.empty();
}

}  // namespace shocklab::accept
