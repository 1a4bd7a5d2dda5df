#include "spikecert/solver.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace spikecert {

namespace {

struct WorkState {
    std::vector<double> x;
    std::vector<double> a;
};

// residual r = Phi m - y in observation coordinates
std::vector<double> residual(const Framework& fw, const WorkState& st, const std::vector<double>& y) {
    std::vector<double> r(y.size(), 0.0);
    const auto& atoms = fw.measure().atoms;
    for (std::size_t k = 0; k < atoms.size(); ++k) {
        double acc = 0.0;
        for (std::size_t i = 0; i < st.x.size(); ++i)
            acc += st.a[i] * fw.atom_deriv<double>(0, st.x[i], atoms[k].location);
        r[k] = acc - y[k];
    }
    return r;
}

double objective(const Framework& fw, const WorkState& st, const std::vector<double>& y, double lambda) {
    auto r = residual(fw, st, y);
    double fit = 0.5 * fw.hilbert_inner(r, r);
    double mass = 0.0;
    for (double a : st.a) mass += a;
    return lambda * mass + fit;
}

// dual certificate eta(t) = <phi(t), y - Phi m> / lambda
double dual_value(const Framework& fw, const std::vector<double>& neg_r, double lambda, double t) {
    return fw.atom_observation_inner(0, t, neg_r) / lambda;
}

std::pair<double, double> solver_domain(const Framework& fw, const std::vector<double>& y, double lambda) {
    auto [slo, shi] = fw.measure().location_span();
    if (fw.kernel().family == KernelFamily::Gaussian) {
        double pad = 6.0 * fw.kernel().sigma;
        return {slo - pad, shi + pad};
    }
    // Laplace: the dual certificate is dominated by
    // sum_k w_k |y_k| e^{-t s_k} / lambda, which drops below 1/2 past the cutoff
    double c = fw.kernel().c;
    double smin = std::max(slo, 1e-12);
    double mass = 0.0;
    for (std::size_t k = 0; k < fw.measure().atoms.size(); ++k)
        mass += fw.measure().atoms[k].weight * std::fabs(y[k]);
    double hi = c + 1.0;
    while (mass * std::exp(-hi * smin) / lambda > 0.5 && hi < 1e5) hi *= 2.0;
    return {c, hi};
}

// Lawson-Hanson nonnegative least squares on the normal system:
// minimize lambda 1'a + 1/2 a'Ga - b'a over a >= 0.
std::vector<double> nnls_amplitudes(const Eigen::MatrixXd& G, const Eigen::VectorXd& rhs) {
    const int n = int(G.rows());
    std::vector<bool> passive(std::size_t(n), false);
    Eigen::VectorXd a = Eigen::VectorXd::Zero(n);
    for (int round = 0; round < 8 * n + 16; ++round) {
        Eigen::VectorXd grad = rhs - G * a; // negative gradient
        int best = -1;
        double bestg = 1e-14 * std::max(1.0, rhs.cwiseAbs().maxCoeff());
        for (int i = 0; i < n; ++i)
            if (!passive[std::size_t(i)] && grad(i) > bestg) { bestg = grad(i); best = i; }
        if (best < 0) break;
        passive[std::size_t(best)] = true;
        while (true) {
            std::vector<int> idx;
            for (int i = 0; i < n; ++i)
                if (passive[std::size_t(i)]) idx.push_back(i);
            Eigen::MatrixXd Gp(idx.size(), idx.size());
            Eigen::VectorXd bp(idx.size());
            for (std::size_t p = 0; p < idx.size(); ++p) {
                bp(long(p)) = rhs(idx[p]);
                for (std::size_t q = 0; q < idx.size(); ++q) Gp(long(p), long(q)) = G(idx[p], idx[q]);
            }
            Eigen::VectorXd sol = Gp.ldlt().solve(bp);
            bool feasible = true;
            for (std::size_t p = 0; p < idx.size(); ++p)
                if (sol(long(p)) <= 0.0) feasible = false;
            if (feasible) {
                a.setZero();
                for (std::size_t p = 0; p < idx.size(); ++p) a(idx[p]) = sol(long(p));
                break;
            }
            // step toward sol until the first passive amplitude hits zero
            double alpha = 1.0;
            int drop = -1;
            for (std::size_t p = 0; p < idx.size(); ++p) {
                double cur = a(idx[p]);
                double stp = sol(long(p));
                if (stp <= 0.0 && cur - stp > 0.0) {
                    double cand = cur / (cur - stp);
                    if (cand < alpha) { alpha = cand; drop = idx[p]; }
                }
            }
            for (std::size_t p = 0; p < idx.size(); ++p) a(idx[p]) = a(idx[p]) + alpha * (sol(long(p)) - a(idx[p]));
            if (drop >= 0) { a(drop) = 0.0; passive[std::size_t(drop)] = false; }
            else break;
        }
    }
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) out[std::size_t(i)] = std::max(0.0, a(i));
    return out;
}

void amplitude_update(const Framework& fw, WorkState& st, const std::vector<double>& y, double lambda) {
    const int n = int(st.x.size());
    if (n == 0) return;
    Eigen::MatrixXd G(n, n);
    Eigen::VectorXd rhs(n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) G(i, j) = fw.correlation(0, 0, st.x[std::size_t(i)], st.x[std::size_t(j)]);
        rhs(i) = fw.atom_observation_inner(0, st.x[std::size_t(i)], y) - lambda;
    }
    st.a = nnls_amplitudes(G, rhs);
}

void prune(WorkState& st, double floor) {
    WorkState out;
    for (std::size_t i = 0; i < st.x.size(); ++i) {
        if (st.a[i] > floor) {
            out.x.push_back(st.x[i]);
            out.a.push_back(st.a[i]);
        }
    }
    st = std::move(out);
}

void sort_and_merge(WorkState& st, double merge_radius) {
    std::vector<std::size_t> order(st.x.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return st.x[a] < st.x[b]; });
    WorkState out;
    for (std::size_t oi = 0; oi < order.size(); ++oi) {
        double x = st.x[order[oi]], a = st.a[order[oi]];
        if (!out.x.empty() && x - out.x.back() < merge_radius) {
            double wa = out.a.back(), wb = a;
            if (wa + wb > 0.0) out.x.back() = (out.x.back() * wa + x * wb) / (wa + wb);
            out.a.back() += a;
        } else {
            out.x.push_back(x);
            out.a.push_back(a);
        }
    }
    st = std::move(out);
}

// Joint damped-Newton polish over (x, a) with nonnegativity clamping.
void newton_polish(const Framework& fw, WorkState& st, const std::vector<double>& y, double lambda,
                   std::pair<double, double> box, int max_iter) {
    const int m = int(st.x.size());
    if (m == 0) return;
    double mu = 1e-8;
    double f = objective(fw, st, y, lambda);
    for (int it = 0; it < max_iter; ++it) {
        const int n = 2 * m;
        Eigen::VectorXd g(n);
        Eigen::MatrixXd H(n, n);
        auto r = residual(fw, st, y);
        std::vector<double> phin_r(std::size_t(3 * m));
        for (int i = 0; i < m; ++i)
            for (int d = 0; d <= 2; ++d)
                phin_r[std::size_t(3 * i + d)] = fw.atom_observation_inner(d, st.x[std::size_t(i)], r);
        for (int i = 0; i < m; ++i) {
            g(i) = st.a[std::size_t(i)] * phin_r[std::size_t(3 * i + 1)];
            g(m + i) = lambda + phin_r[std::size_t(3 * i)];
            for (int j = 0; j < m; ++j) {
                double c11 = fw.correlation(1, 1, st.x[std::size_t(i)], st.x[std::size_t(j)]);
                double c10 = fw.correlation(1, 0, st.x[std::size_t(i)], st.x[std::size_t(j)]);
                double c00 = fw.correlation(0, 0, st.x[std::size_t(i)], st.x[std::size_t(j)]);
                H(i, j) = st.a[std::size_t(i)] * st.a[std::size_t(j)] * c11;
                H(i, m + j) = st.a[std::size_t(i)] * c10;
                H(m + j, i) = H(i, m + j);
                H(m + i, m + j) = c00;
            }
            H(i, i) += st.a[std::size_t(i)] * phin_r[std::size_t(3 * i + 2)];
            H(i, m + i) += phin_r[std::size_t(3 * i + 1)];
            H(m + i, i) = H(i, m + i);
        }
        if (g.norm() < 1e-14 * std::max(1.0, std::fabs(f))) break;
        bool accepted = false;
        for (int tries = 0; tries < 24; ++tries) {
            Eigen::MatrixXd Hd = H + mu * Eigen::MatrixXd::Identity(n, n);
            Eigen::VectorXd step = Hd.ldlt().solve(-g);
            WorkState cand = st;
            bool ok = true;
            for (int i = 0; i < m; ++i) {
                cand.x[std::size_t(i)] = std::clamp(st.x[std::size_t(i)] + step(i), box.first, box.second);
                cand.a[std::size_t(i)] = std::max(0.0, st.a[std::size_t(i)] + step(m + i));
                if (i > 0 && !(cand.x[std::size_t(i)] > cand.x[std::size_t(i - 1)])) ok = false;
            }
            double fc = ok ? objective(fw, cand, y, lambda) : std::numeric_limits<double>::infinity();
            if (fc < f) {
                st = std::move(cand);
                f = fc;
                mu = std::max(mu * 0.3, 1e-12);
                accepted = true;
                break;
            }
            mu *= 10.0;
        }
        if (!accepted) break;
    }
}

} // namespace

SolverResult solve_pblasso(const Framework& fw, const std::vector<double>& y, double lambda,
                           const SolverOptions& opts) {
    if (!fw.measure().is_discrete()) throw UnsupportedClosedForm("the desk solver needs a discrete sampling measure");
    if (!(lambda > 0.0)) throw Error("lambda must be strictly positive");
    if (y.size() != fw.measure().size()) throw Error("observation length does not match the sample count");

    auto box = solver_domain(fw, y, lambda);
    const double span = box.second - box.first;
    WorkState st;
    SolverResult res;

    for (int outer = 0; outer < opts.max_outer; ++outer) {
        res.iterations = outer + 1;
        auto r = residual(fw, st, y);
        std::vector<double> neg_r(r.size());
        for (std::size_t k = 0; k < r.size(); ++k) neg_r[k] = -r[k];

        double best_t = box.first, best_v = -std::numeric_limits<double>::infinity();
        for (int i = 0; i < opts.grid_points; ++i) {
            double t = box.first + span * double(i) / double(opts.grid_points - 1);
            double v = dual_value(fw, neg_r, lambda, t);
            if (v > best_v) { best_v = v; best_t = t; }
        }
        double cell = span / double(opts.grid_points - 1);
        for (int i = 0; i <= opts.refine_factor; ++i) {
            double t = std::clamp(best_t - cell + 2.0 * cell * double(i) / double(opts.refine_factor), box.first, box.second);
            double v = dual_value(fw, neg_r, lambda, t);
            if (v > best_v) { best_v = v; best_t = t; }
        }

        bool support_ok = true;
        for (std::size_t i = 0; i < st.x.size(); ++i)
            if (dual_value(fw, neg_r, lambda, st.x[i]) < 1.0 - opts.opt_tol) support_ok = false;
        if (best_v <= 1.0 + opts.opt_tol && support_ok) {
            res.converged = true;
            break;
        }

        bool duplicate = false;
        for (double x : st.x)
            if (std::fabs(x - best_t) < 1e-9 * span) duplicate = true;
        if (!duplicate) {
            st.x.push_back(best_t);
            st.a.push_back(0.0);
            sort_and_merge(st, 1e-9 * span);
        }

        amplitude_update(fw, st, y, lambda);
        prune(st, opts.amp_floor);
        newton_polish(fw, st, y, lambda, box, opts.max_newton);
        sort_and_merge(st, 1e-7 * span);
        amplitude_update(fw, st, y, lambda);
        prune(st, opts.amp_floor);

        double obj = objective(fw, st, y, lambda);
        res.objective_history.push_back(obj);
    }

    // final dual audit, with the same local refinement as the insertion scan
    auto r = residual(fw, st, y);
    std::vector<double> neg_r(r.size());
    for (std::size_t k = 0; k < r.size(); ++k) neg_r[k] = -r[k];
    double worst = -std::numeric_limits<double>::infinity();
    double worst_t = box.first;
    for (int i = 0; i < opts.grid_points; ++i) {
        double t = box.first + span * double(i) / double(opts.grid_points - 1);
        double v = dual_value(fw, neg_r, lambda, t);
        if (v > worst) { worst = v; worst_t = t; }
    }
    double cell = span / double(opts.grid_points - 1);
    for (int i = 0; i <= opts.refine_factor; ++i) {
        double t = std::clamp(worst_t - cell + 2.0 * cell * double(i) / double(opts.refine_factor), box.first,
                              box.second);
        worst = std::max(worst, dual_value(fw, neg_r, lambda, t));
    }
    res.max_dual_violation = std::max(0.0, worst - 1.0);
    double support_deficit = 0.0;
    res.support_dual_values.clear();
    for (double x : st.x) {
        double v = dual_value(fw, neg_r, lambda, x);
        res.support_dual_values.push_back(v);
        support_deficit = std::max(support_deficit, 1.0 - v);
    }
    res.dual_gap = std::max(res.max_dual_violation, std::max(0.0, support_deficit));
    res.converged = res.dual_gap <= opts.opt_tol;
    res.objective = objective(fw, st, y, lambda);
    if (st.x.empty()) {
        res.spikes.positions.clear();
        res.spikes.amplitudes.clear();
    } else {
        res.spikes.positions = st.x;
        res.spikes.amplitudes = st.a;
    }
    return res;
}

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

} // namespace

ExperimentReport support_stability_experiment(const Framework& fw, const SpikeConfiguration& truth,
                                              const ExperimentConfig& config) {
    truth.validate(true);
    ExperimentReport rep;
    const int M = int(truth.count());
    std::vector<double> y0 = fw.forward(truth);

    for (std::size_t si = 0; si < config.noise_scales.size(); ++si) {
        double h = config.noise_scales[si];
        ScaleAggregate agg;
        agg.noise = h;
        int success = 0;
        double pos_sum = 0.0, amp_sum = 0.0, pos_max = 0.0;
        for (int trial = 0; trial < config.trials; ++trial) {
            std::uint64_t stream = splitmix64(config.seed * 0x100000001b3ull + si * 1000003ull + std::uint64_t(trial));
            std::mt19937_64 rng(stream);
            std::normal_distribution<double> gauss(0.0, 1.0);
            std::vector<double> y = y0;
            if (h > 0.0) {
                std::vector<double> w(y0.size());
                for (auto& g : w) g = gauss(rng);
                double nw = fw.hilbert_norm(w);
                for (std::size_t k = 0; k < w.size(); ++k) y[k] += w[k] * (h / nw);
            }
            double lambda = h > 0.0 ? h / config.alpha : config.lambda_floor;
            SolverResult sol = solve_pblasso(fw, y, lambda, config.solver);

            TrialRecord rec;
            rec.noise = h;
            rec.trial = trial;
            rec.n_spikes = int(sol.spikes.count());
            rec.dual_gap = sol.dual_gap;
            if (rec.n_spikes == M) {
                double pe = 0.0, ae = 0.0;
                for (int i = 0; i < M; ++i) {
                    pe = std::max(pe, std::fabs(sol.spikes.positions[std::size_t(i)] - truth.positions[std::size_t(i)]));
                    ae = std::max(ae, std::fabs(sol.spikes.amplitudes[std::size_t(i)] - truth.amplitudes[std::size_t(i)]));
                }
                rec.pos_err = pe;
                rec.amp_err = ae;
                ++success;
                pos_sum += pe;
                amp_sum += ae;
                pos_max = std::max(pos_max, pe);
            } else {
                rec.pos_err = std::numeric_limits<double>::quiet_NaN();
                rec.amp_err = std::numeric_limits<double>::quiet_NaN();
            }
            rep.trials.push_back(rec);
        }
        agg.success_rate = double(success) / double(config.trials);
        agg.mean_pos_err = success > 0 ? pos_sum / double(success) : std::numeric_limits<double>::quiet_NaN();
        agg.max_pos_err = success > 0 ? pos_max : std::numeric_limits<double>::quiet_NaN();
        agg.mean_amp_err = success > 0 ? amp_sum / double(success) : std::numeric_limits<double>::quiet_NaN();
        rep.scales.push_back(agg);
    }

    // log-log fit of mean position error against the noise scale
    std::vector<double> lx, ly;
    for (const auto& s : rep.scales)
        if (s.noise > 0.0 && s.success_rate > 0.0 && std::isfinite(s.mean_pos_err) && s.mean_pos_err > 0.0) {
            lx.push_back(std::log(s.noise));
            ly.push_back(std::log(s.mean_pos_err));
        }
    if (lx.size() >= 2) {
        double mx = 0.0, my = 0.0;
        for (std::size_t i = 0; i < lx.size(); ++i) { mx += lx[i]; my += ly[i]; }
        mx /= double(lx.size());
        my /= double(lx.size());
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < lx.size(); ++i) {
            num += (lx[i] - mx) * (ly[i] - my);
            den += (lx[i] - mx) * (lx[i] - mx);
        }
        if (den > 0.0) {
            rep.loglog_slope = num / den;
            rep.slope_defined = true;
        }
    }
    return rep;
}

} // namespace spikecert
