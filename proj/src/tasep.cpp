#include "shocklab/tasep.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "shocklab/lpp.hpp"

namespace shocklab::tasep {

i64 default_halfwidth(double horizon) {
    return static_cast<i64>(std::ceil(2.0 * horizon + 10.0 * std::sqrt(horizon) + 10.0));
}

void TasepConfig::validate() const {
    if (!(lambda > 0.0 && lambda < 1.0 && rho > 0.0 && rho < 1.0))
        throw InvalidParameter("TasepConfig: densities must lie in (0,1)");
    if (!(lambda < rho) && !allow_unordered)
        throw InvalidParameter("TasepConfig: lambda < rho required for shock runs");
    if (horizon < 0.0) throw InvalidParameter("TasepConfig: negative horizon");
    if (window_halfwidth != 0 && window_halfwidth < default_halfwidth(horizon))
        throw InvalidParameter("TasepConfig: window too small for the horizon");
}

i64 TasepConfig::halfwidth() const {
    return window_halfwidth != 0 ? window_halfwidth : default_halfwidth(horizon);
}

ShockSample make_shock_sample(i64 x_t, i64 n_t, double t, double lambda, double rho) {
    ShockSample s;
    s.x_t = x_t;
    s.n_t = n_t;
    if (t > 0.0) {
        const double t13 = std::cbrt(t);
        const double v = 1.0 - lambda - rho;
        const double denom = 1.0 - lambda - rho + 2.0 * lambda * rho;
        s.x_rescaled = (static_cast<double>(x_t) - v * t) / t13;
        s.n_rescaled = (static_cast<double>(n_t) - denom * t) / t13;  // 2t/mu0 = denom*t
    }
    return s;
}

namespace {

// shared by every engine: the deterministic two-density initial sites
i64 lambda_site(double lambda, i64 n) { return -snapped_floor(static_cast<double>(n) / lambda); }
i64 rho_site(double rho, i64 n) { return -snapped_floor(static_cast<double>(n) / rho); }

}  // namespace

TasepState::TasepState(const TasepConfig& config) : config_(config) {
    config_.validate();
    half_ = config_.halfwidth();
    occ_.assign(2 * half_ + 1, 0);
    for (i64 n = 1;; ++n) {
        const i64 s = lambda_site(config_.lambda, n);
        if (s < -half_) break;
        occ_[s + half_] = 1;
    }
    for (i64 n = -1;; --n) {
        const i64 s = rho_site(config_.rho, n);
        if (s > half_) break;
        occ_[s + half_] = 1;
    }
    sc_idx_ = half_;  // origin
    occ_[sc_idx_] = 2;
}

TasepState init_shock_state(const TasepConfig& config) { return TasepState(config); }

TasepState TasepState::with_occupancy(const TasepConfig& config,
                                      const std::vector<signed char>& occ, i64 sc_site) {
    TasepState st(config);
    if (occ.size() != st.occ_.size())
        throw InvalidParameter("with_occupancy: occupancy size must be 2*halfwidth + 1");
    if (occ[sc_site + st.half_] != 2)
        throw InvalidParameter("with_occupancy: sc_site must carry the second-class mark");
    st.occ_ = occ;
    st.sc_idx_ = sc_site + st.half_;
    return st;
}

i64 TasepState::occupancy(i64 site) const {
    if (site < -half_ || site > half_) throw InvalidParameter("occupancy: site outside window");
    return occ_[site + half_];
}

void TasepState::apply_ring(i64 y) {
    const i64 n = static_cast<i64>(occ_.size());
    const signed char a = occ_[y];
    if (a == 0) return;
    if (y == n - 1) {
        // exits the window; nothing to its left can be influenced by it again
        if (a == 2) throw WindowOverflow("second-class particle reached the window edge");
        occ_[y] = 0;
        return;
    }
    const signed char b = occ_[y + 1];
    if (a == 1) {
        if (b == 0) {
            occ_[y] = 0;
            occ_[y + 1] = 1;
        } else if (b == 2) {
            occ_[y] = 2;
            occ_[y + 1] = 1;
            sc_idx_ = y;
            ++n_steps_;
            if (sc_idx_ <= 1) throw WindowOverflow("second-class particle near the left edge");
        }
    } else if (a == 2) {
        if (b == 0) {
            occ_[y] = 0;
            occ_[y + 1] = 2;
            sc_idx_ = y + 1;
            ++n_steps_;
            if (sc_idx_ >= n - 2) throw WindowOverflow("second-class particle near the right edge");
        }
    }
}

void TasepState::refill_rings(const SeedSpec& clocks) {
    constexpr size_t kBatch = 4096;
    ring_times_.resize(kBatch);
    ring_sites_.resize(kBatch);
    const i64 n = static_cast<i64>(occ_.size());
    const double inv_n = 1.0 / static_cast<double>(n);
    // independent counters first: the Philox calls pipeline across iterations
    static thread_local std::vector<u64> words_t, words_s;
    words_t.resize(kBatch);
    words_s.resize(kBatch);
    for (size_t i = 0; i < kBatch; ++i) {
        const auto block = clocks.block(ring_counter_ + i);
        words_t[i] = block.first;
        words_s[i] = block.second;
    }
    ring_counter_ += kBatch;
    double acc = ring_time_;
    for (size_t i = 0; i < kBatch; ++i) {
        acc += detail::neg_log1m(uniform53(words_t[i])) * inv_n;
        ring_times_[i] = acc;
        ring_sites_[i] = static_cast<i32>(bounded(words_s[i], static_cast<u64>(n)));
    }
    ring_time_ = acc;
    ring_cursor_ = 0;
}

ShockSample TasepState::run_until(double t, const SeedSpec& seed) {
    if (t < time_) throw InvalidParameter("run_until: time goes backwards");
    if (t > config_.horizon + 1e-12) throw InvalidParameter("run_until: t beyond the horizon");
    const SeedSpec clocks = seed.with_tag(SeedSpec::kClocks);
    while (true) {
        if (ring_cursor_ >= ring_times_.size()) refill_rings(clocks);
        if (ring_times_[ring_cursor_] > t) break;
        apply_ring(ring_sites_[ring_cursor_]);
        ++ring_cursor_;
    }
    time_ = t;
    return make_shock_sample(sc_idx_ - half_, n_steps_, t, config_.lambda, config_.rho);
}

std::vector<i64> run_discrepancy_grid(const TasepConfig& config, const std::vector<double>& t_grid,
                                      const SeedSpec& seed) {
    config.validate();
    for (size_t i = 1; i < t_grid.size(); ++i)
        if (t_grid[i] < t_grid[i - 1]) throw InvalidParameter("run_discrepancy: unsorted grid");
    const i64 half = config.halfwidth();
    const i64 n = 2 * half + 1;
    std::vector<signed char> eta(n, 0), etap(n, 0);
    for (i64 k = 1;; ++k) {
        const i64 s = lambda_site(config.lambda, k);
        if (s < -half) break;
        eta[s + half] = etap[s + half] = 1;
    }
    for (i64 k = -1;; --k) {
        const i64 s = rho_site(config.rho, k);
        if (s > half) break;
        eta[s + half] = etap[s + half] = 1;
    }
    eta[half] = 1;  // the configurations differ only at the origin

    auto ring = [n](std::vector<signed char>& o, i64 y) {
        if (o[y] == 0) return;
        if (y == n - 1) {
            o[y] = 0;
            return;
        }
        if (o[y + 1] == 0) {
            o[y] = 0;
            o[y + 1] = 1;
        }
    };

    const SeedSpec clocks = seed.with_tag(SeedSpec::kClocks);
    const double inv_n = 1.0 / static_cast<double>(n);
    std::vector<i64> out;
    out.reserve(t_grid.size());
    u64 counter = 0;
    double clock = 0.0;
    double pend_time = 0.0;
    i64 pend_idx = 0;
    bool pending = false;
    // same stream layout as TasepState::run_until so the two couplings share
    // their clocks ring for ring
    for (double t : t_grid) {
        while (true) {
            if (!pending) {
                const auto block = clocks.block(counter++);
                clock += detail::neg_log1m(uniform53(block.first)) * inv_n;
                pend_time = clock;
                pend_idx = static_cast<i64>(bounded(block.second, static_cast<u64>(n)));
                pending = true;
            }
            if (pend_time > t) break;
            ring(eta, pend_idx);
            ring(etap, pend_idx);
            pending = false;
        }
        i64 count = 0, pos = 0;
        for (i64 y = 0; y < n; ++y)
            if (eta[y] != etap[y]) {
                ++count;
                pos = y - half;
            }
        if (count != 1)
            throw ContractViolation("run_discrepancy: discrepancy count " +
                                    std::to_string(count) + " at t=" + std::to_string(t));
        out.push_back(pos);
    }
    return out;
}

i64 run_discrepancy(const TasepConfig& config, double t, const SeedSpec& seed) {
    return run_discrepancy_grid(config, {t}, seed)[0];
}

i64 Trajectory::position_at(double t) const {
    if (t < 0.0) throw InvalidParameter("Trajectory: negative time");
    if (t >= horizon) throw InsufficientHorizon("Trajectory: beyond computed horizon");
    const auto it = std::upper_bound(times.begin(), times.end(), t);
    return positions[static_cast<size_t>(it - times.begin()) - 1];
}

i64 Trajectory::steps_until(double t) const {
    if (t >= horizon) throw InsufficientHorizon("Trajectory: beyond computed horizon");
    const auto it = std::upper_bound(times.begin(), times.end(), t);
    return static_cast<i64>(it - times.begin()) - 1;
}

namespace {

// Waiting-time event engine over right-to-left labeled particles. Particle at
// internal index i is blocked exactly by index i-1. A jump into site s
// consumes the field weight at (s + label, label).
class WaitingTimeEngine {
public:
    WaitingTimeEngine(const WeightField& field, std::vector<i64> labels,
                      std::vector<i64> positions)
        : field_(field), labels_(std::move(labels)), pos_(std::move(positions)) {
        const size_t n = pos_.size();
        arrival_.assign(n, 0.0);
        blocked_.assign(n, 0);
        for (size_t i = 0; i < n; ++i) {
            if (i > 0 && pos_[i] >= pos_[i - 1])
                throw InvalidParameter("WaitingTimeEngine: positions must strictly decrease");
            if (free_ahead(i))
                schedule(i, 0.0);
            else
                blocked_[i] = 1;
        }
    }

    // runs events with time <= horizon, invoking cb(time, index, new_site)
    template <class Cb>
    void run(double horizon, Cb&& cb) {
        while (!heap_.empty()) {
            const auto [t, i] = heap_.top();
            if (t > horizon) break;
            heap_.pop();
            const i64 vacated = pos_[i];
            pos_[i] = vacated + 1;
            arrival_[i] = t;
            cb(t, i, pos_[i]);
            if (free_ahead(i))
                schedule(i, t);
            else
                blocked_[i] = 1;
            const size_t behind = i + 1;
            if (behind < pos_.size() && blocked_[behind] && pos_[behind] + 1 == vacated) {
                blocked_[behind] = 0;
                schedule(behind, std::max(arrival_[behind], t));
            }
        }
    }

    i64 label(size_t i) const { return labels_[i]; }
    i64 position(size_t i) const { return pos_[i]; }

private:
    bool free_ahead(size_t i) const { return i == 0 || pos_[i - 1] > pos_[i] + 1; }
    void schedule(size_t i, double enabled_at) {
        const i64 target = pos_[i] + 1;
        const double w = weight_at(field_, target + labels_[i], labels_[i]);
        heap_.emplace(enabled_at + w, i);
    }

    struct Ev {
        double t;
        size_t i;
        bool operator>(const Ev& o) const { return t > o.t; }
    };

    const WeightField& field_;
    std::vector<i64> labels_;
    std::vector<i64> pos_;
    std::vector<double> arrival_;
    std::vector<signed char> blocked_;
    std::priority_queue<Ev, std::vector<Ev>, std::greater<Ev>> heap_;
};

}  // namespace

Trajectory run_second_class_weighted(const WeightField& field, double lambda, double rho,
                                     double horizon) {
    if (!(lambda > 0.0 && lambda <= 0.5 && rho > lambda && rho < 1.0))
        throw InvalidParameter(
            "run_second_class_weighted: need 0 < lambda <= 1/2 and lambda < rho < 1 so the "
            "tracer construction is well defined");
    const i64 pad = default_halfwidth(horizon);
    const i64 n_left = static_cast<i64>(std::ceil(lambda * static_cast<double>(pad))) + 2;
    const i64 n_right = static_cast<i64>(std::ceil(rho * static_cast<double>(pad))) + 2;

    // rightmost first: labels ascend from the far right half to the far left
    std::vector<i64> labels, positions;
    for (i64 k = -n_right; k <= -1; ++k) {
        labels.push_back(k);
        positions.push_back(rho_site(rho, k) + 1);  // right half shifted by the extra site
    }
    labels.push_back(0);
    positions.push_back(1);  // the tracer
    for (i64 k = 1; k <= n_left; ++k) {
        labels.push_back(k);
        positions.push_back(lambda_site(lambda, k));
    }

    WaitingTimeEngine engine(field, labels, positions);

    Trajectory traj;
    traj.horizon = horizon;
    traj.times.push_back(0.0);
    traj.positions.push_back(0);
    i64 avatar_label = 0;
    i64 avatar_pos = 1;
    engine.run(horizon, [&](double t, size_t i, i64 site) {
        const i64 k = engine.label(i);
        if (k == avatar_label) {
            avatar_pos = site;
            traj.times.push_back(t);
            traj.positions.push_back(site - 1);
        } else if (site == avatar_pos - 1 && k == avatar_label + 1) {
            // a left particle filled the tracer hole: the second-class
            // particle was swapped one site to the left
            avatar_label = k;
            avatar_pos = site;
            traj.times.push_back(t);
            traj.positions.push_back(site - 1);
        }
    });
    if (avatar_label >= n_left - 1)
        throw WindowOverflow("run_second_class_weighted: left reservoir exhausted");
    return traj;
}

CouplingReport verify_lpp_coupling(const WeightField& field, i64 n_particles, i64 m_max,
                                   const std::vector<double>& t_grid) {
    if (n_particles <= 0 || m_max <= 0)
        throw InvalidParameter("verify_lpp_coupling: empty window");
    CouplingReport report;
    if (t_grid.empty()) return report;  // vacuous
    const double horizon = *std::max_element(t_grid.begin(), t_grid.end());

    // step initial data: particle n starts at -n
    std::vector<i64> labels, positions;
    for (i64 n = 1; n <= n_particles; ++n) {
        labels.push_back(n);
        positions.push_back(-n);
    }

    // arrival[n-1][m-1] = time particle n reaches site m - n (its m-th jump)
    std::vector<std::vector<double>> arrival(
        n_particles, std::vector<double>(m_max, std::numeric_limits<double>::infinity()));
    WaitingTimeEngine engine(field, labels, positions);
    engine.run(horizon, [&](double t, size_t i, i64 site) {
        const i64 n = engine.label(i);
        const i64 m = site + n;
        if (m >= 1 && m <= m_max) arrival[n - 1][m - 1] = t;
    });

    lpp::StartSet line;
    for (i64 n = 1; n <= n_particles; ++n) line.points.push_back({0, n});
    std::vector<Point> targets;
    targets.reserve(static_cast<size_t>(n_particles) * m_max);
    for (i64 n = 1; n <= n_particles; ++n)
        for (i64 m = 1; m <= m_max; ++m) targets.push_back({m, n});
    const auto values = lpp::solve_lines_to_points(field, {&line}, targets);

    for (i64 n = 1; n <= n_particles; ++n) {
        for (i64 m = 1; m <= m_max; ++m) {
            const auto& tv = values[0][static_cast<size_t>((n - 1) * m_max + (m - 1))];
            const double arr = arrival[n - 1][m - 1];
            const bool have_arrival = std::isfinite(arr);
            // recorded arrivals must match the passage time exactly
            if (have_arrival && (!tv.reachable || tv.value != arr)) {
                report.ok = false;
                if (report.first_failure.empty())
                    report.first_failure = "arrival/passage mismatch at (m=" +
                                           std::to_string(m) + ", n=" + std::to_string(n) + ")";
            }
            if (!have_arrival && tv.reachable && tv.value <= horizon) {
                report.ok = false;
                if (report.first_failure.empty())
                    report.first_failure = "passage time claims an arrival the dynamics never "
                                           "made at (m=" +
                                           std::to_string(m) + ", n=" + std::to_string(n) + ")";
            }
            for (double t : t_grid) {
                const bool lpp_side = tv.reachable && tv.value <= t;
                const bool tasep_side = have_arrival && arr <= t;
                ++report.checks;
                if (lpp_side != tasep_side) {
                    report.ok = false;
                    if (report.first_failure.empty())
                        report.first_failure = "event mismatch at (m=" + std::to_string(m) +
                                               ", n=" + std::to_string(n) +
                                               ", t=" + std::to_string(t) + ")";
                }
            }
        }
    }
    return report;
}

}  // namespace shocklab::tasep
