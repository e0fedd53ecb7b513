#include "catbell/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <thread>

#include <nlohmann/json.hpp>

#include "catbell/fock.hpp"

namespace catbell {

namespace {

constexpr double kInvalid = -std::numeric_limits<double>::infinity();
constexpr double kDiameterTol = 1e-7;
constexpr double kSpreadTol = 1e-10;
constexpr int kHaltonPrimes[13] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41};

double halton(std::uint64_t index, int base) {
    double f = 1.0;
    double r = 0.0;
    while (index > 0) {
        f /= base;
        r += f * static_cast<double>(index % base);
        index /= base;
    }
    return r;
}

MeasurementSettings settings_from(const std::array<double, 13>& x) {
    return {{x[0], x[1]}, {x[2], x[3]}, {x[4], x[5]}, {x[6], x[7]}};
}

struct Objective {
    const OptimizationProblem& problem;

    // |CHSH| at the parameter point; -inf on a degenerate state.
    double operator()(const std::array<double, 13>& x) const {
        CatStateParams state;
        if (problem.fixed_state) {
            state = *problem.fixed_state;
        } else {
            try {
                state = make_cat_state({x[8], x[9]}, {x[10], x[11]}, x[12]);
            } catch (const DegenerateStateError&) {
                return kInvalid;
            }
        }
        return std::abs(chsh(settings_from(x), state).value);
    }
};

struct RestartOutcome {
    double best = kInvalid;
    std::array<double, 13> best_point{};
    long evaluations = 0;
    std::vector<std::pair<long, double>> improvements;  // local eval index
    bool start_valid = false;
};

// One bounded Nelder-Mead descent on the active coordinates.
RestartOutcome run_restart(const OptimizationProblem& problem,
                           const std::vector<std::size_t>& active,
                           const std::array<double, 13>& start, long eval_budget) {
    const Objective objective{problem};
    RestartOutcome out;

    auto clamp = [&](std::array<double, 13>& x) {
        for (std::size_t k : active) {
            x[k] = std::clamp(x[k], problem.bounds[k].lo, problem.bounds[k].hi);
        }
    };
    auto eval = [&](std::array<double, 13>& x) {
        clamp(x);
        const double v = objective(x);
        ++out.evaluations;
        if (v > out.best) {
            out.best = v;
            out.best_point = x;
            out.improvements.emplace_back(out.evaluations, v);
        }
        return v;
    };

    std::array<double, 13> x0 = start;
    const double f0 = eval(x0);
    out.start_valid = std::isfinite(f0);

    const std::size_t m = active.size();
    if (m == 0) return out;

    // Initial simplex: start plus one vertex per active coordinate.
    struct Vertex {
        std::array<double, 13> x;
        double f;
    };
    std::vector<Vertex> simplex;
    simplex.push_back({x0, f0});
    for (std::size_t i = 0; i < m && out.evaluations < eval_budget; ++i) {
        const std::size_t k = active[i];
        const double span = problem.bounds[k].hi - problem.bounds[k].lo;
        std::array<double, 13> xi = x0;
        xi[k] += (xi[k] + 0.1 * span <= problem.bounds[k].hi) ? 0.1 * span : -0.1 * span;
        simplex.push_back({xi, eval(xi)});
    }
    if (simplex.size() < m + 1) return out;  // budget ran out while seeding

    auto by_descending = [](const Vertex& a, const Vertex& b) { return a.f > b.f; };
    std::sort(simplex.begin(), simplex.end(), by_descending);

    while (out.evaluations < eval_budget) {
        // Convergence on geometry or on objective spread, whichever first.
        double diameter = 0.0;
        for (std::size_t v = 1; v <= m; ++v) {
            for (std::size_t k : active) {
                diameter = std::max(diameter, std::abs(simplex[v].x[k] - simplex[0].x[k]));
            }
        }
        const double spread = std::isfinite(simplex[m].f) ? simplex[0].f - simplex[m].f
                                                          : std::numeric_limits<double>::infinity();
        if (diameter < kDiameterTol || spread < kSpreadTol) break;

        std::array<double, 13> centroid = simplex[0].x;
        for (std::size_t k : active) {
            double s = 0.0;
            for (std::size_t v = 0; v < m; ++v) s += simplex[v].x[k];
            centroid[k] = s / static_cast<double>(m);
        }
        auto blend = [&](double coeff) {
            std::array<double, 13> x = centroid;
            for (std::size_t k : active) {
                x[k] = centroid[k] + coeff * (centroid[k] - simplex[m].x[k]);
            }
            return x;
        };

        std::array<double, 13> xr = blend(1.0);  // reflection
        const double fr = eval(xr);
        if (fr > simplex[0].f && out.evaluations < eval_budget) {
            std::array<double, 13> xe = blend(2.0);  // expansion
            const double fe = eval(xe);
            simplex[m] = fe > fr ? Vertex{xe, fe} : Vertex{xr, fr};
        } else if (fr > simplex[m - 1].f) {
            simplex[m] = {xr, fr};
        } else {
            const bool outside = fr > simplex[m].f;
            if (out.evaluations >= eval_budget) break;
            std::array<double, 13> xc = blend(outside ? 0.5 : -0.5);  // contraction
            const double fc = eval(xc);
            if (fc > (outside ? fr : simplex[m].f)) {
                simplex[m] = {xc, fc};
            } else {
                // Shrink toward the best vertex.
                for (std::size_t v = 1; v <= m && out.evaluations < eval_budget; ++v) {
                    for (std::size_t k : active) {
                        simplex[v].x[k] = simplex[0].x[k] + 0.5 * (simplex[v].x[k] - simplex[0].x[k]);
                    }
                    simplex[v].f = eval(simplex[v].x);
                }
            }
        }
        std::sort(simplex.begin(), simplex.end(), by_descending);
    }
    return out;
}

void validate_problem(const OptimizationProblem& problem) {
    if (problem.budget < 100) throw std::invalid_argument("budget must be >= 100");
    if (problem.restarts < 1) throw std::invalid_argument("restarts must be >= 1");
    if (problem.restarts > problem.budget) {
        throw std::invalid_argument("restarts must not exceed the evaluation budget");
    }
    for (std::size_t k = 0; k < problem.dimensions(); ++k) {
        const auto& b = problem.bounds[k];
        if (!std::isfinite(b.lo) || !std::isfinite(b.hi) || b.lo > b.hi) {
            throw std::invalid_argument("bounds must be finite intervals with lo <= hi");
        }
    }
}

}  // namespace

OptimizationProblem fixed_state_problem(const CatStateParams& state, double settings_box,
                                        long budget, int restarts, std::uint64_t seed) {
    OptimizationProblem p;
    p.fixed_state = state;
    for (std::size_t k = 0; k < 8; ++k) p.bounds[k] = {-settings_box, settings_box};
    p.budget = budget;
    p.restarts = restarts;
    p.seed = seed;
    return p;
}

OptimizationProblem reference_problem(long budget, int restarts, std::uint64_t seed) {
    OptimizationProblem p;
    for (std::size_t k = 0; k < 8; ++k) p.bounds[k] = {-3.0, 3.0};
    p.bounds[8] = {0.3, 2.5};                          // Re(sigma)
    p.bounds[9] = {0.0, 0.0};                          // Im(sigma) pinned
    p.bounds[10] = {0.3, 2.5};                         // Re(eta)
    p.bounds[11] = {0.0, 0.0};                         // Im(eta) pinned
    p.bounds[12] = {std::numbers::pi, std::numbers::pi};  // phi pinned
    p.budget = budget;
    p.restarts = restarts;
    p.seed = seed;
    return p;
}

OptimizationResult maximize_violation(const OptimizationProblem& problem, int workers) {
    validate_problem(problem);

    std::vector<std::size_t> active;
    for (std::size_t k = 0; k < problem.dimensions(); ++k) {
        if (!problem.bounds[k].pinned()) active.push_back(k);
    }

    // Start points: consecutive Halton points, the window selected by the
    // seed. Restarts are stratified over contraction scales toward the box
    // center, independently for the settings block (dims 0-7) and the state
    // block (dims 8-12), so every combination of wide and narrow shells is
    // seeded every nine restarts.
    constexpr double kStartScales[3] = {1.0, 0.5, 0.25};
    const int restarts = problem.restarts;
    std::vector<std::array<double, 13>> starts(restarts);
    for (int r = 0; r < restarts; ++r) {
        std::array<double, 13> x{};
        for (std::size_t k = 0; k < problem.dimensions(); ++k) x[k] = problem.bounds[k].lo;
        const std::uint64_t index = problem.seed + static_cast<std::uint64_t>(r) + 1;
        const double settings_scale = kStartScales[r % 3];
        const double state_scale = kStartScales[(r / 3) % 3];
        for (std::size_t i = 0; i < active.size(); ++i) {
            const std::size_t k = active[i];
            const double h = halton(index, kHaltonPrimes[i % 13]);
            const double scale = k < 8 ? settings_scale : state_scale;
            const double center = 0.5 * (problem.bounds[k].lo + problem.bounds[k].hi);
            const double lo = center + scale * (problem.bounds[k].lo - center);
            const double hi = center + scale * (problem.bounds[k].hi - center);
            x[k] = lo + h * (hi - lo);
        }
        starts[r] = x;
    }

    const long per_restart = std::max<long>(1, problem.budget / restarts);
    std::vector<RestartOutcome> outcomes(restarts);

    if (workers < 1) workers = 1;
    if (workers == 1 || restarts == 1) {
        for (int r = 0; r < restarts; ++r) {
            outcomes[r] = run_restart(problem, active, starts[r], per_restart);
        }
    } else {
        std::vector<std::thread> pool;
        const int chunk = (restarts + workers - 1) / workers;
        for (int t = 0; t < workers; ++t) {
            const int first = t * chunk;
            const int last = std::min(restarts, first + chunk);
            if (first >= last) break;
            pool.emplace_back([&, first, last] {
                for (int r = first; r < last; ++r) {
                    outcomes[r] = run_restart(problem, active, starts[r], per_restart);
                }
            });
        }
        for (auto& th : pool) th.join();
    }

    if (std::none_of(outcomes.begin(), outcomes.end(),
                     [](const RestartOutcome& o) { return o.start_valid; })) {
        throw DegenerateRegionError("every optimizer start point is a degenerate state");
    }

    // Deterministic merge: best value, ties by restart index; trace indices
    // laid out as if restarts ran back to back.
    OptimizationResult result;
    result.seed = problem.seed;
    int best_r = -1;
    long offset = 0;
    double incumbent = kInvalid;
    for (int r = 0; r < restarts; ++r) {
        const auto& o = outcomes[r];
        for (const auto& [local_index, value] : o.improvements) {
            if (value > incumbent) {
                incumbent = value;
                result.trace.emplace_back(offset + local_index, value);
            }
        }
        if (best_r < 0 || o.best > outcomes[best_r].best) best_r = r;
        offset += o.evaluations;
        result.evaluations_used += o.evaluations;
    }

    const auto& winner = outcomes[best_r];
    const auto& x = winner.best_point;
    result.best_settings = settings_from(x);
    result.best_state =
        problem.fixed_state ? *problem.fixed_state : make_cat_state({x[8], x[9]}, {x[10], x[11]}, x[12]);

    // Certify from scratch along both routes before reporting.
    const double analytic = std::abs(chsh(result.best_settings, result.best_state).value);
    double extent = std::max({std::abs(result.best_state.sigma), std::abs(result.best_state.eta),
                              std::abs(result.best_settings.z), std::abs(result.best_settings.z_prime),
                              std::abs(result.best_settings.w), std::abs(result.best_settings.w_prime)});
    const int cutoff = min_cutoff(extent);
    const double oracle = std::abs(oracle_chsh(result.best_settings, result.best_state, cutoff));
    if (std::abs(analytic - oracle) > 1e-7) {
        throw CertificationError("analytic |CHSH| " + std::to_string(analytic) +
                                 " and oracle value " + std::to_string(oracle) +
                                 " disagree beyond 1e-7 at cutoff " + std::to_string(cutoff));
    }
    if (analytic > kTsirelsonBound + 1e-9) {
        throw TsirelsonViolationError("certified value exceeds the quantum bound");
    }
    result.best_value = analytic;
    return result;
}

namespace {

nlohmann::json complex_json(Amplitude v) {
    return {{"re", v.real()}, {"im", v.imag()}};
}

Amplitude complex_from(const nlohmann::json& j) {
    return {j.at("re").get<double>(), j.at("im").get<double>()};
}

}  // namespace

nlohmann::json result_to_json(const OptimizationResult& result) {
    return {{"best_value", result.best_value},
            {"settings",
             {{"z", complex_json(result.best_settings.z)},
              {"z_prime", complex_json(result.best_settings.z_prime)},
              {"w", complex_json(result.best_settings.w)},
              {"w_prime", complex_json(result.best_settings.w_prime)}}},
            {"state",
             {{"sigma", complex_json(result.best_state.sigma)},
              {"eta", complex_json(result.best_state.eta)},
              {"phi", result.best_state.phi}}},
            {"evaluations_used", result.evaluations_used},
            {"seed", result.seed}};
}

OptimizationResult result_from_json(const nlohmann::json& j) {
    OptimizationResult r;
    r.best_value = j.at("best_value").get<double>();
    const auto& s = j.at("settings");
    r.best_settings = {complex_from(s.at("z")), complex_from(s.at("z_prime")),
                       complex_from(s.at("w")), complex_from(s.at("w_prime"))};
    const auto& st = j.at("state");
    r.best_state = make_cat_state(complex_from(st.at("sigma")), complex_from(st.at("eta")),
                                  st.at("phi").get<double>());
    r.evaluations_used = j.at("evaluations_used").get<long>();
    r.seed = j.at("seed").get<std::uint64_t>();
    return r;
}

}  // namespace catbell
