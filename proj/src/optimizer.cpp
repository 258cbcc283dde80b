#include "chp/optimizer.hpp"

#include "chp/border.hpp"
#include "chp/builder.hpp"
#include "chp/error.hpp"
#include "chp/point_index.hpp"
#include "chp/validation.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <numbers>
#include <set>
#include <thread>

namespace chp {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kDenseLimit = 200;

// ---- counter-based random stream -------------------------------------------

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Uniform in [0, 1) keyed by (seed, trial, disk, counter).
double uniform(std::uint64_t seed, std::uint64_t trial, std::uint64_t disk, std::uint64_t counter) {
    std::uint64_t h = splitmix64(seed);
    h = splitmix64(h ^ trial);
    h = splitmix64(h ^ (disk * 0x632be59bd9b4e019ULL));
    h = splitmix64(h ^ (counter + 0x2545f4914f6cdd1dULL));
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

// ---- pair energy ---------------------------------------------------------------

struct Evaluation {
    double log_energy = 0.0;
    Centers grad;  // gradient of log_energy
};

std::vector<std::pair<int, int>> interacting_pairs(const Centers& x, double lambda) {
    const auto n = static_cast<int>(x.cols());
    std::vector<std::pair<int, int>> pairs;
    if (n <= kDenseLimit) {
        pairs.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(n - 1) / 2);
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
        }
        return pairs;
    }
    // Terms with r^2 > 10 lambda are below 10^-s relative to the largest.
    return pairs_within(x, std::sqrt(10.0 * lambda));
}

Evaluation evaluate(const Centers& x, double s, double lambda, const PinSet& pins, bool with_gradient) {
    const auto pairs = interacting_pairs(x, lambda);
    Evaluation ev;
    if (pairs.empty()) {
        ev.log_energy = -INFINITY;
        if (with_gradient) ev.grad = Centers::Zero(2, x.cols());
        return ev;
    }
    std::vector<double> t(pairs.size());
    std::vector<double> r2(pairs.size());
    double top = -INFINITY;
    const double log_lambda = std::log(lambda);
    for (std::size_t p = 0; p < pairs.size(); ++p) {
        const auto [i, j] = pairs[p];
        r2[p] = (x.col(i) - x.col(j)).squaredNorm();
        if (r2[p] == 0.0) {
            throw Error(ErrorCode::CoincidentPoints, "centers " + std::to_string(i) + " and " + std::to_string(j) + " coincide");
        }
        t[p] = s * (log_lambda - std::log(r2[p]));
        top = std::max(top, t[p]);
    }
    double sum = 0.0;
    for (double v : t) sum += std::exp(v - top);
    ev.log_energy = top + std::log(sum);
    if (!with_gradient) return ev;

    ev.grad = Centers::Zero(2, x.cols());
    for (std::size_t p = 0; p < pairs.size(); ++p) {
        const auto [i, j] = pairs[p];
        const double w = std::exp(t[p] - top) / sum;
        const Point2 f = (-2.0 * s * w / r2[p]) * (x.col(i) - x.col(j));
        ev.grad.col(i) += f;
        ev.grad.col(j) -= f;
    }
    for (auto i : pins.indices) ev.grad.col(i).setZero();
    return ev;
}

PolygonSpec inner_polygon(const PackingConfiguration& c) {
    PolygonSpec p = c.polygon;
    p.delta = 0.0;
    return p;
}

void project_all(Centers& x, const PolygonSpec& spec, const std::vector<char>& frozen) {
    for (Eigen::Index i = 0; i < x.cols(); ++i) {
        if (!frozen[static_cast<std::size_t>(i)]) x.col(i) = project_inside<double>(spec, x.col(i));
    }
}

std::vector<char> frozen_mask(Eigen::Index n, const PinSet& pins) {
    std::vector<char> mask(static_cast<std::size_t>(n), 0);
    for (auto i : pins.indices) {
        if (i < 0 || i >= n) throw Error(ErrorCode::PreconditionViolated, "pin index out of range");
        mask[static_cast<std::size_t>(i)] = 1;
    }
    return mask;
}

// ---- parallel trials -------------------------------------------------------------

template <typename Result, typename Fn>
std::vector<Result> run_trials(int count, Fn fn) {
    std::vector<Result> results(static_cast<std::size_t>(count));
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(count));
    std::atomic<int> next{0};
    auto worker = [&] {
        for (int t = next++; t < count; t = next++) {
            try {
                results[static_cast<std::size_t>(t)] = fn(t);
            } catch (...) {
                errors[static_cast<std::size_t>(t)] = std::current_exception();
            }
        }
    };
    const int threads = std::min(worker_count(), count);
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < threads; ++w) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return results;
}

PackingConfiguration with_measured_diameter(PackingConfiguration c) {
    c.diameter = packing_radius(c.centers);
    return c;
}

// ---- exact tangency solve ------------------------------------------------------

// Treat every pair closer than (1 + gap) * dmin as a contact at a common distance D
// and every center within gap * dmin of an edge as lying on it; solve the resulting
// equations by damped Gauss-Newton. Disks without constraints do not move.
bool tangency_solve(PackingConfiguration& c, const std::vector<char>& frozen, double gap) {
    const PolygonSpec spec = inner_polygon(c);
    const Eigen::Index n = c.size();
    const double dmin = packing_radius(c.centers);
    std::vector<int> var(static_cast<std::size_t>(n), -1);
    int nv = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (!frozen[static_cast<std::size_t>(i)]) var[static_cast<std::size_t>(i)] = 2 * nv++;
    }
    const int d_var = 2 * nv;
    const int unknowns = d_var + 1;

    const auto contacts = pairs_within(c.centers, dmin * (1.0 + gap));
    std::vector<std::pair<int, int>> walls;  // (disk, edge) ; edge -1 = circle
    for (Eigen::Index i = 0; i < n; ++i) {
        if (frozen[static_cast<std::size_t>(i)]) continue;
        const Point2 p = c.centers.col(i);
        if (spec.is_circle()) {
            if (p.norm() - apothem(spec) >= -gap * dmin) walls.emplace_back(static_cast<int>(i), -1);
            continue;
        }
        for (int e = 0; e < spec.sigma; ++e) {
            if (edge_normal<double>(spec.sigma, e).dot(p) - apothem(spec) >= -gap * dmin) walls.emplace_back(static_cast<int>(i), e);
        }
    }
    if (contacts.empty()) return false;

    Centers x = c.centers;
    double big_d = dmin;
    double last = INFINITY;
    double current = INFINITY;
    for (int it = 0; it < 60; ++it) {
        const auto rows = static_cast<Eigen::Index>(contacts.size() + walls.size());
        Eigen::VectorXd r(rows);
        std::vector<Eigen::Triplet<double>> jac;
        Eigen::Index row = 0;
        for (const auto& [i, j] : contacts) {
            const Point2 v = x.col(i) - x.col(j);
            const double len = v.norm();
            const Point2 u = v / len;
            r(row) = len - big_d;
            const int vi = var[static_cast<std::size_t>(i)];
            const int vj = var[static_cast<std::size_t>(j)];
            if (vi >= 0) {
                jac.emplace_back(row, vi, u.x());
                jac.emplace_back(row, vi + 1, u.y());
            }
            if (vj >= 0) {
                jac.emplace_back(row, vj, -u.x());
                jac.emplace_back(row, vj + 1, -u.y());
            }
            jac.emplace_back(row, d_var, -1.0);
            ++row;
        }
        for (const auto& [i, e] : walls) {
            const Point2 p = x.col(i);
            const int vi = var[static_cast<std::size_t>(i)];
            const Point2 nrm = e < 0 ? Point2(p / p.norm()) : edge_normal<double>(spec.sigma, e);
            r(row) = (e < 0 ? p.norm() : nrm.dot(p)) - apothem(spec);
            jac.emplace_back(row, vi, nrm.x());
            jac.emplace_back(row, vi + 1, nrm.y());
            ++row;
        }
        const double res = r.lpNorm<Eigen::Infinity>();
        current = std::min(res, last);
        if (res <= 1e-15 * std::max(1.0, big_d) || !(res < last)) break;
        last = res;
        Eigen::SparseMatrix<double> j_mat(rows, unknowns);
        j_mat.setFromTriplets(jac.begin(), jac.end());
        Eigen::SparseMatrix<double> normal = j_mat.transpose() * j_mat;
        const double damping = 1e-14 * std::max(1.0, normal.diagonal().maxCoeff());
        for (int k = 0; k < unknowns; ++k) normal.coeffRef(k, k) += damping;
        Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(normal);
        if (solver.info() != Eigen::Success) return false;
        const Eigen::VectorXd step = solver.solve(-(j_mat.transpose() * r));
        if (!step.allFinite()) return false;
        for (Eigen::Index i = 0; i < n; ++i) {
            const int vi = var[static_cast<std::size_t>(i)];
            if (vi >= 0) x.col(i) += step.segment<2>(vi);
        }
        big_d += step(d_var);
    }
    if (!(current <= 1e-12 * big_d)) return false;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (containment_violation<double>(spec, x.col(i)) > 0.0) x.col(i) = project_inside<double>(spec, x.col(i));
    }
    c.centers = x;
    return true;
}

}  // namespace

void OptimizerParams::validate() const {
    if (!(s_initial >= 1.0) || !(s_initial < s_final) || !(s_final <= 1e9)) {
        throw Error(ErrorCode::PreconditionViolated, "require 1 <= s_initial < s_final <= 1e9");
    }
    if (!(s_factor > 1.0)) throw Error(ErrorCode::PreconditionViolated, "s_factor must exceed 1");
    if (!(perturb_amplitude > 0.0 && perturb_amplitude < 0.5)) {
        throw Error(ErrorCode::PreconditionViolated, "perturb_amplitude must lie in (0, 0.5)");
    }
    if (!(inner_tol > 0.0) || max_inner_iters < 1) {
        throw Error(ErrorCode::PreconditionViolated, "inner_tol > 0 and max_inner_iters >= 1 required");
    }
}

int worker_count() {
    if (const char* env = std::getenv("CHP_PACK_THREADS")) {
        const int v = std::atoi(env);
        if (v >= 1) return v;
    }
    return std::max(1, static_cast<int>(std::thread::hardware_concurrency()));
}

double log_energy(const Centers& centers, double s, double lambda) { return evaluate(centers, s, lambda, {}, false).log_energy; }

double energy(const Centers& centers, double s, double lambda) { return std::exp(log_energy(centers, s, lambda)); }

double energy(const PackingConfiguration& config, double s, double lambda) { return energy(config.centers, s, lambda); }

Centers log_energy_gradient(const Centers& centers, double s, double lambda, const PinSet& pins) {
    frozen_mask(centers.cols(), pins);
    return evaluate(centers, s, lambda, pins, true).grad;
}

Centers energy_gradient(const Centers& centers, double s, double lambda, const PinSet& pins) {
    frozen_mask(centers.cols(), pins);
    const Evaluation ev = evaluate(centers, s, lambda, pins, true);
    return std::exp(ev.log_energy) * ev.grad;
}

Centers energy_gradient(const PackingConfiguration& config, double s, double lambda, const PinSet& pins) {
    return energy_gradient(config.centers, s, lambda, pins);
}

PackingConfiguration minimize(const PackingConfiguration& config, double s, double lambda, const PinSet& pins,
                              const OptimizerParams& params, MinimizeStats* stats) {
    constexpr double kArmijo = 1e-4;
    const auto frozen = frozen_mask(config.size(), pins);
    const PolygonSpec spec = inner_polygon(config);
    PackingConfiguration out = config;
    Centers& x = out.centers;
    project_all(x, spec, frozen);

    Evaluation ev = evaluate(x, s, lambda, pins, true);
    if (!std::isfinite(ev.log_energy)) {
        if (stats) *stats = {0, ev.log_energy, ev.log_energy, true};
        return out;
    }
    const double scale = std::sqrt(lambda);
    const double gmax = ev.grad.lpNorm<Eigen::Infinity>();
    double alpha = gmax > 0.0 ? 1e-3 * scale / gmax : 0.0;
    MinimizeStats st;
    st.initial_log_energy = ev.log_energy;
    int quiet = 0;
    int it = 0;
    for (; it < params.max_inner_iters && alpha > 0.0; ++it) {
        Centers trial;
        Evaluation next;
        double decrease = 0.0;
        bool accepted = false;
        for (int back = 0; back < 60; ++back) {
            trial = x - alpha * ev.grad;
            project_all(trial, spec, frozen);
            const Centers dx = trial - x;
            if (dx.lpNorm<Eigen::Infinity>() == 0.0) break;
            try {
                next = evaluate(trial, s, lambda, pins, true);
            } catch (const Error& e) {
                // Two centers projected onto the same boundary point: shorten the step.
                if (e.code() != ErrorCode::CoincidentPoints) throw;
                alpha *= 0.5;
                continue;
            }
            if (!std::isfinite(next.log_energy) && !(next.log_energy == -INFINITY)) {
                throw Error(ErrorCode::NonFinite, "energy became non-finite during line search");
            }
            const double slope = (ev.grad.array() * dx.array()).sum();
            if (next.log_energy <= ev.log_energy + kArmijo * slope) {
                decrease = ev.log_energy - next.log_energy;
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!accepted) break;
        const Centers dx = trial - x;
        const Centers dy = next.grad - ev.grad;
        const double sy = (dx.array() * dy.array()).sum();
        const double ss = dx.squaredNorm();
        alpha = sy > 0.0 ? ss / sy : 2.0 * alpha;
        const double moved = dx.lpNorm<Eigen::Infinity>();
        x = std::move(trial);
        ev = std::move(next);
        if (!std::isfinite(alpha) || alpha <= 0.0) throw Error(ErrorCode::NonFinite, "step size diverged");
        const bool small = moved <= params.inner_tol * scale || decrease <= params.inner_tol * std::max(1.0, std::abs(ev.log_energy));
        quiet = small ? quiet + 1 : 0;
        if (quiet >= 3) {
            ++it;
            break;
        }
    }
    if (!x.allFinite()) throw Error(ErrorCode::NonFinite, "centers became non-finite");
    st.iterations = it;
    st.final_log_energy = ev.log_energy;
    st.energy_monotone = st.final_log_energy <= st.initial_log_energy;
    if (stats) *stats = st;
    return out;
}

PackingConfiguration run_ladder(const PackingConfiguration& config, const PinSet& pins, const OptimizerParams& params,
                                const ProgressFn& progress) {
    params.validate();
    PackingConfiguration x = config;
    double s = params.s_initial;
    for (int rung = 0;; ++rung) {
        const double dmin = packing_radius(x.centers);
        if (!(dmin > 0.0)) throw Error(ErrorCode::CoincidentPoints, "configuration has coincident centers");
        x = minimize(x, s, dmin * dmin, pins, params);
        if (progress) {
            x.diameter = packing_radius(x.centers);
            progress({rung, s, x.diameter, density(x)});
        }
        if (s >= params.s_final) break;
        s = std::min(s * params.s_factor, params.s_final);
    }
    return with_measured_diameter(std::move(x));
}

PackingConfiguration algorithm1(int sigma, int n, const OptimizerParams& params, int trials) {
    if (n < 2) throw Error(ErrorCode::PreconditionViolated, "algorithm1 needs at least two disks");
    if (trials < 1) throw Error(ErrorCode::PreconditionViolated, "trials must be >= 1");
    params.validate();
    const PolygonSpec spec = sigma == kCircle ? PolygonSpec::circle() : PolygonSpec{sigma, 0.0};
    if (!spec.is_circle() && sigma < 3) throw Error(ErrorCode::PreconditionViolated, "sigma must be >= 3");

    auto results = run_trials<PackingConfiguration>(trials, [&](int t) {
        PackingConfiguration c;
        c.polygon = spec;
        c.centers.resize(2, n);
        for (int i = 0; i < n; ++i) {
            const double tt = 0.5 * kPi * uniform(params.seed, static_cast<std::uint64_t>(t), static_cast<std::uint64_t>(i), 0);
            const double uu = 2.0 * kPi * uniform(params.seed, static_cast<std::uint64_t>(t), static_cast<std::uint64_t>(i), 1);
            c.centers.col(i) = interior_point<double>(spec, tt, uu);
        }
        return run_ladder(c, {}, params);
    });
    std::size_t best = 0;
    for (std::size_t t = 1; t < results.size(); ++t) {
        if (results[t].diameter > results[best].diameter) best = t;
    }
    PackingConfiguration out = std::move(results[best]);
    out.meta.mode = "algorithm1";
    out.meta.seed = params.seed;
    out.meta.params = params;
    return out;
}

GuidedSeed seed_guided(int sigma, int k, double theta, double scale) {
    const BorderSolution border = solve_border(sigma, k);
    const double d = border.d;
    GuidedSeed seed;
    PackingConfiguration& c = seed.config;
    c.polygon = sigma == kCircle ? PolygonSpec::circle() : PolygonSpec{sigma, 0.0};
    c.diameter = d;
    c.k = k;
    c.centers.resize(2, static_cast<Eigen::Index>(hexagonal_number(k)));
    c.centers.col(0).setZero();
    Eigen::Index col = 1;
    for (int r = 0; r < 6; ++r) {
        for (int j = 0; j < k; ++j) c.centers.col(col++) = rotate(border.chain[static_cast<std::size_t>(j)], r * kPi / 3.0);
    }
    for (Eigen::Index i = 0; i < col; ++i) seed.pins.indices.insert(i);

    // Keep the lattice strictly inside: its circumradius is (k - 1) * spacing.
    const double fit = k > 1 ? 0.999 * apothem(c.polygon) / ((k - 1) * d) : scale;
    const double spacing = std::min(scale, fit) * d;
    for (int m = 1; m < k; ++m) {
        for (int r = 0; r < 6; ++r) {
            const Point2 corner = rotate(Point2(m * spacing, 0.0), r * kPi / 3.0);
            const Point2 along = rotate(Point2(spacing, 0.0), (r + 2) * kPi / 3.0);
            for (int b = 0; b < m; ++b) c.centers.col(col++) = rotate<double>(corner + b * along, theta);
        }
    }
    return seed;
}

PackingConfiguration algorithm2(const PackingConfiguration& config, const OptimizerParams& params, const PinSet& pins,
                                std::uint64_t trial, const ProgressFn& progress) {
    params.validate();
    const auto frozen = frozen_mask(config.size(), pins);
    const double incoming = packing_radius(config.centers);
    const double amp = params.perturb_amplitude * incoming;
    const PolygonSpec spec = inner_polygon(config);

    PackingConfiguration x = config;
    bool any_free = false;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        if (frozen[static_cast<std::size_t>(i)]) continue;
        any_free = true;
        const double rad = amp * std::sqrt(uniform(params.seed, trial, static_cast<std::uint64_t>(i), 0));
        const double ang = 2.0 * kPi * uniform(params.seed, trial, static_cast<std::uint64_t>(i), 1);
        x.centers.col(i) = project_inside<double>(spec, Point2(x.centers.col(i)) + rad * Point2(std::cos(ang), std::sin(ang)));
    }
    if (!any_free) return config;
    PackingConfiguration out = run_ladder(x, pins, params, progress);
    if (!(out.diameter > incoming)) return config;
    out.meta.mode = "algorithm2";
    out.meta.seed = params.seed;
    out.meta.params = params;
    out.dna.reset();
    return out;
}

ShellSearchResult shell_rotation_search(const PackingConfiguration& config, int sigma, int k, int trials,
                                        const OptimizerParams& params) {
    if (k < 2) throw Error(ErrorCode::PreconditionViolated, "shell rotation needs an interior shell (k >= 2)");
    const BorderSolution border = solve_border(sigma, k);
    const Dna start = canonicalize_dna(trace_dna(config, border), border).dna;
    const PackingConfiguration reference = build_chp(border, trace_dna(config, border));

    // Shell of every input disk, read from the exact rebuild.
    std::vector<int> shell(static_cast<std::size_t>(config.size()), -1);
    {
        const PointIndex index(reference.centers, border.d);
        for (Eigen::Index i = 0; i < config.size(); ++i) {
            const int j = index.nearest(config.centers.col(i), 0.25 * border.d);
            if (j < 0) throw Error(ErrorCode::PreconditionViolated, "configuration is not CHP-structured");
            shell[static_cast<std::size_t>(i)] = reference.shells[static_cast<std::size_t>(j)];
        }
    }
    PinSet pins;
    for (Eigen::Index i = 0; i < config.size(); ++i) {
        const int m = shell[static_cast<std::size_t>(i)];
        if (m == 0 || m == k) pins.indices.insert(i);
    }

    constexpr std::uint64_t kShellStream = 0xffffffffULL;
    auto outcomes = run_trials<std::optional<Dna>>(trials, [&](int t) -> std::optional<Dna> {
        const auto trial = static_cast<std::uint64_t>(t);
        const int m = 1 + static_cast<int>(uniform(params.seed, trial, kShellStream, 0) * (k - 1));
        const double angle = kPi / 18.0 + uniform(params.seed, trial, kShellStream, 1) * (kPi / 6.0 - kPi / 18.0);
        PackingConfiguration turned = config;
        for (Eigen::Index i = 0; i < config.size(); ++i) {
            if (shell[static_cast<std::size_t>(i)] == m) turned.centers.col(i) = rotate<double>(config.centers.col(i), angle);
        }
        turned.diameter = packing_radius(turned.centers);
        PackingConfiguration shaken = algorithm2(turned, params, pins, trial);
        if (!is_chp(shaken, sigma, k, 1e-6)) return std::nullopt;
        try {
            return canonicalize_dna(trace_dna(shaken, border), border).dna;
        } catch (const Error&) {
            return std::nullopt;
        }
    });

    ShellSearchResult result;
    std::set<std::string> seen{start.letters};
    result.dnas.push_back(start.letters);
    result.configurations.push_back(build_chp(border, start));
    for (const auto& found : outcomes) {
        if (!found || seen.count(found->letters)) {
            ++result.dropped;
            continue;
        }
        seen.insert(found->letters);
        result.dnas.push_back(found->letters);
        result.configurations.push_back(build_chp(border, *found));
    }
    return result;
}

RefineResult refine(const PackingConfiguration& config, int max_iters, const PinSet& pins, const OptimizerParams& params) {
    const auto frozen = frozen_mask(config.size(), pins);
    OptimizerParams tight = params;
    tight.inner_tol = 1e-15;
    RefineResult result;
    result.config = with_measured_diameter(config);
    double previous = result.config.diameter;
    for (int pass = 0; pass < std::max(1, max_iters); ++pass) {
        ++result.iterations;
        PackingConfiguration best = result.config;
        const double d = best.diameter;
        PackingConfiguration soft = with_measured_diameter(minimize(best, params.s_final, d * d, pins, tight));
        if (soft.diameter > best.diameter) best = soft;
        for (double gap : {1e-7, 1e-5, 1e-3}) {
            PackingConfiguration solved = best;
            if (!tangency_solve(solved, frozen, gap)) continue;
            solved = with_measured_diameter(std::move(solved));
            if (solved.diameter > best.diameter) best = std::move(solved);
        }
        result.config = std::move(best);
        result.stability = std::abs(result.config.diameter - previous) / previous;
        previous = result.config.diameter;
        if (result.stability < 1e-15) break;
    }
    return result;
}

}  // namespace chp
