#pragma once

// Stochastic packing by energy ladders. Disks repel through the pair potential
// (lambda / r^2)^s; as s grows the minimizer of the total energy approaches a
// configuration that maximizes the smallest separation. Centers are confined
// to the delta = 0 polygon by projection.

#include "chp/configuration.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace chp {

/// Sum over pairs of (lambda / r^2)^s, accumulated in the log domain.
/// Throws CoincidentPoints when two centers coincide.
double energy(const Centers& centers, double s, double lambda);
double energy(const PackingConfiguration& config, double s, double lambda);

/// log of energy(); finite whenever the energy itself would overflow.
double log_energy(const Centers& centers, double s, double lambda);

/// Gradient of energy() with respect to every center; pinned columns are zero.
Centers energy_gradient(const Centers& centers, double s, double lambda, const PinSet& pins = {});
Centers energy_gradient(const PackingConfiguration& config, double s, double lambda, const PinSet& pins = {});

/// Gradient of log_energy(); the direction the minimizer actually follows.
Centers log_energy_gradient(const Centers& centers, double s, double lambda, const PinSet& pins = {});

struct MinimizeStats {
    int iterations = 0;
    double initial_log_energy = 0.0;
    double final_log_energy = 0.0;
    bool energy_monotone = true;
};

/// Projected gradient descent at fixed (s, lambda). Pinned centers never move.
/// Throws NonFinite if the line search produces non-finite values.
PackingConfiguration minimize(const PackingConfiguration& config, double s, double lambda, const PinSet& pins,
                              const OptimizerParams& params, MinimizeStats* stats = nullptr);

struct RungReport {
    int rung = 0;
    double s = 0.0;
    double min_distance = 0.0;
    double density = 0.0;
};
using ProgressFn = std::function<void(const RungReport&)>;

/// Full s-ladder from params.s_initial to params.s_final; diameter is set to the
/// final minimum separation.
PackingConfiguration run_ladder(const PackingConfiguration& config, const PinSet& pins, const OptimizerParams& params,
                                const ProgressFn& progress = {});

/// Random start (seeded) followed by the s-ladder; the best of `trials`
/// independent starts is returned. Trials run on up to CHP_PACK_THREADS threads.
PackingConfiguration algorithm1(int sigma, int n, const OptimizerParams& params, int trials = 1);

struct GuidedSeed {
    PackingConfiguration config;
    PinSet pins;
};

/// Border and central disks at their exact CHP positions (pinned) with the
/// interior filled by a hexagonal lattice rotated by theta and scaled by scale * d.
GuidedSeed seed_guided(int sigma, int k, double theta, double scale);

/// One shake: kick unpinned centers, rerun the ladder, keep the result only if
/// the minimum separation grew. `trial` selects an independent random stream.
PackingConfiguration algorithm2(const PackingConfiguration& config, const OptimizerParams& params, const PinSet& pins,
                                std::uint64_t trial = 0, const ProgressFn& progress = {});

struct ShellSearchResult {
    std::vector<PackingConfiguration> configurations;  ///< exact rebuilds, pairwise inequivalent
    std::vector<std::string> dnas;                     ///< canonical DNA of each configuration
    int dropped = 0;                                   ///< trials that did not end on a new CHP
};

/// Rotate a random non-border shell by a random angle in [pi/18, pi/6], shake with
/// border and center pinned, and keep the CHP outcomes not seen before. The input
/// configuration's class is reported first.
ShellSearchResult shell_rotation_search(const PackingConfiguration& config, int sigma, int k, int trials,
                                        const OptimizerParams& params);

struct RefineResult {
    PackingConfiguration config;
    double stability = 0.0;  ///< |delta d| / d between the last two polish passes
    int iterations = 0;
};

/// Polish: one more rung at s_final with a tight tolerance, then a least-squares
/// solve that makes the near-contacts exact tangencies. A pass is kept only if
/// it does not decrease the minimum separation.
RefineResult refine(const PackingConfiguration& config, int max_iters, const PinSet& pins = {},
                    const OptimizerParams& params = {});

/// Worker count for independent trials: CHP_PACK_THREADS when set, else the hardware.
int worker_count();

}  // namespace chp
