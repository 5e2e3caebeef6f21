#pragma once

#include <cstddef>
#include <vector>

namespace mstlens {

/// One-dimensional null problem: densities on [-1, 1] that increase on [-1, c], decrease on
/// [c, 1], and put mass n1/(n1+n2) left of 0. Objective: the mass within [-eps, eps].
struct NullTheoryProblem {
    double n1 = 1.0;
    double n2 = 1.0;
    double c = 0.0;
    double eps = 0.5;
};

/// Piecewise-constant density: values[i] holds on (breakpoints[i], breakpoints[i+1]].
struct PiecewiseDensity {
    std::vector<double> breakpoints;
    std::vector<double> values;

    /// Exact integral over [lo, hi] (clipped to the support).
    double integral(double lo, double hi) const;
    double operator()(double x) const;
};

enum class NullCase { I, II, III, IV };

struct MinimalCrossing {
    NullCase which = NullCase::IV;
    PiecewiseDensity density;
    double min_integral = 0.0;
    /// False when no density satisfies the problem's constraints (mode c to the right of
    /// 0 requires c <= n2/n1; mirrored for c < 0). The density returned is then the
    /// closed form for the case, which does not have its mode at c.
    bool feasible = true;
};

/// Which closed-form case applies (after mirroring c < 0 to c > 0).
NullCase classify(const NullTheoryProblem& problem);

/// Whether any density satisfies the problem constraints.
bool family_nonempty(const NullTheoryProblem& problem);

/// Case-matched minimizer of the mass near the split and its objective value.
/// Throws InputError unless n1, n2 > 0, eps in (0, 1) and c in [-1, 1].
MinimalCrossing minimal_crossing_density(const NullTheoryProblem& problem);

/// Largest violation of the family constraints by `density`: unimodality about c (segment
/// values, a.e.), non-negativity, and the two mass constraints. Zero for a member.
double family_violation(const PiecewiseDensity& density, const NullTheoryProblem& problem);

} // namespace mstlens
