#include "mstlens/null_theory.hpp"
#include "mstlens/types.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mstlens {

double PiecewiseDensity::integral(double lo, double hi) const {
    if (hi < lo) return -integral(hi, lo);
    double total = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double a = std::max(lo, breakpoints[i]);
        const double b = std::min(hi, breakpoints[i + 1]);
        if (b > a) total += values[i] * (b - a);
    }
    return total;
}

double PiecewiseDensity::operator()(double x) const {
    if (values.empty() || x < breakpoints.front() || x > breakpoints.back()) return 0.0;
    for (std::size_t i = 0; i < values.size(); ++i)
        if (x <= breakpoints[i + 1]) return values[i];
    return values.back();
}

namespace {

void validate(const NullTheoryProblem& p) {
    if (!(p.n1 > 0) || !(p.n2 > 0)) throw InputError("null problem needs n1, n2 > 0");
    if (!(p.eps > 0 && p.eps < 1)) throw InputError("null problem needs eps in (0, 1)");
    if (!(p.c >= -1 && p.c <= 1)) throw InputError("null problem needs c in [-1, 1]");
}

NullTheoryProblem mirrored(const NullTheoryProblem& p) { return {p.n2, p.n1, -p.c, p.eps}; }

PiecewiseDensity mirror(const PiecewiseDensity& d) {
    PiecewiseDensity out;
    for (auto it = d.breakpoints.rbegin(); it != d.breakpoints.rend(); ++it) out.breakpoints.push_back(-*it);
    out.values.assign(d.values.rbegin(), d.values.rend());
    return out;
}

PiecewiseDensity two_piece(double split, double left, double right) {
    return PiecewiseDensity{{-1.0, split, 1.0}, {left, right}};
}

/// c >= 0 only.
MinimalCrossing solve_nonnegative_mode(const NullTheoryProblem& p) {
    const double a = p.n1 / (p.n1 + p.n2);   // mass left of 0
    const double b = p.n2 / (p.n1 + p.n2);   // mass right of 0
    const double c = p.c;
    const double eps = p.eps;

    MinimalCrossing out;
    out.which = classify(p);
    out.feasible = family_nonempty(p);
    switch (out.which) {
    case NullCase::I:
        // Flat at a through eps, flat beyond. Unimodal about c only when the right level is
        // at least a (n2 >= n1); otherwise moving the step to c attains the same objective.
        out.min_integral = 2.0 * eps * a;
        if (b >= a || !out.feasible)
            out.density = two_piece(eps, a, (b - eps * a) / (1.0 - eps));
        else
            out.density = two_piece(c, a, (b - c * a) / (1.0 - c));
        break;
    case NullCase::II:
        out.min_integral = eps * a + c * a + (eps - c) * (b - c * a) / (1.0 - c);
        out.density = two_piece(c, a, (b - c * a) / (1.0 - c));
        break;
    case NullCase::III:
    case NullCase::IV:
        out.min_integral = eps * a + eps * b;
        out.density = two_piece(0.0, a, b);
        break;
    }
    return out;
}

} // namespace

NullCase classify(const NullTheoryProblem& problem) {
    validate(problem);
    const NullTheoryProblem p = problem.c < 0 ? mirrored(problem) : problem;
    if (p.c == 0) return NullCase::IV;
    if (p.c > p.eps) return NullCase::I;
    return p.n2 / p.n1 >= p.c ? NullCase::II : NullCase::III;
}

bool family_nonempty(const NullTheoryProblem& problem) {
    validate(problem);
    const NullTheoryProblem p = problem.c < 0 ? mirrored(problem) : problem;
    // A density increasing up to c > 0 is at least n1/(n1+n2) on [0, c], so the right-hand
    // mass forces c * n1 <= n2.
    return p.c * p.n1 <= p.n2;
}

MinimalCrossing minimal_crossing_density(const NullTheoryProblem& problem) {
    validate(problem);
    if (problem.c >= 0) return solve_nonnegative_mode(problem);
    MinimalCrossing out = solve_nonnegative_mode(mirrored(problem));
    out.density = mirror(out.density);
    return out;
}

double family_violation(const PiecewiseDensity& density, const NullTheoryProblem& problem) {
    validate(problem);
    const auto& x = density.breakpoints;
    const auto& f = density.values;
    if (x.size() != f.size() + 1 || f.empty()) throw InputError("malformed piecewise density");

    double worst = 0.0;
    worst = std::max(worst, std::abs(x.front() + 1.0));
    worst = std::max(worst, std::abs(x.back() - 1.0));
    for (double v : f) worst = std::max(worst, -v);

    // Unimodality is checked almost everywhere: segments entirely left of c may not
    // decrease, segments entirely right of c may not increase. A step located exactly at c
    // is unconstrained.
    for (std::size_t i = 0; i + 1 < f.size(); ++i) {
        const double shared = x[i + 1];
        if (x[i + 1] <= x[i]) worst = std::max(worst, x[i] - x[i + 1]);
        if (shared < problem.c) worst = std::max(worst, f[i] - f[i + 1]);
        if (shared > problem.c) worst = std::max(worst, f[i + 1] - f[i]);
    }

    const double a = problem.n1 / (problem.n1 + problem.n2);
    const double b = problem.n2 / (problem.n1 + problem.n2);
    worst = std::max(worst, std::abs(density.integral(-1.0, 0.0) - a));
    worst = std::max(worst, std::abs(density.integral(0.0, 1.0) - b));
    return worst;
}

} // namespace mstlens
