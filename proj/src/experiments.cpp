#include "mstlens/experiments.hpp"
#include "mstlens/mst.hpp"
#include "mstlens/mst_test.hpp"
#include "mstlens/parallel.hpp"
#include "mstlens/random.hpp"
#include "mstlens/synthetic.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

namespace mstlens {

namespace {

std::uint64_t cell_stream(double c, std::size_t p) {
    return mix_seed(std::bit_cast<std::uint64_t>(c)) ^ static_cast<std::uint64_t>(p);
}

} // namespace

PowerCell power_cell(double c, std::size_t p, const PowerOptions& options) {
    if (options.trials < 1) throw InputError("power estimation needs at least 1 trial");
    if (options.n_each < 2) throw InputError("power estimation needs at least 2 points per group");
    if (!(options.alpha > 0.0 && options.alpha < 1.0)) throw InputError("alpha must lie in (0, 1)");

    const std::uint64_t stream = cell_stream(c, p);
    std::vector<char> rejected(options.trials, 0);
    parallel_for(options.trials, [&](std::size_t t) {
        const auto data = synthetic::hyperrectangle_pair(options.n_each, p, c, derive_seed(options.seed, stream, 2 * t));
        const WeightedTree tree = build_mst(data.points);
        std::vector<VertexId> g1(options.n_each), g2(options.n_each);
        std::iota(g1.begin(), g1.end(), 0);
        std::iota(g2.begin(), g2.end(), options.n_each);
        GroupSelection sel{std::move(g1), std::move(g2), {}};
        const TestResult result = mst_test(data.points, tree, sel, options.replicates, options.variance_threshold,
                                           derive_seed(options.seed, stream, 2 * t + 1));
        rejected[t] = result.p_value <= options.alpha;
    });

    PowerCell cell;
    cell.c = c;
    cell.p = p;
    cell.trials = options.trials;
    cell.rejections = static_cast<std::size_t>(std::count(rejected.begin(), rejected.end(), 1));
    cell.rate = static_cast<double>(cell.rejections) / static_cast<double>(cell.trials);
    return cell;
}

std::vector<PowerCell> power_grid(const std::vector<double>& cs, const std::vector<std::size_t>& ps,
                                  const PowerOptions& options) {
    std::vector<PowerCell> cells;
    for (auto p : ps)
        for (auto c : cs) cells.push_back(power_cell(c, p, options));
    return cells;
}

} // namespace mstlens
