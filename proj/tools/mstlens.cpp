#include "mstlens/core.hpp"
#include "mstlens/csv.hpp"
#include "mstlens/experiments.hpp"
#include "mstlens/mst.hpp"
#include "mstlens/mst_test.hpp"
#include "mstlens/rf.hpp"
#include "mstlens/serialize.hpp"
#include "mstlens/service.hpp"
#include "mstlens/synthetic.hpp"

#include "CLI11.hpp"
#include "httplib.h"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace mstlens;

namespace {

struct ServeArgs {
    std::string host = "127.0.0.1";
    int port = 0;
    std::string data, embedding, labels, meta;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> pca_dims;
};

struct TestArgs {
    std::string data, labels;
    std::string group1, group2;
    std::string group1_file, group2_file;
    std::size_t replicates = 100;
    std::uint64_t seed = 0;
    double variance_threshold = 0.90;
    std::optional<std::size_t> pca_dims;
    bool json = false;
};

struct StabilityArgs {
    std::string data, labels, out;
    std::size_t reps = 30;
    std::optional<double> noise_sd;
    std::uint64_t seed = 0;
    std::size_t n = 1000, p = 300, k = 10;
    std::uint64_t data_seed = 1;
};

struct PowerArgs {
    std::vector<double> cs{0.0, 0.25, 0.5, 0.75, 1.0};
    std::vector<std::size_t> ps{5, 10, 20, 50};
    PowerOptions options;
    std::string out;
};

int default_port() {
    if (const char* env = std::getenv("MSTLENS_PORT")) {
        try {
            return std::stoi(env);
        } catch (const std::exception&) {
            throw InputError(std::string("MSTLENS_PORT is not a port number: ") + env);
        }
    }
    return 8080;
}

int run_serve(const ServeArgs& args) {
    service::SessionStore store(args.seed);
    if (!args.data.empty()) {
        if (args.embedding.empty() || args.labels.empty())
            throw InputError("--data needs --embedding and --labels as well");
        service::SessionInputs inputs;
        inputs.data_csv = read_text_file(args.data);
        inputs.embedding_csv = read_text_file(args.embedding);
        inputs.labels_csv = read_text_file(args.labels);
        if (!args.meta.empty()) inputs.meta_csv = read_text_file(args.meta);
        inputs.pca_dims = args.pca_dims;
        std::cout << "session " << store.add_session(std::move(inputs)) << std::endl;
    }
    httplib::Server server;
    service::register_routes(server, store);
    const int port = args.port > 0 ? args.port : default_port();
    std::cout << "listening on http://" << args.host << ":" << port << std::endl;
    if (!server.listen(args.host, port)) {
        std::cerr << "error: cannot listen on " << args.host << ":" << port << "\n";
        return 1;
    }
    return 0;
}

std::vector<VertexId> read_group_file(const std::string& path, const Dataset& data) {
    std::istringstream in(read_text_file(path));
    std::vector<VertexId> rows;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (first && line == "id") {
            first = false;
            continue;
        }
        first = false;
        rows.push_back(data.row_index(line));
    }
    return rows;
}

int run_test(const TestArgs& args) {
    const Dataset data = parse_dataset(read_text_file(args.data), args.data);
    Matrix points = data.values();
    if (args.pca_dims) points = fit_pca(points, *args.pca_dims).transform(points);

    std::vector<VertexId> g1, g2;
    if (!args.group1_file.empty() || !args.group2_file.empty()) {
        if (args.group1_file.empty() || args.group2_file.empty())
            throw InputError("--group1-file and --group2-file go together");
        g1 = read_group_file(args.group1_file, data);
        g2 = read_group_file(args.group2_file, data);
    } else {
        if (args.labels.empty() || args.group1.empty() || args.group2.empty())
            throw InputError("give --labels with --group1/--group2, or --group1-file/--group2-file");
        const Clustering clustering(parse_labels(read_text_file(args.labels), args.labels));
        if (clustering.n() != data.n()) throw InputError("labels and data have different row counts");
        g1 = clustering.members(clustering.class_index(args.group1));
        g2 = clustering.members(clustering.class_index(args.group2));
    }
    if (g1.size() < 2 || g2.size() < 2) throw InputError("the MST test needs at least 2 points in each group");

    const WeightedTree tree = build_mst(points);
    const GroupSelection sel = make_selection(tree, g1, g2, medoid_of(points, g1), medoid_of(points, g2));
    const TestResult result = mst_test(points, tree, sel, args.replicates, args.variance_threshold, args.seed);
    if (args.json) {
        std::cout << test_result_json(result).dump() << "\n";
    } else {
        std::cout << "observed: " << result.observed << "\n"
                  << "null_mean: " << result.null_mean << "\n"
                  << "null_sd: " << result.null_sd << "\n"
                  << "p_value: " << result.p_value << "\n";
    }
    return 0;
}

int run_stability(const StabilityArgs& args) {
    Matrix points;
    std::vector<std::string> labels;
    if (!args.data.empty()) {
        if (args.labels.empty()) throw InputError("--data needs --labels");
        points = parse_dataset(read_text_file(args.data), args.data).values();
        labels = parse_labels(read_text_file(args.labels), args.labels);
    } else {
        auto mixture = synthetic::gaussian_mixture(args.n, args.p, args.k, args.data_seed);
        points = std::move(mixture.points);
        labels = std::move(mixture.labels);
    }
    const StabilityResult result = stability_experiment(points, Clustering(labels), args.noise_sd, args.reps, args.seed);

    std::ofstream file;
    if (!args.out.empty()) {
        file.open(args.out);
        if (!file) throw InputError("cannot write " + args.out);
    }
    std::ostream& out = args.out.empty() ? std::cout : file;
    out << "arm,distance\n";
    for (double d : result.noise_distances) out << "noise," << csv::format_number(d) << "\n";
    for (double d : result.permutation_distances) out << "permutation," << csv::format_number(d) << "\n";
    std::cerr << "noise_sd " << csv::format_number(result.noise_sd) << "\n";
    return 0;
}

int run_power(const PowerArgs& args) {
    std::ofstream file;
    if (!args.out.empty()) {
        file.open(args.out);
        if (!file) throw InputError("cannot write " + args.out);
    }
    std::ostream& out = args.out.empty() ? std::cout : file;
    out << "c,p,trials,rejections,rate\n";
    for (auto p : args.ps) {
        for (auto c : args.cs) {
            const PowerCell cell = power_cell(c, p, args.options);
            out << csv::format_number(cell.c) << "," << cell.p << "," << cell.trials << "," << cell.rejections << ","
                << csv::format_number(cell.rate) << std::endl;
        }
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"MST-based diagnostics for clusterings of high-dimensional data"};
    app.require_subcommand(1);

    ServeArgs serve;
    auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP API");
    serve_cmd->add_option("--host", serve.host, "Interface to bind");
    serve_cmd->add_option("--port", serve.port, "Port (default: $MSTLENS_PORT or 8080)");
    serve_cmd->add_option("--data", serve.data, "Preload: data CSV");
    serve_cmd->add_option("--embedding", serve.embedding, "Preload: 2-D embedding CSV");
    serve_cmd->add_option("--labels", serve.labels, "Preload: cluster label CSV");
    serve_cmd->add_option("--meta", serve.meta, "Preload: metadata CSV");
    serve_cmd->add_option("--seed", serve.seed, "Base seed for session ids and test seeds");
    serve_cmd->add_option("--pca-dims", serve.pca_dims, "Build the MST on this many principal components");

    TestArgs test;
    auto* test_cmd = app.add_subcommand("test", "MST separation test for two groups");
    test_cmd->add_option("--data", test.data, "Data CSV")->required();
    test_cmd->add_option("--labels", test.labels, "Cluster label CSV");
    test_cmd->add_option("--group1", test.group1, "First class label");
    test_cmd->add_option("--group2", test.group2, "Second class label");
    test_cmd->add_option("--group1-file", test.group1_file, "Row ids of group 1, one per line");
    test_cmd->add_option("--group2-file", test.group2_file, "Row ids of group 2, one per line");
    test_cmd->add_option("--replicates", test.replicates, "Null replicates")->check(CLI::PositiveNumber);
    test_cmd->add_option("--seed", test.seed, "Seed");
    test_cmd->add_option("--variance-threshold", test.variance_threshold, "Variance share for the density estimate")
        ->check(CLI::Range(0.0, 1.0));
    test_cmd->add_option("--pca-dims", test.pca_dims, "Reduce to this many principal components first");
    test_cmd->add_flag("--json", test.json, "Print the result as JSON");

    StabilityArgs stab;
    auto* stab_cmd = app.add_subcommand("stability", "RF distance under noise vs. label permutation");
    stab_cmd->add_option("--data", stab.data, "Data CSV (default: synthetic Gaussian mixture)");
    stab_cmd->add_option("--labels", stab.labels, "Cluster label CSV");
    stab_cmd->add_option("--reps", stab.reps, "Replicates per arm")->check(CLI::PositiveNumber);
    stab_cmd->add_option("--noise-sd", stab.noise_sd, "Noise standard deviation");
    stab_cmd->add_option("--seed", stab.seed, "Seed");
    stab_cmd->add_option("--n", stab.n, "Synthetic: points");
    stab_cmd->add_option("--p", stab.p, "Synthetic: dimensions");
    stab_cmd->add_option("--k", stab.k, "Synthetic: clusters");
    stab_cmd->add_option("--data-seed", stab.data_seed, "Synthetic: data seed");
    stab_cmd->add_option("--out", stab.out, "Write CSV here instead of stdout");

    PowerArgs power;
    auto* power_cmd = app.add_subcommand("power", "Rejection rates on separated uniform boxes");
    power_cmd->add_option("--c", power.cs, "Half-gaps (comma separated)")->delimiter(',');
    power_cmd->add_option("--p", power.ps, "Dimensions (comma separated)")->delimiter(',');
    power_cmd->add_option("--trials", power.options.trials, "Trials per cell")->check(CLI::PositiveNumber);
    power_cmd->add_option("--replicates", power.options.replicates, "Null replicates per trial")
        ->check(CLI::PositiveNumber);
    power_cmd->add_option("--n-each", power.options.n_each, "Points per box");
    power_cmd->add_option("--alpha", power.options.alpha, "Level");
    power_cmd->add_option("--seed", power.options.seed, "Seed");
    power_cmd->add_option("--out", power.out, "Write CSV here instead of stdout");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*serve_cmd) return run_serve(serve);
        if (*test_cmd) return run_test(test);
        if (*stab_cmd) return run_stability(stab);
        if (*power_cmd) return run_power(power);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
