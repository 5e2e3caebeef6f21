#include "mstlens/service.hpp"
#include "mstlens/extras.hpp"
#include "mstlens/mst_test.hpp"
#include "mstlens/random.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace mstlens::service {

bool point_in_polygon(double x, double y, const Polygon& polygon) {
    bool inside = false;
    const std::size_t n = polygon.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const auto& [xi, yi] = polygon[i];
        const auto& [xj, yj] = polygon[j];
        if ((yi > y) != (yj > y) && x < (xj - xi) * (y - yi) / (yj - yi) + xi) inside = !inside;
    }
    return inside;
}

struct SessionStore::Session {
    std::string id;
    SessionInputs inputs;
    LoadedSession loaded;
    Matrix analysis;            // rows the MST is built on (PCA scores when requested)
    double variance_retained = 1.0;
    WeightedTree mst;
    MedoidSet medoids;
    WeightedTree medoid_tree;
    std::optional<GroupSelection> selection;
    std::optional<ProjectionConfig> projection;
    std::mutex mutex;

    Session(std::string id_, SessionInputs inputs_, LoadedSession loaded_)
        : id(std::move(id_)), inputs(std::move(inputs_)), loaded(std::move(loaded_)) {}

    const std::vector<std::string>& ids() const { return loaded.data.rows(); }
};

namespace {

std::string hex_id(std::uint64_t v) {
    std::ostringstream out;
    out << std::hex;
    out.width(16);
    out.fill('0');
    out << v;
    return out.str();
}

std::uint64_t random_u64() {
    std::random_device rd;
    return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

std::string require_string(const Json& body, const char* key) {
    if (!body.contains(key)) throw ServiceError(400, std::string("missing field '") + key + "'");
    const Json& v = body.at(key);
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    throw ServiceError(400, std::string("field '") + key + "' must be a string");
}

template <class T>
std::optional<T> optional_field(const Json& body, const char* key) {
    if (!body.is_object() || !body.contains(key) || body.at(key).is_null()) return std::nullopt;
    try {
        return body.at(key).get<T>();
    } catch (const Json::exception&) {
        throw ServiceError(400, std::string("field '") + key + "' has the wrong type");
    }
}

std::optional<std::size_t> optional_count(const Json& body, const char* key) {
    if (!body.is_object() || !body.contains(key) || body.at(key).is_null()) return std::nullopt;
    const Json& v = body.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 0)
        throw ServiceError(400, std::string("field '") + key + "' must be a non-negative integer");
    return v.get<std::size_t>();
}

VertexId resolve_row(const Dataset& data, const std::string& id) {
    try {
        return data.row_index(id);
    } catch (const InputError&) {
        throw ServiceError(404, "unknown row id '" + id + "'");
    }
}

std::vector<VertexId> resolve_rows(const Dataset& data, const Json& list, const char* key) {
    if (!list.is_array()) throw ServiceError(400, std::string("'") + key + "' must be an array of row ids");
    std::vector<VertexId> rows;
    for (const auto& item : list) {
        if (item.is_string()) rows.push_back(resolve_row(data, item.get<std::string>()));
        else if (item.is_number_integer()) rows.push_back(resolve_row(data, std::to_string(item.get<long long>())));
        else throw ServiceError(400, std::string("'") + key + "' must be an array of row ids");
    }
    return rows;
}

Polygon parse_polygon(const Json& j) {
    if (!j.is_array() || j.size() < 3) throw ServiceError(400, "malformed polygon: need at least 3 vertices");
    Polygon poly;
    for (const auto& vertex : j) {
        if (!vertex.is_array() || vertex.size() != 2 || !vertex[0].is_number() || !vertex[1].is_number())
            throw ServiceError(400, "malformed polygon: vertices must be [x, y] number pairs");
        const double x = vertex[0].get<double>();
        const double y = vertex[1].get<double>();
        if (!std::isfinite(x) || !std::isfinite(y)) throw ServiceError(400, "malformed polygon: non-finite vertex");
        poly.push_back({x, y});
    }
    return poly;
}

std::vector<std::string> split_commas(const std::string& text) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

std::vector<VertexId> points_of_interest(const GroupSelection& sel) {
    std::set<VertexId> all(sel.group1.begin(), sel.group1.end());
    all.insert(sel.group2.begin(), sel.group2.end());
    all.insert(sel.path.begin(), sel.path.end());
    return {all.begin(), all.end()};
}

} // namespace

SessionStore::SessionStore(std::optional<std::uint64_t> base_seed) : base_seed_(base_seed) {}
SessionStore::~SessionStore() = default;

std::uint64_t SessionStore::next_seed() {
    std::lock_guard lock(mutex_);
    if (base_seed_) return derive_seed(*base_seed_, 11, counter_++);
    return random_u64();
}

std::shared_ptr<SessionStore::Session> SessionStore::find(const std::string& id) {
    std::lock_guard lock(mutex_);
    auto it = sessions_.find(id);
    if (it == sessions_.end()) throw ServiceError(404, "unknown session '" + id + "'");
    return it->second;
}

std::string SessionStore::add_session(SessionInputs inputs) {
    LoadedSession loaded = assemble_session(inputs.data_csv, inputs.embedding_csv, inputs.labels_csv,
                                            inputs.meta_csv ? std::optional<std::string_view>(*inputs.meta_csv)
                                                            : std::nullopt);
    std::string id;
    {
        std::lock_guard lock(mutex_);
        do {
            id = hex_id(base_seed_ ? derive_seed(*base_seed_, 7, counter_++) : random_u64());
        } while (sessions_.contains(id));
    }
    auto session = std::make_shared<Session>(id, std::move(inputs), std::move(loaded));
    const Dataset& data = session->loaded.data;
    if (session->inputs.pca_dims) {
        const PcaModel pca = fit_pca(data.values(), *session->inputs.pca_dims);
        session->analysis = pca.transform(data.values());
        session->variance_retained = pca.variance_retained;
    } else {
        session->analysis = data.values();
    }
    session->mst = build_mst(session->analysis);
    session->medoids = medoids(session->analysis, session->loaded.clustering);
    session->medoid_tree = simplify_medoid_subtree(medoid_subtree(session->mst, session->medoids), session->medoids);

    std::lock_guard lock(mutex_);
    sessions_.emplace(id, std::move(session));
    return id;
}

Json SessionStore::create_session(const Json& request) {
    if (!request.is_object()) throw ServiceError(400, "request body must be a JSON object");
    Json selection;
    SessionInputs inputs;
    if (request.contains("snapshot")) {
        const Json snap = Json::parse(read_text_file(require_string(request, "snapshot")));
        const Json& in = snap.at("inputs");
        inputs.data_csv = in.at("data_csv").get<std::string>();
        inputs.embedding_csv = in.at("embedding_csv").get<std::string>();
        inputs.labels_csv = in.at("labels_csv").get<std::string>();
        inputs.meta_csv = optional_field<std::string>(in, "meta_csv");
        inputs.pca_dims = optional_count(in, "pca_dims");
        if (snap.contains("selection")) selection = snap.at("selection");
    } else {
        auto text = [&](const char* key) -> std::optional<std::string> {
            const std::string inline_key = std::string(key) + "_csv";
            if (request.contains(inline_key)) return require_string(request, inline_key.c_str());
            if (request.contains(key)) return read_text_file(require_string(request, key));
            return std::nullopt;
        };
        auto required = [&](const char* key) {
            auto t = text(key);
            if (!t) throw ServiceError(400, std::string("missing '") + key + "' (path) or '" + key + "_csv' (contents)");
            return *t;
        };
        inputs.data_csv = required("data");
        inputs.embedding_csv = required("embedding");
        inputs.labels_csv = required("labels");
        inputs.meta_csv = text("meta");
        inputs.pca_dims = optional_count(request, "pca_dims");
    }

    const std::string id = add_session(std::move(inputs));
    if (selection.is_object()) {
        auto session = find(id);
        std::lock_guard lock(session->mutex);
        const Dataset& data = session->loaded.data;
        auto g1 = resolve_rows(data, selection.at("group1"), "group1");
        auto g2 = resolve_rows(data, selection.at("group2"), "group2");
        auto path = resolve_rows(data, selection.at("path"), "path");
        if (path.empty()) throw ServiceError(400, "snapshot selection has an empty path");
        session->selection = make_selection(session->mst, g1, g2, path.front(), path.back());
    }
    return overview(id);
}

Json SessionStore::overview(const std::string& id) {
    auto session = find(id);
    std::lock_guard lock(session->mutex);
    const auto& ids = session->ids();
    Json medoid_list = Json::array();
    for (std::size_t c = 0; c < session->medoids.k(); ++c)
        medoid_list.push_back(Json{{"label", session->medoids.labels[c]}, {"row", ids[session->medoids.vertices[c]]}});
    Json out{{"id", session->id},
             {"rows", ids},
             {"features", session->loaded.data.features()},
             {"embedding", matrix_json(session->loaded.embedding.coords())},
             {"labels", session->loaded.clustering.labels()},
             {"classes", session->loaded.clustering.classes()},
             {"medoids", std::move(medoid_list)},
             {"overlay", edges_json(session->medoid_tree, ids)},
             {"pca_dims", session->inputs.pca_dims ? Json(*session->inputs.pca_dims) : Json(nullptr)},
             {"variance_retained", session->variance_retained},
             {"has_meta", session->loaded.meta.has_value()}};
    out["selection"] = session->selection ? selection_json(*session->selection, ids) : Json(nullptr);
    return out;
}

namespace {

Json selection_payload(const GroupSelection& sel, const std::vector<std::string>& ids, const Matrix& embedding) {
    Json out = selection_json(sel, ids);
    out["path_embedding"] = matrix_json(select_rows(embedding, sel.path));
    return out;
}

} // namespace

Json SessionStore::select_path(const std::string& id, const Json& request) {
    auto session = find(id);
    std::lock_guard lock(session->mutex);
    const Dataset& data = session->loaded.data;
    const VertexId a = resolve_row(data, require_string(request, "a"));
    const VertexId b = resolve_row(data, require_string(request, "b"));
    if (a == b) throw ServiceError(400, "path endpoints must differ");
    const Clustering& clustering = session->loaded.clustering;
    const auto ca = clustering.codes()[a];
    const auto cb = clustering.codes()[b];
    if (ca == cb) throw ServiceError(400, "path endpoints belong to the same class '" + clustering.label_of(a) + "'");
    session->selection = make_selection(session->mst, clustering.members(ca), clustering.members(cb), a, b);
    return selection_payload(*session->selection, session->ids(), session->loaded.embedding.coords());
}

Json SessionStore::select_groups(const std::string& id, const Json& request) {
    auto session = find(id);
    std::lock_guard lock(session->mutex);
    const Dataset& data = session->loaded.data;
    std::vector<VertexId> g1, g2;
    if (request.contains("polygons")) {
        const Json& polys = request.at("polygons");
        if (!polys.is_array() || polys.size() != 2) throw ServiceError(400, "'polygons' must hold exactly two polygons");
        const Polygon p1 = parse_polygon(polys[0]);
        const Polygon p2 = parse_polygon(polys[1]);
        const Matrix& xy = session->loaded.embedding.coords();
        for (Eigen::Index i = 0; i < xy.rows(); ++i) {
            if (point_in_polygon(xy(i, 0), xy(i, 1), p1)) g1.push_back(static_cast<VertexId>(i));
            if (point_in_polygon(xy(i, 0), xy(i, 1), p2)) g2.push_back(static_cast<VertexId>(i));
        }
    } else if (request.contains("group1") && request.contains("group2")) {
        g1 = resolve_rows(data, request.at("group1"), "group1");
        g2 = resolve_rows(data, request.at("group2"), "group2");
    } else {
        throw ServiceError(400, "expected 'polygons' or both 'group1' and 'group2'");
    }
    if (g1.empty() || g2.empty()) throw ServiceError(400, "each group must contain at least one point");
    std::sort(g1.begin(), g1.end());
    g1.erase(std::unique(g1.begin(), g1.end()), g1.end());
    std::sort(g2.begin(), g2.end());
    g2.erase(std::unique(g2.begin(), g2.end()), g2.end());
    std::vector<VertexId> overlap;
    std::set_intersection(g1.begin(), g1.end(), g2.begin(), g2.end(), std::back_inserter(overlap));
    if (!overlap.empty())
        throw ServiceError(400, "groups overlap on " + std::to_string(overlap.size()) + " point(s), e.g. '" +
                                    session->ids()[overlap.front()] + "'");
    const VertexId m1 = medoid_of(session->analysis, g1);
    const VertexId m2 = medoid_of(session->analysis, g2);
    session->selection = make_selection(session->mst, g1, g2, m1, m2);
    return selection_payload(*session->selection, session->ids(), session->loaded.embedding.coords());
}

Json SessionStore::project(const std::string& id, const Json& request) {
    auto session = find(id);
    std::lock_guard lock(session->mutex);
    if (!session->selection) throw ServiceError(409, "no group selection; call /path or /groups first");
    const GroupSelection& sel = *session->selection;
    const auto rows = points_of_interest(sel);

    ProjectionConfig config;
    if (auto v = optional_count(request, "pca_dims")) config.pca_dims = *v;
    if (auto v = optional_count(request, "degree")) config.degree = *v;
    if (auto v = optional_count(request, "folds")) config.folds = *v;
    config.lambda = optional_field<double>(request, "lambda");
    config.bandwidth = optional_field<double>(request, "bandwidth");
    const std::size_t resolution = optional_count(request, "resolution").value_or(101);

    const Matrix x = select_rows(session->loaded.data.values(), rows);
    const Matrix path = select_rows(session->loaded.data.values(), sel.path);
    const std::size_t max_dims = std::min<std::size_t>(rows.size() - 1, session->loaded.data.p());
    ProjectionConfig effective = config;
    std::vector<std::string> warnings;
    if (effective.pca_dims > max_dims) {
        warnings.push_back("pca_dims " + std::to_string(effective.pca_dims) + " exceeds the " +
                           std::to_string(max_dims) + " available; using " + std::to_string(max_dims));
        effective.pca_dims = max_dims;
    }
    ProjectionResult result = pca_rcca_project(x, path, effective);
    result.config = config;
    result.warnings.insert(result.warnings.begin(), warnings.begin(), warnings.end());
    session->projection = config;

    const auto& ids = session->ids();
    Json out = projection_json(result);
    Json row_ids = Json::array();
    for (auto r : rows) row_ids.push_back(ids[r]);
    out["rows"] = std::move(row_ids);
    Json path_ids = Json::array();
    for (auto r : sel.path) path_ids.push_back(ids[r]);
    out["path"] = std::move(path_ids);
    Json groups = Json::array();
    const std::set<VertexId> in1(sel.group1.begin(), sel.group1.end());
    const std::set<VertexId> in2(sel.group2.begin(), sel.group2.end());
    for (auto r : rows) groups.push_back(in1.contains(r) ? 1 : in2.contains(r) ? 2 : 0);
    out["row_group"] = std::move(groups);

    const std::set<VertexId> keep(rows.begin(), rows.end());
    Json edges = Json::array();
    for (const auto& e : session->mst.edges())
        if (keep.contains(e.u) && keep.contains(e.v))
            edges.push_back(Json{{"u", ids[e.u]}, {"v", ids[e.v]}, {"weight", e.weight}});
    out["mst_edges"] = std::move(edges);
    out["surface"] = config.bandwidth ? surface_json(kde2d(result.coords, *config.bandwidth, resolution)) : Json(nullptr);
    return out;
}

Json SessionStore::run_test(const std::string& id, const Json& request) {
    const auto replicates = optional_count(request, "replicates").value_or(100);
    const auto threshold = optional_field<double>(request, "variance_threshold").value_or(0.90);
    std::uint64_t seed = 0;
    if (request.is_object() && request.contains("seed") && !request.at("seed").is_null()) {
        const Json& s = request.at("seed");
        if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<long long>() >= 0))
            throw ServiceError(400, "'seed' must be a non-negative integer");
        seed = s.get<std::uint64_t>();
    } else {
        seed = next_seed();
    }
    if (replicates < 1) throw ServiceError(400, "'replicates' must be at least 1");

    auto session = find(id);
    std::lock_guard lock(session->mutex);
    if (!session->selection) throw ServiceError(409, "no group selection; call /path or /groups first");
    const TestResult result = mst_test(session->analysis, session->mst, *session->selection, replicates, threshold, seed);
    Json out = test_result_json(result);
    out["crossing"] = crossing_json(result.crossing, session->ids());
    out["null_group"] = result.null_group;
    return out;
}

Json SessionStore::heatmap(const std::string& id, const std::optional<std::string>& rows,
                           const std::optional<std::string>& features) {
    auto session = find(id);
    std::lock_guard lock(session->mutex);
    if (!session->selection) throw ServiceError(409, "no group selection; call /path or /groups first");
    const Dataset& data = session->loaded.data;
    std::optional<std::vector<VertexId>> sub_rows;
    if (rows && !rows->empty()) {
        sub_rows.emplace();
        for (const auto& r : split_commas(*rows)) sub_rows->push_back(resolve_row(data, r));
    }
    std::optional<std::vector<std::size_t>> sub_features;
    if (features && !features->empty()) {
        sub_features.emplace();
        for (const auto& name : split_commas(*features)) {
            auto it = std::find(data.features().begin(), data.features().end(), name);
            if (it == data.features().end()) throw ServiceError(404, "unknown feature '" + name + "'");
            sub_features->push_back(static_cast<std::size_t>(it - data.features().begin()));
        }
    }
    return heatmap_json(heatmap_spec(data, *session->selection, sub_rows, sub_features), session->ids());
}

Json SessionStore::meta(const std::string& id) {
    auto session = find(id);
    std::lock_guard lock(session->mutex);
    if (!session->loaded.meta) throw ServiceError(404, "session has no metadata table");
    if (!session->selection) throw ServiceError(409, "no group selection; call /path or /groups first");
    return meta_json(meta_summary(*session->loaded.meta, *session->selection));
}

Json SessionStore::snapshot(const std::string& id, const Json& request) {
    const std::string path = require_string(request, "path");
    auto session = find(id);
    std::lock_guard lock(session->mutex);
    const auto& in = session->inputs;
    Json snap{{"version", 1},
              {"inputs",
               Json{{"data_csv", in.data_csv},
                    {"embedding_csv", in.embedding_csv},
                    {"labels_csv", in.labels_csv},
                    {"meta_csv", in.meta_csv ? Json(*in.meta_csv) : Json(nullptr)},
                    {"pca_dims", in.pca_dims ? Json(*in.pca_dims) : Json(nullptr)}}}};
    snap["selection"] = session->selection ? selection_json(*session->selection, session->ids()) : Json(nullptr);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ServiceError(400, "cannot write snapshot to " + path);
    out << snap.dump(1);
    if (!out) throw ServiceError(500, "failed writing snapshot to " + path);
    return Json{{"path", path}};
}

} // namespace mstlens::service
