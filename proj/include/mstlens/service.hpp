#pragma once

#include "mstlens/core.hpp"
#include "mstlens/mst.hpp"
#include "mstlens/projection.hpp"
#include "mstlens/serialize.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace httplib {
class Server;
}

namespace mstlens::service {

/// Request-level failure carrying the HTTP status to report.
class ServiceError : public std::runtime_error {
public:
    ServiceError(int status, const std::string& message) : std::runtime_error(message), status_(status) {}
    int status() const noexcept { return status_; }

private:
    int status_;
};

using Polygon = std::vector<std::array<double, 2>>;

/// Even-odd rule. Points exactly on an edge may fall either way.
bool point_in_polygon(double x, double y, const Polygon& polygon);

struct SessionInputs {
    std::string data_csv;
    std::string embedding_csv;
    std::string labels_csv;
    std::optional<std::string> meta_csv;
    std::optional<std::size_t> pca_dims;
};

/// In-memory analysis sessions. Every public call is thread-safe; calls on one session are
/// serialized, calls on different sessions run concurrently.
class SessionStore {
public:
    /// With a base seed, generated session ids and test seeds are a deterministic sequence;
    /// without one they come from std::random_device.
    explicit SessionStore(std::optional<std::uint64_t> base_seed = std::nullopt);
    ~SessionStore();

    /// Body: {"data": path, "embedding": path, "labels": path, "meta"?: path} or the same keys
    /// suffixed `_csv` carrying file contents, or {"snapshot": path}. Optional "pca_dims".
    Json create_session(const Json& request);
    std::string add_session(SessionInputs inputs);

    Json select_path(const std::string& id, const Json& request);
    Json select_groups(const std::string& id, const Json& request);
    Json project(const std::string& id, const Json& request);
    Json run_test(const std::string& id, const Json& request);
    /// Comma-separated row ids / feature names; empty means all.
    Json heatmap(const std::string& id, const std::optional<std::string>& rows,
                 const std::optional<std::string>& features);
    Json meta(const std::string& id);
    /// Writes the session (inputs plus selection state) to {"path": ...} as one JSON file.
    Json snapshot(const std::string& id, const Json& request);

    /// Session-creation payload for an existing session.
    Json overview(const std::string& id);

private:
    struct Session;
    std::shared_ptr<Session> find(const std::string& id);
    std::uint64_t next_seed();

    std::mutex mutex_;
    std::map<std::string, std::shared_ptr<Session>> sessions_;
    std::optional<std::uint64_t> base_seed_;
    std::uint64_t counter_ = 0;
};

/// Installs the JSON routes:
///   POST /session, POST /session/{id}/path, POST /session/{id}/groups,
///   POST /session/{id}/project, POST /session/{id}/test, POST /session/{id}/snapshot,
///   GET /session/{id}, GET /session/{id}/heatmap, GET /session/{id}/meta.
void register_routes(httplib::Server& server, SessionStore& store);

} // namespace mstlens::service
