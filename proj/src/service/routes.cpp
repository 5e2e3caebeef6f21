#include "mstlens/service.hpp"

#include "httplib.h"

#include <functional>

namespace mstlens::service {

namespace {

using Handler = std::function<Json(const httplib::Request&)>;

void reply(httplib::Response& res, int status, const Json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

httplib::Server::Handler wrap(Handler handler) {
    return [handler = std::move(handler)](const httplib::Request& req, httplib::Response& res) {
        try {
            reply(res, 200, handler(req));
        } catch (const ServiceError& e) {
            reply(res, e.status(), Json{{"error", e.what()}});
        } catch (const Json::exception& e) {
            reply(res, 400, Json{{"error", std::string("bad JSON: ") + e.what()}});
        } catch (const InputError& e) {
            reply(res, 400, Json{{"error", e.what()}});
        } catch (const DegenerateError& e) {
            reply(res, 422, Json{{"error", e.what()}});
        } catch (const std::exception& e) {
            reply(res, 500, Json{{"error", e.what()}});
        }
    };
}

Json body_of(const httplib::Request& req) {
    if (req.body.empty()) return Json::object();
    Json body = Json::parse(req.body);
    if (!body.is_object()) throw ServiceError(400, "request body must be a JSON object");
    return body;
}

std::optional<std::string> query(const httplib::Request& req, const char* key) {
    if (!req.has_param(key)) return std::nullopt;
    return req.get_param_value(key);
}

} // namespace

void register_routes(httplib::Server& server, SessionStore& store) {
    server.Post("/session", wrap([&](const httplib::Request& req) { return store.create_session(body_of(req)); }));
    server.Get(R"(/session/([^/]+))",
               wrap([&](const httplib::Request& req) { return store.overview(req.matches[1]); }));
    server.Post(R"(/session/([^/]+)/path)",
                wrap([&](const httplib::Request& req) { return store.select_path(req.matches[1], body_of(req)); }));
    server.Post(R"(/session/([^/]+)/groups)",
                wrap([&](const httplib::Request& req) { return store.select_groups(req.matches[1], body_of(req)); }));
    server.Post(R"(/session/([^/]+)/project)",
                wrap([&](const httplib::Request& req) { return store.project(req.matches[1], body_of(req)); }));
    server.Post(R"(/session/([^/]+)/test)",
                wrap([&](const httplib::Request& req) { return store.run_test(req.matches[1], body_of(req)); }));
    server.Post(R"(/session/([^/]+)/snapshot)",
                wrap([&](const httplib::Request& req) { return store.snapshot(req.matches[1], body_of(req)); }));
    server.Get(R"(/session/([^/]+)/heatmap)", wrap([&](const httplib::Request& req) {
                   return store.heatmap(req.matches[1], query(req, "rows"), query(req, "features"));
               }));
    server.Get(R"(/session/([^/]+)/meta)",
               wrap([&](const httplib::Request& req) { return store.meta(req.matches[1]); }));
}

} // namespace mstlens::service
