#include "burstsim/gateway_http.hpp"

#include <mutex>
#include <optional>

#include <httplib.h>

#include "burstsim/gateway.hpp"

namespace burstsim {

namespace {

std::optional<SimTime> sim_time_header(const httplib::Request& req) {
    if (!req.has_header("X-Sim-Time")) return std::nullopt;
    try {
        return static_cast<SimTime>(std::stoll(req.get_header_value("X-Sim-Time")));
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

void reply(httplib::Response& res, const ApiResult& result) {
    res.status = result.status;
    res.set_content(result.body.dump(), "application/json");
}

Payload parse_body(const httplib::Request& req, bool& ok) {
    ok = true;
    if (req.body.empty()) return Payload::object();
    Payload body = Payload::parse(req.body, nullptr, false);
    if (body.is_discarded()) ok = false;
    return body;
}

}  // namespace

void attach_gateway_routes(httplib::Server& server, GatewayService& service) {
    const auto guarded = [&service](httplib::Response& res, auto&& fn) {
        std::scoped_lock lock(service.command_mutex());
        try {
            reply(res, fn());
        } catch (const std::exception& e) {
            reply(res, ApiResult::error(500, e.what()));
        }
    };

    server.Post("/v1/systems", [&service, guarded](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&]() -> ApiResult {
            bool ok = false;
            const Payload body = parse_body(req, ok);
            if (!ok) return ApiResult::error(400, "malformed JSON body");
            return service.create_system(body);
        });
    });
    server.Get("/v1/systems", [&service, guarded](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&]() -> ApiResult {
            if (auto t = sim_time_header(req)) service.advance(*t);
            return service.list_systems();
        });
    });
    server.Post("/v1/apps", [&service, guarded](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&]() -> ApiResult {
            bool ok = false;
            const Payload body = parse_body(req, ok);
            if (!ok) return ApiResult::error(400, "malformed JSON body");
            return service.create_app(body);
        });
    });
    server.Get("/v1/apps", [&service, guarded](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&]() -> ApiResult {
            if (auto t = sim_time_header(req)) service.advance(*t);
            return service.list_apps();
        });
    });
    server.Post("/v1/jobs", [&service, guarded](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&]() -> ApiResult {
            bool ok = false;
            const Payload body = parse_body(req, ok);
            if (!ok) return ApiResult::error(400, "malformed JSON body");
            return service.submit_job(body, sim_time_header(req));
        });
    });
    server.Get("/v1/jobs", [&service, guarded](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&]() -> ApiResult {
            if (auto t = sim_time_header(req)) service.advance(*t);
            return service.list_jobs();
        });
    });
    server.Get(R"(/v1/jobs/([^/]+))", [&service, guarded](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&]() -> ApiResult {
            if (auto t = sim_time_header(req)) service.advance(*t);
            return service.get_job(req.matches[1]);
        });
    });
    server.Post(R"(/v1/jobs/([^/]+)/cancel)",
                [&service, guarded](const httplib::Request& req, httplib::Response& res) {
                    guarded(res, [&]() -> ApiResult {
                        return service.cancel_job(req.matches[1], sim_time_header(req));
                    });
                });
}

bool serve_gateway(GatewayService& service, const std::string& host, int port) {
    httplib::Server server;
    attach_gateway_routes(server, service);
    return server.listen(host, port);
}

}  // namespace burstsim
