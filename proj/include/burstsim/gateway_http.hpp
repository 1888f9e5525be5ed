#pragma once

#include <string>

namespace httplib {
class Server;
}

namespace burstsim {

class GatewayService;

// Registers the /v1 routes on an httplib server. All state-mutating requests
// serialize through one mutex; the simulation instance has a single owner.
void attach_gateway_routes(httplib::Server& server, GatewayService& service);

// Blocking listen on the given port. Returns false if the bind fails.
bool serve_gateway(GatewayService& service, const std::string& host, int port);

}  // namespace burstsim
