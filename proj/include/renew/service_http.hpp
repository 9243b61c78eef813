#pragma once

// Binds Service to a listening socket. Kept apart from service.hpp so the
// routing can be tested without pulling in the HTTP library.

#include <iostream>

#include <httplib.h>

#include "renew/service.hpp"

namespace renew::service {

/// Blocks serving `svc` on 127.0.0.1:port until the server stops.
inline bool serve(Service& svc, int port, const std::string& host = "127.0.0.1") {
  httplib::Server server;
  auto adapt = [&svc](const httplib::Request& req, httplib::Response& res) {
    const Response out = svc.handle({req.method, req.path, req.body});
    res.status = out.status;
    res.set_content(out.body, out.contentType);
  };
  server.Get(".*", adapt);
  server.Post(".*", adapt);
  std::cerr << "renew: listening on http://" << host << ":" << port << "\n";
  return server.listen(host, port);
}

}  // namespace renew::service
