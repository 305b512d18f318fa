// Copyright 2026 The Haggle Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <httplib.h>

#include "haggle/error.h"
#include "haggle/service.h"

namespace haggle {

void Serve(SessionService& service, const ServeOptions& options) {
  httplib::Server server;
  const auto route = [&service](const httplib::Request& req, httplib::Response& res) {
    const Response r = service.Handle(req.method, req.path, req.body);
    res.status = r.status;
    res.set_content(r.body.dump(), "application/json");
  };
  server.Post("/sessions", route);
  server.Get(R"(/sessions/[^/]+)", route);
  server.Post(R"(/sessions/[^/]+/(events|survey))", route);
  server.set_exception_handler([](const httplib::Request&, httplib::Response& res,
                                  std::exception_ptr) {
    res.status = 500;
    res.set_content(R"({"error":"internal error"})", "application/json");
  });
  if (!options.static_dir.empty() && !server.set_mount_point("/", options.static_dir.string())) {
    throw HaggleError("static directory not found: " + options.static_dir.string());
  }
  if (!server.listen(options.host, options.port)) {
    throw HaggleError("cannot listen on " + options.host + ":" + std::to_string(options.port));
  }
}

}  // namespace haggle
