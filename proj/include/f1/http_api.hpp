#pragma once

#include <string>

#include "f1/error.hpp"
#include "f1/platform.hpp"

namespace httplib {
class Server;
}

namespace f1 {

/// HTTP status for a domain error code.
int http_status(ErrorCode code) noexcept;

struct HttpApiOptions {
  /// Bearer token with operator rights (resolve any SOS, drain the outbox).
  /// Empty disables the admin surface.
  std::string admin_token;
};

/// JSON-over-HTTP surface of the platform. Every error body is
/// {"code": "...", "message": "..."}.
class HttpApi {
 public:
  HttpApi(Platform& platform, HttpApiOptions options = {});

  /// Registers all /api routes on `server`.
  void install(httplib::Server& server);

 private:
  Platform& platform_;
  HttpApiOptions options_;
};

}  // namespace f1
