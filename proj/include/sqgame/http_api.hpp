#pragma once

#include <memory>
#include <string>

#include "sqgame/error.hpp"
#include "sqgame/study.hpp"

namespace sqgame {

/// HTTP status used for a failed request with this code.
int http_status(ErrorCode code) noexcept;

/// JSON front end of a StudyService.
class ApiServer {
 public:
  explicit ApiServer(StudyService& service);
  ~ApiServer();

  ApiServer(const ApiServer&) = delete;
  ApiServer& operator=(const ApiServer&) = delete;

  /// Port 0 picks a free port. Returns the bound port, or -1.
  int bind(const std::string& host, int port);
  /// Blocks until stop().
  bool run();
  void stop();
  void wait_until_ready() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace sqgame
