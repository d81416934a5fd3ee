#pragma once

// HTTP layer over CurationState. Reads run concurrently; decisions are
// serialized through one writer and appended to the decision log before the
// response is sent.

#include <filesystem>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>

#include "holo/curation.hpp"

namespace httplib {
class Server;
}

namespace holo::cli {

class CurationServer {
 public:
  /// Replays `log` (when given and present) into `state` before serving.
  CurationServer(CurationState state, std::optional<std::filesystem::path> log);
  ~CurationServer();

  CurationServer(const CurationServer&) = delete;
  CurationServer& operator=(const CurationServer&) = delete;

  std::size_t replayed() const noexcept { return replayed_; }

  /// Port 0 picks a free port. Returns the bound port; throws when binding fails.
  int bind(const std::string& host, int port);
  /// Blocks until stop() is called.
  void serve();
  void stop();

 private:
  void routes();

  CurationState state_;
  std::optional<DecisionLog> log_;
  std::size_t replayed_ = 0;
  mutable std::shared_mutex mutex_;
  std::unique_ptr<httplib::Server> server_;
};

}  // namespace holo::cli
