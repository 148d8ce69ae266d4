#pragma once

#include <cstddef>
#include <filesystem>
#include <memory>
#include <optional>
#include <ostream>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include "colliderbn/network.hpp"

namespace colliderbn {

enum class ModelSource { Bundled, Uploaded };

struct RegisteredModel {
  std::string id;
  Network network;
  ModelSource source;
};

/// Append-only id -> network map. Readers never block each other; uploads
/// take the lock exclusively for the insertion only.
class ModelRegistry {
 public:
  /// Throws Error(InvalidArgument) when the id is taken.
  void add_bundled(std::string id, Network network);
  /// Returns the fresh id.
  std::string add_uploaded(Network network);

  std::optional<RegisteredModel> find(std::string_view id) const;
  std::vector<RegisteredModel> list() const;

 private:
  bool taken(std::string_view id) const;

  mutable std::shared_mutex mutex_;
  std::vector<RegisteredModel> models_;
  std::size_t uploads_ = 0;
};

/// Registers every *.json model in `dir` under its file stem, in name order.
/// Throws Error(Io) for an unreadable directory and the parser's error,
/// prefixed with the file name, for a bad model. Returns the count.
std::size_t load_models_dir(ModelRegistry& registry, const std::filesystem::path& dir);

struct ApiResponse {
  int status = 200;
  std::string body;
};

/// The endpoint logic, independent of any socket. 400 for malformed input,
/// 404 for an unknown model, 422 for well-formed requests the model rejects.
class Api {
 public:
  explicit Api(std::shared_ptr<ModelRegistry> registry) : registry_(std::move(registry)) {}

  ApiResponse list_models() const;                              // GET  /api/models
  ApiResponse upload_model(std::string_view body);              // POST /api/models
  ApiResponse get_model(std::string_view id) const;             // GET  /api/models/{id}
  ApiResponse query(std::string_view id, std::string_view body) const;  // POST .../query
  ApiResponse audit(std::string_view id, std::string_view body) const;  // POST .../audit

 private:
  std::shared_ptr<ModelRegistry> registry_;
};

/// cpp-httplib front end for an Api.
class HttpServer {
 public:
  explicit HttpServer(Api api);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Port 0 picks a free port. Returns the bound port; throws Error(Io).
  int bind(const std::string& host, int port);
  /// Serves until stop(); in-flight requests complete first.
  void run();
  void stop();
  void wait_until_ready();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

struct ServeOptions {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::filesystem::path models_dir = "models";
};

/// Loads the models directory, serves until SIGINT or SIGTERM, then drains.
/// Returns 0 after a clean shutdown. Throws Error on startup failure.
int serve(const ServeOptions& options, std::ostream& log);

}  // namespace colliderbn
