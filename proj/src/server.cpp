#include "colliderbn/server.hpp"

#include <pthread.h>
#include <signal.h>

#include <algorithm>
#include <atomic>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

// The library default of 5 resets bursts of simultaneous connects.
#define CPPHTTPLIB_LISTEN_BACKLOG 128
#include <httplib.h>

#include "colliderbn/analysis.hpp"
#include "colliderbn/causal.hpp"
#include "colliderbn/json_source.hpp"
#include "colliderbn/model_io.hpp"
#include "colliderbn/report.hpp"

namespace colliderbn {

namespace {

ApiResponse json_response(int status, const Json& body) { return {status, body.dump()}; }

ApiResponse error_response(int status, const Error& error) {
  return json_response(status, error_json(error));
}

ApiResponse not_found(std::string_view id) {
  return error_response(404, Error(ErrorCode::NotFound, "no model '" + std::string(id) + "'"));
}

// Runs `parse` and then `compute`; errors from the first are the client's
// malformed input (400), from the second the model's verdict (422).
template <typename Parse, typename Compute>
ApiResponse handle(Parse parse, Compute compute) {
  decltype(parse()) request;
  try {
    request = parse();
  } catch (const Error& e) {
    return error_response(400, e);
  }
  try {
    return json_response(200, compute(request));
  } catch (const Error& e) {
    return error_response(422, e);
  }
}

Evidence to_evidence(const std::vector<std::pair<std::string, std::string>>& pairs) {
  Evidence out;
  for (const auto& [variable, state] : pairs) out.emplace(variable, state);
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot read '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

}  // namespace

void ModelRegistry::add_bundled(std::string id, Network network) {
  std::unique_lock lock(mutex_);
  if (taken(id)) throw Error(ErrorCode::InvalidArgument, "model id '" + id + "' is taken");
  models_.push_back({std::move(id), std::move(network), ModelSource::Bundled});
}

std::string ModelRegistry::add_uploaded(Network network) {
  std::unique_lock lock(mutex_);
  std::string id;
  do {
    id = "upload-" + std::to_string(++uploads_);
  } while (taken(id));
  models_.push_back({id, std::move(network), ModelSource::Uploaded});
  return id;
}

std::optional<RegisteredModel> ModelRegistry::find(std::string_view id) const {
  std::shared_lock lock(mutex_);
  for (const auto& m : models_) {
    if (m.id == id) return m;
  }
  return std::nullopt;
}

std::vector<RegisteredModel> ModelRegistry::list() const {
  std::shared_lock lock(mutex_);
  return models_;
}

bool ModelRegistry::taken(std::string_view id) const {
  return std::any_of(models_.begin(), models_.end(),
                     [&](const RegisteredModel& m) { return m.id == id; });
}

std::size_t load_models_dir(ModelRegistry& registry, const std::filesystem::path& dir) {
  std::error_code ec;
  std::vector<std::filesystem::path> files;
  for (std::filesystem::directory_iterator it(dir, ec), end; !ec && it != end; it.increment(ec)) {
    if (it->is_regular_file() && it->path().extension() == ".json") files.push_back(it->path());
  }
  if (ec) throw Error(ErrorCode::Io, "cannot read models directory '" + dir.string() + "'");
  std::sort(files.begin(), files.end());
  for (const auto& file : files) {
    try {
      registry.add_bundled(file.stem().string(), parse_model(read_file(file)));
    } catch (const Error& e) {
      throw Error(e.code(), file.filename().string() + ": " + e.what(), e.location(), e.token());
    }
  }
  return files.size();
}

ApiResponse Api::list_models() const {
  Json out = Json::array();
  for (const auto& m : registry_->list()) out.push_back(model_summary_json(m.id, m.network));
  return json_response(200, out);
}

ApiResponse Api::upload_model(std::string_view body) {
  try {
    const std::string id = registry_->add_uploaded(parse_model(body));
    return json_response(200, Json{{"id", id}});
  } catch (const Error& e) {
    return error_response(400, e);
  }
}

ApiResponse Api::get_model(std::string_view id) const {
  const auto model = registry_->find(id);
  if (!model) return not_found(id);
  return {200, serialize_model(model->network)};
}

ApiResponse Api::query(std::string_view id, std::string_view body) const {
  const auto model = registry_->find(id);
  if (!model) return not_found(id);
  return handle(
      [&] {
        const JsonSource src = JsonSource::parse(body);
        const JsonReader in(src);
        const auto& root = in.object(src.root(), "", {"evidence", "do", "targets"});
        QueryRequest request;
        if (const auto* e = in.optional_member(root, "evidence")) {
          request.evidence = to_evidence(in.string_map(*e, "/evidence"));
        }
        if (const auto* d = in.optional_member(root, "do")) {
          for (auto& [variable, state] : in.string_map(*d, "/do")) {
            request.interventions.push_back({variable, state});
          }
        }
        if (const auto* t = in.optional_member(root, "targets")) {
          request.targets = in.strings(*t, "/targets");
        }
        return request;
      },
      [&](const QueryRequest& request) {
        return query_run_json(run_queries(model->network, request));
      });
}

ApiResponse Api::audit(std::string_view id, std::string_view body) const {
  const auto model = registry_->find(id);
  if (!model) return not_found(id);
  return handle(
      [&] {
        const JsonSource src = JsonSource::parse(body);
        const JsonReader in(src);
        const auto& root = in.object(
            src.root(), "",
            {"exposure", "outcome", "outcome_state", "exposure_states", "selection"});
        AuditRequest request;
        request.exposure = in.string(in.member(root, "", "exposure"), "/exposure");
        request.outcome = in.string(in.member(root, "", "outcome"), "/outcome");
        if (const auto* s = in.optional_member(root, "outcome_state")) {
          request.outcome_state = in.string(*s, "/outcome_state");
        }
        if (const auto* s = in.optional_member(root, "exposure_states")) {
          auto states = in.strings(*s, "/exposure_states");
          if (states.size() != 2) {
            src.fail(ErrorCode::Syntax, "/exposure_states",
                     "exposure_states is [exposed, unexposed]");
          }
          request.exposed_state = states[0];
          request.unexposed_state = states[1];
        }
        if (const auto* s = in.optional_member(root, "selection")) {
          request.selection = to_evidence(in.string_map(*s, "/selection"));
        }
        return request;
      },
      [&](const AuditRequest& request) {
        return audit_json(audit_bias(model->network, with_boolean_defaults(model->network, request)));
      });
}

constexpr std::size_t kWorkerThreads = 32;

struct HttpServer::Impl {
  explicit Impl(Api a) : api(std::move(a)) {}

  Api api;
  httplib::Server server;
};

HttpServer::HttpServer(Api api) : impl_(std::make_unique<Impl>(std::move(api))) {
  auto& svr = impl_->server;
  Api& a = impl_->api;
  auto reply = [](httplib::Response& res, const ApiResponse& r) {
    res.status = r.status;
    res.set_content(r.body, "application/json");
  };
  // Each keep-alive connection pins a worker until it idles out; the default
  // pool (8 on small machines) starves a handful of persistent clients.
  svr.new_task_queue = [] { return new httplib::ThreadPool(kWorkerThreads); };
  svr.set_default_headers({{"Access-Control-Allow-Origin", "*"}});
  svr.Get("/api/models", [&a, reply](const httplib::Request&, httplib::Response& res) {
    reply(res, a.list_models());
  });
  svr.Post("/api/models", [&a, reply](const httplib::Request& req, httplib::Response& res) {
    reply(res, a.upload_model(req.body));
  });
  svr.Get(R"(/api/models/([^/]+))",
          [&a, reply](const httplib::Request& req, httplib::Response& res) {
            reply(res, a.get_model(req.matches[1].str()));
          });
  svr.Post(R"(/api/models/([^/]+)/query)",
           [&a, reply](const httplib::Request& req, httplib::Response& res) {
             reply(res, a.query(req.matches[1].str(), req.body));
           });
  svr.Post(R"(/api/models/([^/]+)/audit)",
           [&a, reply](const httplib::Request& req, httplib::Response& res) {
             reply(res, a.audit(req.matches[1].str(), req.body));
           });
  svr.Options(R"(/api/.*)", [](const httplib::Request&, httplib::Response& res) {
    res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
    res.status = 204;
  });
  // Unrouted paths get the same error body shape as everything else.
  svr.set_error_handler([](const httplib::Request& req, httplib::Response& res) {
    if (!res.body.empty()) return;
    const Error e(ErrorCode::NotFound, "no route for " + req.method + " " + req.path);
    res.set_content(error_json(e).dump(), "application/json");
  });
}

HttpServer::~HttpServer() = default;

int HttpServer::bind(const std::string& host, int port) {
  const int bound = port == 0 ? impl_->server.bind_to_any_port(host)
                              : (impl_->server.bind_to_port(host, port) ? port : -1);
  if (bound < 0) {
    throw Error(ErrorCode::Io, "cannot listen on " + host + ":" + std::to_string(port));
  }
  return bound;
}

void HttpServer::run() { impl_->server.listen_after_bind(); }
void HttpServer::stop() { impl_->server.stop(); }
void HttpServer::wait_until_ready() { impl_->server.wait_until_ready(); }

int serve(const ServeOptions& options, std::ostream& log) {
  auto registry = std::make_shared<ModelRegistry>();
  const std::size_t count = load_models_dir(*registry, options.models_dir);

  // Block the termination signals before any server thread exists so only
  // the waiter below ever receives them.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  sigset_t previous;
  pthread_sigmask(SIG_BLOCK, &signals, &previous);

  HttpServer server{Api(registry)};
  int port = 0;
  try {
    port = server.bind(options.host, options.port);
  } catch (...) {
    pthread_sigmask(SIG_SETMASK, &previous, nullptr);
    throw;
  }
  log << "serving " << count << " models on http://" << options.host << ":" << port << "\n"
      << std::flush;

  std::atomic<bool> signalled{false};
  std::thread waiter([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    signalled = true;
    server.stop();
  });
  server.run();
  if (!signalled) pthread_kill(waiter.native_handle(), SIGTERM);
  waiter.join();
  pthread_sigmask(SIG_SETMASK, &previous, nullptr);
  log << "shut down\n";
  return 0;
}

}  // namespace colliderbn
