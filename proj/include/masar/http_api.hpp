#pragma once

#include <memory>
#include <string>

#include "masar/jobs.hpp"
#include "masar/pipeline.hpp"

namespace masar {

// HTTP clients speaking the documented JSON contract:
//   text:       POST <endpoint>  {"prompt": "..."}        -> {"text": "..."}
//   moderation: POST <endpoint>  {"text": "..."}          -> {"harmlessness": x, "cultural_alignment": y}
//   embedder:   POST <endpoint>  {"texts": ["...", ...]}  -> {"vectors": [[...], ...], "dimension": d}
// Any transport or schema failure raises ClientUnavailable; the pipeline's
// degraded paths take it from there.
std::shared_ptr<TextClient> make_http_text_client(const std::string& endpoint);
std::shared_ptr<ModerationClient> make_http_moderation_client(const std::string& endpoint);
std::shared_ptr<Embedder> make_http_embedder(const std::string& endpoint, size_t dimension);

ClientBundle make_http_clients(const ServiceConfig& config);

// The deployable surface:
//   POST /v1/answer    synchronous pipeline run
//   POST /v1/jobs      asynchronous submission -> {"id": ...}
//   GET  /v1/jobs/{id} job state/result
//   GET  /v1/health    liveness + config checksum
class HttpService {
  public:
    HttpService(Engine& engine, JobManager& jobs);
    ~HttpService();

    // Blocks until stop() is called from another thread.
    bool listen(const std::string& host, int port);
    // Binds to an OS-assigned port and serves in a background thread.
    int listen_on_any_port(const std::string& host);
    void stop();

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace masar
