#include "masar/http_api.hpp"

#include <thread>

#include <httplib.h>

#include "masar/text.hpp"
#include "masar/version.hpp"

namespace masar {

namespace {

struct ParsedEndpoint {
    std::string base;  // scheme://host:port
    std::string path;  // /generate
};

ParsedEndpoint split_endpoint(const std::string& endpoint) {
    auto scheme = endpoint.find("://");
    size_t path_start = endpoint.find('/', scheme == std::string::npos ? 0 : scheme + 3);
    if (path_start == std::string::npos) return {endpoint, "/"};
    return {endpoint.substr(0, path_start), endpoint.substr(path_start)};
}

Json post_json(const std::string& endpoint, const Json& body) {
    ParsedEndpoint ep = split_endpoint(endpoint);
    httplib::Client client(ep.base);
    client.set_connection_timeout(5, 0);
    client.set_read_timeout(30, 0);
    auto res = client.Post(ep.path, body.dump(), "application/json");
    if (!res) throw ClientUnavailable("no response from " + endpoint);
    if (res->status < 200 || res->status >= 300)
        throw ClientUnavailable("endpoint " + endpoint + " returned status " + std::to_string(res->status));
    Json parsed = Json::parse(res->body, nullptr, false);
    if (parsed.is_discarded() || !parsed.is_object())
        throw ClientUnavailable("endpoint " + endpoint + " returned a non-JSON body");
    return parsed;
}

class HttpTextClient : public TextClient {
  public:
    explicit HttpTextClient(std::string endpoint) : endpoint_(std::move(endpoint)) {}

    std::string complete(const std::string& prompt) override {
        Json reply = post_json(endpoint_, Json{{"prompt", prompt}});
        if (!reply.contains("text") || !reply["text"].is_string())
            throw ClientUnavailable("endpoint " + endpoint_ + " reply has no 'text' field");
        return reply["text"].get<std::string>();
    }

  private:
    std::string endpoint_;
};

class HttpModerationClient : public ModerationClient {
  public:
    explicit HttpModerationClient(std::string endpoint) : endpoint_(std::move(endpoint)) {}

    ModerationScores score(const std::string& input) override {
        Json reply = post_json(endpoint_, Json{{"text", input}});
        if (!reply.contains("harmlessness") || !reply.contains("cultural_alignment"))
            throw ClientUnavailable("endpoint " + endpoint_ + " reply is missing the two scores");
        return {reply["harmlessness"].get<double>(), reply["cultural_alignment"].get<double>()};
    }

  private:
    std::string endpoint_;
};

class HttpEmbedder : public Embedder {
  public:
    HttpEmbedder(std::string endpoint, size_t dimension)
        : endpoint_(std::move(endpoint)), dimension_(dimension) {}

    size_t dimension() const override { return dimension_; }

    std::vector<std::vector<float>> embed(const std::vector<std::string>& texts) override {
        Json reply = post_json(endpoint_, Json{{"texts", texts}});
        if (!reply.contains("vectors") || !reply["vectors"].is_array())
            throw ClientUnavailable("endpoint " + endpoint_ + " reply has no 'vectors' array");
        std::vector<std::vector<float>> out;
        for (const auto& v : reply["vectors"]) out.push_back(v.get<std::vector<float>>());
        return out;
    }

  private:
    std::string endpoint_;
    size_t dimension_;
};

}  // namespace

std::shared_ptr<TextClient> make_http_text_client(const std::string& endpoint) {
    return std::make_shared<HttpTextClient>(endpoint);
}

std::shared_ptr<ModerationClient> make_http_moderation_client(const std::string& endpoint) {
    return std::make_shared<HttpModerationClient>(endpoint);
}

std::shared_ptr<Embedder> make_http_embedder(const std::string& endpoint, size_t dimension) {
    return std::make_shared<HttpEmbedder>(endpoint, dimension);
}

ClientBundle make_http_clients(const ServiceConfig& config) {
    ClientBundle bundle = make_mock_clients(config);  // deterministic fallbacks
    if (!config.model_endpoint.empty()) {
        auto text_client = make_http_text_client(config.model_endpoint);
        bundle.rephraser = text_client;
        bundle.classifier = text_client;
        bundle.generator = text_client;
        bundle.extractor = text_client;
    }
    if (!config.moderation_endpoint.empty()) {
        auto moderation = make_http_moderation_client(config.moderation_endpoint);
        bundle.input_screen = moderation;
        bundle.output_moderation = moderation;
    }
    if (!config.embedder_endpoint.empty())
        bundle.embedder = make_http_embedder(config.embedder_endpoint, config.embedder_dim);
    return bundle;
}

struct HttpService::Impl {
    Engine& engine;
    JobManager& jobs;
    httplib::Server server;
    std::thread background;

    Impl(Engine& e, JobManager& j) : engine(e), jobs(j) { wire(); }

    static void send_json(httplib::Response& res, int status, const Json& body) {
        res.status = status;
        res.set_content(body.dump(2), "application/json");
    }

    static Json error_body(const std::string& stage, const std::string& code, const std::string& message) {
        return Json{{"error", {{"stage", stage}, {"code", code}, {"message", message}}}};
    }

    void wire() {
        server.Post("/v1/answer", [this](const httplib::Request& req, httplib::Response& res) {
            Json body = Json::parse(req.body, nullptr, false);
            if (body.is_discarded() || !body.is_object())
                return send_json(res, 400, error_body("parse", "BadRequest", "body must be a JSON object"));
            AnswerRequest request = AnswerRequest::from_json(body);
            try {
                send_json(res, 200, engine.answer_json(request));
            } catch (const EmptyQuery& e) {
                send_json(res, 400, error_body("validate", "EmptyQuery", e.what()));
            } catch (const std::exception& e) {
                send_json(res, 500, error_body("pipeline", "Internal", e.what()));
            }
        });

        server.Post("/v1/jobs", [this](const httplib::Request& req, httplib::Response& res) {
            Json body = Json::parse(req.body, nullptr, false);
            if (body.is_discarded() || !body.is_object())
                return send_json(res, 400, error_body("parse", "BadRequest", "body must be a JSON object"));
            try {
                std::string id = jobs.submit(body);
                send_json(res, 202, Json{{"id", id}, {"state", "queued"}});
            } catch (const QueueFull& e) {
                res.set_header("Retry-After", "1");
                send_json(res, 429, error_body("submit", "QueueFull", e.what()));
            }
        });

        server.Get(R"(/v1/jobs/([A-Za-z0-9_\-]+))", [this](const httplib::Request& req, httplib::Response& res) {
            const std::string id = req.matches[1];
            try {
                send_json(res, 200, job_to_json(jobs.get(id)));
            } catch (const UnknownJobId& e) {
                send_json(res, 404, error_body("jobs", "UnknownJobId", e.what()));
            } catch (const RetentionExpired& e) {
                send_json(res, 410, error_body("jobs", "RetentionExpired", e.what()));
            }
        });

        server.Get("/v1/health", [this](const httplib::Request&, httplib::Response& res) {
            char checksum[32];
            std::snprintf(checksum, sizeof(checksum), "%016llx",
                          static_cast<unsigned long long>(engine.jurisprudence_checksum()));
            send_json(res, 200,
                      Json{{"status", "ok"},
                           {"version", kVersion},
                           {"jurisprudence_checksum", checksum},
                           {"pending_jobs", jobs.pending()}});
        });
    }
};

HttpService::HttpService(Engine& engine, JobManager& jobs) : impl_(std::make_unique<Impl>(engine, jobs)) {}

HttpService::~HttpService() {
    stop();
}

bool HttpService::listen(const std::string& host, int port) {
    return impl_->server.listen(host, port);
}

int HttpService::listen_on_any_port(const std::string& host) {
    int port = impl_->server.bind_to_any_port(host);
    impl_->background = std::thread([this] { impl_->server.listen_after_bind(); });
    impl_->server.wait_until_ready();
    return port;
}

void HttpService::stop() {
    if (!impl_) return;
    impl_->server.stop();
    if (impl_->background.joinable()) impl_->background.join();
}

}  // namespace masar
