#include "masar/config.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "masar/errors.hpp"

namespace masar {

namespace {

std::string resolve(const std::string& base_dir, const std::string& path) {
    if (path.empty()) return path;
    std::filesystem::path p(path);
    if (p.is_absolute() || base_dir.empty()) return path;
    return (std::filesystem::path(base_dir) / p).string();
}

}  // namespace

ServiceConfig ServiceConfig::parse(const std::string& json_text, const std::string& base_dir) {
    nlohmann::json j = nlohmann::json::parse(json_text);
    ServiceConfig cfg;
    cfg.version = j.value("version", "unversioned");
    cfg.locale = j.value("locale", "en");

    if (j.contains("paths")) {
        const auto& p = j["paths"];
        cfg.rules_path = resolve(base_dir, p.value("intent_rules", ""));
        cfg.jurisprudence_path = resolve(base_dir, p.value("jurisprudence", ""));
        cfg.almanac_path = resolve(base_dir, p.value("almanac", ""));
        cfg.events_path = resolve(base_dir, p.value("events", ""));
        cfg.blocklist_path = resolve(base_dir, p.value("blocklist", ""));
        cfg.templates_path = resolve(base_dir, p.value("safety_templates", ""));
        cfg.corpora_dir = resolve(base_dir, p.value("corpora_dir", ""));
    }

    if (j.contains("thresholds")) {
        const auto& t = j["thresholds"];
        cfg.input_semantic_threshold = t.value("input_semantic", cfg.input_semantic_threshold);
        cfg.output_thresholds.first = t.value("output_harmlessness", cfg.output_thresholds.first);
        cfg.output_thresholds.second = t.value("output_cultural", cfg.output_thresholds.second);
        cfg.quran_guard_threshold = t.value("quran_guard", cfg.quran_guard_threshold);
        cfg.hadith_verified_threshold = t.value("hadith_verified", cfg.hadith_verified_threshold);
    }

    if (j.contains("retrieval")) {
        const auto& r = j["retrieval"];
        cfg.rrf_k = r.value("rrf_k", cfg.rrf_k);
        cfg.top_k = r.value("top_k", cfg.top_k);
        cfg.embedder_dim = r.value("embedder_dim", cfg.embedder_dim);
    }

    if (j.contains("agent")) cfg.agent_max_iterations = j["agent"].value("max_iterations", cfg.agent_max_iterations);

    if (j.contains("jobs")) {
        const auto& jb = j["jobs"];
        cfg.job_workers = jb.value("workers", cfg.job_workers);
        cfg.job_queue_capacity = jb.value("queue_capacity", cfg.job_queue_capacity);
        cfg.job_retention_hours = jb.value("retention_hours", cfg.job_retention_hours);
        cfg.job_store_path = resolve(base_dir, jb.value("store_path", ""));
    }

    if (j.contains("clients")) {
        const auto& c = j["clients"];
        cfg.client_mode = c.value("mode", cfg.client_mode);
        cfg.model_endpoint = c.value("model_endpoint", "");
        cfg.moderation_endpoint = c.value("moderation_endpoint", "");
        cfg.embedder_endpoint = c.value("embedder_endpoint", "");
    }

    if (j.contains("server")) cfg.http_port = j["server"].value("port", cfg.http_port);

    if (cfg.client_mode != "mock" && cfg.client_mode != "http")
        throw InvalidInput("clients.mode must be 'mock' or 'http', got '" + cfg.client_mode + "'");
    if (cfg.job_workers < 1) throw InvalidInput("jobs.workers must be at least 1");
    return cfg;
}

ServiceConfig ServiceConfig::load_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidInput("cannot open config: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    std::string base_dir = std::filesystem::path(path).parent_path().string();
    ServiceConfig cfg = parse(buf.str(), base_dir);
    cfg.apply_env_overrides();
    return cfg;
}

void ServiceConfig::apply_env_overrides() {
    auto env = [](const char* name) -> std::string {
        const char* v = std::getenv(name);
        return v ? v : "";
    };
    std::string model = env("MASAR_MODEL_ENDPOINT");
    std::string moderation = env("MASAR_MODERATION_ENDPOINT");
    std::string embedder = env("MASAR_EMBEDDER_ENDPOINT");
    if (!model.empty()) model_endpoint = model;
    if (!moderation.empty()) moderation_endpoint = moderation;
    if (!embedder.empty()) embedder_endpoint = embedder;
    if (!model.empty() || !moderation.empty() || !embedder.empty()) client_mode = "http";
}

}  // namespace masar
