#pragma once

#include <cstddef>
#include <string>
#include <utility>

namespace masar {

// Service configuration: file paths (resolved against the config file's
// directory), thresholds, pool sizes and client wiring. Every path may be
// empty, in which case the built-in defaults back that component.
struct ServiceConfig {
    std::string version = "builtin";
    std::string locale = "en";

    std::string rules_path;
    std::string jurisprudence_path;
    std::string almanac_path;
    std::string events_path;
    std::string blocklist_path;
    std::string templates_path;
    std::string corpora_dir;

    double input_semantic_threshold = 3.0;
    std::pair<double, double> output_thresholds{3.0, 3.0};
    double quran_guard_threshold = 0.8;
    double hadith_verified_threshold = 0.85;

    double rrf_k = 60.0;
    std::size_t top_k = 5;
    std::size_t embedder_dim = 64;

    int agent_max_iterations = 6;

    int job_workers = 2;
    std::size_t job_queue_capacity = 64;
    double job_retention_hours = 24.0;
    std::string job_store_path;

    // "mock" runs entirely on deterministic built-in clients; "http" wires
    // the documented JSON-over-HTTP client contract to the endpoints below.
    std::string client_mode = "mock";
    std::string model_endpoint;
    std::string moderation_endpoint;
    std::string embedder_endpoint;

    int http_port = 8080;

    static ServiceConfig load_file(const std::string& path);
    static ServiceConfig parse(const std::string& json_text, const std::string& base_dir);

    // MASAR_MODEL_ENDPOINT / MASAR_MODERATION_ENDPOINT / MASAR_EMBEDDER_ENDPOINT
    // override the client wiring; any of them switches client_mode to "http".
    void apply_env_overrides();
};

}  // namespace masar
