#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "masar/eval.hpp"
#include "masar/http_api.hpp"
#include "masar/jobs.hpp"
#include "masar/pipeline.hpp"
#include "masar/version.hpp"

namespace {

using namespace masar;

ServiceConfig load_config(const std::string& path) {
    if (!path.empty()) return ServiceConfig::load_file(path);
    ServiceConfig cfg;
    cfg.apply_env_overrides();
    return cfg;
}

ClientBundle make_clients(const ServiceConfig& cfg) {
    return cfg.client_mode == "http" ? make_http_clients(cfg) : make_mock_clients(cfg);
}

void print_startup(const Engine& engine) {
    std::fprintf(stderr, "masar %s | jurisprudence %s checksum %016llx | tools: %zu\n", kVersion,
                 engine.jurisprudence_version().c_str(),
                 static_cast<unsigned long long>(engine.jurisprudence_checksum()),
                 engine.registry().names().size());
}

int run_answer(Engine& engine, const std::string& query, const AnswerOptions& options, bool json_output) {
    AnswerRequest request;
    request.query = query;
    request.conversation_id = "cli";
    request.options = options;
    AnswerResponse response = engine.answer(request);
    if (json_output) {
        std::cout << to_json(response).dump(2) << "\n";
    } else {
        if (response.intent)
            std::cout << "[intent " << to_string(response.intent->label) << " via "
                      << (response.intent->source == IntentDecision::Source::rule_layer ? "rules" : "model")
                      << "]\n";
        if (response.error)
            std::cout << "error at " << response.error->stage << ": " << response.error->message << "\n";
        else
            std::cout << response.text << "\n";
        for (const auto& w : response.warnings) std::cout << "(warning: " << w << ")\n";
    }
    return response.error ? 1 : 0;
}

int repl(Engine& engine, AnswerOptions options) {
    std::cout << "masar repl — empty line or ctrl-d exits\n";
    std::string line;
    while (true) {
        std::cout << "> " << std::flush;
        if (!std::getline(std::cin, line) || line.empty()) break;
        try {
            run_answer(engine, line, options, false);
        } catch (const std::exception& e) {
            std::cout << "error: " << e.what() << "\n";
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"masar — grounded question-answering orchestration service"};
    app.set_version_flag("--version", masar::kVersion);

    std::string config_path;
    app.add_option("--config", config_path, "path to config.json")->envname("MASAR_CONFIG");

    // answer
    auto* answer_cmd = app.add_subcommand("answer", "run one query through the pipeline (REPL without a query)");
    std::string query, locale, date, method, today;
    double latitude = 0, longitude = 0, utc_offset = 0;
    bool have_lat = false, have_lon = false, json_output = false, use_agent = false;
    answer_cmd->add_option("query", query, "the question");
    answer_cmd->add_option("--locale", locale, "ar|en");
    auto* lat_opt = answer_cmd->add_option("--lat", latitude, "latitude");
    auto* lon_opt = answer_cmd->add_option("--lon", longitude, "longitude");
    answer_cmd->add_option("--date", date, "YYYY-MM-DD");
    answer_cmd->add_option("--today", today, "calendar reference day YYYY-MM-DD");
    answer_cmd->add_option("--method", method, "prayer method preset");
    answer_cmd->add_option("--utc-offset", utc_offset, "clock offset hours");
    answer_cmd->add_flag("--agent", use_agent, "route through the tool-calling loop");
    answer_cmd->add_flag("--json", json_output, "emit the full response JSON");

    // serve
    auto* serve_cmd = app.add_subcommand("serve", "start the HTTP API");
    int port = -1;
    std::string host = "0.0.0.0";
    serve_cmd->add_option("--port", port, "listen port (default from config)");
    serve_cmd->add_option("--host", host, "bind address");

    // eval
    auto* eval_cmd = app.add_subcommand("eval", "score a tool-calling dataset");
    std::string dataset_path, report_json_path;
    eval_cmd->add_option("dataset", dataset_path, "JSONL eval records")->required();
    eval_cmd->add_option("--report-json", report_json_path, "also write the JSON report here");

    // corpora
    auto* corpora_cmd = app.add_subcommand("corpora", "inspect the bundled corpora");
    auto* list_cmd = corpora_cmd->add_subcommand("list", "corpus names and sizes");
    auto* search_cmd = corpora_cmd->add_subcommand("search", "hybrid search a corpus");
    std::string corpus_name = "quran", search_text;
    int top_k = 5, surah = 0, ayah = 0, ayah_to = 0;
    search_cmd->add_option("--corpus", corpus_name, "quran|hadith|supplication|fiqh|general");
    search_cmd->add_option("--text", search_text, "query text");
    search_cmd->add_option("--surah", surah, "structured filter: surah number (quran)");
    search_cmd->add_option("--ayah", ayah, "structured filter: first ayah");
    search_cmd->add_option("--ayah-to", ayah_to, "structured filter: last ayah");
    search_cmd->add_option("-k", top_k, "results");

    app.require_subcommand(1);
    CLI11_PARSE(app, argc, argv);

    try {
        masar::ServiceConfig cfg = load_config(config_path);

        if (eval_cmd->parsed()) {
            auto records = masar::load_eval_records_jsonl(dataset_path);
            masar::MetricReport report = masar::evaluate(records);
            std::cout << masar::render_report_table(report);
            if (!report_json_path.empty()) {
                std::ofstream out(report_json_path);
                out << masar::report_to_json(report).dump(2) << "\n";
                std::cout << "report written to " << report_json_path << "\n";
            }
            return 0;
        }

        masar::Engine engine(cfg, make_clients(cfg));
        print_startup(engine);

        if (answer_cmd->parsed()) {
            masar::AnswerOptions options;
            options.locale = locale;
            if (lat_opt->count()) {
                options.latitude = latitude;
                have_lat = true;
            }
            if (lon_opt->count()) {
                options.longitude = longitude;
                have_lon = true;
            }
            (void)have_lat;
            (void)have_lon;
            if (!date.empty()) options.date = date;
            if (!today.empty()) options.today = today;
            if (!method.empty()) options.method = method;
            options.utc_offset_hours = utc_offset;
            options.use_agent = use_agent;
            if (query.empty()) return repl(engine, options);
            return run_answer(engine, query, options, json_output);
        }

        if (serve_cmd->parsed()) {
            masar::JobManager::Options job_options;
            job_options.workers = cfg.job_workers;
            job_options.queue_capacity = cfg.job_queue_capacity;
            job_options.retention =
                std::chrono::milliseconds(static_cast<std::int64_t>(cfg.job_retention_hours * 3600.0 * 1000.0));
            job_options.journal_path = cfg.job_store_path;
            masar::JobManager jobs(
                [&engine](const nlohmann::json& payload) {
                    return engine.answer_json(masar::AnswerRequest::from_json(payload));
                },
                job_options);
            masar::HttpService service(engine, jobs);
            int listen_port = port > 0 ? port : cfg.http_port;
            std::fprintf(stderr, "listening on %s:%d\n", host.c_str(), listen_port);
            if (!service.listen(host, listen_port)) {
                std::fprintf(stderr, "failed to bind %s:%d\n", host.c_str(), listen_port);
                return 1;
            }
            return 0;
        }

        if (corpora_cmd->parsed()) {
            if (search_cmd->parsed()) {
                masar::Json args = masar::Json::object();
                args["query"] = search_text;
                if (surah > 0) args["surah"] = surah;
                if (ayah > 0) args["ayah"] = ayah;
                if (ayah_to > 0) args["ayah_to"] = ayah_to;
                std::string tool = corpus_name == "quran" ? "quran_retrieval"
                                   : corpus_name == "hadith" ? "hadith_verification"
                                   : corpus_name == "supplication" ? "supplication_lookup"
                                   : corpus_name == "fiqh" ? "fiqh_reasoning"
                                                           : "general_knowledge";
                masar::ToolResult result = engine.registry().invoke(tool, args);
                std::cout << (result.ok ? result.content.value("text", result.content.dump(2)) : result.error)
                          << "\n";
                (void)top_k;
                return 0;
            }
            (void)list_cmd;
            for (const auto& [name, size] : engine.corpus_sizes())
                std::cout << name << ": " << size << " documents\n";
            std::cout << "tools:";
            for (const auto& n : engine.registry().names()) std::cout << " " << n;
            std::cout << "\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
