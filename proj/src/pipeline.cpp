#include "masar/pipeline.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <set>
#include <sstream>

#include "masar/eval.hpp"
#include "masar/inheritance.hpp"
#include "masar/mocks.hpp"
#include "masar/text.hpp"
#include "masar/zakat.hpp"

namespace masar {

namespace {

std::string locale_or(const std::string& requested, const std::string& fallback) {
    return requested.empty() ? fallback : requested;
}

GregorianDate today_utc() {
    auto now = std::chrono::system_clock::now();
    auto days = std::chrono::duration_cast<std::chrono::hours>(now.time_since_epoch()).count() / 24;
    return gregorian_from_days(static_cast<std::int64_t>(days));
}

}  // namespace

GregorianDate parse_iso_date(const std::string& text_in) {
    std::string s = text::trim(text_in);
    int y = 0, m = 0, d = 0;
    if (std::sscanf(s.c_str(), "%d-%d-%d", &y, &m, &d) != 3)
        throw InvalidInput("expected YYYY-MM-DD, got '" + text_in + "'");
    GregorianDate g{y, m, d};
    if (!is_valid_gregorian(g)) throw InvalidInput("invalid date '" + text_in + "'");
    return g;
}

ClientBundle make_mock_clients(const ServiceConfig& config) {
    ClientBundle bundle;
    // rephraser/classifier stay empty: pass-through rephrase, rule-layer routing
    auto generator = std::make_shared<mocks::ScriptedTextClient>(
        "Ruling: See the cited evidence.\nExplanation: Assembled from the retrieved sources.\nNotes: "
        "Deterministic mock output.");
    bundle.generator = generator;
    bundle.extractor = std::make_shared<mocks::RuleBasedExtractorClient>();

    auto screen = std::make_shared<mocks::KeywordModerationClient>();
    screen->add_trigger("ignore previous instructions", {1.5, 3.0});
    screen->add_trigger("تجاهل التعليمات", {1.5, 3.0});
    bundle.input_screen = screen;

    auto moderation = std::make_shared<mocks::KeywordModerationClient>();
    moderation->add_trigger("build a weapon", {1.0, 1.0});
    moderation->add_trigger("صنع سلاح", {1.0, 1.0});
    bundle.output_moderation = moderation;

    bundle.embedder = std::make_shared<mocks::HashEmbedder>(config.embedder_dim);
    return bundle;
}

Json AnswerRequest::to_json() const {
    Json j = Json::object();
    j["query"] = query;
    if (!conversation_id.empty()) j["conversation_id"] = conversation_id;
    Json o = Json::object();
    if (!options.locale.empty()) o["locale"] = options.locale;
    if (options.latitude) o["latitude"] = *options.latitude;
    if (options.longitude) o["longitude"] = *options.longitude;
    if (options.date) o["date"] = *options.date;
    if (options.today) o["today"] = *options.today;
    if (options.method) o["method"] = *options.method;
    if (options.utc_offset_hours != 0.0) o["utc_offset_hours"] = options.utc_offset_hours;
    if (options.use_agent) o["use_agent"] = true;
    if (options.max_iterations) o["max_iterations"] = *options.max_iterations;
    if (!o.empty()) j["options"] = o;
    return j;
}

AnswerRequest AnswerRequest::from_json(const Json& j) {
    AnswerRequest request;
    request.query = j.value("query", "");
    request.conversation_id = j.value("conversation_id", "");
    if (j.contains("options") && j["options"].is_object()) {
        const auto& o = j["options"];
        request.options.locale = o.value("locale", "");
        if (o.contains("latitude")) request.options.latitude = o["latitude"].get<double>();
        if (o.contains("longitude")) request.options.longitude = o["longitude"].get<double>();
        if (o.contains("date")) request.options.date = o["date"].get<std::string>();
        if (o.contains("today")) request.options.today = o["today"].get<std::string>();
        if (o.contains("method")) request.options.method = o["method"].get<std::string>();
        request.options.utc_offset_hours = o.value("utc_offset_hours", 0.0);
        request.options.use_agent = o.value("use_agent", false);
        if (o.contains("max_iterations")) request.options.max_iterations = o["max_iterations"].get<int>();
    }
    return request;
}

Json to_json(const IntentDecision& d) {
    Json j = Json::object();
    j["label"] = to_string(d.label);
    j["confidence"] = d.confidence;
    j["rationale"] = d.rationale;
    j["sub_questions"] = d.sub_questions;
    j["retrieval_required"] = d.retrieval_required;
    j["source"] = d.source == IntentDecision::Source::rule_layer ? "rule_layer" : "model_layer";
    return j;
}

Json to_json(const ValidationReport& r) {
    Json spans = Json::array();
    for (const auto& s : r.spans) {
        Json e = Json::object();
        e["start"] = s.span.start;
        e["end"] = s.span.end;
        e["raw"] = s.span.raw;
        e["marker_delimited"] = s.span.marker_delimited;
        e["outcome"] = to_string(s.outcome);
        if (s.matched_reference) e["matched_reference"] = *s.matched_reference;
        e["similarity"] = s.similarity;
        spans.push_back(e);
    }
    return Json{{"spans", spans}, {"anomalies", r.anomalies}};
}

Json to_json(const ModerationVerdict& v) {
    return Json{{"harmlessness", v.harmlessness},
                {"cultural_alignment", v.cultural_alignment},
                {"decision", to_string(v.decision)},
                {"reason", v.reason},
                {"stage", v.stage},
                {"reason_class", v.reason_class}};
}

Json to_json(const AnswerResponse& r) {
    Json j = Json::object();
    j["text"] = r.text;
    if (r.intent) j["intent"] = to_json(*r.intent);
    j["rephrased_query"] = r.rephrase.text;
    if (r.rephrase.degraded) j["rephrase_warning"] = r.rephrase.warning;
    if (r.validation) j["validation"] = to_json(*r.validation);
    j["moderation"] = to_json(r.moderation);
    if (!r.trace_id.empty()) j["trace_id"] = r.trace_id;
    j["stages"] = r.stages;
    j["warnings"] = r.warnings;
    j["blocked"] = r.blocked;
    if (r.error)
        j["error"] = Json{{"stage", r.error->stage}, {"code", r.error->code}, {"message", r.error->message}};
    return j;
}

Engine::Engine(ServiceConfig config, ClientBundle clients)
    : config_(std::move(config)), clients_(std::move(clients)) {
    if (!clients_.embedder) clients_.embedder = std::make_shared<mocks::HashEmbedder>(config_.embedder_dim);
    load_components();
    register_handlers();
    std::vector<std::string> required;
    for (Intent intent : kAllIntents) required.push_back(to_string(intent));
    registry_.validate_handlers(required);
}

void Engine::load_components() {
    RuleTable rules = config_.rules_path.empty() ? RuleTable::builtin_default()
                                                 : RuleTable::load_file(config_.rules_path);
    router_ = std::make_unique<IntentRouter>(std::move(rules), clients_.classifier.get());

    jurisprudence_ = config_.jurisprudence_path.empty()
                         ? JurisprudenceConfig::builtin_default()
                         : JurisprudenceConfig::load_file(config_.jurisprudence_path);
    presets_ = config_.almanac_path.empty() ? MethodPresets::builtin_default()
                                            : MethodPresets::load_file(config_.almanac_path);
    if (!config_.events_path.empty()) events_ = EventTable::load_file(config_.events_path);

    blocklist_ = std::make_unique<Blocklist>(config_.blocklist_path.empty()
                                                 ? Blocklist::parse("")
                                                 : Blocklist::load_file(config_.blocklist_path));
    templates_ = config_.templates_path.empty() ? SafetyTemplates::builtin_default()
                                                : SafetyTemplates::load_file(config_.templates_path);

    if (!config_.corpora_dir.empty()) {
        auto load = [&](const char* file, SearchIndex& target) {
            std::filesystem::path p = std::filesystem::path(config_.corpora_dir) / file;
            if (!std::filesystem::exists(p)) return;
            target = SearchIndex::build(load_corpus_jsonl(p.string()), *clients_.embedder);
        };
        load("quran.jsonl", quran_index_);
        load("hadith.jsonl", hadith_index_);
        load("supplications.jsonl", supplication_index_);
        load("fiqh.jsonl", fiqh_index_);
        load("general.jsonl", general_index_);
    }
}

std::vector<EvidenceDoc> Engine::gather_evidence(const SearchIndex& index, const std::string& query) const {
    std::vector<EvidenceDoc> evidence;
    if (index.empty()) return evidence;
    for (const auto& hit : index.search_hybrid(query, config_.top_k, *clients_.embedder, config_.rrf_k)) {
        const CorpusDocument* doc = index.find(hit.doc_id);
        if (doc) evidence.push_back({doc->id, doc->text, doc->reference});
    }
    return evidence;
}

// ---------------------------------------------------------------------------
// intent handlers

ToolResult Engine::handle_fiqh(const Json& args) {
    std::string query = args.at("query").get<std::string>();
    AssemblyConfig assembly;
    assembly.locale = locale_or(args.value("locale", ""), config_.locale);
    GroundedAnswer answer = assemble_grounded_answer(gather_evidence(fiqh_index_, query),
                                                     clients_.generator.get(), assembly);
    ToolResult result;
    result.content["text"] = render_grounded_answer(answer);
    Json citations = Json::array();
    for (const auto& c : answer.citations) citations.push_back({{"claim", c.claim}, {"source", c.source_ref}});
    result.content["citations"] = citations;
    return result;
}

ToolResult Engine::handle_quran(const Json& args) {
    ToolResult result;
    std::ostringstream out;
    std::vector<const CorpusDocument*> verses;

    if (args.contains("surah")) {
        int surah = args["surah"].get<int>();
        int from = args.value("ayah", 0);
        int to = args.value("ayah_to", from);
        for (const auto& doc : quran_index_.docs()) {
            int s = 0, a = 0;
            if (std::sscanf(doc.reference.c_str(), "%d:%d", &s, &a) != 2) continue;
            if (s == surah && (from == 0 || (a >= from && a <= to))) verses.push_back(&doc);
        }
    } else {
        std::string query = args.at("query").get<std::string>();
        for (const auto& hit : quran_index_.search_hybrid(query, config_.top_k, *clients_.embedder, config_.rrf_k))
            if (const CorpusDocument* doc = quran_index_.find(hit.doc_id)) verses.push_back(doc);
    }

    if (verses.empty()) {
        out << "No matching verses found in the bundled corpus.";
    } else {
        for (size_t i = 0; i < verses.size(); ++i) {
            if (i) out << "\n";
            out << kMarkerOpen << verses[i]->text << kMarkerClose << " [quran:" << verses[i]->reference << "]";
        }
    }
    result.content["text"] = out.str();
    result.content["count"] = verses.size();
    return result;
}

namespace {

// strip interrogative framing so "did the prophet say X" verifies X itself
std::string strip_hadith_cues(const std::string& query) {
    static const std::set<std::string> cues = {
        "هل",  "صح",   "يصح", "حديث", "الحديث", "درجه", "ما",  "روي", "ورد",
        "is",  "it",   "this", "a",   "the",    "authentic", "hadith", "narration",
        "did", "does", "say",  "true",
    };
    std::string kept;
    for (const auto& token : text::tokenize(text::normalize_arabic(query))) {
        if (cues.count(token)) continue;
        if (!kept.empty()) kept += ' ';
        kept += token;
    }
    return kept.empty() ? query : kept;
}

}  // namespace

ToolResult Engine::handle_hadith(const Json& args) {
    std::string query = strip_hadith_cues(args.at("query").get<std::string>());
    ToolResult result;
    if (hadith_index_.empty()) {
        result.content["text"] = "The hadith corpus is empty; nothing to verify against.";
        result.content["verified"] = false;
        return result;
    }
    auto hits = hadith_index_.search_hybrid(query, config_.top_k, *clients_.embedder, config_.rrf_k);
    if (hits.empty()) {
        result.content["text"] = "No similar narration found.";
        result.content["verified"] = false;
        return result;
    }
    const CorpusDocument* best = nullptr;
    double best_sim = -1.0;
    for (const auto& hit : hits) {
        const CorpusDocument* doc = hadith_index_.find(hit.doc_id);
        if (!doc) continue;
        double sim = verify_sequence(query, doc->text);
        if (sim > best_sim) {
            best = doc;
            best_sim = sim;
        }
    }
    bool verified = best_sim >= config_.hadith_verified_threshold;
    std::ostringstream out;
    out << (verified ? "Verified narration" : "Closest narration (below the verification cutoff)") << " ["
        << best->reference << "], similarity " << best_sim << ":\n" << best->text;
    result.content["text"] = out.str();
    result.content["verified"] = verified;
    result.content["similarity"] = best_sim;
    result.content["reference"] = best->reference;
    return result;
}

ToolResult Engine::handle_zakat(const Json& args) {
    std::string query = args.at("query").get<std::string>();
    ToolResult result;
    if (!clients_.extractor) return ToolResult::failure("no extractor client configured");
    try {
        ZakatInput input = extract_zakat_params(query, *clients_.extractor, jurisprudence_.zakat);
        ZakatResult zakat = compute_zakat(input);
        std::ostringstream out;
        for (const auto& line : zakat.explanation) out << line << "\n";
        out << "Total zakat due: " << zakat.total_due.to_decimal_string(2);
        result.content["text"] = out.str();
        result.content["total_due"] = zakat.total_due.to_decimal_string(2);
        Json lines = Json::array();
        for (const auto& line : zakat.per_class_due)
            lines.push_back({{"class", to_string(line.asset_class)}, {"due", line.due.to_decimal_string(2)}});
        result.content["per_class_due"] = lines;
    } catch (const ExtractionIncomplete& e) {
        std::ostringstream out;
        out << "To compute zakat I still need: ";
        for (size_t i = 0; i < e.missing.size(); ++i) out << (i ? ", " : "") << e.missing[i];
        out << ". Please restate the amount (and asset type if not cash).";
        result.content["text"] = out.str();
        result.content["clarification_needed"] = e.missing;
    }
    return result;
}

ToolResult Engine::handle_inheritance(const Json& args) {
    std::string query = args.at("query").get<std::string>();
    ToolResult result;
    if (!clients_.extractor) return ToolResult::failure("no extractor client configured");

    std::ostringstream prompt;
    prompt << "Extract estate parameters from the query. Reply with one JSON object "
              "{\"estate_value\": \"<number>\", \"heirs\": {\"<relation>\": <count>, ...}} using relations "
              "husband, wife, son, daughter, father, mother, paternal_grandfather, grandmother, "
              "full_brother, full_sister, son_of_son, daughter_of_son. Omit unknown fields.\n"
           << "QUERY:\n" << query << "\nEND_QUERY\n";

    std::string raw;
    try {
        raw = clients_.extractor->complete(prompt.str());
    } catch (const std::exception& e) {
        result.content["text"] = std::string("The estate extractor is unavailable (") + e.what() +
                                 "); please list the heirs explicitly.";
        result.content["clarification_needed"] = Json::array({"heirs"});
        return result;
    }

    Json parsed = Json::parse(raw, nullptr, false);
    if (parsed.is_discarded() || !parsed.is_object() || !parsed.contains("heirs") ||
        !parsed["heirs"].is_object() || parsed["heirs"].empty()) {
        result.content["text"] =
            "I could not identify the heirs. Please list them (e.g. \"a wife, two sons and a daughter\").";
        result.content["clarification_needed"] = Json::array({"heirs"});
        return result;
    }

    EstateSpec spec;
    if (parsed.contains("estate_value")) {
        try {
            spec.estate_value = Rational::parse(parsed["estate_value"].get<std::string>());
        } catch (const std::exception&) {
            spec.estate_value = Rational(1);
        }
    }
    bool fractions_only = spec.estate_value == Rational(1);
    for (const auto& [name, count] : parsed["heirs"].items()) {
        auto relation = relation_from_string(name);
        if (!relation) throw UnsupportedRelation(name);
        spec.heirs[*relation] = count.get<int>();
    }

    ShareAllocation allocation = compute_inheritance(spec, jurisprudence_.faraid);
    std::ostringstream out;
    out << "Inheritance distribution";
    if (!fractions_only) out << " of " << spec.estate_value.to_decimal_string(2);
    out << ":\n";
    for (const auto& [relation, share] : allocation.shares) {
        out << "  " << to_string(relation) << " x" << spec.heirs.at(relation) << ": " << share.to_string();
        if (!fractions_only) out << " = " << (share * spec.estate_value).to_decimal_string(2);
        out << "\n";
    }
    if (!allocation.adjustments_applied.empty()) {
        out << "Adjustments:";
        for (Adjustment a : allocation.adjustments_applied) out << " " << to_string(a);
        out << "\n";
    }
    out << "Rule trace:\n";
    for (const auto& line : allocation.trace) out << "  - " << line << "\n";
    std::string rendered = out.str();
    if (!rendered.empty() && rendered.back() == '\n') rendered.pop_back();

    result.content["text"] = rendered;
    Json shares = Json::object();
    for (const auto& [relation, share] : allocation.shares) shares[to_string(relation)] = share.to_string();
    result.content["shares"] = shares;
    return result;
}

ToolResult Engine::handle_supplication(const Json& args) {
    std::string query = args.at("query").get<std::string>();
    ToolResult result;
    auto evidence = gather_evidence(supplication_index_, query);
    if (evidence.empty()) {
        result.content["text"] = "No supplication matched in the bundled corpus.";
        return result;
    }
    std::ostringstream out;
    for (size_t i = 0; i < evidence.size() && i < 3; ++i) {
        if (i) out << "\n\n";
        out << evidence[i].text << "\n[" << evidence[i].reference << "]";
    }
    result.content["text"] = out.str();
    return result;
}

ToolResult Engine::handle_calendar(const Json& args) {
    ToolResult result;
    std::string query = args.value("query", "");
    GregorianDate today = args.contains("today") ? parse_iso_date(args["today"].get<std::string>())
                                                 : today_utc();

    // event lookup first: "when is <event>" — an event matches when one of
    // its name aliases appears inside the query
    if (!query.empty() && !events_.all().empty()) {
        std::string norm_query = text::normalize_arabic(query);
        std::vector<CalendarEvent> named;
        for (const auto& e : events_.all()) {
            // "Eid al-Fitr (عيد الفطر)" carries an English and an Arabic alias
            std::string name = e.name;
            std::vector<std::string> aliases;
            size_t paren = name.find('(');
            if (paren != std::string::npos) {
                aliases.push_back(text::trim(name.substr(0, paren)));
                size_t close = name.find(')', paren);
                if (close != std::string::npos)
                    aliases.push_back(name.substr(paren + 1, close - paren - 1));
            } else {
                aliases.push_back(name);
            }
            for (const auto& alias : aliases) {
                if (!alias.empty() &&
                    norm_query.find(text::normalize_arabic(alias)) != std::string::npos) {
                    named.push_back(e);
                    break;
                }
            }
        }
        if (!named.empty()) {
            const CalendarEvent& event = named.front();
            HijriDate today_h = gregorian_to_hijri(today);
            HijriDate occurrence{today_h.year, event.month, event.day};
            if (std::pair(event.month, event.day) < std::pair(today_h.month, today_h.day))
                occurrence.year += 1;
            if (occurrence.day > hijri_month_length(occurrence.year, occurrence.month))
                occurrence.day = hijri_month_length(occurrence.year, occurrence.month);
            GregorianDate g = hijri_to_gregorian(occurrence);
            std::ostringstream out;
            out << event.name << ": " << format_hijri(occurrence) << " = " << format_gregorian(g);
            result.content["text"] = out.str();
            result.content["hijri"] = format_hijri(occurrence);
            result.content["gregorian"] = format_gregorian(g);
            return result;
        }
    }

    // explicit date in the arguments or the query, else today
    std::optional<std::string> date_text;
    if (args.contains("date")) date_text = args["date"].get<std::string>();
    if (!date_text) {
        // look for date-shaped fragments like 2024-03-15 or 15/3/2024
        std::istringstream words(text::normalize_arabic(query));
        std::string w;
        while (words >> w) {
            std::string canon = normalize_string_value(w);
            if (canon.size() == 10 && canon[4] == '-' && canon[7] == '-') {
                date_text = canon;
                break;
            }
        }
    }

    std::ostringstream out;
    if (date_text) {
        std::string canon = normalize_string_value(*date_text);
        GregorianDate g = parse_iso_date(canon);
        // years below the tabular window read as Hijri input
        if (g.year < kMinSupportedGregorianYear) {
            HijriDate h{g.year, g.month, g.day};
            GregorianDate converted = hijri_to_gregorian(h);
            out << format_hijri(h) << " = " << format_gregorian(converted);
            result.content["gregorian"] = format_gregorian(converted);
            result.content["hijri"] = format_hijri(h);
        } else {
            HijriDate h = gregorian_to_hijri(g);
            out << format_gregorian(g) << " = " << format_hijri(h);
            result.content["gregorian"] = format_gregorian(g);
            result.content["hijri"] = format_hijri(h);
            auto events = events_.on(h.month, h.day);
            if (!events.empty()) {
                out << " (";
                for (size_t i = 0; i < events.size(); ++i) out << (i ? ", " : "") << events[i].name;
                out << ")";
            }
        }
    } else {
        HijriDate h = gregorian_to_hijri(today);
        out << "Today " << format_gregorian(today) << " = " << format_hijri(h);
        result.content["gregorian"] = format_gregorian(today);
        result.content["hijri"] = format_hijri(h);
    }
    result.content["text"] = out.str();
    return result;
}

ToolResult Engine::handle_prayer(const Json& args) {
    ToolResult result;
    if (!args.contains("latitude") || !args.contains("longitude")) {
        result.content["text"] =
            "Please provide the location (latitude and longitude) for prayer times and qibla.";
        result.content["clarification_needed"] = Json::array({"latitude", "longitude"});
        return result;
    }
    double lat = args["latitude"].get<double>();
    double lon = args["longitude"].get<double>();
    GregorianDate date = args.contains("date") ? parse_iso_date(args["date"].get<std::string>()) : today_utc();
    const MethodParams& method =
        args.contains("method") ? presets_.get(args["method"].get<std::string>()) : presets_.default_method();
    double utc_offset = args.value("utc_offset_hours", 0.0);

    PrayerTimes times = prayer_times(lat, lon, date, method, utc_offset);
    auto fmt = [](const std::optional<double>& t) {
        return t ? format_clock(*t) : std::string("undefined");
    };
    std::ostringstream out;
    out << "Prayer times for (" << lat << ", " << lon << ") on " << format_gregorian(date) << " [method "
        << method.name << ", UTC" << (utc_offset >= 0 ? "+" : "") << utc_offset << "]:\n"
        << "  fajr " << fmt(times.fajr) << ", sunrise " << fmt(times.sunrise) << ", dhuhr "
        << fmt(times.dhuhr) << ", asr " << fmt(times.asr) << ", maghrib " << fmt(times.maghrib) << ", isha "
        << fmt(times.isha);
    Json fields = Json::object();
    auto put = [&](const char* name, const std::optional<double>& t) {
        if (t)
            fields[name] = format_clock(*t);
        else
            fields[name] = nullptr;
    };
    put("fajr", times.fajr);
    put("sunrise", times.sunrise);
    put("dhuhr", times.dhuhr);
    put("asr", times.asr);
    put("maghrib", times.maghrib);
    put("isha", times.isha);

    try {
        double bearing = qibla_bearing(lat, lon, presets_.kaaba_latitude(), presets_.kaaba_longitude());
        out << "\nQibla bearing: " << bearing << " degrees from true north";
        result.content["qibla_bearing"] = bearing;
    } catch (const DegenerateLocation&) {
        out << "\nQibla bearing: undefined at this location";
    }
    result.content["text"] = out.str();
    result.content["times"] = fields;
    return result;
}

ToolResult Engine::handle_general(const Json& args) {
    std::string query = args.at("query").get<std::string>();
    AssemblyConfig assembly;
    assembly.locale = locale_or(args.value("locale", ""), config_.locale);
    GroundedAnswer answer = assemble_grounded_answer(gather_evidence(general_index_, query),
                                                     clients_.generator.get(), assembly);
    ToolResult result;
    result.content["text"] = render_grounded_answer(answer);
    return result;
}

void Engine::register_handlers() {
    auto query_param = [](bool required = true) {
        return std::vector<ToolParam>{{"query", "string", required, "user query"},
                                      {"locale", "string", false, "answer locale"}};
    };

    registry_.register_tool({"fiqh_reasoning", "Jurisprudential reasoning grounded in retrieved fiqh sources",
                             query_param(), "sectioned ruling with citations"},
                            [this](const Json& args) { return handle_fiqh(args); });
    registry_.register_tool(
        {"quran_retrieval",
         "Quran verse retrieval by text or by structured reference filters",
         {{"query", "string", false, "search text"},
          {"surah", "integer", false, "surah number filter"},
          {"ayah", "integer", false, "first ayah"},
          {"ayah_to", "integer", false, "last ayah"}},
         "verses wrapped in canonical markers"},
        [this](const Json& args) { return handle_quran(args); });
    registry_.register_tool({"hadith_verification", "Hybrid search plus sequence verification over hadith",
                             query_param(), "closest narration with a verification flag"},
                            [this](const Json& args) { return handle_hadith(args); });
    registry_.register_tool({"zakat_calculation", "Rule-based zakat obligations over extracted parameters",
                             query_param(), "per-class dues with explanations"},
                            [this](const Json& args) { return handle_zakat(args); });
    registry_.register_tool({"inheritance_computation", "Exact fixed-share inheritance distribution",
                             query_param(), "per-relation shares with a rule trace"},
                            [this](const Json& args) { return handle_inheritance(args); });
    registry_.register_tool({"supplication_lookup", "Verbatim supplication retrieval with references",
                             query_param(), "matching supplications"},
                            [this](const Json& args) { return handle_supplication(args); });
    registry_.register_tool(
        {"calendar_query",
         "Hijri/Gregorian conversion and event lookup",
         {{"query", "string", false, "free-form request"},
          {"date", "string", false, "YYYY-MM-DD"},
          {"today", "string", false, "reference day, YYYY-MM-DD"}},
         "converted dates and events"},
        [this](const Json& args) { return handle_calendar(args); });
    registry_.register_tool(
        {"prayer_times",
         "Location-aware prayer times and qibla bearing",
         {{"query", "string", false, "free-form request"},
          {"latitude", "number", false, "degrees north"},
          {"longitude", "number", false, "degrees east"},
          {"date", "string", false, "YYYY-MM-DD"},
          {"method", "string", false, "calculation preset"},
          {"utc_offset_hours", "number", false, "fixed clock offset"}},
         "six daily times plus qibla"},
        [this](const Json& args) { return handle_prayer(args); });
    registry_.register_tool({"general_knowledge", "Grounded answers over the general corpus", query_param(),
                             "sectioned answer with citations"},
                            [this](const Json& args) { return handle_general(args); });

    // platform tool stubs: declared surfaces without local backends
    auto stub = [](const std::string& name) {
        return [name](const Json&) {
            ToolResult r;
            r.content["text"] = "Tool '" + name + "' is not backed in this deployment.";
            r.content["stub"] = true;
            return r;
        };
    };
    registry_.register_tool({"translate",
                             "Translate text between Arabic and English",
                             {{"text", "string", true, "text to translate"},
                              {"target_language", "string", false, "ar or en"}},
                             "translated text"},
                            stub("translate"));
    registry_.register_tool(
        {"generate_image", "Generate an image from a prompt", {{"prompt", "string", true, "description"}},
         "image reference"},
        stub("generate_image"));
    registry_.register_tool(
        {"synthesize_speech", "Text to speech", {{"text", "string", true, "text to speak"}}, "audio reference"},
        stub("synthesize_speech"));
    registry_.register_tool(
        {"transcribe_speech", "Speech to text", {{"audio_ref", "string", true, "audio reference"}},
         "transcript"},
        stub("transcribe_speech"));
    registry_.register_tool(
        {"recency_search", "Search recent events and news", {{"query", "string", true, "search text"}},
         "recent results"},
        stub("recency_search"));
}

Json Engine::handler_args(Intent intent, const std::string& query, const AnswerOptions& options) const {
    Json args = Json::object();
    args["query"] = query;
    std::string locale = locale_or(options.locale, config_.locale);
    if (intent == Intent::fiqh_reasoning || intent == Intent::general_knowledge) args["locale"] = locale;
    if (intent == Intent::prayer_times) {
        if (options.latitude) args["latitude"] = *options.latitude;
        if (options.longitude) args["longitude"] = *options.longitude;
        if (options.date) args["date"] = *options.date;
        if (options.method) args["method"] = *options.method;
        if (options.utc_offset_hours != 0.0) args["utc_offset_hours"] = options.utc_offset_hours;
    }
    if (intent == Intent::calendar_query) {
        if (options.date) args["date"] = *options.date;
        if (options.today) args["today"] = *options.today;
    }
    return args;
}

std::vector<ConversationTurn> Engine::history_snapshot(const std::string& conversation_id) const {
    if (conversation_id.empty()) return {};
    std::lock_guard lock(conversations_mu_);
    auto it = conversations_.find(conversation_id);
    return it == conversations_.end() ? std::vector<ConversationTurn>{} : it->second;
}

void Engine::record_turns(const std::string& conversation_id, const std::string& user_text,
                          const std::string& assistant_text) {
    if (conversation_id.empty()) return;
    std::lock_guard lock(conversations_mu_);
    auto& turns = conversations_[conversation_id];
    int index = turns.empty() ? 0 : turns.back().index + 1;
    turns.push_back({Role::user, user_text, index});
    turns.push_back({Role::assistant, assistant_text, index + 1});
}

void Engine::reset_conversation(const std::string& conversation_id) {
    std::lock_guard lock(conversations_mu_);
    conversations_.erase(conversation_id);
}

AnswerResponse Engine::answer(const AnswerRequest& request) {
    if (text::trim(request.query).empty()) throw EmptyQuery();

    AnswerResponse response;
    std::string locale = locale_or(request.options.locale, config_.locale);
    std::vector<ConversationTurn> history = history_snapshot(request.conversation_id);

    // input interception strictly precedes every model call
    response.stages.push_back("screen_input");
    ScreenResult screen = screen_input(request.query, *blocklist_, clients_.input_screen.get(),
                                       config_.input_semantic_threshold);
    if (!screen.allowed) {
        response.blocked = true;
        response.moderation = screen.verdict;
        response.text = substitute_safe_response(screen.verdict, locale, templates_);
        return response;
    }

    response.stages.push_back("rephrase");
    response.rephrase = rephrase(request.query, history, clients_.rephraser.get());
    if (response.rephrase.degraded) response.warnings.push_back(response.rephrase.warning);
    const std::string& query = response.rephrase.text;

    response.stages.push_back("classify");
    IntentDecision decision = router_->classify(query, history);
    response.intent = decision;

    response.stages.push_back("route");
    const ToolSpec& tool = route(decision, registry_);

    std::string answer_text;
    bool use_agent = request.options.use_agent || !decision.sub_questions.empty();
    if (use_agent && clients_.generator) {
        response.stages.push_back("agent_loop");
        LoopConfig loop;
        loop.max_iterations = request.options.max_iterations.value_or(config_.agent_max_iterations);
        loop.locale = locale;
        std::vector<ConversationTurn> convo = history;
        convo.push_back({Role::user, query, convo.empty() ? 0 : convo.back().index + 1});
        LoopResult loop_result = run_loop(convo, registry_, *clients_.generator, loop);
        response.trace_id = loop_result.trace.id;
        if (loop_result.status == LoopStatus::completed || loop_result.status == LoopStatus::truncated) {
            answer_text = loop_result.answer;
            if (loop_result.status == LoopStatus::truncated)
                response.warnings.push_back("agent loop hit the iteration budget; fallback answer used");
        } else {
            response.error = StageError{"agent_loop", to_string(loop_result.status),
                                        "the tool-calling loop did not produce an answer"};
            response.moderation.stage = "agent_loop";
            return response;
        }
    } else {
        response.stages.push_back("handler:" + tool.name);
        ToolResult result = registry_.invoke(tool.name, handler_args(decision.label, query, request.options));
        if (!result.ok) {
            response.error = StageError{"handler:" + tool.name, "ToolExecutionFailure", result.error};
            return response;
        }
        answer_text = result.content.value("text", result.content.dump());
    }

    response.stages.push_back("quran_guard");
    if (!quran_index_.empty()) {
        auto [corrected, report] = validate_and_replace(answer_text, quran_index_, *clients_.embedder,
                                                        config_.quran_guard_threshold);
        answer_text = corrected;
        response.validation = std::move(report);
    } else {
        response.warnings.push_back("quran corpus not loaded; scripture guard skipped");
    }

    response.stages.push_back("screen_output");
    if (clients_.output_moderation) {
        ModerationVerdict verdict =
            screen_output(answer_text, *clients_.output_moderation, config_.output_thresholds);
        response.moderation = verdict;
        if (verdict.decision != Decision::allow) {
            response.blocked = true;
            response.text = substitute_safe_response(verdict, locale, templates_);
            return response;
        }
    } else {
        response.moderation.stage = "output";
        response.moderation.decision = Decision::allow;
        response.moderation.reason = "no moderation client configured";
    }

    response.text = answer_text;
    record_turns(request.conversation_id, request.query, response.text);
    return response;
}

Json Engine::answer_json(const AnswerRequest& request) {
    return to_json(answer(request));
}

std::map<std::string, std::size_t> Engine::corpus_sizes() const {
    return {{"quran", quran_index_.size()},
            {"hadith", hadith_index_.size()},
            {"supplication", supplication_index_.size()},
            {"fiqh", fiqh_index_.size()},
            {"general", general_index_.size()}};
}

}  // namespace masar
