#include "masar/quran_guard.hpp"

#include <algorithm>
#include <cctype>

#include "masar/text.hpp"

namespace masar {

const char* to_string(SpanOutcome o) {
    switch (o) {
        case SpanOutcome::verified_exact: return "verified_exact";
        case SpanOutcome::corrected: return "corrected";
        case SpanOutcome::unverifiable: return "unverifiable";
    }
    return "unverifiable";
}

namespace {

struct Zone {
    size_t begin, end;
};

bool inside(const std::vector<Zone>& zones, size_t pos) {
    for (const auto& z : zones)
        if (pos >= z.begin && pos < z.end) return true;
    return false;
}

bool overlaps(const std::vector<DetectedSpan>& spans, size_t begin, size_t end) {
    for (const auto& s : spans)
        if (begin < s.region_end && s.region_start < end) return true;
    return false;
}

// Consumes " [quran:<digits>:<digits>]" at pos, returning the end offset.
size_t consume_citation(const std::string& text, size_t pos) {
    const std::string prefix = " [quran:";
    if (text.compare(pos, prefix.size(), prefix) != 0) return pos;
    size_t p = pos + prefix.size();
    size_t digits = 0;
    while (p < text.size() && std::isdigit(static_cast<unsigned char>(text[p]))) ++p, ++digits;
    if (digits == 0 || p >= text.size() || text[p] != ':') return pos;
    ++p;
    digits = 0;
    while (p < text.size() && std::isdigit(static_cast<unsigned char>(text[p]))) ++p, ++digits;
    if (digits == 0 || p >= text.size() || text[p] != ']') return pos;
    return p + 1;
}

// Quranic opening patterns, pre-normalized. A quoted region starting with one
// of these is treated as a candidate verse.
const std::vector<std::string>& opening_patterns() {
    static const std::vector<std::string> patterns = {
        "قل",      "يا ايها",  "بسم الله", "الحمد لله", "انا",      "تبت",
        "ويل",     "والعصر",  "والضحي",   "والليل",    "والشمس",   "والتين",
        "والعاديات", "سبح",    "اقرا",     "لم يكن",    "لايلاف",   "ارايت",
        "الم تر",  "اذا جاء", "اذا زلزلت", "اذا الشمس", "الهاكم",   "عم يتساءلون",
    };
    return patterns;
}

// Citation cues that mark the following quote as scripture.
const std::vector<std::string>& citation_cues() {
    static const std::vector<std::string> cues = {
        "قال تعالي", "قوله تعالي", "قال الله", "يقول الله", "في القران",
    };
    return cues;
}

struct QuotePair {
    const char* open;
    const char* close;
};

const std::vector<QuotePair>& quote_pairs() {
    static const std::vector<QuotePair> pairs = {
        {"«", "»"},  // « »
        {"“", "”"},  // “ ”
        {"\"", "\""},
    };
    return pairs;
}

bool starts_like_verse(const std::string& inner) {
    std::string norm = text::normalize_arabic(text::trim(inner));
    for (const auto& p : opening_patterns())
        if (norm.rfind(p, 0) == 0) return true;
    return false;
}

bool preceded_by_cue(const std::string& full_text, size_t quote_start) {
    size_t window_begin = quote_start > 48 ? quote_start - 48 : 0;
    std::string window = text::normalize_arabic(full_text.substr(window_begin, quote_start - window_begin));
    for (const auto& cue : citation_cues())
        if (window.find(cue) != std::string::npos) return true;
    return false;
}

}  // namespace

DetectResult detect_spans(const std::string& input) {
    DetectResult result;
    const std::string marker_open = kMarkerOpen;
    const std::string marker_close = kMarkerClose;

    // 1. warning constructs from a previous pass are opaque
    std::vector<Zone> skip;
    size_t pos = 0;
    while ((pos = input.find(kUnverifiedOpen, pos)) != std::string::npos) {
        size_t close = input.find(kUnverifiedClose, pos);
        if (close == std::string::npos) break;
        skip.push_back({pos, close + std::string(kUnverifiedClose).size()});
        pos = close;
    }

    // 2. marker-delimited spans
    pos = 0;
    while ((pos = input.find(marker_open, pos)) != std::string::npos) {
        if (inside(skip, pos)) {
            pos += marker_open.size();
            continue;
        }
        size_t close = input.find(marker_close, pos + marker_open.size());
        if (close == std::string::npos) {
            result.anomalies.push_back("unbalanced marker: opening at byte " + std::to_string(pos) +
                                       " has no closing marker");
            pos += marker_open.size();
            continue;
        }
        // nested/stray opener before the close is reported, the outer pair wins
        size_t inner_open = input.find(marker_open, pos + marker_open.size());
        if (inner_open != std::string::npos && inner_open < close)
            result.anomalies.push_back("nested opening marker at byte " + std::to_string(inner_open));

        DetectedSpan d;
        d.span.start = pos + marker_open.size();
        d.span.end = close;
        d.span.raw = input.substr(d.span.start, d.span.end - d.span.start);
        d.span.marker_delimited = true;
        d.region_start = pos;
        d.region_end = consume_citation(input, close + marker_close.size());
        result.spans.push_back(std::move(d));
        pos = result.spans.back().region_end;
    }

    // stray closing markers with no opener
    pos = 0;
    while ((pos = input.find(marker_close, pos)) != std::string::npos) {
        bool claimed = false;
        for (const auto& s : result.spans)
            if (pos >= s.region_start && pos < s.region_end) claimed = true;
        if (!claimed && !inside(skip, pos))
            result.anomalies.push_back("unbalanced marker: closing at byte " + std::to_string(pos) +
                                       " has no opening marker");
        pos += marker_close.size();
    }

    // 3. heuristic spans: quoted text that opens like a verse or follows a cue
    for (const auto& qp : quote_pairs()) {
        const std::string open = qp.open;
        const std::string close = qp.close;
        pos = 0;
        while ((pos = input.find(open, pos)) != std::string::npos) {
            if (inside(skip, pos)) {
                pos += open.size();
                continue;
            }
            size_t close_pos = input.find(close, pos + open.size());
            if (close_pos == std::string::npos) break;
            size_t inner_start = pos + open.size();
            std::string inner = input.substr(inner_start, close_pos - inner_start);
            if (!inner.empty() && !overlaps(result.spans, pos, close_pos + close.size()) &&
                (starts_like_verse(inner) || preceded_by_cue(input, pos))) {
                DetectedSpan d;
                d.span.start = inner_start;
                d.span.end = close_pos;
                d.span.raw = inner;
                d.span.marker_delimited = false;
                d.region_start = inner_start;  // quotes themselves stay in place
                d.region_end = close_pos;
                result.spans.push_back(std::move(d));
            }
            pos = close_pos + close.size();
        }
    }

    std::sort(result.spans.begin(), result.spans.end(),
              [](const DetectedSpan& a, const DetectedSpan& b) { return a.region_start < b.region_start; });
    return result;
}

std::pair<const CorpusDocument*, double> match_verse(const VerseSpan& span, const SearchIndex& quran_index,
                                                     Embedder& embedder) {
    if (quran_index.empty()) throw EmptyCorpus();

    auto shortlist = quran_index.search_hybrid(span.raw, std::min<size_t>(10, quran_index.size()), embedder);
    const CorpusDocument* best = nullptr;
    double best_score = -1.0;
    for (const auto& hit : shortlist) {
        const CorpusDocument* doc = quran_index.find(hit.doc_id);
        if (!doc) continue;
        double score = verify_sequence(span.raw, doc->text);
        if (score > best_score || (score == best_score && best && doc->id < best->id)) {
            best = doc;
            best_score = score;
        }
    }
    if (!best) {
        // pathological query (e.g. no shared tokens at all): fall back to scan
        for (const auto& doc : quran_index.docs()) {
            double score = verify_sequence(span.raw, doc.text);
            if (score > best_score) {
                best = &doc;
                best_score = score;
            }
        }
    }
    return {best, best_score};
}

std::pair<std::string, ValidationReport> validate_and_replace(const std::string& input,
                                                              const SearchIndex& quran_index,
                                                              Embedder& embedder, double threshold) {
    DetectResult detected = detect_spans(input);
    ValidationReport report;
    report.anomalies = detected.anomalies;

    std::string output;
    output.reserve(input.size());
    size_t cursor = 0;

    for (const auto& d : detected.spans) {
        output.append(input, cursor, d.region_start - cursor);

        SpanReport entry;
        entry.span = d.span;

        const CorpusDocument* best = nullptr;
        double similarity = 0.0;
        try {
            std::tie(best, similarity) = match_verse(d.span, quran_index, embedder);
        } catch (const EmptyText&) {
            best = nullptr;
            similarity = 0.0;
        }

        entry.similarity = similarity;
        if (best != nullptr && similarity >= threshold) {
            bool exact = similarity == 1.0;
            entry.outcome = exact ? SpanOutcome::verified_exact : SpanOutcome::corrected;
            entry.matched_reference = best->reference;
            // surah:ayah citation tag; references in the quran corpus are "s:a"
            output += kMarkerOpen;
            output += best->text;
            output += kMarkerClose;
            output += " [quran:" + best->reference + "]";
        } else {
            entry.outcome = SpanOutcome::unverifiable;
            output += kUnverifiedOpen;
            output.append(input, d.region_start, d.region_end - d.region_start);
            output += kUnverifiedClose;
        }
        report.spans.push_back(std::move(entry));
        cursor = d.region_end;
    }
    output.append(input, cursor, input.size() - cursor);
    return {output, report};
}

}  // namespace masar
