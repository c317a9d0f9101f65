#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "masar/retrieval.hpp"

namespace masar {

// Wire format (normative, bit-exact):
//   marker construct      ⟪<verse text>⟫            (U+27EA / U+27EB)
//   verified construct    ⟪<canonical text>⟫ [quran:<surah>:<ayah>]
//   warning construct     [quran:unverified]<original construct>[/quran:unverified]
// The citation tag directly after a closing marker is part of the construct;
// content inside a warning construct is never re-scanned. Both rules make
// validate_and_replace idempotent.
inline constexpr const char* kMarkerOpen = "⟪";
inline constexpr const char* kMarkerClose = "⟫";
inline constexpr const char* kUnverifiedOpen = "[quran:unverified]";
inline constexpr const char* kUnverifiedClose = "[/quran:unverified]";

struct VerseSpan {
    size_t start = 0;  // byte offsets into the source text; raw == text[start, end)
    size_t end = 0;
    std::string raw;
    bool marker_delimited = false;
};

struct DetectedSpan {
    VerseSpan span;
    // full rewrite region: markers plus any attached citation for marker
    // spans; the inner quoted text for heuristic spans
    size_t region_start = 0;
    size_t region_end = 0;
};

struct DetectResult {
    std::vector<DetectedSpan> spans;      // left to right, non-overlapping
    std::vector<std::string> anomalies;   // e.g. unbalanced markers, per occurrence
};

DetectResult detect_spans(const std::string& text);

enum class SpanOutcome { verified_exact, corrected, unverifiable };

const char* to_string(SpanOutcome o);

struct SpanReport {
    VerseSpan span;
    SpanOutcome outcome = SpanOutcome::unverifiable;
    std::optional<std::string> matched_reference;
    double similarity = 0.0;
};

struct ValidationReport {
    std::vector<SpanReport> spans;  // one entry per detected span
    std::vector<std::string> anomalies;
};

// Best canonical candidate for a span: shortlist by hybrid search, score by
// verify_sequence, ties broken by ascending document id. Throws EmptyCorpus.
std::pair<const CorpusDocument*, double> match_verse(const VerseSpan& span, const SearchIndex& quran_index,
                                                     Embedder& embedder);

// Replaces spans at or above the threshold with the canonical verse bytes
// plus its citation; wraps the rest in the warning construct. Text outside
// rewrite regions is byte-identical to the input.
std::pair<std::string, ValidationReport> validate_and_replace(const std::string& text,
                                                              const SearchIndex& quran_index,
                                                              Embedder& embedder, double threshold = 0.8);

}  // namespace masar
