#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace masar {

// Base for every error the engine raises intentionally. Callers that only
// care about "did the pipeline fail" can catch this one type.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct InvalidInput : Error {
    using Error::Error;
};

// -- routing --------------------------------------------------------------
struct EmptyQuery : InvalidInput {
    EmptyQuery() : InvalidInput("query is blank after trimming") {}
};
struct MissingHandler : Error {
    explicit MissingHandler(const std::string& label)
        : Error("no handler registered for intent '" + label + "'") {}
};

// -- calculators ----------------------------------------------------------
struct NoHeirs : InvalidInput {
    NoHeirs() : InvalidInput("estate has no heirs") {}
};
struct UnsupportedRelation : InvalidInput {
    explicit UnsupportedRelation(const std::string& rel)
        : InvalidInput("unsupported heir relation '" + rel + "'") {}
};
struct ExtractionIncomplete : Error {
    std::vector<std::string> missing;
    explicit ExtractionIncomplete(std::vector<std::string> fields)
        : Error("extraction incomplete; missing: " + join(fields)), missing(std::move(fields)) {}

  private:
    static std::string join(const std::vector<std::string>& v) {
        std::string out;
        for (const auto& s : v) {
            if (!out.empty()) out += ", ";
            out += s;
        }
        return out;
    }
};

// -- almanac --------------------------------------------------------------
struct OutOfRange : InvalidInput {
    using InvalidInput::InvalidInput;
};
struct InvalidHijriDate : InvalidInput {
    using InvalidInput::InvalidInput;
};
struct DegenerateLocation : InvalidInput {
    using InvalidInput::InvalidInput;
};

// -- retrieval ------------------------------------------------------------
struct DuplicateId : InvalidInput {
    explicit DuplicateId(const std::string& id) : InvalidInput("duplicate document id '" + id + "'") {}
};
struct EmbedderDimensionMismatch : Error {
    using Error::Error;
};
struct EmptyText : InvalidInput {
    EmptyText() : InvalidInput("text is empty after normalization") {}
};
struct EmptyCorpus : Error {
    EmptyCorpus() : Error("corpus index is empty") {}
};

// -- agent ----------------------------------------------------------------
struct DuplicateToolName : InvalidInput {
    explicit DuplicateToolName(const std::string& name)
        : InvalidInput("tool '" + name + "' already registered") {}
};
struct UnknownTool : Error {
    explicit UnknownTool(const std::string& name) : Error("unknown tool '" + name + "'") {}
};

// -- eval -----------------------------------------------------------------
struct EmptyDataset : InvalidInput {
    EmptyDataset() : InvalidInput("dataset is empty") {}
};
struct NoPositiveCases : Error {
    NoPositiveCases() : Error("no records with a gold tool call") {}
};
struct DegenerateAgreement : Error {
    DegenerateAgreement() : Error("expected agreement is 1 (all mass in one category)") {}
};
struct LengthMismatch : InvalidInput {
    LengthMismatch() : InvalidInput("label lists have different lengths") {}
};

// -- service --------------------------------------------------------------
struct UnknownJobId : Error {
    explicit UnknownJobId(const std::string& id) : Error("unknown job id '" + id + "'") {}
};
struct RetentionExpired : Error {
    explicit RetentionExpired(const std::string& id)
        : Error("job '" + id + "' expired from the retention window") {}
};
struct QueueFull : Error {
    QueueFull() : Error("job queue is full; retry later") {}
};

// Numeric guard for the exact-arithmetic path.
struct ArithmeticOverflow : Error {
    ArithmeticOverflow() : Error("rational arithmetic overflow") {}
};

}  // namespace masar
