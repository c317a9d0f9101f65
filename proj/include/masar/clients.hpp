#pragma once

#include <string>
#include <vector>

#include "masar/errors.hpp"

namespace masar {

struct ClientUnavailable : Error {
    using Error::Error;
};

// Text-in/text-out completion client. Backs the rephraser, the intent
// classifier, parameter extractors, the agent loop and answer assembly.
// Implementations that are not safe for concurrent calls must return false
// from concurrent_safe(); callers then serialize.
class TextClient {
  public:
    virtual ~TextClient() = default;
    virtual std::string complete(const std::string& prompt) = 0;
    virtual bool concurrent_safe() const { return true; }
};

// Batched text-to-vector client with a fixed declared dimension.
class Embedder {
  public:
    virtual ~Embedder() = default;
    virtual size_t dimension() const = 0;
    virtual std::vector<std::vector<float>> embed(const std::vector<std::string>& texts) = 0;
};

struct ModerationScores {
    double harmlessness = 5.0;        // 1..5
    double cultural_alignment = 5.0;  // 1..5
};

// Two-dimension moderation scorer, continuous 1..5 on each axis.
class ModerationClient {
  public:
    virtual ~ModerationClient() = default;
    virtual ModerationScores score(const std::string& text) = 0;
};

}  // namespace masar
