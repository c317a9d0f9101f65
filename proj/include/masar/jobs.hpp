#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <functional>
#include <iosfwd>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "masar/errors.hpp"

namespace masar {

enum class JobState { queued, processing, completed, failed };

const char* to_string(JobState s);

struct Job {
    std::string id;
    JobState state = JobState::queued;
    std::int64_t submitted_at_ms = 0;
    std::int64_t updated_at_ms = 0;
    std::optional<nlohmann::json> result;  // present iff completed
    std::optional<std::string> error;      // present iff failed
};

nlohmann::json job_to_json(const Job& job);

// Multi-producer bounded queue with a worker pool. States advance strictly
// queued -> processing -> {completed | failed}; an observer polling one id
// can never see an earlier state after a later one. Transitions are appended
// to a single-file JSONL journal (when configured) before they become
// visible, and the journal is replayed on startup.
class JobManager {
  public:
    using Work = std::function<nlohmann::json(const nlohmann::json& payload)>;

    struct Options {
        int workers = 2;
        std::size_t queue_capacity = 64;
        std::chrono::milliseconds retention{std::chrono::hours(24)};
        std::string journal_path;  // empty = in-memory only
    };

    JobManager(Work work, Options options);
    ~JobManager();

    JobManager(const JobManager&) = delete;
    JobManager& operator=(const JobManager&) = delete;

    // Returns immediately with the new id; the job is queued. Throws
    // QueueFull when the bounded queue is at capacity.
    std::string submit(nlohmann::json payload);

    // Snapshot of the current state. Throws UnknownJobId; throws
    // RetentionExpired for terminal jobs older than the retention window.
    Job get(const std::string& id) const;

    std::size_t pending() const;

    // Drains the queue and joins the workers.
    void shutdown();

  private:
    void worker_main();
    void transition(const std::string& id, JobState state, std::optional<nlohmann::json> result,
                    std::optional<std::string> error);
    void journal_append(const Job& job);
    void replay_journal();

    static std::int64_t now_ms();

    Work work_;
    Options options_;

    mutable std::mutex mu_;
    std::condition_variable cv_;
    std::map<std::string, Job> jobs_;
    std::map<std::string, nlohmann::json> payloads_;
    std::deque<std::string> queue_;
    bool stopping_ = false;
    std::uint64_t next_id_ = 1;
    std::vector<std::thread> workers_;
    std::unique_ptr<std::ofstream> journal_;
};

}  // namespace masar
