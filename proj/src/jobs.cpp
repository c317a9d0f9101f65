#include "masar/jobs.hpp"

#include <fstream>

#include "masar/text.hpp"

namespace masar {

const char* to_string(JobState s) {
    switch (s) {
        case JobState::queued: return "queued";
        case JobState::processing: return "processing";
        case JobState::completed: return "completed";
        case JobState::failed: return "failed";
    }
    return "queued";
}

namespace {

std::optional<JobState> job_state_from_string(const std::string& s) {
    for (JobState state : {JobState::queued, JobState::processing, JobState::completed, JobState::failed})
        if (s == to_string(state)) return state;
    return std::nullopt;
}

}  // namespace

nlohmann::json job_to_json(const Job& job) {
    nlohmann::json j = {
        {"id", job.id},
        {"state", to_string(job.state)},
        {"submitted_at_ms", job.submitted_at_ms},
        {"updated_at_ms", job.updated_at_ms},
    };
    if (job.result) j["result"] = *job.result;
    if (job.error) j["error"] = *job.error;
    return j;
}

std::int64_t JobManager::now_ms() {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::system_clock::now().time_since_epoch())
        .count();
}

JobManager::JobManager(Work work, Options options) : work_(std::move(work)), options_(std::move(options)) {
    if (options_.workers < 1) throw InvalidInput("JobManager needs at least one worker");
    if (!options_.journal_path.empty()) {
        replay_journal();
        journal_ = std::make_unique<std::ofstream>(options_.journal_path, std::ios::app | std::ios::binary);
        if (!*journal_) throw InvalidInput("cannot open job journal: " + options_.journal_path);
    }
    workers_.reserve(options_.workers);
    for (int i = 0; i < options_.workers; ++i) workers_.emplace_back([this] { worker_main(); });
}

JobManager::~JobManager() {
    shutdown();
}

void JobManager::replay_journal() {
    std::ifstream in(options_.journal_path, std::ios::binary);
    if (!in) return;  // first run
    std::string line;
    while (std::getline(in, line)) {
        if (text::trim(line).empty()) continue;
        nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object()) continue;  // torn tail write
        Job job;
        job.id = j.value("id", "");
        auto state = job_state_from_string(j.value("state", ""));
        if (job.id.empty() || !state) continue;
        job.state = *state;
        job.submitted_at_ms = j.value("submitted_at_ms", std::int64_t{0});
        job.updated_at_ms = j.value("updated_at_ms", std::int64_t{0});
        if (j.contains("result")) job.result = j["result"];
        if (j.contains("error")) job.error = j["error"].get<std::string>();
        jobs_[job.id] = std::move(job);
    }
    // anything that never reached a terminal state before the restart is failed
    for (auto& [id, job] : jobs_) {
        if (job.state == JobState::queued || job.state == JobState::processing) {
            job.state = JobState::failed;
            job.error = "interrupted by restart";
            job.updated_at_ms = now_ms();
        }
    }
}

void JobManager::journal_append(const Job& job) {
    if (!journal_) return;
    *journal_ << job_to_json(job).dump() << "\n";
    journal_->flush();
}

std::string JobManager::submit(nlohmann::json payload) {
    std::lock_guard lock(mu_);
    if (queue_.size() >= options_.queue_capacity) throw QueueFull();

    Job job;
    job.id = "job-" + std::to_string(next_id_++);
    job.state = JobState::queued;
    job.submitted_at_ms = now_ms();
    job.updated_at_ms = job.submitted_at_ms;

    journal_append(job);  // journal first, then visibility
    payloads_[job.id] = std::move(payload);
    queue_.push_back(job.id);
    jobs_[job.id] = job;
    cv_.notify_one();
    return job.id;
}

Job JobManager::get(const std::string& id) const {
    std::lock_guard lock(mu_);
    auto it = jobs_.find(id);
    if (it == jobs_.end()) throw UnknownJobId(id);
    const Job& job = it->second;
    if ((job.state == JobState::completed || job.state == JobState::failed) &&
        now_ms() - job.updated_at_ms > options_.retention.count())
        throw RetentionExpired(id);
    return job;
}

std::size_t JobManager::pending() const {
    std::lock_guard lock(mu_);
    return queue_.size();
}

void JobManager::transition(const std::string& id, JobState state, std::optional<nlohmann::json> result,
                            std::optional<std::string> error) {
    std::lock_guard lock(mu_);
    auto it = jobs_.find(id);
    if (it == jobs_.end()) return;
    Job& job = it->second;
    job.state = state;
    job.updated_at_ms = now_ms();
    job.result = std::move(result);
    job.error = std::move(error);
    journal_append(job);
}

void JobManager::worker_main() {
    while (true) {
        std::string id;
        nlohmann::json payload;
        {
            std::unique_lock lock(mu_);
            cv_.wait(lock, [this] { return stopping_ || !queue_.empty(); });
            if (queue_.empty()) return;  // stopping and drained
            id = queue_.front();
            queue_.pop_front();
            payload = std::move(payloads_[id]);
            payloads_.erase(id);

            Job& job = jobs_[id];
            job.state = JobState::processing;
            job.updated_at_ms = now_ms();
            journal_append(job);
        }

        try {
            nlohmann::json result = work_(payload);
            transition(id, JobState::completed, std::move(result), std::nullopt);
        } catch (const std::exception& e) {
            transition(id, JobState::failed, std::nullopt, std::string(e.what()));
        } catch (...) {
            transition(id, JobState::failed, std::nullopt, std::string("unknown failure"));
        }
    }
}

void JobManager::shutdown() {
    {
        std::lock_guard lock(mu_);
        if (stopping_) return;
        stopping_ = true;
    }
    cv_.notify_all();
    for (auto& t : workers_)
        if (t.joinable()) t.join();
    workers_.clear();
}

}  // namespace masar
