// Copyright 2026 The progedit Authors
// SPDX-License-Identifier: Apache-2.0

#include "progedit/service.hpp"

#include <chrono>
#include <condition_variable>
#include <cstdio>
#include <ctime>
#include <deque>
#include <map>
#include <mutex>
#include <stop_token>
#include <thread>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "progedit/editor.hpp"
#include "progedit/fixtures.hpp"
#include "progedit/pixmap.hpp"
#include "progedit/rng.hpp"
#include "progedit/run_config.hpp"
#include "progedit/threshold.hpp"

namespace progedit::service {

namespace {

using nlohmann::json;

enum class JobState { queued, running, done, failed };

const char* to_string(JobState s) {
    switch (s) {
        case JobState::queued: return "queued";
        case JobState::running: return "running";
        case JobState::done: return "done";
        case JobState::failed: return "failed";
    }
    return "failed";
}

std::string utc_now() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

struct Job {
    std::string id;
    std::string command;
    std::uint64_t request_hash = 0;
    RunConfig config;

    // Guarded by mutex. Bytes are written once, before state becomes done.
    mutable std::mutex mutex;
    JobState state = JobState::queued;
    int step = 0;
    int total_steps = 0;
    std::string reason;
    std::string created;
    std::string updated;
    std::string result_p5;
    std::string result_p6;
    std::map<int, std::string> step_masks;

    // Only forward moves are applied.
    bool advance(JobState next) {
        if (static_cast<int>(next) < static_cast<int>(state) || state == JobState::done ||
            state == JobState::failed) {
            return false;
        }
        state = next;
        updated = utc_now();
        return true;
    }
};

json error_body(const std::string& kind, const std::string& message, const std::vector<FieldError>& fields = {}) {
    json e = {{"kind", kind}, {"message", message}};
    if (!fields.empty()) {
        json list = json::array();
        for (const auto& f : fields) {
            list.push_back(to_json(f));
        }
        e["fields"] = list;
    }
    return {{"error", e}};
}

void send_json(httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

bool wants_graymap(const httplib::Request& req) {
    const std::string accept = req.get_header_value("Accept");
    return accept.find("image/x-portable-graymap") != std::string::npos;
}

}  // namespace

struct EditService::Impl {
    ServiceOptions options;
    httplib::Server server;
    std::jthread listener;

    std::mutex jobs_mutex;
    std::map<std::string, std::shared_ptr<Job>> jobs;
    std::deque<std::string> order;  // submission order, for eviction
    std::map<std::string, std::string> idempotency;  // key -> id
    std::uint64_t next_id = 1;

    std::mutex queue_mutex;
    std::condition_variable_any queue_cv;
    std::deque<std::shared_ptr<Job>> queue;
    std::vector<std::jthread> workers;

    explicit Impl(ServiceOptions opts) : options(std::move(opts)) {
        routes();
        for (int w = 0; w < std::max(1, options.workers); ++w) {
            workers.emplace_back([this](std::stop_token stop) { work(stop); });
        }
    }

    ~Impl() {
        server.stop();
        for (auto& w : workers) {
            w.request_stop();
        }
        queue_cv.notify_all();
    }

    std::shared_ptr<Job> find(const std::string& id) {
        std::lock_guard lock(jobs_mutex);
        const auto it = jobs.find(id);
        return it == jobs.end() ? nullptr : it->second;
    }

    void work(std::stop_token stop) {
        while (true) {
            std::shared_ptr<Job> job;
            {
                std::unique_lock lock(queue_mutex);
                if (!queue_cv.wait(lock, stop, [this] { return !queue.empty(); })) {
                    return;
                }
                job = std::move(queue.front());
                queue.pop_front();
            }
            execute(*job);
        }
    }

    void execute(Job& job) {
        {
            std::lock_guard lock(job.mutex);
            job.advance(JobState::running);
        }
        const RunConfig& run = job.config;
        EditParams params = run.params;
        params.retain_steps = true;
        params.retain_cap = options.retain_cap;
        const StepObserver observer = [&job](int index, int total) {
            std::lock_guard lock(job.mutex);
            job.step = std::max(job.step, index + 1);
            job.total_steps = std::max(job.total_steps, total);
            job.updated = utc_now();
        };
        try {
            EditResult result;
            if (job.command == "edit") {
                result = progressive_edit(*run.source, run.exemplars[0], run.maps[0], params, *run.world,
                                          run.encoder, observer);
            } else if (job.command == "iterate") {
                result = iterative_edit(*run.source, run.exemplar_pairs(), params, *run.world, run.encoder, observer);
            } else {
                result = progressive_edit_multi(*run.source, run.exemplar_pairs(), params, *run.world, run.encoder,
                                                observer);
            }
            std::string p5 = result.output.channels() == 1 ? encode_pgm(result.output) : std::string();
            std::string p6 = encode_ppm(result.output);
            std::map<int, std::string> masks;
            for (std::size_t j = 0; j < result.steps.size(); ++j) {
                masks.emplace(result.steps[j], encode_mask_pgm(result.per_step_masks[j]));
            }
            std::lock_guard lock(job.mutex);
            job.result_p5 = std::move(p5);
            job.result_p6 = std::move(p6);
            job.step_masks = std::move(masks);
            job.step = result.executed_steps;
            job.total_steps = result.executed_steps;
            job.advance(JobState::done);
        } catch (const std::exception& e) {
            std::lock_guard lock(job.mutex);
            job.reason = e.what();
            job.advance(JobState::failed);
        }
    }

    json status(const Job& job) {
        std::lock_guard lock(job.mutex);
        const std::string self = "/v1/edits/" + job.id;
        json links = {{"self", self}};
        json doc = {{"id", job.id},
                    {"command", job.command},
                    {"state", to_string(job.state)},
                    {"created", job.created},
                    {"updated", job.updated}};
        if (job.state == JobState::running) {
            doc["step"] = job.step;
            doc["total_steps"] = job.total_steps;
        }
        if (job.state == JobState::done) {
            doc["step"] = job.step;
            doc["total_steps"] = job.total_steps;
            links["result"] = self + "/result";
            json steps = json::array();
            for (const auto& [t, bytes] : job.step_masks) {
                steps.push_back(t);
            }
            links["steps"] = self + "/steps/{t}";
            doc["retained_steps"] = steps;
        }
        if (job.state == JobState::failed) {
            doc["reason"] = job.reason;
        }
        doc["links"] = links;
        return doc;
    }

    void submit(const httplib::Request& req, httplib::Response& res) {
        json body;
        try {
            body = json::parse(req.body);
        } catch (const json::parse_error& e) {
            send_json(res, 400, error_body("parse-error", e.what()));
            return;
        }
        if (!body.is_object()) {
            send_json(res, 400, error_body("invalid-argument", "body must be a JSON object", {{"", "expected object"}}));
            return;
        }
        std::string key = req.get_header_value("Idempotency-Key");
        if (body.contains("idempotency_key")) {
            if (!body["idempotency_key"].is_string()) {
                send_json(res, 400, error_body("invalid-argument", "idempotency_key must be a string",
                                               {{"idempotency_key", "must be a string"}}));
                return;
            }
            if (key.empty()) {
                key = body["idempotency_key"].get<std::string>();
            }
            body.erase("idempotency_key");
        }
        std::string command = body.value("command", std::string());
        body.erase("command");
        const std::uint64_t request_hash = fnv1a64(command + "\n" + body.dump());

        if (!key.empty()) {
            std::lock_guard lock(jobs_mutex);
            const auto it = idempotency.find(key);
            if (it != idempotency.end()) {
                const auto job = jobs.find(it->second);
                if (job != jobs.end()) {
                    if (job->second->request_hash != request_hash) {
                        send_json(res, 409, error_body("idempotency-conflict",
                                                       "key already used for a different request"));
                        return;
                    }
                    const json doc = status(*job->second);
                    send_json(res, 202, doc);
                    return;
                }
            }
        }

        auto job = std::make_shared<Job>();
        try {
            job->config = parse_run_config(body, base64_resolver());
        } catch (const ConfigError& e) {
            send_json(res, 400, error_body(std::string(progedit::to_string(e.kind())), e.what(), e.fields()));
            return;
        } catch (const Error& e) {
            send_json(res, 400, error_body(std::string(progedit::to_string(e.kind())), e.what()));
            return;
        }
        if (command.empty()) {
            command = job->config.exemplars.size() == 1 ? "edit" : "multi-edit";
        }
        if (command != "edit" && command != "multi-edit" && command != "iterate") {
            send_json(res, 400, error_body("invalid-argument", "unknown command",
                                           {{"command", "expected edit, multi-edit or iterate"}}));
            return;
        }
        if (command == "edit" && job->config.exemplars.size() != 1) {
            send_json(res, 400, error_body("invalid-argument", "edit takes exactly one exemplar",
                                           {{"exemplars", "edit takes exactly one exemplar"}}));
            return;
        }
        job->command = command;
        job->request_hash = request_hash;
        job->created = job->updated = utc_now();

        json doc;
        {
            std::lock_guard lock(jobs_mutex);
            // A concurrent retry may have registered the key meanwhile.
            if (!key.empty()) {
                if (const auto it = idempotency.find(key); it != idempotency.end() && jobs.count(it->second)) {
                    send_json(res, 202, status(*jobs.at(it->second)));
                    return;
                }
            }
            char id[32];
            std::snprintf(id, sizeof id, "e%012llx", static_cast<unsigned long long>(next_id++));
            job->id = id;
            jobs.emplace(job->id, job);
            order.push_back(job->id);
            if (!key.empty()) {
                idempotency[key] = job->id;
            }
            evict_unlocked();
            doc = status(*job);
        }
        {
            std::lock_guard lock(queue_mutex);
            queue.push_back(job);
        }
        queue_cv.notify_one();
        res.set_header("Location", "/v1/edits/" + job->id);
        send_json(res, 202, doc);
    }

    void evict_unlocked() {
        for (auto it = order.begin(); jobs.size() > options.max_jobs && it != order.end();) {
            const auto job = jobs.at(*it);
            bool finished = false;
            {
                std::lock_guard lock(job->mutex);
                finished = job->state == JobState::done || job->state == JobState::failed;
            }
            if (!finished) {
                ++it;
                continue;
            }
            for (auto k = idempotency.begin(); k != idempotency.end();) {
                k = k->second == *it ? idempotency.erase(k) : std::next(k);
            }
            jobs.erase(*it);
            it = order.erase(it);
        }
    }

    void routes() {
        server.set_default_headers({{"Access-Control-Allow-Origin", options.cors_origin},
                                    {"Vary", "Origin"}});
        server.Options(R"(/v1/.*)", [](const httplib::Request&, httplib::Response& res) {
            res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
            res.set_header("Access-Control-Allow-Headers", "Content-Type, Accept, Idempotency-Key");
            res.status = 204;
        });

        server.Post("/v1/edits", [this](const httplib::Request& req, httplib::Response& res) { submit(req, res); });

        server.Get("/v1/edits/:id", [this](const httplib::Request& req, httplib::Response& res) {
            const auto job = find(req.path_params.at("id"));
            if (!job) {
                send_json(res, 404, error_body("not-found", "unknown edit id"));
                return;
            }
            send_json(res, 200, status(*job));
        });

        server.Get("/v1/edits/:id/result", [this](const httplib::Request& req, httplib::Response& res) {
            const auto job = find(req.path_params.at("id"));
            if (!job) {
                send_json(res, 404, error_body("not-found", "unknown edit id"));
                return;
            }
            std::lock_guard lock(job->mutex);
            if (job->state != JobState::done) {
                json body = error_body("not-ready", "edit is not done");
                body["state"] = to_string(job->state);
                send_json(res, 409, body);
                return;
            }
            if (wants_graymap(req) && !job->result_p5.empty()) {
                res.set_content(job->result_p5, "image/x-portable-graymap");
            } else {
                res.set_content(job->result_p6, "image/x-portable-pixmap");
            }
        });

        server.Get("/v1/edits/:id/steps/:t", [this](const httplib::Request& req, httplib::Response& res) {
            const auto job = find(req.path_params.at("id"));
            if (!job) {
                send_json(res, 404, error_body("not-found", "unknown edit id"));
                return;
            }
            int t = 0;
            try {
                std::size_t used = 0;
                t = std::stoi(req.path_params.at("t"), &used);
                if (used != req.path_params.at("t").size()) {
                    throw std::invalid_argument("trailing characters");
                }
            } catch (const std::exception&) {
                send_json(res, 404, error_body("not-found", "step must be an integer"));
                return;
            }
            std::lock_guard lock(job->mutex);
            if (job->state != JobState::done) {
                json body = error_body("not-ready", "step masks are available once the edit is done");
                body["state"] = to_string(job->state);
                send_json(res, 409, body);
                return;
            }
            const auto it = job->step_masks.find(t);
            if (it == job->step_masks.end()) {
                send_json(res, 404, error_body("not-found", "step not executed or not retained"));
                return;
            }
            res.set_content(it->second, "image/x-portable-graymap");
        });

        server.Get("/v1/thresholds", [](const httplib::Request&, httplib::Response& res) {
            constexpr int n = 100;
            json kinds = json::array();
            for (const ThresholdKind kind : kAllThresholdKinds) {
                kinds.push_back({{"kind", std::string(progedit::to_string(kind))},
                                 {"values", threshold_curve(kind, n)},
                                 {"auc", threshold_auc(kind, n)}});
            }
            send_json(res, 200, {{"n", n}, {"thresholds", kinds}});
        });

        server.Get("/v1/worlds", [](const httplib::Request&, httplib::Response& res) {
            json list = json::array();
            for (const auto& w : fixtures::bundled_worlds()) {
                const Shape& s = w.world.shape();
                list.push_back({{"name", w.name},
                                {"shape", {{"channels", s.channels}, {"height", s.height}, {"width", s.width}}},
                                {"components", w.world.components().size()},
                                {"description", w.world.description}});
            }
            send_json(res, 200, {{"worlds", list}});
        });

        server.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
            std::string message = "internal error";
            try {
                std::rethrow_exception(ep);
            } catch (const std::exception& e) {
                message = e.what();
            } catch (...) {
            }
            send_json(res, 500, error_body("internal", message));
        });
    }
};

EditService::EditService(ServiceOptions options) : impl_(std::make_unique<Impl>(std::move(options))) {}

EditService::~EditService() { stop(); }

int EditService::start(const std::string& host, int port) {
    int bound = port;
    if (port == 0) {
        bound = impl_->server.bind_to_any_port(host);
    } else if (!impl_->server.bind_to_port(host, port)) {
        bound = -1;
    }
    require(bound > 0, ErrorKind::invalid_argument, "cannot bind " + host + ":" + std::to_string(port));
    impl_->listener = std::jthread([this] { impl_->server.listen_after_bind(); });
    impl_->server.wait_until_ready();
    return bound;
}

bool EditService::listen(const std::string& host, int port) { return impl_->server.listen(host, port); }

void EditService::stop() {
    impl_->server.stop();
    if (impl_->listener.joinable()) {
        impl_->listener.join();
    }
}

}  // namespace progedit::service
