// Copyright 2026 The progedit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>
#include <string>

namespace progedit::service {

struct ServiceOptions {
    int workers = 2;
    int retain_cap = 64;           // per-job step masks kept for /steps/{t}
    std::size_t max_jobs = 256;    // oldest finished jobs are dropped beyond this
    std::string cors_origin = "*";
};

// HTTP facade over the editor:
//   POST /v1/edits                 submit a run config (images as base64 pixmaps)
//   GET  /v1/edits/{id}            state, step, links
//   GET  /v1/edits/{id}/result     P6 (P5 when Accept asks for a graymap)
//   GET  /v1/edits/{id}/steps/{t}  P5 mask of step t
//   GET  /v1/thresholds            curves at n = 100 with AUC
//   GET  /v1/worlds                bundled fixture worlds
class EditService {
public:
    explicit EditService(ServiceOptions options = {});
    ~EditService();

    EditService(const EditService&) = delete;
    EditService& operator=(const EditService&) = delete;

    // Binds (port 0 picks an ephemeral port), serves on a background thread
    // and returns the bound port.
    int start(const std::string& host = "127.0.0.1", int port = 0);

    // Blocks serving on the calling thread.
    bool listen(const std::string& host, int port);

    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace progedit::service
