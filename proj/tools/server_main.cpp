// Copyright 2026 The progedit Authors
// SPDX-License-Identifier: Apache-2.0

#include <iostream>

#include <CLI11.hpp>

#include "progedit/service.hpp"

int main(int argc, char** argv) {
    CLI::App app{"progedit-server: HTTP edit service", "progedit-server"};
    std::string host = "127.0.0.1";
    int port = 8080;
    progedit::service::ServiceOptions options;
    app.add_option("--host", host, "bind address");
    app.add_option("--port", port, "port, 0 for ephemeral");
    app.add_option("--workers", options.workers, "edit worker threads")->check(CLI::PositiveNumber);
    app.add_option("--retain-cap", options.retain_cap, "step masks kept per job")->check(CLI::NonNegativeNumber);
    app.add_option("--cors-origin", options.cors_origin, "allowed UI origin");
    CLI11_PARSE(app, argc, argv);

    progedit::service::EditService service(options);
    if (port == 0) {
        const int bound = service.start(host, 0);
        std::cout << "listening on " << host << ":" << bound << std::endl;
        std::cin.get();  // serve until stdin closes
        return 0;
    }
    std::cout << "listening on " << host << ":" << port << std::endl;
    return service.listen(host, port) ? 0 : 1;
}
