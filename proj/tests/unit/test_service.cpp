// Copyright 2026 The progedit Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <chrono>
#include <filesystem>
#include <sstream>
#include <thread>

#include <httplib.h>

#include "cli.hpp"
#include "progedit/base64.hpp"
#include "progedit/fixtures.hpp"
#include "progedit/pixmap.hpp"
#include "progedit/run_config.hpp"
#include "progedit/service.hpp"

using namespace progedit;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Server {
    service::EditService svc;
    int port;
    httplib::Client client;

    Server() : svc(), port(svc.start()), client("127.0.0.1", port) { client.set_read_timeout(30, 0); }
};

std::string b64_pgm(const Image& img) { return base64_encode(encode_pgm(img)); }

json edit_request(std::uint64_t seed = 3) {
    return {
        {"source", b64_pgm(fixtures::texture_a())},
        {"exemplars", {b64_pgm(fixtures::texture_b())}},
        {"maps", {base64_encode(encode_map_pgm(fixtures::ramp_map()))}},
        {"world", "two-texture"},
        {"encoder", {{"kind", "block-average"}, {"factor", 2}}},
        {"T", 12},
        {"t_ds_max", 12},
        {"seed", seed},
    };
}

json post(httplib::Client& c, const json& body, const httplib::Headers& headers, int expect) {
    const auto res = c.Post("/v1/edits", headers, body.dump(), "application/json");
    REQUIRE(res);
    CHECK(res->status == expect);
    return json::parse(res->body);
}

json wait_done(httplib::Client& c, const std::string& id) {
    const auto deadline = std::chrono::steady_clock::now() + std::chrono::seconds(60);
    while (std::chrono::steady_clock::now() < deadline) {
        const auto res = c.Get("/v1/edits/" + id);
        REQUIRE(res);
        REQUIRE(res->status == 200);
        const json doc = json::parse(res->body);
        if (doc["state"] == "done" || doc["state"] == "failed") {
            return doc;
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(10));
    }
    FAIL("edit did not finish");
    return {};
}

std::string get_body(httplib::Client& c, const std::string& path, int expect, const httplib::Headers& h = {}) {
    const auto res = c.Get(path, h);
    REQUIRE(res);
    CHECK(res->status == expect);
    return res->body;
}

}  // namespace

TEST_CASE("submit, poll and fetch") {
    Server s;
    const auto res = s.client.Post("/v1/edits", edit_request().dump(), "application/json");
    REQUIRE(res);
    CHECK(res->status == 202);
    const json doc = json::parse(res->body);
    const std::string id = doc["id"];
    CHECK(res->get_header_value("Location") == "/v1/edits/" + id);
    CHECK((doc["state"] == "queued" || doc["state"] == "running" || doc["state"] == "done"));
    CHECK(doc["command"] == "edit");

    const json done = wait_done(s.client, id);
    REQUIRE(done["state"] == "done");
    CHECK(done["links"]["result"] == "/v1/edits/" + id + "/result");
    CHECK(done["total_steps"] == 12);
    CHECK(done["retained_steps"].size() == 12);
    CHECK(done["retained_steps"].front() == 1);

    const std::string p6 = get_body(s.client, "/v1/edits/" + id + "/result", 200);
    CHECK(p6.rfind("P6\n64 64\n255\n", 0) == 0);
    const std::string p5 =
        get_body(s.client, "/v1/edits/" + id + "/result", 200, {{"Accept", "image/x-portable-graymap"}});
    CHECK(p5.rfind("P5\n64 64\n255\n", 0) == 0);
    CHECK(encode_ppm(decode_pnm(p5)) == p6);
}

TEST_CASE("step masks") {
    Server s;
    const std::string id = post(s.client, edit_request(), {}, 202)["id"];
    REQUIRE(wait_done(s.client, id)["state"] == "done");

    const Image first = decode_pnm(get_body(s.client, "/v1/edits/" + id + "/steps/12", 200));
    CHECK(first.shape() == Shape{1, 32, 32});
    double area = 0.0;
    for (double v : first.values()) {
        area += v;
    }
    CHECK(area > 0.0);
    const Image last = decode_pnm(get_body(s.client, "/v1/edits/" + id + "/steps/1", 200));
    double last_area = 0.0;
    for (double v : last.values()) {
        last_area += v;
    }
    CHECK(last_area <= area);

    get_body(s.client, "/v1/edits/" + id + "/steps/13", 404);
    get_body(s.client, "/v1/edits/" + id + "/steps/0", 404);
    get_body(s.client, "/v1/edits/" + id + "/steps/x1", 404);
}

TEST_CASE("validation and unknown ids") {
    Server s;
    json bad = edit_request();
    bad["maps"] = {{{"height", 64}, {"width", 64}, {"values", std::vector<double>(64 * 64, 1.5)}}};
    const json err = post(s.client, bad, {}, 400);
    CHECK(err["error"]["fields"][0]["path"] == "maps[0]");

    post(s.client, json::array(), {}, 400);
    const auto garbage = s.client.Post("/v1/edits", "{not json", "application/json");
    REQUIRE(garbage);
    CHECK(garbage->status == 400);

    json wrong = edit_request();
    wrong["command"] = "sweep-tds";
    CHECK(post(s.client, wrong, {}, 400)["error"]["fields"][0]["path"] == "command");

    get_body(s.client, "/v1/edits/e000000000bad", 404);
    get_body(s.client, "/v1/edits/e000000000bad/result", 404);
    get_body(s.client, "/v1/edits/e000000000bad/steps/1", 404);
}

TEST_CASE("idempotency keys") {
    Server s;
    const httplib::Headers key{{"Idempotency-Key", "abc"}};
    const json a = post(s.client, edit_request(), key, 202);
    const json b = post(s.client, edit_request(), key, 202);
    CHECK(a["id"] == b["id"]);
    post(s.client, edit_request(4), key, 409);

    json in_body = edit_request();
    in_body["idempotency_key"] = "def";
    const json c = post(s.client, in_body, {}, 202);
    const json d = post(s.client, in_body, {}, 202);
    CHECK(c["id"] == d["id"]);
    CHECK(c["id"] != a["id"]);
}

TEST_CASE("results not ready yet return 409") {
    service::ServiceOptions opts;
    opts.workers = 1;
    service::EditService svc(opts);
    httplib::Client client("127.0.0.1", svc.start());
    // a long edit occupies the only worker, so the second one stays queued
    json slow = edit_request();
    slow["T"] = 50;
    slow["t_ds_max"] = 50;
    post(client, slow, {}, 202);
    const std::string id = post(client, edit_request(9), {}, 202)["id"];
    const auto res = client.Get("/v1/edits/" + id + "/result");
    REQUIRE(res);
    if (res->status != 200) {
        CHECK(res->status == 409);
        CHECK(json::parse(res->body)["error"]["kind"] == "not-ready");
    }
    CHECK(wait_done(client, id)["state"] == "done");
}

TEST_CASE("catalog endpoints") {
    Server s;
    const json th = json::parse(get_body(s.client, "/v1/thresholds", 200));
    CHECK(th["n"] == 100);
    std::map<std::string, json> by_kind;
    for (const auto& k : th["thresholds"]) {
        by_kind[k["kind"]] = k;
        CHECK(k["values"].size() == 100);
    }
    CHECK(by_kind.at("linear")["auc"].get<double>() == 0.495);
    CHECK(by_kind.at("sigmoid")["values"][50].get<double>() == 0.5);
    CHECK(by_kind.at("log")["auc"] > by_kind.at("linear")["auc"]);
    CHECK(by_kind.at("linear")["auc"] > by_kind.at("quadratic")["auc"]);
    CHECK(by_kind.at("quadratic")["auc"] > by_kind.at("cubic")["auc"]);

    const json worlds = json::parse(get_body(s.client, "/v1/worlds", 200));
    std::vector<std::string> names;
    for (const auto& w : worlds["worlds"]) {
        names.push_back(w["name"]);
        CHECK(w["components"].get<int>() >= 1);
        CHECK(!w["description"].get<std::string>().empty());
    }
    CHECK(names.size() == fixtures::bundled_worlds().size());
    CHECK(std::find(names.begin(), names.end(), "two-texture") != names.end());
}

TEST_CASE("cors") {
    Server s;
    const auto res = s.client.Get("/v1/worlds", {{"Origin", "http://localhost:5173"}});
    REQUIRE(res);
    CHECK(res->get_header_value("Access-Control-Allow-Origin") == "*");
    const auto pre = s.client.Options("/v1/edits");
    REQUIRE(pre);
    CHECK(pre->status == 204);
    CHECK(pre->get_header_value("Access-Control-Allow-Methods").find("POST") != std::string::npos);
}

TEST_CASE("results are reproducible and agree with the CLI") {
    Server s;
    const std::string a = post(s.client, edit_request(21), {}, 202)["id"];
    const std::string b = post(s.client, edit_request(21), {}, 202)["id"];
    CHECK(a != b);
    REQUIRE(wait_done(s.client, a)["state"] == "done");
    REQUIRE(wait_done(s.client, b)["state"] == "done");
    const httplib::Headers gray{{"Accept", "image/x-portable-graymap"}};
    const std::string pa = get_body(s.client, "/v1/edits/" + a + "/result", 200, gray);
    CHECK(pa == get_body(s.client, "/v1/edits/" + b + "/result", 200, gray));
    CHECK(get_body(s.client, "/v1/edits/" + a + "/result", 200) ==
          get_body(s.client, "/v1/edits/" + b + "/result", 200));

    // same request through the file-based CLI
    const fs::path dir = fs::temp_directory_path() / "progedit_service_cli";
    fs::remove_all(dir);
    fs::create_directories(dir);
    write_image(dir / "src.pgm", fixtures::texture_a());
    write_image(dir / "ex.pgm", fixtures::texture_b());
    write_file(dir / "mu.pgm", encode_map_pgm(fixtures::ramp_map()));
    json cfg = edit_request(21);
    cfg["source"] = "src.pgm";
    cfg["exemplars"] = {"ex.pgm"};
    cfg["maps"] = {"mu.pgm"};
    write_file(dir / "edit.json", cfg.dump());
    std::ostringstream out, err;
    REQUIRE(cli::run({"edit", "--config", (dir / "edit.json").string(), "--out", (dir / "run").string()}, out,
                     err) == 0);
    CHECK(read_file(dir / "run" / "result.pgm") == pa);
    fs::remove_all(dir);
}

TEST_CASE("stop is idempotent") {
    service::EditService svc;
    const int port = svc.start();
    CHECK(port > 0);
    svc.stop();
    svc.stop();
}
