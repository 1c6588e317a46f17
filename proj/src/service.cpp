#include "dyncolor/service.hpp"

#include "dyncolor/errors.hpp"

#include "httplib.h"

namespace dyncolor {

using nlohmann::json;

namespace {

Response error(int status, const std::string& kind, const std::string& message) {
    return {status, {{"error", kind}, {"message", message}}};
}

template <class F>
Response guarded(F&& f) {
    try {
        return f();
    } catch (const NotFoundError& e) {
        return error(404, "not_found", e.what());
    } catch (const RangeTooSmallError& e) {
        return error(422, "range_too_small", e.what());
    } catch (const ParseError& e) {
        return error(400, "parse", e.what());
    } catch (const ValidationError& e) {
        return error(400, "validation", e.what());
    } catch (const ArgumentError& e) {
        return error(400, "argument", e.what());
    } catch (const ConfigError& e) {
        return error(400, "config", e.what());
    } catch (const json::exception& e) {
        return error(400, "parse", e.what());
    } catch (const std::exception& e) {
        return error(500, "internal", e.what());
    }
}

json parse_body(const std::string& body) {
    try {
        return json::parse(body);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("request body: ") + e.what());
    }
}

std::string node_id_of(const std::string& body) {
    const json j = parse_body(body);
    if (!j.is_object() || !j.contains("node_id") || !j["node_id"].is_string())
        throw ParseError("request body: expected {\"node_id\": string}");
    return j["node_id"].get<std::string>();
}

} // namespace

SessionService::SessionService(std::shared_ptr<const NameModel> names,
                               std::shared_ptr<const PairHarmonyScorer> pair_harmony)
    : names_(std::move(names)), pair_harmony_(std::move(pair_harmony)) {
    if (!names_) throw ConfigError("service: no name model");
}

std::shared_ptr<Session> SessionService::find(const std::string& id) const {
    std::lock_guard lock(mutex_);
    const auto it = sessions_.find(id);
    if (it == sessions_.end()) throw NotFoundError("unknown session '" + id + "'");
    return it->second;
}

template <class F>
Response SessionService::with_session(const std::string& id, F&& f) {
    return guarded([&] {
        const auto s = find(id);
        std::lock_guard lock(s->mutex());
        return f(*s);
    });
}

std::size_t SessionService::session_count() const {
    std::lock_guard lock(mutex_);
    return sessions_.size();
}

Response SessionService::create(const std::string& body) {
    return guarded([&] {
        auto inputs = SessionInputs::from_json(parse_body(body), names_, pair_harmony_);
        const std::string id = "s" + std::to_string(next_id_++);
        auto s = std::make_shared<Session>(id, std::move(inputs));
        json out = s->palette_json();
        out["warnings"] = s->warnings();
        {
            std::lock_guard lock(mutex_);
            sessions_.emplace(id, std::move(s));
        }
        return Response{201, std::move(out)};
    });
}

Response SessionService::expand(const std::string& id, const std::string& body) {
    return with_session(id, [&](Session& s) {
        const std::string node = node_id_of(body);
        const auto& rec = s.expand(node);
        json children = json::array();
        for (const auto& c : rec.children) children.push_back(color_json(c, s.color(c)));
        json reports = json::array();
        for (const auto& r : rec.reports) reports.push_back(r.to_json());
        const auto& range = s.child_range(node);
        return Response{200,
                        {{"session_id", s.id()},
                         {"node", node},
                         {"children", std::move(children)},
                         {"range", {{"center", color_json(node, s.range_center(node))["lch"]},
                                    {"radius", range.radius()},
                                    {"hue_interval", {range.hue_interval().lo(), range.hue_interval().hi()}}}},
                         {"sibling_ranges", s.group_of(node).ranges.to_json()},
                         {"reports", std::move(reports)},
                         {"warnings", s.warnings()}}};
    });
}

Response SessionService::collapse(const std::string& id, const std::string& body) {
    return with_session(id, [&](Session& s) {
        s.collapse(node_id_of(body));
        return Response{200, s.palette_json()};
    });
}

Response SessionService::palette(const std::string& id) {
    return with_session(id, [](Session& s) { return Response{200, s.palette_json()}; });
}

Response SessionService::evaluation(const std::string& id) {
    return with_session(id, [](Session& s) { return Response{200, s.evaluation_json()}; });
}

Response SessionService::log(const std::string& id) {
    return with_session(id, [](Session& s) { return Response{200, s.event_log()}; });
}

Response SessionService::remove(const std::string& id) {
    return guarded([&] {
        const auto s = find(id);
        std::lock_guard session_lock(s->mutex()); // wait for in-flight work
        std::lock_guard lock(mutex_);
        sessions_.erase(id);
        return Response{204, nullptr};
    });
}

void SessionService::mount(httplib::Server& server) {
    auto reply = [](httplib::Response& res, const Response& r) {
        res.status = r.status;
        if (r.status != 204) res.set_content(r.body.dump(), "application/json");
    };
    server.Get("/health", [](const httplib::Request&, httplib::Response& res) {
        res.set_content(R"({"status":"ok"})", "application/json");
    });
    server.Post("/sessions", [this, reply](const httplib::Request& req, httplib::Response& res) {
        reply(res, create(req.body));
    });
    server.Post(R"(/sessions/([^/]+)/expand)", [this, reply](const httplib::Request& req, httplib::Response& res) {
        reply(res, expand(req.matches[1], req.body));
    });
    server.Post(R"(/sessions/([^/]+)/collapse)", [this, reply](const httplib::Request& req, httplib::Response& res) {
        reply(res, collapse(req.matches[1], req.body));
    });
    server.Get(R"(/sessions/([^/]+)/palette)", [this, reply](const httplib::Request& req, httplib::Response& res) {
        reply(res, palette(req.matches[1]));
    });
    server.Get(R"(/sessions/([^/]+)/evaluation)", [this, reply](const httplib::Request& req, httplib::Response& res) {
        reply(res, evaluation(req.matches[1]));
    });
    server.Get(R"(/sessions/([^/]+)/log)", [this, reply](const httplib::Request& req, httplib::Response& res) {
        reply(res, log(req.matches[1]));
    });
    server.Delete(R"(/sessions/([^/]+))", [this, reply](const httplib::Request& req, httplib::Response& res) {
        reply(res, remove(req.matches[1]));
    });
}

} // namespace dyncolor
