#pragma once

#include "dyncolor/session.hpp"

#include "json.hpp"

#include <atomic>
#include <map>
#include <memory>
#include <mutex>
#include <string>

namespace httplib {
class Server;
}

namespace dyncolor {

/// Status code plus JSON body; handlers never throw.
struct Response {
    int status = 200;
    nlohmann::json body;
};

/// In-memory session store behind the REST routes. Requests on different
/// sessions run concurrently; each session serializes its own requests.
class SessionService {
public:
    SessionService(std::shared_ptr<const NameModel> names,
                   std::shared_ptr<const PairHarmonyScorer> pair_harmony = default_pair_harmony());

    Response create(const std::string& body);
    Response expand(const std::string& id, const std::string& body);
    Response collapse(const std::string& id, const std::string& body);
    Response palette(const std::string& id);
    Response evaluation(const std::string& id);
    Response log(const std::string& id);
    Response remove(const std::string& id);

    std::size_t session_count() const;

    /// POST /sessions, POST /sessions/{id}/expand, POST /sessions/{id}/collapse,
    /// GET /sessions/{id}/palette, GET /sessions/{id}/evaluation,
    /// GET /sessions/{id}/log, DELETE /sessions/{id}, GET /health.
    void mount(httplib::Server& server);

private:
    std::shared_ptr<Session> find(const std::string& id) const;
    template <class F>
    Response with_session(const std::string& id, F&& f);

    std::shared_ptr<const NameModel> names_;
    std::shared_ptr<const PairHarmonyScorer> pair_harmony_;
    mutable std::mutex mutex_;
    std::map<std::string, std::shared_ptr<Session>> sessions_;
    std::atomic<std::uint64_t> next_id_{1};
};

} // namespace dyncolor
