#pragma once

#include <atomic>
#include <condition_variable>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "playbook/selector.hpp"

namespace playbook {

/// Newline-delimited JSON over TCP. One request per line, one response line
/// per request, in order. Malformed lines get an error response; the
/// connection stays open. Requests:
///   {"positions": [[x,y] * 11]}  or  {"mass": [block_count reals]}
/// Responses:
///   {"cluster":id,"formation":id,"hdi":[lo,hi],"distance":d}
///   {"error":"PARSE"|"DIMENSION"|"INTERNAL","message":"..."}
class SelectorService {
public:
    /// Port 0 binds an ephemeral port; see port() after start().
    SelectorService(AssociationDB db, std::string host = "127.0.0.1",
                    int port = 0);
    ~SelectorService();

    SelectorService(const SelectorService&) = delete;
    SelectorService& operator=(const SelectorService&) = delete;

    /// Binds, listens, and spawns the accept loop. Throws IoError on failure.
    void start();
    void stop();

    /// Joins the accept loop (it ends when stop() is called).
    void wait();

    /// start() then wait(); the CLI entry point.
    void run_blocking();

    int port() const { return bound_port_; }

    /// Request -> response for one line, without the socket. The TCP path
    /// writes exactly this string plus a newline.
    std::string handle_line(const std::string& line) const;

private:
    void accept_loop();
    void serve_connection(int fd);

    AssociationDB db_;
    GroundCosts costs_;
    std::string host_;
    int requested_port_ = 0;
    int bound_port_ = 0;
    int listen_fd_ = -1;
    std::atomic<bool> stopping_{false};
    std::thread accept_thread_;
    std::mutex conn_mutex_;
    std::condition_variable conn_drained_;
    std::vector<int> conn_fds_;  // live connections; handlers run detached
};

}  // namespace playbook
