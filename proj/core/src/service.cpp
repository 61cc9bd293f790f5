#include "playbook/service.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>

#include <nlohmann/json.hpp>

#include "playbook/io.hpp"

namespace playbook {

using nlohmann::ordered_json;

namespace {

std::string error_line(const char* code, const std::string& message) {
    ordered_json doc;
    doc["error"] = code;
    doc["message"] = message;
    return doc.dump();
}

}  // namespace

SelectorService::SelectorService(AssociationDB db, std::string host, int port)
    : db_(std::move(db)), host_(std::move(host)), requested_port_(port) {
    if (db_.records.empty()) {
        throw EmptyDb("refusing to serve an empty association db");
    }
    costs_ = ground_costs(db_.grid);
}

SelectorService::~SelectorService() { stop(); }

std::string SelectorService::handle_line(const std::string& line) const {
    try {
        const auto query = parse_query_json(line, db_.grid);
        return selection_json_line(select(query, db_, costs_));
    } catch (const ParseError& e) {
        return error_line("PARSE", e.what());
    } catch (const DimensionMismatch& e) {
        return error_line("DIMENSION", e.what());
    } catch (const std::exception& e) {
        return error_line("INTERNAL", e.what());
    }
}

void SelectorService::start() {
    listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    if (listen_fd_ < 0) {
        throw IoError(std::string("socket: ") + std::strerror(errno));
    }
    int yes = 1;
    ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof yes);

    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(static_cast<std::uint16_t>(requested_port_));
    if (::inet_pton(AF_INET, host_.c_str(), &addr.sin_addr) != 1) {
        ::close(listen_fd_);
        listen_fd_ = -1;
        throw IoError("bad listen address: " + host_);
    }
    if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) < 0) {
        const std::string err = std::strerror(errno);
        ::close(listen_fd_);
        listen_fd_ = -1;
        throw IoError("bind " + host_ + ":" + std::to_string(requested_port_) +
                      ": " + err);
    }
    if (::listen(listen_fd_, 16) < 0) {
        const std::string err = std::strerror(errno);
        ::close(listen_fd_);
        listen_fd_ = -1;
        throw IoError("listen: " + err);
    }
    sockaddr_in bound{};
    socklen_t len = sizeof bound;
    ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&bound), &len);
    bound_port_ = ntohs(bound.sin_port);

    stopping_ = false;
    accept_thread_ = std::thread([this] { accept_loop(); });
}

void SelectorService::wait() {
    if (accept_thread_.joinable()) accept_thread_.join();
}

void SelectorService::run_blocking() {
    start();
    wait();
}

void SelectorService::stop() {
    if (listen_fd_ < 0 && !accept_thread_.joinable()) return;
    stopping_ = true;
    if (listen_fd_ >= 0) {
        ::shutdown(listen_fd_, SHUT_RDWR);
        ::close(listen_fd_);
        listen_fd_ = -1;
    }
    if (accept_thread_.joinable()) accept_thread_.join();
    std::unique_lock<std::mutex> lock(conn_mutex_);
    for (int fd : conn_fds_) ::shutdown(fd, SHUT_RDWR);
    conn_drained_.wait(lock, [this] { return conn_fds_.empty(); });
}

void SelectorService::accept_loop() {
    for (;;) {
        const int fd = ::accept(listen_fd_, nullptr, nullptr);
        if (fd < 0) {
            if (stopping_ || (errno != EINTR && errno != ECONNABORTED)) return;
            continue;
        }
        {
            std::lock_guard<std::mutex> lock(conn_mutex_);
            conn_fds_.push_back(fd);
        }
        // handlers detach; stop() waits for conn_fds_ to drain
        std::thread([this, fd] { serve_connection(fd); }).detach();
    }
}

void SelectorService::serve_connection(int fd) {
    auto deregister_and_close = [this, fd] {
        std::lock_guard<std::mutex> lock(conn_mutex_);
        conn_fds_.erase(std::remove(conn_fds_.begin(), conn_fds_.end(), fd),
                        conn_fds_.end());
        ::close(fd);
        if (conn_fds_.empty()) conn_drained_.notify_all();
    };
    std::string buffer;
    char chunk[4096];
    for (;;) {
        const ssize_t n = ::recv(fd, chunk, sizeof chunk, 0);
        if (n <= 0) break;
        buffer.append(chunk, static_cast<std::size_t>(n));
        std::size_t start = 0;
        for (;;) {
            const std::size_t nl = buffer.find('\n', start);
            if (nl == std::string::npos) break;
            std::string line = buffer.substr(start, nl - start);
            start = nl + 1;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty()) continue;
            const std::string response = handle_line(line) + "\n";
            std::size_t sent = 0;
            while (sent < response.size()) {
                const ssize_t w =
                    ::send(fd, response.data() + sent, response.size() - sent, 0);
                if (w <= 0) {
                    deregister_and_close();
                    return;
                }
                sent += static_cast<std::size_t>(w);
            }
        }
        buffer.erase(0, start);
    }
    deregister_and_close();
}

}  // namespace playbook
