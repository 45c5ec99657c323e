#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "httplib.h"

#include "orgtrace/network.hpp"

#include <fcntl.h>
#include <netdb.h>
#include <openssl/err.h>
#include <openssl/ssl.h>
#include <openssl/x509.h>
#include <poll.h>
#include <sys/socket.h>
#include <sys/time.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <thread>

#include "orgtrace/error.hpp"
#include "orgtrace/text.hpp"

namespace orgtrace {

namespace {

std::atomic<std::uint64_t> g_sockets_opened{0};

StoredResponse failure(Errc code) {
  StoredResponse r;
  r.error = std::string(errc_name(code));
  return r;
}

// Owns a file descriptor.
class Socket {
 public:
  explicit Socket(int fd = -1) : fd_(fd) {}
  Socket(Socket&& other) noexcept : fd_(std::exchange(other.fd_, -1)) {}
  Socket& operator=(Socket&& other) noexcept {
    if (this != &other) {
      reset();
      fd_ = std::exchange(other.fd_, -1);
    }
    return *this;
  }
  ~Socket() { reset(); }
  int get() const noexcept { return fd_; }
  void reset() {
    if (fd_ >= 0) ::close(fd_);
    fd_ = -1;
  }

 private:
  int fd_;
};

struct ConnectOutcome {
  Socket socket;
  std::optional<Errc> error;
};

ConnectOutcome tcp_connect(const std::string& host, int port, std::chrono::milliseconds timeout) {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  const std::string service = std::to_string(port);
  if (::getaddrinfo(host.c_str(), service.c_str(), &hints, &res) != 0 || res == nullptr) {
    return {Socket{}, Errc::TransportFailure};
  }
  std::unique_ptr<addrinfo, decltype(&::freeaddrinfo)> guard(res, ::freeaddrinfo);

  Errc last = Errc::TransportFailure;
  for (addrinfo* ai = res; ai != nullptr; ai = ai->ai_next) {
    Socket s(::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol));
    if (s.get() < 0) continue;
    g_sockets_opened.fetch_add(1);
    const int flags = ::fcntl(s.get(), F_GETFL, 0);
    ::fcntl(s.get(), F_SETFL, flags | O_NONBLOCK);
    int rc = ::connect(s.get(), ai->ai_addr, ai->ai_addrlen);
    if (rc != 0 && errno == EINPROGRESS) {
      pollfd pfd{s.get(), POLLOUT, 0};
      rc = ::poll(&pfd, 1, static_cast<int>(timeout.count()));
      if (rc == 0) {
        last = Errc::Timeout;
        continue;
      }
      int err = 0;
      socklen_t len = sizeof err;
      ::getsockopt(s.get(), SOL_SOCKET, SO_ERROR, &err, &len);
      if (rc < 0 || err != 0) {
        last = err == ECONNREFUSED ? Errc::NoTls : Errc::TransportFailure;
        continue;
      }
    } else if (rc != 0) {
      last = errno == ECONNREFUSED ? Errc::NoTls : Errc::TransportFailure;
      continue;
    }
    ::fcntl(s.get(), F_SETFL, flags);
    return {std::move(s), std::nullopt};
  }
  return {Socket{}, last};
}

void set_io_timeout(int fd, std::chrono::milliseconds timeout) {
  timeval tv{};
  tv.tv_sec = static_cast<long>(timeout.count() / 1000);
  tv.tv_usec = static_cast<long>((timeout.count() % 1000) * 1000);
  ::setsockopt(fd, SOL_SOCKET, SO_RCVTIMEO, &tv, sizeof tv);
  ::setsockopt(fd, SOL_SOCKET, SO_SNDTIMEO, &tv, sizeof tv);
}

StoredResponse http_request(const Url& url, const NetTimeouts& timeouts, const httplib::Headers& headers) {
  g_sockets_opened.fetch_add(1);
  const std::string origin = url.scheme + "://" + url.host + ":" + std::to_string(url.effective_port());
  httplib::Client client(origin);
  client.set_follow_location(false);
  client.enable_server_certificate_verification(false);
  const auto connect_s = timeouts.connect.count() / 1000;
  client.set_connection_timeout(static_cast<time_t>(connect_s), static_cast<time_t>((timeouts.connect.count() % 1000) * 1000));
  client.set_read_timeout(static_cast<time_t>(timeouts.total.count() / 1000), 0);
  client.set_write_timeout(static_cast<time_t>(timeouts.total.count() / 1000), 0);

  auto res = client.Get(url.path_and_query(), headers);
  if (!res) {
    switch (res.error()) {
      case httplib::Error::ConnectionTimeout:
      case httplib::Error::Read:
        return failure(Errc::Timeout);
      default:
        return failure(Errc::TransportFailure);
    }
  }
  StoredResponse r;
  r.status = res->status;
  for (const char* name : {"Location", "Content-Type"}) {
    if (res->has_header(name)) r.headers.emplace_back(name, res->get_header_value(name));
  }
  r.body = std::move(res->body);
  return r;
}

}  // namespace

std::uint64_t sockets_opened() { return g_sockets_opened.load(); }

void HostRateLimiter::acquire(const std::string& host) {
  std::chrono::steady_clock::time_point slot;
  {
    std::lock_guard lock(mutex_);
    const auto now = std::chrono::steady_clock::now();
    auto& next = next_slot_[host];
    slot = std::max(now, next);
    next = slot + spacing_;
  }
  std::this_thread::sleep_until(slot);
}

SystemNetwork::SystemNetwork(std::chrono::milliseconds per_host_spacing) : limiter_(per_host_spacing) {}

StoredResponse SystemNetwork::http_get(const Url& url, const HttpRequestOptions& options) {
  limiter_.acquire(url.host);
  httplib::Headers headers{
      {"Accept", "text/html,application/xhtml+xml,text/plain;q=0.9,*/*;q=0.8"},
      {"Accept-Language", options.accept_language},
  };
  if (!options.user_agent.empty()) headers.emplace("User-Agent", options.user_agent);
  return http_request(url, options.timeouts, headers);
}

StoredResponse SystemNetwork::https_get_json(const Url& url, const NetTimeouts& timeouts) {
  return http_request(url, timeouts, {{"Accept", "application/json"}});
}

StoredResponse SystemNetwork::whois(const std::string& server, const std::string& query,
                                    const NetTimeouts& timeouts) {
  limiter_.acquire(server);
  auto conn = tcp_connect(server, 43, timeouts.connect);
  if (conn.error) return failure(*conn.error == Errc::NoTls ? Errc::TransportFailure : *conn.error);
  const int fd = conn.socket.get();
  set_io_timeout(fd, timeouts.total);
  const std::string line = query + "\r\n";
  if (::send(fd, line.data(), line.size(), MSG_NOSIGNAL) != static_cast<ssize_t>(line.size())) {
    return failure(Errc::TransportFailure);
  }
  const auto deadline = std::chrono::steady_clock::now() + timeouts.total;
  std::string body;
  char buf[4096];
  while (true) {
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
    if (left.count() <= 0) return failure(Errc::Timeout);
    pollfd pfd{fd, POLLIN, 0};
    const int rc = ::poll(&pfd, 1, static_cast<int>(left.count()));
    if (rc == 0) return failure(Errc::Timeout);
    if (rc < 0) return failure(Errc::TransportFailure);
    const ssize_t n = ::recv(fd, buf, sizeof buf, 0);
    if (n == 0) break;
    if (n < 0) {
      if (errno == EINTR) continue;
      return failure(errno == EAGAIN ? Errc::Timeout : Errc::TransportFailure);
    }
    body.append(buf, static_cast<std::size_t>(n));
  }
  if (text::trim(body).empty()) return failure(Errc::EmptyResponse);
  StoredResponse r;
  r.body = std::move(body);
  return r;
}

StoredResponse SystemNetwork::tls_leaf(const std::string& host, int port, const NetTimeouts& timeouts) {
  limiter_.acquire(host);
  auto conn = tcp_connect(host, port, timeouts.connect);
  if (conn.error) return failure(*conn.error);
  set_io_timeout(conn.socket.get(), timeouts.total);

  std::unique_ptr<SSL_CTX, decltype(&SSL_CTX_free)> ctx(SSL_CTX_new(TLS_client_method()), SSL_CTX_free);
  if (!ctx) return failure(Errc::HandshakeFailure);
  SSL_CTX_set_verify(ctx.get(), SSL_VERIFY_NONE, nullptr);
  std::unique_ptr<SSL, decltype(&SSL_free)> ssl(SSL_new(ctx.get()), SSL_free);
  if (!ssl) return failure(Errc::HandshakeFailure);
  SSL_set_tlsext_host_name(ssl.get(), host.c_str());
  SSL_set_fd(ssl.get(), conn.socket.get());
  if (SSL_connect(ssl.get()) != 1) {
    ERR_clear_error();
    return failure(Errc::HandshakeFailure);
  }
  std::unique_ptr<X509, decltype(&X509_free)> cert(SSL_get1_peer_certificate(ssl.get()), X509_free);
  SSL_shutdown(ssl.get());
  if (!cert) return failure(Errc::HandshakeFailure);
  const int len = i2d_X509(cert.get(), nullptr);
  if (len <= 0) return failure(Errc::HandshakeFailure);
  StoredResponse r;
  r.body.resize(static_cast<std::size_t>(len));
  auto* p = reinterpret_cast<unsigned char*>(r.body.data());
  i2d_X509(cert.get(), &p);
  return r;
}

}  // namespace orgtrace
