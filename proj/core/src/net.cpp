#include "qrg/net.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <map>
#include <stdexcept>
#include <utility>

#include "json.hpp"

namespace qrg {

namespace {

[[noreturn]] void fail_errno(const std::string& what) {
  throw std::runtime_error(what + ": " + std::strerror(errno));
}

}  // namespace

Endpoint parse_endpoint(std::string_view text) {
  Endpoint ep;
  const auto colon = text.rfind(':');
  std::string_view port_part = text;
  if (colon != std::string_view::npos) {
    if (colon > 0) ep.host = std::string(text.substr(0, colon));
    port_part = text.substr(colon + 1);
  }
  if (port_part.empty()) throw std::invalid_argument("endpoint has no port");
  int port = 0;
  for (char c : port_part) {
    if (c < '0' || c > '9') throw std::invalid_argument("endpoint port must be numeric");
    port = port * 10 + (c - '0');
    if (port > 65535) throw std::invalid_argument("endpoint port out of range");
  }
  ep.port = static_cast<std::uint16_t>(port);
  return ep;
}

Socket& Socket::operator=(Socket&& other) noexcept {
  if (this != &other) {
    close();
    fd_ = other.fd_;
    other.fd_ = -1;
  }
  return *this;
}

void Socket::shutdown() {
  if (fd_ >= 0) ::shutdown(fd_, SHUT_RDWR);
}

void Socket::close() {
  if (fd_ >= 0) {
    ::close(fd_);
    fd_ = -1;
  }
}

namespace {

addrinfo* resolve(const Endpoint& ep, bool passive) {
  addrinfo hints{};
  hints.ai_family = AF_INET;
  hints.ai_socktype = SOCK_STREAM;
  hints.ai_flags = AI_NUMERICSERV | (passive ? AI_PASSIVE : 0);
  addrinfo* result = nullptr;
  const std::string port = std::to_string(ep.port);
  const int rc = getaddrinfo(ep.host.c_str(), port.c_str(), &hints, &result);
  if (rc != 0) throw std::runtime_error("cannot resolve " + ep.host + ": " + gai_strerror(rc));
  return result;
}

}  // namespace

Socket connect_to(const Endpoint& ep) {
  addrinfo* info = resolve(ep, false);
  int fd = ::socket(info->ai_family, info->ai_socktype, info->ai_protocol);
  if (fd < 0) {
    freeaddrinfo(info);
    fail_errno("socket");
  }
  if (::connect(fd, info->ai_addr, info->ai_addrlen) != 0) {
    freeaddrinfo(info);
    ::close(fd);
    fail_errno("connect to " + ep.host + ":" + std::to_string(ep.port));
  }
  freeaddrinfo(info);
  return Socket(fd);
}

void LineChannel::send_line(std::string_view line) {
  std::string framed(line);
  framed.push_back('\n');
  std::size_t sent = 0;
  while (sent < framed.size()) {
    const ssize_t n = ::send(socket_.fd(), framed.data() + sent, framed.size() - sent, MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      fail_errno("send");
    }
    sent += static_cast<std::size_t>(n);
  }
}

std::optional<std::string> LineChannel::recv_line() {
  for (;;) {
    const auto nl = buffer_.find('\n');
    if (nl != std::string::npos) {
      std::string line = buffer_.substr(0, nl);
      buffer_.erase(0, nl + 1);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      return line;
    }
    char chunk[4096];
    const ssize_t n = ::recv(socket_.fd(), chunk, sizeof chunk, 0);
    if (n < 0) {
      if (errno == EINTR) continue;
      return std::nullopt;
    }
    if (n == 0) return std::nullopt;
    buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

std::string challenge_request_json(std::string_view serial) {
  nlohmann::json j;
  j["type"] = "challenge_request";
  j["serial"] = serial;
  return j.dump();
}

std::string challenge_to_json(const Challenge& c) {
  nlohmann::json j;
  j["type"] = "challenge";
  j["serial"] = c.serial;
  auto bases = nlohmann::json::array();
  for (const Basis b : c.bases) bases.push_back(std::string(1, to_char(b)));
  j["bases"] = std::move(bases);
  return j.dump();
}

Challenge challenge_from_json(std::string_view line) {
  const auto j = nlohmann::json::parse(line);
  if (j.at("type") != "challenge") throw std::invalid_argument("not a challenge message");
  Challenge c;
  c.serial = j.at("serial").get<std::string>();
  for (const auto& b : j.at("bases")) {
    const auto s = b.get<std::string>();
    if (s.size() != 1) throw std::invalid_argument("bad basis");
    c.bases.push_back(basis_from_char(s[0]));
  }
  return c;
}

namespace {

nlohmann::json outcome_to_json(const std::optional<int>& q) {
  if (!q) return nullptr;
  return *q;
}

std::optional<int> outcome_from_json(const nlohmann::json& j) {
  if (j.is_null()) return std::nullopt;
  const int bit = j.get<int>();
  if (bit != 0 && bit != 1) throw std::invalid_argument("outcome bit must be 0 or 1");
  return bit;
}

}  // namespace

std::string response_to_json(const Response& r) {
  nlohmann::json j;
  j["type"] = "response";
  j["serial"] = r.serial;
  auto outcomes = nlohmann::json::array();
  for (const PairOutcome& o : r.outcomes)
    outcomes.push_back(nlohmann::json::array({outcome_to_json(o.q1), outcome_to_json(o.q2)}));
  j["outcomes"] = std::move(outcomes);
  return j.dump();
}

Response response_from_json(std::string_view line) {
  const auto j = nlohmann::json::parse(line);
  if (j.at("type") != "response") throw std::invalid_argument("not a response message");
  Response r;
  r.serial = j.at("serial").get<std::string>();
  for (const auto& o : j.at("outcomes")) {
    if (!o.is_array() || o.size() != 2)
      throw std::invalid_argument("each outcome must be a two-entry array");
    r.outcomes.push_back({outcome_from_json(o[0]), outcome_from_json(o[1])});
  }
  return r;
}

std::string verdict_to_json(const Verdict& v) {
  nlohmann::json j;
  j["type"] = "verdict";
  j["accepted"] = v.accepted;
  j["error_rate"] = v.error_rate;
  j["loss_rate"] = v.loss_rate;
  j["checked"] = v.checked_qubits;
  return j.dump();
}

Verdict verdict_from_json(std::string_view line) {
  const auto j = nlohmann::json::parse(line);
  if (j.at("type") != "verdict") throw std::invalid_argument("not a verdict message");
  Verdict v;
  v.accepted = j.at("accepted").get<bool>();
  v.error_rate = j.at("error_rate").get<double>();
  v.loss_rate = j.at("loss_rate").get<double>();
  v.checked_qubits = j.at("checked").get<int>();
  return v;
}

std::string error_json(std::string_view message) {
  nlohmann::json j;
  j["type"] = "error";
  j["message"] = message;
  return j.dump();
}

BankServer::BankServer(Bank& bank, const Endpoint& ep) : bank_(bank) {
  addrinfo* info = resolve(ep, true);
  int fd = ::socket(info->ai_family, info->ai_socktype, info->ai_protocol);
  if (fd < 0) {
    freeaddrinfo(info);
    fail_errno("socket");
  }
  const int one = 1;
  ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
  if (::bind(fd, info->ai_addr, info->ai_addrlen) != 0) {
    freeaddrinfo(info);
    ::close(fd);
    fail_errno("bind " + ep.host + ":" + std::to_string(ep.port));
  }
  freeaddrinfo(info);
  if (::listen(fd, 16) != 0) {
    ::close(fd);
    fail_errno("listen");
  }
  sockaddr_in bound{};
  socklen_t len = sizeof bound;
  if (::getsockname(fd, reinterpret_cast<sockaddr*>(&bound), &len) != 0) {
    ::close(fd);
    fail_errno("getsockname");
  }
  port_ = ntohs(bound.sin_port);
  listener_ = Socket(fd);
  acceptor_ = std::thread(&BankServer::accept_loop, this);
}

BankServer::~BankServer() { stop(); }

void BankServer::stop() {
  {
    const std::lock_guard lock(sessions_mutex_);
    if (stopping_) return;
    stopping_ = true;
    listener_.shutdown();
    for (const int fd : session_fds_) ::shutdown(fd, SHUT_RDWR);
  }
  if (acceptor_.joinable()) acceptor_.join();
  std::vector<std::thread> sessions;
  {
    const std::lock_guard lock(sessions_mutex_);
    sessions.swap(sessions_);
  }
  for (std::thread& t : sessions) t.join();
}

void BankServer::accept_loop() {
  for (;;) {
    const int fd = ::accept(listener_.fd(), nullptr, nullptr);
    if (fd < 0) {
      if (errno == EINTR) continue;
      return;  // listener shut down
    }
    const std::lock_guard lock(sessions_mutex_);
    if (stopping_) {
      ::close(fd);
      return;
    }
    session_fds_.push_back(fd);
    sessions_.emplace_back(&BankServer::session, this, Socket(fd));
  }
}

void BankServer::session(Socket client) {
  const int my_fd = client.fd();
  LineChannel channel(std::move(client));
  // unregisters before ~LineChannel closes the descriptor, so stop() never
  // shuts down a recycled fd
  struct Deregister {
    BankServer* server;
    int fd;
    ~Deregister() {
      const std::lock_guard lock(server->sessions_mutex_);
      std::erase(server->session_fds_, fd);
    }
  } deregister{this, my_fd};

  std::map<std::string, Challenge> pending;
  while (auto line = channel.recv_line()) {
    std::string reply;
    try {
      const auto j = nlohmann::json::parse(*line);
      const auto type = j.at("type").get<std::string>();
      if (type == "challenge_request") {
        const auto serial = j.at("serial").get<std::string>();
        Challenge c;
        {
          const std::lock_guard lock(bank_mutex_);
          c = bank_.challenge(serial);
        }
        pending[serial] = c;
        reply = challenge_to_json(c);
      } else if (type == "response") {
        const Response r = response_from_json(*line);
        const auto it = pending.find(r.serial);
        if (it == pending.end()) throw std::runtime_error("no pending challenge for serial " + r.serial);
        Verdict v;
        {
          const std::lock_guard lock(bank_mutex_);
          v = bank_.verify_response(it->second, r);
        }
        pending.erase(it);
        reply = verdict_to_json(v);
      } else {
        throw std::runtime_error("unknown message type: " + type);
      }
    } catch (const std::exception& e) {
      reply = error_json(e.what());
    }
    try {
      channel.send_line(reply);
    } catch (const std::exception&) {
      return;  // peer gone
    }
  }
}

namespace {

std::string expect_reply(std::optional<std::string> line) {
  if (!line) throw std::runtime_error("bank closed the connection");
  const auto j = nlohmann::json::parse(*line);
  if (j.at("type") == "error")
    throw std::runtime_error("bank error: " + j.at("message").get<std::string>());
  return *line;
}

}  // namespace

Challenge BankClient::request_challenge(std::string_view serial) {
  channel_.send_line(challenge_request_json(serial));
  return challenge_from_json(expect_reply(channel_.recv_line()));
}

Verdict BankClient::send_response(const Response& response) {
  channel_.send_line(response_to_json(response));
  return verdict_from_json(expect_reply(channel_.recv_line()));
}

std::string BankClient::roundtrip(std::string_view line) {
  channel_.send_line(line);
  auto reply = channel_.recv_line();
  if (!reply) throw std::runtime_error("bank closed the connection");
  return *reply;
}

}  // namespace qrg
